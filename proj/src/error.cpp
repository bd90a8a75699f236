#include "axmhd/error.hpp"

namespace axmhd {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonCCWElement: return "NonCCWElement";
    case ErrorCode::DanglingNode: return "DanglingNode";
    case ErrorCode::NonManifoldBoundary: return "NonManifoldBoundary";
    case ErrorCode::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::MeshFormat: return "MeshFormat";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::InterfaceNotFound: return "InterfaceNotFound";
    case ErrorCode::UnpairedInterfaceNode: return "UnpairedInterfaceNode";
    case ErrorCode::SingularElement: return "SingularElement";
    case ErrorCode::SolverDiverged: return "SolverDiverged";
    case ErrorCode::NonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorCode::NegativePressure: return "NegativePressure";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::MissingWaveformSample: return "MissingWaveformSample";
    case ErrorCode::NonPositiveFloor: return "NonPositiveFloor";
    case ErrorCode::ChordOutsideMesh: return "ChordOutsideMesh";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace axmhd
