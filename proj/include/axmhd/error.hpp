#pragma once

#include <stdexcept>
#include <string>

namespace axmhd {

enum class ErrorCode {
  NonCCWElement,
  DanglingNode,
  NonManifoldBoundary,
  NonPositiveRadius,
  MeshFormat,
  DegenerateRange,
  InterfaceNotFound,
  UnpairedInterfaceNode,
  SingularElement,
  SolverDiverged,
  NonPositiveTemperature,
  NonPositiveDensity,
  NegativePressure,
  NonFiniteValue,
  MissingWaveformSample,
  NonPositiveFloor,
  ChordOutsideMesh,
  ConfigError,
  IoError,
  SizeMismatch,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace axmhd
