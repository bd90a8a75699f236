#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "axmhd/mesh.hpp"
#include "axmhd/mhd.hpp"
#include "axmhd/ops.hpp"

namespace axmhd {

struct ConservedRecord {
  double t = 0.0;
  double N = 0.0;
  double Phi = 0.0;
  double P_phi = 0.0;
  double U_K = 0.0;
  double U_Th = 0.0;
  double U_M = 0.0;
  double U_total = 0.0;
};

ConservedRecord conserved_quantities(const OperatorSet& ops, const PlasmaState& s, const PhysicsCoefficients& c);

// Σ dV·x alongside Σ dV·|x| so residuals can be stated relative to the magnitude of what cancelled.
struct Weighted {
  double value = 0.0;
  double scale = 0.0;
  double relative() const { return scale > 0.0 ? std::abs(value) / scale : std::abs(value); }
};

struct BracketResidual {
  std::string name;
  double first = 0.0;
  double second = 0.0;
  double residual = 0.0;  // first + second
  double scale = 0.0;     // Σ dV (|first integrand| + |second integrand|)
  double relative() const { return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual); }
};

struct BalanceReport {
  Weighted dN;           // dVᵀṅ
  Weighted dPhi;         // dΦ/dt − formation input rate
  Weighted dP_phi;       // m_i dVᵀ(r v_φ ṅ + n r v̇_φ)
  Weighted dU;           // dU_total/dt − source power
  double source_power = 0.0;
  std::vector<BracketResidual> brackets;
  // Density diffusion plus its correction per component (r, φ, z).
  std::array<Weighted, 3> correction_momentum;
  std::array<Weighted, 3> correction_energy;
};

// Residuals of the time derivative the stepper sees (derivative constrained by bc).
BalanceReport semi_discrete_balances(const Mesh& mesh, const OperatorSet& ops, const PlasmaState& s,
                                     const PhysicsCoefficients& c, const BoundaryConditions& bc,
                                     const NodalField* f_source_rate = nullptr);

enum class ProbeChannel { Poloidal, Toroidal };

struct Probe {
  std::string name;
  Point location;
  ProbeChannel channel = ProbeChannel::Poloidal;
  std::int32_t node = -1;  // snapped boundary node
  std::size_t frame_index = 0;
  double snap_distance = 0.0;
};

Probe make_probe(const Mesh& mesh, const BoundaryFrame& frame, std::string name, Point location,
                 ProbeChannel channel);

// Nodal B from W_n-averaged B_θ^e; poloidal channel = t·B at the probe node, toroidal = f/r.
std::vector<double> probe_signals(const OperatorSet& ops, const PlasmaState& s, const std::vector<Probe>& probes,
                                  const BoundaryFrame& frame);
double probe_signal(const OperatorSet& ops, const PlasmaState& s, const Probe& probe, const BoundaryFrame& frame);

enum class ChordField { ElectronDensity, IonTemperature };

struct Chord {
  std::string name;
  Point a, b;
  ChordField field = ChordField::ElectronDensity;
};

// Line average of a nodal field, integrated exactly element by element.
double chord_average(const Mesh& mesh, const NodalField& u, Point a, Point b);
double chord_average(const Mesh& mesh, const PlasmaState& s, const Chord& chord, double Z);

// t,N,Phi,P_phi,U_K,U_Th,U_M,U_total,<probes>,<chords>
class TimeSeriesWriter {
 public:
  TimeSeriesWriter(const std::string& path, const std::vector<std::string>& extra_columns);
  void write(const ConservedRecord& r, const std::vector<double>& extra);

 private:
  std::ofstream out_;
  std::size_t extra_ = 0;
};

// Per-field CSV node_index,value plus a manifest row index,t,fields.
class SnapshotWriter {
 public:
  explicit SnapshotWriter(std::string directory);
  void write(const PlasmaState& s);
  std::size_t count() const noexcept { return index_; }

 private:
  std::string dir_;
  std::size_t index_ = 0;
};

}  // namespace axmhd
