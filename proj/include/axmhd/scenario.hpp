#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "axmhd/mesh.hpp"
#include "axmhd/ops.hpp"

namespace axmhd {

// Piecewise-linear signal on a strictly increasing time grid.
class Waveform {
 public:
  Waveform() = default;
  Waveform(std::vector<double> t, std::vector<double> value);

  double operator()(double t) const;
  const std::vector<double>& times() const noexcept { return t_; }
  const std::vector<double>& values() const noexcept { return v_; }
  double t_begin() const { return t_.front(); }
  double t_end() const { return t_.back(); }
  bool empty() const noexcept { return t_.empty(); }

 private:
  std::vector<double> t_, v_;
};

// CSV with header line and columns t_seconds,value.
Waveform read_waveform(std::istream& in, const std::string& source = "<stream>");
Waveform load_waveform(const std::string& path);

// Sorted by node index.
struct NodeTable {
  std::vector<std::int32_t> nodes;
  std::vector<double> values;
};

NodeTable make_node_table(std::vector<std::int32_t> nodes, std::vector<double> values);

// CSV with header line and columns node_index,psi_value.
NodeTable read_node_table(std::istream& in, const std::string& source = "<stream>");
NodeTable load_node_table(const std::string& path);

double formation_profile_g(double z, double m_slope, double z_gp);

// Φ_form(t) = −e^{−t/τ}∫₀ᵗ V(t')e^{t'/τ}dt' by the exact integral of the linear interpolant.
double formation_flux_Phi(const Waveform& V_gun, double tau_LR, double t);

// Running evaluation of Φ_form for monotonically increasing times.
class FormationFluxIntegrator {
 public:
  FormationFluxIntegrator(const Waveform& V_gun, double tau_LR);
  double advance(double t);
  double time() const noexcept { return t_; }
  double value() const noexcept { return -integral_; }

 private:
  const Waveform* V_;
  double tau_;
  double t_ = 0.0;
  double integral_ = 0.0;
};

struct FormationDrive {
  Waveform V_gun;
  double tau_LR = 90e-6;
  double m_slope = 40.0;
  double z_gp = -0.43;
  NodalField g;      // profile on the plasma nodes
  double Q_g = 0.0;  // Σ g_n s_n/(3 r_n)

  FormationDrive() = default;
  FormationDrive(const OperatorSet& ops, const Mesh& mesh, Waveform V_gun, double tau_LR, double m_slope = 40.0,
                 double z_gp = -0.43);

  NodalField field(double Phi_form) const;
};

NodalField formation_field_f(const FormationDrive& drive, double t);

struct CoilDrive {
  // Values keyed by node index of the mesh they were tabulated on.
  NodeTable psi_main, psi_lev, psi_comp;
  std::optional<Waveform> I_lev_tilde, I_comp_tilde;
  double t_comp = 0.0;

  double value(std::int32_t node, double t) const;
};

// ψ_main + Ĩ_lev(t)ψ_lev + Ĩ_comp(t − t_comp)ψ_comp on each node (compression gated by t ≥ t_comp).
std::vector<double> boundary_psi(const CoilDrive& coils, const std::vector<std::int32_t>& nodes, double t);

NodalField initial_density(const Mesh& mesh, double n0, double sigma_n2, double n_high, double n_low, double z_gp);

}  // namespace axmhd
