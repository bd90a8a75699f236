#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "axmhd/diagnostics.hpp"
#include "axmhd/mesh.hpp"
#include "axmhd/mhd.hpp"

namespace axmhd {

struct ProbeSpec {
  std::string name;
  Point location;
  ProbeChannel channel = ProbeChannel::Poloidal;
};

struct RunConfig {
  std::string mode = "simulate";  // simulate | verify-conservation

  // Mesh: a file, or a generated rectangle.
  std::string mesh_path;
  std::optional<Range> rect_r, rect_z;
  double h_e = 0.05;

  // Coupled run when interface_r_outer is set (interface_r_inner defaults to it).
  std::optional<double> interface_r_inner, interface_r_outer;
  WallGeometry wall;

  PhysicsCoefficients physics;

  VelocityMode velocity_mode = VelocityMode::AllZero;
  bool angular_momentum_mode = false;
  PsiMode psi_mode = PsiMode::Zero;
  std::optional<double> T_wall_eV = 0.02;

  // External ψ tables (node indices of the combined mesh) and their drive waveforms.
  std::string psi_main_table, psi_lev_table, psi_comp_table;
  std::string I_lev_waveform, I_comp_waveform;
  double I_main = 1.0;  // scales psi_main
  double t_comp = 0.0;

  // Formation drive.
  std::string V_gun_waveform;
  double V_form = 1.0;  // scales V_gun
  double tau_LR = 90e-6;
  double m_slope = 40.0;
  double z_gp = -0.43;

  // Initial state: formation (Gaussian density, vacuum ψ) or smooth (analytic test state).
  std::string initial = "formation";
  double n_high = 10.0;
  double n_low = 0.1;
  double sigma_n2 = 0.01;
  double T_init_eV = 1.0;

  double dt = 0.0;
  double t_end = 0.0;
  int steps = 1000;  // verify-conservation only
  Scheme scheme = Scheme::RK2;
  double output_dt = 0.0;  // simulated time between diagnostics rows; 0 writes every step
  std::string output_dir = "output";
  bool snapshots = false;
  bool strict_stability = false;

  std::vector<ProbeSpec> probes;
  std::vector<Chord> chords;

  std::filesystem::path base_dir;  // relative file paths resolve against this
  std::string resolve(const std::string& path) const;
};

// key = value lines; '#' starts a comment. Unknown keys are errors.
RunConfig parse_config(std::istream& in, const std::string& source = "<stream>",
                       const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::string& path);

// Keys with a one-line description, for the documentation.
const std::map<std::string, std::string>& config_keys();

}  // namespace axmhd
