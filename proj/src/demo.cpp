#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "axmhd/demo.hpp"

namespace axmhd {

namespace {

std::string num(double x) {
  char buf[32];
  return {buf, std::to_chars(buf, buf + sizeof buf, x).ptr};
}

}  // namespace

double stuffing_psi(const FormationDemo& d, Point p) {
  if (p.z >= 0.0) return 0.0;
  const double x = std::min(1.0, -p.z / d.stuffing_length);
  return d.stuffing_flux * 0.5 * (1.0 - std::cos(std::numbers::pi * x));
}

Mesh formation_demo_mesh(const FormationDemo& d) {
  const Mesh box = generate_rect_mesh({d.r_axis, d.r_out}, {d.z_bottom, d.z_top}, d.h_e);
  return carve(box, [&](double r, double z) { return z > 0.0 || (r > d.r_gun_in && r < d.r_gun_out); });
}

std::string write_formation_demo(const std::string& dir, const FormationDemo& d) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const Mesh mesh = formation_demo_mesh(d);
  save_mesh(mesh, dir + "/formation.mesh");

  auto table = [&](const std::string& name, auto&& psi) {
    std::ofstream out(dir + "/" + name);
    out << "node_index,psi_value\n" << std::setprecision(17);
    for (auto i : mesh.boundary_nodes()) out << i << ',' << psi(mesh.node(i)) << '\n';
  };
  table("psi_main.csv", [&](const Point& p) { return stuffing_psi(d, p); });
  {
    // Half-sine gun pulse sampled finely enough for linear interpolation.
    std::ofstream out(dir + "/V_gun.csv");
    out << "t_seconds,value\n" << std::setprecision(17);
    const int n = 200;
    for (int k = 0; k <= n; ++k) {
      const double t = d.pulse * k / n;
      out << t << ',' << d.V_peak * std::sin(std::numbers::pi * t / d.pulse) << '\n';
    }
    out << 1.0 << ',' << 0.0 << '\n';
  }
  const double gun_mid = 0.5 * d.z_bottom;
  const std::string cfg = dir + "/formation.cfg";
  std::ofstream out(cfg);
  out << "# coarse formation run: gun annulus below z = 0, containment above, insulating wall beyond r = "
      << num(d.r_wall) << "\n";
  out << "mode = simulate\nmesh = formation.mesh\n";
  out << "interface_r_inner = " << num(d.r_wall - d.h_e) << "\ninterface_r_outer = " << num(d.r_wall) << "\n";
  out << "wall_h = " << num(d.z_top) << "\nwall_r_in = " << num(d.r_wall) << "\nwall_r_out = " << num(d.r_out) << "\n";
  out << "psi_main_table = psi_main.csv\n";
  out << "V_gun_waveform = V_gun.csv\ntau_LR = 90e-6\nm_slope = 40\nz_gp = " << num(gun_mid) << "\n";
  out << "initial = formation\nn0 = 9e20\nn_high = 10\nn_low = 0.1\nsigma_n2 = 0.0025\nT_init_eV = 10\n";
  out << "zeta = 200\nnu_num = 700\nnu_phys = 410\ncorrection_model = 2\n";
  out << "chi_par_e = 16000\nchi_par_i = 5000\nchi_perp_e = 240\nchi_perp_i = 120\neta_max = 5000\n";
  out << "T_wall_eV = none\nvelocity_bc = all-zero\n";
  out << "dt = 2e-9\nt_end = " << num(d.t_end) << "\nscheme = rk2\noutput_dt = 1e-6\noutput_dir = output\n";
  out << "probe = wall_mid," << num(d.r_wall) << "," << num(0.5 * d.z_top) << ",poloidal\n";
  out << "probe = gun_outer," << num(d.r_gun_out) << "," << num(gun_mid) << ",toroidal\n";
  out << "chord = containment," << num(0.5 * (d.r_axis + d.r_gun_in)) << "," << num(0.5 * d.z_top) << ","
      << num(d.r_wall - 0.5 * d.h_e) << "," << num(0.5 * d.z_top) << ",n_e\n";
  out << "chord = gun," << num(d.r_gun_in + 1e-3) << "," << num(gun_mid) << "," << num(d.r_gun_out - 1e-3) << "," << num(gun_mid) << ",n_e\n";
  return cfg;
}

}  // namespace axmhd
