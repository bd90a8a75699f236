#include <fstream>
#include <functional>
#include <sstream>

#include "axmhd/config.hpp"

namespace axmhd {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size()) fail(ErrorCode::ConfigError, key + ": expected a number, got '" + v + "'");
  return x;
}

std::vector<double> to_list(const std::string& v, const std::string& key, std::size_t n) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), key));
  if (out.size() != n) fail(ErrorCode::ConfigError, key + ": expected " + std::to_string(n) + " comma-separated numbers");
  return out;
}

bool to_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(ErrorCode::ConfigError, key + ": expected true or false");
}

using Setter = std::function<void(RunConfig&, const std::string& value, const std::string& key)>;

struct KeyDef {
  std::string help;
  Setter set;
};

Setter num(double RunConfig::*m) {
  return [m](RunConfig& c, const std::string& v, const std::string& k) { c.*m = to_double(v, k); };
}
Setter phys(double PhysicsCoefficients::*m) {
  return [m](RunConfig& c, const std::string& v, const std::string& k) { c.physics.*m = to_double(v, k); };
}
Setter str(std::string RunConfig::*m) {
  return [m](RunConfig& c, const std::string& v, const std::string&) { c.*m = v; };
}
Setter flag(bool RunConfig::*m) {
  return [m](RunConfig& c, const std::string& v, const std::string& k) { c.*m = to_bool(v, k); };
}

const std::map<std::string, KeyDef>& definitions() {
  static const std::map<std::string, KeyDef> defs = {
      {"mode", {"simulate | verify-conservation", str(&RunConfig::mode)}},
      {"mesh", {"mesh file (combined plasma and insulator mesh for coupled runs)", str(&RunConfig::mesh_path)}},
      {"mesh_rect",
       {"r0,r1,z0,z1 generated rectangle (used when mesh is not given)",
        [](RunConfig& c, const std::string& v, const std::string& k) {
          const auto x = to_list(v, k, 4);
          c.rect_r = Range{x[0], x[1]};
          c.rect_z = Range{x[2], x[3]};
        }}},
      {"h_e", {"element size for mesh_rect [m]", num(&RunConfig::h_e)}},
      {"interface_r_inner", {"radius of the insulator mesh's inner node column [m]",
                             [](RunConfig& c, const std::string& v, const std::string& k) {
                               c.interface_r_inner = to_double(v, k);
                             }}},
      {"interface_r_outer", {"radius of the plasma mesh's outer node column [m]; enables coupling",
                             [](RunConfig& c, const std::string& v, const std::string& k) {
                               c.interface_r_outer = to_double(v, k);
                             }}},
      {"wall_h", {"insulating wall height h_I [m]",
                  [](RunConfig& c, const std::string& v, const std::string& k) { c.wall.h_I = to_double(v, k); }}},
      {"wall_r_in", {"insulating wall inner radius [m]",
                     [](RunConfig& c, const std::string& v, const std::string& k) { c.wall.r_in = to_double(v, k); }}},
      {"wall_r_out", {"insulating wall outer radius [m]", [](RunConfig& c, const std::string& v,
                                                           const std::string& k) { c.wall.r_out = to_double(v, k); }}},
      {"m_0", {"ion mass number", phys(&PhysicsCoefficients::mu_i)}},
      {"Z", {"mean ion charge", phys(&PhysicsCoefficients::Z)}},
      {"zeta", {"density diffusion coefficient [m^2/s]", phys(&PhysicsCoefficients::zeta)}},
      {"nu_num", {"momentum viscosity [m^2/s]", phys(&PhysicsCoefficients::nu_num)}},
      {"nu_phys", {"viscous heating viscosity [m^2/s]", phys(&PhysicsCoefficients::nu_phys)}},
      {"n0", {"reference density [1/m^3]", phys(&PhysicsCoefficients::n0)}},
      {"chi_par_e", {"parallel electron diffusivity [m^2/s]", phys(&PhysicsCoefficients::chi_par_e)}},
      {"chi_par_i", {"parallel ion diffusivity [m^2/s]", phys(&PhysicsCoefficients::chi_par_i)}},
      {"chi_perp_e", {"perpendicular electron diffusivity [m^2/s]", phys(&PhysicsCoefficients::chi_perp_e)}},
      {"chi_perp_i", {"perpendicular ion diffusivity [m^2/s]", phys(&PhysicsCoefficients::chi_perp_i)}},
      {"eta_max", {"resistivity cap [m^2/s]", phys(&PhysicsCoefficients::eta_max)}},
      {"eta_constant", {"constant resistivity replacing the Spitzer form [m^2/s]",
                        [](RunConfig& c, const std::string& v, const std::string& k) {
                          c.physics.eta_constant = to_double(v, k);
                        }}},
      {"Te_floor_eV", {"lower limit on T_e inside the closures [eV]", phys(&PhysicsCoefficients::Te_floor_eV)}},
      {"Lambda", {"Coulomb logarithm", phys(&PhysicsCoefficients::Lambda)}},
      {"correction_model",
       {"density-diffusion correction 0 (off) | 1 | 2",
        [](RunConfig& c, const std::string& v, const std::string& k) {
          const double x = to_double(v, k);
          if (x != 0.0 && x != 1.0 && x != 2.0) fail(ErrorCode::ConfigError, k + ": expected 0, 1 or 2");
          c.physics.correction_model = static_cast<CorrectionModel>(static_cast<int>(x));
        }}},
      {"velocity_bc", {"all-zero | normal-zero",
                       [](RunConfig& c, const std::string& v, const std::string& k) {
                         if (v == "all-zero")
                           c.velocity_mode = VelocityMode::AllZero;
                         else if (v == "normal-zero")
                           c.velocity_mode = VelocityMode::NormalZero;
                         else
                           fail(ErrorCode::ConfigError, k + ": expected all-zero or normal-zero");
                       }}},
      {"angular_momentum_mode", {"no v_phi condition and psi = 0 on the boundary",
                                 flag(&RunConfig::angular_momentum_mode)}},
      {"psi_bc", {"zero | table | free",
                  [](RunConfig& c, const std::string& v, const std::string& k) {
                    if (v == "zero")
                      c.psi_mode = PsiMode::Zero;
                    else if (v == "table")
                      c.psi_mode = PsiMode::Table;
                    else if (v == "free")
                      c.psi_mode = PsiMode::Free;
                    else
                      fail(ErrorCode::ConfigError, k + ": expected zero, table or free");
                  }}},
      {"T_wall_eV", {"boundary temperature [eV] or none",
                     [](RunConfig& c, const std::string& v, const std::string& k) {
                       if (v == "none")
                         c.T_wall_eV.reset();
                       else
                         c.T_wall_eV = to_double(v, k);
                     }}},
      {"psi_main_table", {"CSV node_index,psi_value", str(&RunConfig::psi_main_table)}},
      {"psi_lev_table", {"CSV node_index,psi_value", str(&RunConfig::psi_lev_table)}},
      {"psi_comp_table", {"CSV node_index,psi_value", str(&RunConfig::psi_comp_table)}},
      {"I_lev_waveform", {"CSV t_seconds,value normalised levitation current", str(&RunConfig::I_lev_waveform)}},
      {"I_comp_waveform", {"CSV t_seconds,value normalised compression current", str(&RunConfig::I_comp_waveform)}},
      {"I_main", {"scale applied to psi_main", num(&RunConfig::I_main)}},
      {"t_comp", {"compression start time [s]", num(&RunConfig::t_comp)}},
      {"V_gun_waveform", {"CSV t_seconds,value gun voltage [V]", str(&RunConfig::V_gun_waveform)}},
      {"V_form", {"scale applied to the gun voltage", num(&RunConfig::V_form)}},
      {"tau_LR", {"formation circuit time constant [s]", num(&RunConfig::tau_LR)}},
      {"m_slope", {"formation profile slope [1/m]", num(&RunConfig::m_slope)}},
      {"z_gp", {"formation profile and density centre [m]", num(&RunConfig::z_gp)}},
      {"initial", {"formation | smooth", str(&RunConfig::initial)}},
      {"n_high", {"peak density factor", num(&RunConfig::n_high)}},
      {"n_low", {"background density factor", num(&RunConfig::n_low)}},
      {"sigma_n2", {"density Gaussian variance [m^2]", num(&RunConfig::sigma_n2)}},
      {"T_init_eV", {"initial ion and electron temperature [eV]", num(&RunConfig::T_init_eV)}},
      {"dt", {"time step [s]", num(&RunConfig::dt)}},
      {"t_end", {"end time [s]", num(&RunConfig::t_end)}},
      {"steps", {"steps at dt for verify-conservation",
                 [](RunConfig& c, const std::string& v, const std::string& k) {
                   const double x = to_double(v, k);
                   if (x < 1 || x != static_cast<int>(x)) fail(ErrorCode::ConfigError, k + ": expected a positive integer");
                   c.steps = static_cast<int>(x);
                 }}},
      {"scheme", {"euler | rk2 | rk4",
                  [](RunConfig& c, const std::string& v, const std::string&) { c.scheme = parse_scheme(v); }}},
      {"output_dt", {"simulated time between diagnostics rows [s]; 0 for every step", num(&RunConfig::output_dt)}},
      {"output_dir", {"directory for timeseries.csv, flux.csv, snapshots", str(&RunConfig::output_dir)}},
      {"snapshots", {"write field snapshots at each output time", flag(&RunConfig::snapshots)}},
      {"strict_stability", {"abort when dt exceeds the stability estimate", flag(&RunConfig::strict_stability)}},
      {"probe", {"name,r,z,poloidal|toroidal (repeatable)",
                 [](RunConfig& c, const std::string& v, const std::string& k) {
                   std::stringstream ss(v);
                   std::vector<std::string> parts;
                   for (std::string p; std::getline(ss, p, ',');) parts.push_back(trim(p));
                   if (parts.size() != 4) fail(ErrorCode::ConfigError, k + ": expected name,r,z,channel");
                   ProbeSpec p{parts[0], {to_double(parts[1], k), to_double(parts[2], k)}, ProbeChannel::Poloidal};
                   if (parts[3] == "toroidal")
                     p.channel = ProbeChannel::Toroidal;
                   else if (parts[3] != "poloidal")
                     fail(ErrorCode::ConfigError, k + ": channel must be poloidal or toroidal");
                   c.probes.push_back(p);
                 }}},
      {"chord", {"name,r1,z1,r2,z2,n_e|T_i (repeatable)",
                 [](RunConfig& c, const std::string& v, const std::string& k) {
                   std::stringstream ss(v);
                   std::vector<std::string> parts;
                   for (std::string p; std::getline(ss, p, ',');) parts.push_back(trim(p));
                   if (parts.size() != 6) fail(ErrorCode::ConfigError, k + ": expected name,r1,z1,r2,z2,field");
                   Chord ch{parts[0],
                            {to_double(parts[1], k), to_double(parts[2], k)},
                            {to_double(parts[3], k), to_double(parts[4], k)},
                            ChordField::ElectronDensity};
                   if (parts[5] == "T_i")
                     ch.field = ChordField::IonTemperature;
                   else if (parts[5] != "n_e")
                     fail(ErrorCode::ConfigError, k + ": field must be n_e or T_i");
                   c.chords.push_back(ch);
                 }}},
  };
  return defs;
}

void validate(const RunConfig& c, const std::string& source) {
  if (c.mode != "simulate" && c.mode != "verify-conservation")
    fail(ErrorCode::ConfigError, source + ": mode must be simulate or verify-conservation");
  if (c.mesh_path.empty() && !c.rect_r) fail(ErrorCode::ConfigError, source + ": mesh or mesh_rect is required");
  if (!(c.dt > 0.0)) fail(ErrorCode::ConfigError, source + ": dt must be positive");
  if (c.mode == "simulate" && !(c.t_end > c.dt))
    fail(ErrorCode::ConfigError, source + ": t_end must exceed dt");
  if (c.output_dt < 0.0) fail(ErrorCode::ConfigError, source + ": output_dt must be non-negative");
  if (c.initial != "formation" && c.initial != "smooth")
    fail(ErrorCode::ConfigError, source + ": initial must be formation or smooth");
  const auto& p = c.physics;
  for (double x : {p.zeta, p.nu_num, p.nu_phys, p.chi_par_e, p.chi_par_i, p.chi_perp_e, p.chi_perp_i})
    if (x < 0.0) fail(ErrorCode::ConfigError, source + ": diffusivities must be non-negative");
  if (!(p.n0 > 0.0) || !(p.Z > 0.0) || !(p.mu_i > 0.0))
    fail(ErrorCode::ConfigError, source + ": n0, Z and m_0 must be positive");
  if (!(p.Te_floor_eV > 0.0)) fail(ErrorCode::ConfigError, source + ": Te_floor_eV must be positive");
  if (c.psi_mode == PsiMode::Table && c.psi_main_table.empty() && !c.interface_r_outer)
    fail(ErrorCode::ConfigError, source + ": psi_bc = table needs psi_main_table");
  for (const auto* f : {&c.mesh_path, &c.psi_main_table, &c.psi_lev_table, &c.psi_comp_table, &c.I_lev_waveform,
                        &c.I_comp_waveform, &c.V_gun_waveform})
    if (!f->empty() && !std::filesystem::exists(c.resolve(*f)))
      fail(ErrorCode::ConfigError, source + ": file not found: " + c.resolve(*f));
}

}  // namespace

std::string RunConfig::resolve(const std::string& path) const {
  if (path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (base_dir / p).string();
}

RunConfig parse_config(std::istream& in, const std::string& source, const std::filesystem::path& base_dir) {
  RunConfig c;
  c.base_dir = base_dir;
  const auto& defs = definitions();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) fail(ErrorCode::ConfigError, where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = defs.find(key);
    if (it == defs.end()) fail(ErrorCode::ConfigError, where + ": unknown key '" + key + "'");
    try {
      it->second.set(c, value, key);
    } catch (const Error& e) {
      fail(e.code(), where + ": " + e.detail());
    }
  }
  validate(c, source);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  return parse_config(in, path, std::filesystem::path(path).parent_path());
}

const std::map<std::string, std::string>& config_keys() {
  static const std::map<std::string, std::string> keys = [] {
    std::map<std::string, std::string> k;
    for (const auto& [name, def] : definitions()) k[name] = def.help;
    return k;
  }();
  return keys;
}

}  // namespace axmhd
