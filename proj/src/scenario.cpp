#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "axmhd/scenario.hpp"

namespace axmhd {
namespace {

std::vector<std::vector<double>> read_csv_rows(std::istream& in, const std::string& source, std::size_t cols) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::IoError, source + ": empty file, header line required");
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::vector<double> row(cols);
    for (auto& x : row)
      if (!(ss >> x)) fail(ErrorCode::IoError, source + ":" + std::to_string(lineno) + ": expected " +
                                                   std::to_string(cols) + " numeric columns");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Waveform::Waveform(std::vector<double> t, std::vector<double> value) : t_(std::move(t)), v_(std::move(value)) {
  if (t_.size() != v_.size() || t_.empty()) fail(ErrorCode::ConfigError, "waveform needs matching non-empty columns");
  for (std::size_t k = 1; k < t_.size(); ++k)
    if (!(t_[k] > t_[k - 1])) fail(ErrorCode::ConfigError, "waveform times must increase strictly");
}

double Waveform::operator()(double t) const {
  if (t_.empty() || t < t_.front() || t > t_.back() || std::isnan(t))
    fail(ErrorCode::MissingWaveformSample, "no waveform sample covers t = " + std::to_string(t));
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  if (it == t_.end()) return v_.back();
  const auto k = static_cast<std::size_t>(it - t_.begin());
  const double w = (t - t_[k - 1]) / (t_[k] - t_[k - 1]);
  return (1.0 - w) * v_[k - 1] + w * v_[k];
}

Waveform read_waveform(std::istream& in, const std::string& source) {
  std::vector<double> t, v;
  for (auto& row : read_csv_rows(in, source, 2)) {
    t.push_back(row[0]);
    v.push_back(row[1]);
  }
  return Waveform(std::move(t), std::move(v));
}

Waveform load_waveform(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  return read_waveform(in, path);
}

NodeTable make_node_table(std::vector<std::int32_t> nodes, std::vector<double> values) {
  if (nodes.size() != values.size()) fail(ErrorCode::SizeMismatch, "node table columns differ in length");
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return nodes[a] < nodes[b]; });
  NodeTable t;
  for (auto k : order) {
    if (!t.nodes.empty() && t.nodes.back() == nodes[k])
      fail(ErrorCode::ConfigError, "node " + std::to_string(nodes[k]) + " listed twice");
    t.nodes.push_back(nodes[k]);
    t.values.push_back(values[k]);
  }
  return t;
}

NodeTable read_node_table(std::istream& in, const std::string& source) {
  std::vector<std::int32_t> nodes;
  std::vector<double> values;
  for (auto& row : read_csv_rows(in, source, 2)) {
    if (row[0] < 0 || row[0] != std::floor(row[0]))
      fail(ErrorCode::IoError, source + ": node_index must be a non-negative integer");
    nodes.push_back(static_cast<std::int32_t>(row[0]));
    values.push_back(row[1]);
  }
  return make_node_table(std::move(nodes), std::move(values));
}

NodeTable load_node_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  return read_node_table(in, path);
}

double formation_profile_g(double z, double m_slope, double z_gp) {
  // e^{m z_gp}/(e^{m z_gp}+e^{m z}) = 1/(1+e^{x}) with x = m(z − z_gp)
  const double x = m_slope * (z - z_gp);
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

namespace {

// Exact ∫ over one segment of the linear interpolant weighted by e^{−(t1−t')/τ}: returns (w0, w1).
std::pair<double, double> segment_weights(double h, double tau) {
  if (!std::isfinite(tau)) return {0.5 * h, 0.5 * h};
  const double x = h / tau;
  const double decay = -std::expm1(-x);  // 1 − e^{−x}
  double w1;
  if (x < 1e-4) {
    // τ(1 − (1−e^{−x})/x) by series
    w1 = tau * (x / 2.0 - x * x / 6.0 + x * x * x / 24.0);
  } else {
    w1 = tau * (1.0 - decay / x);
  }
  return {tau * decay - w1, w1};
}

}  // namespace

FormationFluxIntegrator::FormationFluxIntegrator(const Waveform& V_gun, double tau_LR) : V_(&V_gun), tau_(tau_LR) {
  if (!(tau_LR > 0.0)) fail(ErrorCode::ConfigError, "tau_LR must be positive");
  if (V_gun.empty() || V_gun.t_begin() > 0.0)
    fail(ErrorCode::MissingWaveformSample, "gun waveform must cover t = 0");
}

double FormationFluxIntegrator::advance(double t) {
  if (t < t_) fail(ErrorCode::ConfigError, "formation flux must be advanced forward in time");
  const auto& times = V_->times();
  auto seg = [&](double a, double b) {
    const double h = b - a;
    if (h <= 0.0) return;
    const auto [w0, w1] = segment_weights(h, tau_);
    const double decay = std::isfinite(tau_) ? std::exp(-h / tau_) : 1.0;
    integral_ = decay * integral_ + w0 * (*V_)(a) + w1 * (*V_)(b);
  };
  double a = t_;
  for (auto it = std::upper_bound(times.begin(), times.end(), a); it != times.end() && *it < t; ++it) {
    seg(a, *it);
    a = *it;
  }
  seg(a, t);
  t_ = t;
  return value();
}

double formation_flux_Phi(const Waveform& V_gun, double tau_LR, double t) {
  FormationFluxIntegrator integ(V_gun, tau_LR);
  return integ.advance(t);
}

FormationDrive::FormationDrive(const OperatorSet& ops, const Mesh& mesh, Waveform V, double tau, double m, double zg)
    : V_gun(std::move(V)), tau_LR(tau), m_slope(m), z_gp(zg), g(mesh.num_nodes()) {
  if (!(tau > 0.0)) fail(ErrorCode::ConfigError, "tau_LR must be positive");
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    g[i] = formation_profile_g(mesh.node(i).z, m_slope, z_gp);
    Q_g += g[i] * ops.s_n[i] / (3.0 * ops.r[i]);
  }
  if (!(Q_g > 0.0)) fail(ErrorCode::ConfigError, "formation profile has no support on the mesh");
}

NodalField FormationDrive::field(double Phi_form) const { return (Phi_form / Q_g) * g; }

NodalField formation_field_f(const FormationDrive& drive, double t) {
  return drive.field(formation_flux_Phi(drive.V_gun, drive.tau_LR, t));
}

namespace {

double lookup(const NodeTable& table, std::int32_t node, const char* name) {
  const auto it = std::lower_bound(table.nodes.begin(), table.nodes.end(), node);
  if (it != table.nodes.end() && *it == node) return table.values[static_cast<std::size_t>(it - table.nodes.begin())];
  fail(ErrorCode::ConfigError, std::string(name) + " table has no entry for node " + std::to_string(node));
}

}  // namespace

double CoilDrive::value(std::int32_t node, double t) const {
  double v = psi_main.nodes.empty() ? 0.0 : lookup(psi_main, node, "psi_main");
  if (I_lev_tilde && !psi_lev.nodes.empty()) v += (*I_lev_tilde)(t) * lookup(psi_lev, node, "psi_lev");
  if (I_comp_tilde && !psi_comp.nodes.empty() && t >= t_comp)
    v += (*I_comp_tilde)(t - t_comp) * lookup(psi_comp, node, "psi_comp");
  return v;
}

std::vector<double> boundary_psi(const CoilDrive& coils, const std::vector<std::int32_t>& nodes, double t) {
  std::vector<double> out(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) out[k] = coils.value(nodes[k], t);
  return out;
}

NodalField initial_density(const Mesh& mesh, double n0, double sigma_n2, double n_high, double n_low, double z_gp) {
  if (!(n_low > 0.0)) fail(ErrorCode::NonPositiveFloor, "n_low must be positive");
  if (!(sigma_n2 > 0.0)) fail(ErrorCode::ConfigError, "sigma_n2 must be positive");
  NodalField n(mesh.num_nodes());
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double dz = mesh.node(i).z - z_gp;
    n[i] = n0 * ((n_high - n_low) * std::exp(-dz * dz / (2.0 * sigma_n2)) + n_low);
  }
  return n;
}

}  // namespace axmhd
