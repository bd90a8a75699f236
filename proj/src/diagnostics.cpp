#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "axmhd/diagnostics.hpp"

namespace axmhd {

ConservedRecord conserved_quantities(const OperatorSet& ops, const PlasmaState& s, const PhysicsCoefficients& c) {
  const double mu0 = constants::mu0;
  ConservedRecord r;
  r.t = s.t;
  r.N = dot(ops.dV_n, s.n);
  r.Phi = dot(ops.dV_n, s.f * ops.inv_r * ops.inv_r) / (2.0 * std::numbers::pi);
  r.P_phi = c.m_i() * dot(ops.dV_n, s.n * ops.r * s.v_phi);
  r.U_K = 0.5 * c.m_i() * dot(ops.dV_n, s.n * (square(s.v_r) + square(s.v_phi) + square(s.v_z)));
  r.U_Th = dot(ops.dV_n, s.p_i + s.p_e) / (c.gamma - 1.0);
  const auto g = gradient_node_to_element(ops, s.psi);
  r.U_M = dot(ops.dV_n, square(s.f) * ops.inv_r * ops.inv_r) / (2.0 * mu0) +
          dot(ops.dV_e, (square(g.r) + square(g.z)) * ops.inv_r_e * ops.inv_r_e) / (2.0 * mu0);
  r.U_total = r.U_K + r.U_Th + r.U_M;
  return r;
}

Probe make_probe(const Mesh& mesh, const BoundaryFrame& frame, std::string name, Point location,
                 ProbeChannel channel) {
  Probe p{std::move(name), location, channel, -1, 0, std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < frame.nodes.size(); ++k) {
    const auto& q = mesh.node(frame.nodes[k]);
    const double d = std::hypot(q.r - location.r, q.z - location.z);
    if (d < p.snap_distance) {
      p.snap_distance = d;
      p.node = frame.nodes[k];
      p.frame_index = k;
    }
  }
  if (p.node < 0) fail(ErrorCode::ConfigError, "mesh has no boundary nodes for probe " + p.name);
  return p;
}

std::vector<double> probe_signals(const OperatorSet& ops, const PlasmaState& s, const std::vector<Probe>& probes,
                                  const BoundaryFrame& frame) {
  std::vector<double> out(probes.size());
  bool need_b = false;
  for (const auto& p : probes) need_b |= p.channel == ProbeChannel::Poloidal;
  NodalField br, bz;
  if (need_b) {
    const auto b = poloidal_field_e(ops, s.psi);
    br = ops.Wn(b.r);
    bz = ops.Wn(b.z);
  }
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const auto& p = probes[k];
    if (p.channel == ProbeChannel::Toroidal) {
      out[k] = s.f[p.node] * ops.inv_r[p.node];
    } else {
      const auto& t = frame.tangent[p.frame_index];
      out[k] = t.r * br[p.node] + t.z * bz[p.node];
    }
  }
  return out;
}

double probe_signal(const OperatorSet& ops, const PlasmaState& s, const Probe& probe, const BoundaryFrame& frame) {
  return probe_signals(ops, s, {probe}, frame)[0];
}

double chord_average(const Mesh& mesh, const NodalField& u, Point a, Point b) {
  const double dr = b.r - a.r, dz = b.z - a.z;
  const double length = std::hypot(dr, dz);
  if (!(length > 0.0)) fail(ErrorCode::ConfigError, "chord endpoints coincide");
  struct Piece {
    double t0, t1, u0, u1;
  };
  std::vector<Piece> pieces;
  constexpr double eps = 1e-12;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.element(e);
    const Point& p1 = mesh.node(el[0]);
    const Point& p2 = mesh.node(el[1]);
    const Point& p3 = mesh.node(el[2]);
    const double det = (p2.r - p1.r) * (p3.z - p1.z) - (p3.r - p1.r) * (p2.z - p1.z);
    // Barycentric λ_k(t) = c_k + d_k t along the chord.
    auto bary = [&](double r, double z) {
      const double l2 = ((r - p1.r) * (p3.z - p1.z) - (p3.r - p1.r) * (z - p1.z)) / det;
      const double l3 = ((p2.r - p1.r) * (z - p1.z) - (r - p1.r) * (p2.z - p1.z)) / det;
      return std::array<double, 3>{1.0 - l2 - l3, l2, l3};
    };
    const auto c0 = bary(a.r, a.z);
    const auto c1 = bary(b.r, b.z);
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < 3 && lo <= hi; ++k) {
      const double c = c0[k], d = c1[k] - c0[k];
      if (std::abs(d) < 1e-15) {
        if (c < -eps) hi = -1.0;
        continue;
      }
      const double root = -c / d;
      if (d > 0.0)
        lo = std::max(lo, root);
      else
        hi = std::min(hi, root);
    }
    if (hi - lo <= eps) continue;
    auto value = [&](double t) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k) v += (c0[k] + t * (c1[k] - c0[k])) * u[el[k]];
      return v;
    };
    pieces.push_back({lo, hi, value(lo), value(hi)});
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.t0 < y.t0; });
  double covered = 0.0, integral = 0.0;
  for (const auto& p : pieces) {
    if (p.t1 <= covered) continue;
    if (p.t0 > covered + 1e-9) break;
    const double t0 = std::max(p.t0, covered);
    const double w = (t0 - p.t0) / (p.t1 - p.t0);
    const double u0 = (1.0 - w) * p.u0 + w * p.u1;
    integral += 0.5 * (u0 + p.u1) * (p.t1 - t0);
    covered = p.t1;
  }
  if (covered < 1.0 - 1e-9)
    fail(ErrorCode::ChordOutsideMesh, "chord leaves the mesh at fraction " + std::to_string(covered));
  return integral;
}

double chord_average(const Mesh& mesh, const PlasmaState& s, const Chord& chord, double Z) {
  if (chord.field == ChordField::ElectronDensity) return chord_average(mesh, Z * s.n, chord.a, chord.b);
  return chord_average(mesh, s.p_i / s.n * (1.0 / constants::eV), chord.a, chord.b);
}

TimeSeriesWriter::TimeSeriesWriter(const std::string& path, const std::vector<std::string>& extra_columns)
    : out_(path), extra_(extra_columns.size()) {
  if (!out_) fail(ErrorCode::IoError, "cannot write " + path);
  out_ << "t,N,Phi,P_phi,U_K,U_Th,U_M,U_total";
  for (const auto& c : extra_columns) out_ << ',' << c;
  out_ << '\n' << std::setprecision(17);
}

void TimeSeriesWriter::write(const ConservedRecord& r, const std::vector<double>& extra) {
  if (extra.size() != extra_) fail(ErrorCode::SizeMismatch, "time-series row width");
  out_ << r.t << ',' << r.N << ',' << r.Phi << ',' << r.P_phi << ',' << r.U_K << ',' << r.U_Th << ',' << r.U_M
       << ',' << r.U_total;
  for (double x : extra) out_ << ',' << x;
  out_ << '\n';
  out_.flush();
}

SnapshotWriter::SnapshotWriter(std::string directory) : dir_(std::move(directory)) {
  std::filesystem::create_directories(dir_);
  std::ofstream manifest(dir_ + "/manifest.csv");
  if (!manifest) fail(ErrorCode::IoError, "cannot write " + dir_ + "/manifest.csv");
  manifest << "index,t,fields\n";
}

void SnapshotWriter::write(const PlasmaState& s) {
  std::ostringstream stem;
  stem << "snap_" << std::setw(6) << std::setfill('0') << index_;
  std::string fields;
  const auto f = s.fields();
  for (std::size_t k = 0; k < f.size(); ++k) {
    const std::string name = stem.str() + "_" + PlasmaState::names[k] + ".csv";
    std::ofstream out(dir_ + "/" + name);
    if (!out) fail(ErrorCode::IoError, "cannot write " + dir_ + "/" + name);
    out << "node_index,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < f[k]->size(); ++i) out << i << ',' << (*f[k])[i] << '\n';
    fields += (k ? ";" : "") + std::string(PlasmaState::names[k]);
  }
  std::ofstream manifest(dir_ + "/manifest.csv", std::ios::app);
  manifest << index_ << ',' << std::setprecision(17) << s.t << ',' << fields << '\n';
  ++index_;
}

}  // namespace axmhd
