#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "axmhd/diagnostics.hpp"
#include "axmhd/runner.hpp"
#include "doctest.h"
#include "physics_helpers.hpp"

using namespace axmhd;
using namespace testutil;

namespace {

OperatorSet ops_of(const Mesh& m) { return build_operators(m, compute_geometry(m)); }

std::string read_all(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("axmhd_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("conserved quantities on the two-element mesh") {
  const auto m = two_element_mesh();
  const auto ops = ops_of(m);
  const PhysicsCoefficients c;
  auto s = PlasmaState::zeros(m.num_nodes());
  const auto z = conserved_quantities(ops, s, c);
  CHECK(z.N == 0.0);
  CHECK(z.Phi == 0.0);
  CHECK(z.P_phi == 0.0);
  CHECK(z.U_total == 0.0);

  s.n.fill(c.n0);
  const auto u = conserved_quantities(ops, s, c);
  CHECK(u.N == doctest::Approx(c.n0 * (2 * std::numbers::pi / 3) * 4.5).epsilon(1e-15));

  s.f = m.r() * m.r();
  double volume = 0.0;
  for (double v : ops.dV_n) volume += v;
  CHECK(conserved_quantities(ops, s, c).Phi == doctest::Approx(volume / (2 * std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("conserved quantities are linear and partition the energy") {
  const auto m = perturbed_mesh(0.1);
  const auto ops = ops_of(m);
  std::mt19937_64 rng(4);
  const PhysicsCoefficients c;
  auto s = random_state(m, rng);
  const auto a = conserved_quantities(ops, s, c);
  CHECK(a.U_total == doctest::Approx(a.U_K + a.U_Th + a.U_M).epsilon(1e-15));
  auto s3 = s;
  s3.n *= 3.0;
  s3.f *= 3.0;
  const auto b = conserved_quantities(ops, s3, c);
  CHECK(b.N == doctest::Approx(3.0 * a.N).epsilon(1e-15));
  CHECK(b.Phi == doctest::Approx(3.0 * a.Phi).epsilon(1e-15));
  CHECK(b.P_phi == doctest::Approx(3.0 * a.P_phi).epsilon(1e-15));

  const double U_th = integrate(ops, (s.p_i + s.p_e) * (1.0 / (c.gamma - 1.0)));
  CHECK(a.U_Th == doctest::Approx(U_th).epsilon(1e-14));
  const double U_k =
      integrate(ops, 0.5 * c.m_i() * s.n * (s.v_r * s.v_r + s.v_phi * s.v_phi + s.v_z * s.v_z));
  CHECK(a.U_K == doctest::Approx(U_k).epsilon(1e-14));
}

TEST_CASE("density diffusion off gives zero correction terms") {
  const auto m = perturbed_mesh(0.1);
  const auto ops = ops_of(m);
  std::mt19937_64 rng(3);
  const auto s = random_state(m, rng);
  PhysicsCoefficients c;
  c.zeta = 0.0;
  BoundaryConditions bc;
  bc.T_wall_eV.reset();
  const auto rep = semi_discrete_balances(m, ops, s, c, bc);
  for (int k = 0; k < 3; ++k) {
    CHECK(rep.correction_momentum[k].value == 0.0);
    CHECK(rep.correction_energy[k].value == 0.0);
  }
  for (const auto& br : rep.brackets)
    if (br.name == "density_correction") CHECK(br.first == 0.0);
}

TEST_CASE("probe on a vertical wall sees a uniform axial field") {
  double err[2];
  const double hs[2] = {0.1, 0.05};
  for (int k = 0; k < 2; ++k) {
    const auto m = rect_mesh(hs[k]);
    const auto ops = ops_of(m);
    const auto frame = boundary_frame(m);
    auto s = PlasmaState::zeros(m.num_nodes());
    s.psi = 0.5 * m.r() * m.r();
    const auto p = make_probe(m, frame, "outer", {1.0, 0.05 + 1e-3}, ProbeChannel::Poloidal);
    CHECK(p.snap_distance <= hs[k]);
    CHECK(std::abs(frame.tangent[p.frame_index].r) <= 1e-12);
    CHECK(frame.tangent[p.frame_index].z == doctest::Approx(1.0));
    const double b = probe_signal(ops, s, p, frame);
    err[k] = std::abs(b - 1.0);
    CHECK(err[k] <= 0.6 * hs[k]);

    auto flipped = frame;
    for (auto& t : flipped.tangent) t = {-t.r, -t.z};
    CHECK(probe_signal(ops, s, p, flipped) == doctest::Approx(-b).epsilon(1e-15));

    const auto tor = make_probe(m, frame, "tor", {1.0, 0.05}, ProbeChannel::Toroidal);
    CHECK(probe_signal(ops, s, tor, frame) == 0.0);
    s.f.fill(0.3);
    CHECK(probe_signal(ops, s, tor, frame) == doctest::Approx(0.3 / m.node(tor.node).r).epsilon(1e-15));
    const auto both = probe_signals(ops, s, {p, tor}, frame);
    CHECK(both[0] == b);
    CHECK(both[1] == probe_signal(ops, s, tor, frame));
  }
  CHECK(err[1] < 0.6 * err[0]);
}

TEST_CASE("chord averages") {
  const auto m = generate_rect_mesh({0.2, 1.0}, {0.0, 1.0}, 0.1);
  CHECK(chord_average(m, NodalField(m.num_nodes(), 4.2), {0.25, 0.1}, {0.9, 0.8}) ==
        doctest::Approx(4.2).epsilon(1e-14));
  CHECK(chord_average(m, m.z(), {0.55, 0.0}, {0.55, 1.0}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(chord_average(m, m.z(), {0.5, 0.0}, {0.5, 1.0}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(chord_average(m, m.r(), {0.2, 0.3}, {1.0, 0.3}) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK_THROWS_AS(chord_average(m, m.z(), {0.1, 0.5}, {0.9, 0.5}), Error);
  try {
    chord_average(m, m.z(), {0.5, 0.5}, {0.5, 1.5});
    FAIL("expected ChordOutsideMesh");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ChordOutsideMesh);
  }

  auto s = PlasmaState::zeros(m.num_nodes());
  s.n.fill(2e20);
  s.p_i.fill(2e20 * 15.0 * constants::eV);
  CHECK(chord_average(m, s, Chord{"ne", {0.3, 0.5}, {0.9, 0.5}, ChordField::ElectronDensity}, 1.3) ==
        doctest::Approx(2.6e20).epsilon(1e-14));
  CHECK(chord_average(m, s, Chord{"Ti", {0.3, 0.5}, {0.9, 0.5}, ChordField::IonTemperature}, 1.3) ==
        doctest::Approx(15.0).epsilon(1e-13));
}

TEST_CASE("chord average converges to the line integral") {
  auto u = [](double r, double z) { return std::sin(3 * r) * std::cos(2 * z); };
  const Point a{0.23, -0.17}, b{0.94, 0.27};
  // Composite Simpson on the exact field.
  const int n = 20000;
  double exact = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double t = double(k) / n;
    const double w = (k == 0 || k == n) ? 1 : (k % 2 ? 4 : 2);
    exact += w * u(a.r + t * (b.r - a.r), a.z + t * (b.z - a.z));
  }
  exact /= 3.0 * n;
  double err[3];
  const double hs[3] = {0.1, 0.05, 0.025};
  for (int k = 0; k < 3; ++k) {
    const auto m = perturbed_mesh(hs[k], 5);
    NodalField f(m.num_nodes());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = u(m.node(i).r, m.node(i).z);
    err[k] = std::abs(chord_average(m, f, a, b) - exact);
  }
  for (int k = 0; k < 2; ++k) CHECK(std::log2(err[k] / err[k + 1]) >= 0.9);
}

TEST_CASE("time series and snapshot writers") {
  const auto dir = temp_dir("writers");
  {
    TimeSeriesWriter w((dir / "ts.csv").string(), {"probe_a", "chord_b"});
    ConservedRecord r;
    r.t = 1e-6;
    r.N = 2.0;
    w.write(r, {0.5, 0.25});
    r.t = 2e-6;
    w.write(r, {0.75, 0.125});
    CHECK_THROWS_AS(w.write(r, {1.0}), Error);
  }
  std::istringstream ts(read_all((dir / "ts.csv").string()));
  std::string line;
  std::getline(ts, line);
  CHECK(line == "t,N,Phi,P_phi,U_K,U_Th,U_M,U_total,probe_a,chord_b");
  int rows = 0;
  while (std::getline(ts, line)) ++rows;
  CHECK(rows == 2);

  SnapshotWriter snaps((dir / "snaps").string());
  auto s = PlasmaState::zeros(3);
  s.n = NodalField{1.0, 2.0, 3.0};
  s.t = 5e-7;
  snaps.write(s);
  snaps.write(s);
  CHECK(snaps.count() == 2);
  const auto n_file = read_all((dir / "snaps" / "snap_000001_n.csv").string());
  CHECK(n_file.rfind("node_index,value\n0,1\n1,2\n2,3\n", 0) == 0);
  for (const char* f : PlasmaState::names)
    CHECK(std::filesystem::exists(dir / "snaps" / ("snap_000000_" + std::string(f) + ".csv")));
  const auto manifest = read_all((dir / "snaps" / "manifest.csv").string());
  CHECK(manifest.rfind("index,t,fields\n", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("closed flux depth") {
  const auto m = rect_mesh(0.05);
  auto bump = [](Point p) {
    return std::exp(-((p.r - 0.6) * (p.r - 0.6) + (p.z - 0.05) * (p.z - 0.05)) / 0.01);
  };
  NodalField psi(m.num_nodes());
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = bump(m.node(i));
  const auto c = deepest_closed_flux(m, psi);
  REQUIRE(c.node >= 0);
  double peak = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    peak = std::max(peak, psi[i]);
    if (m.is_boundary(i)) edge = std::max(edge, psi[i]);
  }
  CHECK(psi[c.node] == peak);
  CHECK(c.depth == doctest::Approx(peak - edge).epsilon(1e-14));

  const auto right = deepest_closed_flux(m, psi, [](Point p) { return p.r > 0.8; });
  CHECK(right.depth < 1e-12);

  const auto mono = deepest_closed_flux(m, m.r() + 2.0 * m.z());
  CHECK(mono.node == -1);
  CHECK(mono.depth == 0.0);

  // Two wells joined by a saddle: depth is measured from the saddle, not the lower peak.
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const Point p = m.node(i);
    psi[i] = bump(p) + 0.8 * std::exp(-((p.r - 0.35) * (p.r - 0.35) + (p.z - 0.05) * (p.z - 0.05)) / 0.01);
  }
  const auto twin = deepest_closed_flux(m, psi);
  REQUIRE(twin.node >= 0);
  CHECK(m.node(twin.node).r == doctest::Approx(0.6));
  edge = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    if (m.is_boundary(i)) edge = std::max(edge, psi[i]);
  CHECK(twin.depth <= psi[twin.node] - edge);
  CHECK(twin.depth > 0.0);
}
