#include <cmath>
#include <functional>
#include <sstream>

#include "axmhd/scenario.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace axmhd;
using namespace testutil;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("formation profile") {
  CHECK(formation_profile_g(-0.43, 40.0, -0.43) == 0.5);
  CHECK(formation_profile_g(-0.33, 40.0, -0.43) == doctest::Approx(1.0 / (1.0 + std::exp(4.0))).epsilon(1e-13));
  CHECK(formation_profile_g(-0.33, 40.0, -0.43) == doctest::Approx(0.0180).epsilon(1e-2));
  CHECK(formation_profile_g(-1e6, 40.0, 0.0) == 1.0);
  CHECK(formation_profile_g(1e6, 40.0, 0.0) == 0.0);
  CHECK(std::isfinite(formation_profile_g(-1e300, 40.0, 0.0)));
  for (double z : {-0.6, -0.43, -0.2, 0.1})
    CHECK(formation_profile_g(z, 40.0, -0.43) + formation_profile_g(2 * -0.43 - z, 40.0, -0.43) ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("formation flux closed forms") {
  const double V0 = 800.0, tau = 90e-6;
  const Waveform flat({0.0, 1e-3}, {V0, V0});
  for (double t : {0.0, 1e-6, 2.5e-5, 3e-4}) {
    const double want = -V0 * tau * (1.0 - std::exp(-t / tau));
    CHECK(std::abs(formation_flux_Phi(flat, tau, t) - want) <= 1e-12 * std::max(std::abs(want), 1e-300));
  }
  CHECK(formation_flux_Phi(flat, 1e9, 2e-5) == doctest::Approx(-V0 * 2e-5).epsilon(1e-10));
  const Waveform zero({0.0, 1e-3}, {0.0, 0.0});
  CHECK(formation_flux_Phi(zero, tau, 5e-4) == 0.0);

  // V = a + b t: ∫₀ᵗ (a + b s)e^{s/τ}ds = aτ(E − 1) + b(τ t E − τ²(E − 1)), E = e^{t/τ}.
  const double a = 300.0, b = 2e7;
  const Waveform ramp({0.0, 1e-4}, {a, a + b * 1e-4});
  for (double t : {1e-6, 3e-5, 1e-4}) {
    const double E = std::exp(t / tau);
    const double want = -(a * tau * (E - 1.0) + b * (tau * t * E - tau * tau * (E - 1.0))) / E;
    CHECK(formation_flux_Phi(ramp, tau, t) == doctest::Approx(want).epsilon(1e-12));
  }

  const Waveform bumpy({0.0, 1e-5, 2e-5, 4e-5}, {0.0, 1000.0, 200.0, 600.0});
  FormationFluxIntegrator integ(bumpy, tau);
  for (int k = 1; k <= 40; ++k) integ.advance(k * 1e-6);
  CHECK(integ.value() == doctest::Approx(formation_flux_Phi(bumpy, tau, 4e-5)).epsilon(1e-13));
  CHECK(code_of([&] { integ.advance(1e-6); }) == ErrorCode::ConfigError);
  CHECK(code_of([&] { formation_flux_Phi(bumpy, tau, 5e-5); }) == ErrorCode::MissingWaveformSample);
  CHECK(code_of([&] { formation_flux_Phi(Waveform({1e-6, 2e-6}, {1, 1}), tau, 1.5e-6); }) ==
        ErrorCode::MissingWaveformSample);
}

TEST_CASE("formation field carries exactly the formation flux") {
  const auto m = perturbed_mesh(0.05);
  const auto ops = build_operators(m, compute_geometry(m));
  const Waveform V({0.0, 1e-4}, {1000.0, 1000.0});
  const FormationDrive drive(ops, m, V, 90e-6, 40.0, -0.1);
  CHECK(max_abs(drive.field(0.0)) == 0.0);
  for (double t : {1e-6, 5e-5}) {
    const auto f = formation_field_f(drive, t);
    const double Phi = formation_flux_Phi(V, 90e-6, t);
    double flux = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) flux += f[i] * ops.s_n[i] / (3.0 * ops.r[i]);
    CHECK(std::abs(flux - Phi) <= 1e-12 * std::abs(Phi));
  }
  const auto f = drive.field(-0.01);
  for (std::size_t i = 0; i < m.num_nodes(); ++i)
    for (std::size_t j = 0; j < m.num_nodes(); j += 17) {
      if (std::abs(m.node(i).r - m.node(j).r) > 1e-12 || i == j) continue;
      const double gi = formation_profile_g(m.node(i).z, 40.0, -0.1);
      const double gj = formation_profile_g(m.node(j).z, 40.0, -0.1);
      CHECK(f[i] * gj == doctest::Approx(f[j] * gi).epsilon(1e-13));
    }
}

TEST_CASE("coil drive superposition and gating") {
  CoilDrive coils;
  coils.psi_main = make_node_table({5, 2}, {1.0, 0.1});
  coils.psi_lev = make_node_table({2, 5}, {0.3, -0.2});
  coils.psi_comp = make_node_table({5, 2}, {-0.4, 0.2});
  coils.I_lev_tilde = Waveform({0.0, 1.0}, {1.0, 1.0});
  coils.I_comp_tilde = Waveform({0.0, 1.0}, {0.5, 0.5});
  coils.t_comp = 0.2;
  CHECK(coils.value(5, 0.5) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(coils.value(5, 0.1) == doctest::Approx(0.8).epsilon(1e-15));
  const auto v = boundary_psi(coils, {2, 5}, 0.5);
  CHECK(v[0] == doctest::Approx(0.1 + 0.3 + 0.1).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(0.6).epsilon(1e-15));

  CoilDrive only_main;
  only_main.psi_main = coils.psi_main;
  CHECK(only_main.value(2, 3.0) == 0.1);

  auto scaled = coils;
  scaled.I_lev_tilde = Waveform({0.0, 1.0}, {3.0, 3.0});
  CHECK(scaled.value(5, 0.1) - coils.value(5, 0.1) == doctest::Approx(2.0 * -0.2).epsilon(1e-14));

  CHECK(code_of([&] { coils.value(7, 0.5); }) == ErrorCode::ConfigError);
  CHECK(code_of([&] { coils.value(5, 2.0); }) == ErrorCode::MissingWaveformSample);
  CHECK(code_of([&] { make_node_table({1, 1}, {0.0, 0.0}); }) == ErrorCode::ConfigError);
}

TEST_CASE("initial density profile") {
  const Mesh m({{0.2, -0.43}, {0.3, -0.43}, {0.3, -0.33}, {0.2, 5.0}}, {{0, 1, 2}, {0, 2, 3}});
  const double s2 = 0.01;
  const auto n = initial_density(m, 9e20, s2, 10.0, 0.1, -0.43);
  CHECK(n[0] == doctest::Approx(9e21).epsilon(1e-15));
  CHECK(n[2] == doctest::Approx(9e20 * (9.9 * std::exp(-0.5) + 0.1)).epsilon(1e-14));
  CHECK(n[2] == doctest::Approx(5.49e21).epsilon(1e-3));
  CHECK(n[3] == doctest::Approx(9e19).epsilon(1e-15));
  CHECK(code_of([&] { initial_density(m, 9e20, s2, 10.0, 0.0, -0.43); }) == ErrorCode::NonPositiveFloor);
  CHECK(code_of([&] { initial_density(m, 9e20, s2, 10.0, -1.0, -0.43); }) == ErrorCode::NonPositiveFloor);
}

TEST_CASE("waveform and table CSV parsing") {
  std::istringstream w("t_seconds,value\n0,1\n1e-6,3\n3e-6,-1\n");
  const auto wf = read_waveform(w);
  CHECK(wf(0.5e-6) == doctest::Approx(2.0));
  CHECK(wf(2e-6) == doctest::Approx(1.0));
  CHECK(wf(3e-6) == -1.0);
  CHECK(code_of([&] { wf(-1e-9); }) == ErrorCode::MissingWaveformSample);
  CHECK(code_of([&] { wf(4e-6); }) == ErrorCode::MissingWaveformSample);

  std::istringstream bad("t_seconds,value\n0,1\n0,2\n");
  CHECK(code_of([&] { read_waveform(bad); }) == ErrorCode::ConfigError);
  std::istringstream garbled("t_seconds,value\n0,abc\n");
  CHECK(code_of([&] { read_waveform(garbled); }) == ErrorCode::IoError);
  std::istringstream empty("");
  CHECK(code_of([&] { read_waveform(empty); }) == ErrorCode::IoError);

  std::istringstream t("node_index,psi_value\n7,0.5\n3,-0.25\n");
  const auto table = read_node_table(t);
  CHECK(table.nodes == std::vector<std::int32_t>{3, 7});
  CHECK(table.values == std::vector<double>{-0.25, 0.5});
  std::istringstream neg("node_index,psi_value\n-1,0.5\n");
  CHECK(code_of([&] { read_node_table(neg); }) == ErrorCode::IoError);
  CHECK(code_of([&] { load_waveform("/nonexistent/v.csv"); }) == ErrorCode::IoError);
}
