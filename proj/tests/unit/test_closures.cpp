#include <cmath>
#include <limits>

#include "axmhd/closures.hpp"
#include "axmhd/mhd.hpp"
#include "doctest.h"

using namespace axmhd;

namespace {

bool rel_close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol * std::abs(b); }

}  // namespace

TEST_CASE("spitzer resistivity worked values") {
  CHECK(rel_close(spitzer_eta(100.0, 1.0, 5000.0), 0.418));
  CHECK(spitzer_eta(0.1, 1.0, 5000.0) == 5000.0);
  CHECK(rel_close(spitzer_eta(0.1, 1.0, 1e9), 418.0 * std::pow(0.1, -1.5)));
  for (double T : {0.5, 3.0, 40.0, 700.0})
    CHECK(rel_close(spitzer_eta(2 * T, 1.3, 1e9) / spitzer_eta(T, 1.3, 1e9), std::pow(2.0, -1.5)));
  CHECK_THROWS_AS(spitzer_eta(0.0, 1.0, 5000.0), Error);
  CHECK_THROWS_AS(spitzer_eta(NodalField{1.0, -2.0}, 1.0, 5000.0), Error);
  const auto v = spitzer_eta(NodalField{100.0, 0.1}, 1.0, 5000.0);
  CHECK(rel_close(v[0], 0.418));
  CHECK(v[1] == 5000.0);
}

TEST_CASE("ion-electron exchange worked values") {
  CHECK(rel_close(heat_exchange_Qie(1e20, 100.0, 50.0, 1.0, 4.0), 9.5e5));
  CHECK(heat_exchange_Qie(1e20, 30.0, 30.0, 1.3, 4.0) == 0.0);
  CHECK(heat_exchange_Qie(1e20, 30.0, 10.0, 1.3, 4.0) > 0.0);
  CHECK(heat_exchange_Qie(1e20, 10.0, 30.0, 1.3, 4.0) < 0.0);
  const auto q = heat_exchange_Qie(NodalField{1e20}, NodalField{100.0}, NodalField{50.0}, 1.0, 4.0);
  CHECK(rel_close(q[0], 9.5e5));
}

TEST_CASE("stability bounds worked values") {
  const auto a = stability_dt(1e5, 50.0, 1.0, 1.0);
  CHECK(rel_close(a.advective, 50.0 / (1e5 * 1e5)));
  const auto d = stability_dt(1.0, 1.0, 5000.0, 2e-3);
  CHECK(rel_close(d.diffusive, 8e-10));
  const auto both = stability_dt(1e5, 50.0, 5000.0, 2e-3, 0.5);
  CHECK(rel_close(both.dt, 0.5 * 8e-10));
  const auto still = stability_dt(0.0, 50.0, 5000.0, 2e-3);
  CHECK(still.advective == std::numeric_limits<double>::infinity());
  CHECK(rel_close(still.dt, 0.5 * 8e-10));
}

TEST_CASE("stability inputs from a state") {
  PhysicsCoefficients c;
  c.eta_constant = 3.0;
  auto s = PlasmaState::zeros(2);
  s.n = NodalField{c.n0, 2 * c.n0};
  s.p_e = NodalField{1.0, 1.0};
  s.v_r = NodalField{3e4, 0.0};
  s.v_z = NodalField{4e4, 0.0};
  const auto in = stability_inputs(c, s);
  CHECK(rel_close(in.v_max, 5e4));
  CHECK(rel_close(in.D_min, 3.0));
  CHECK(rel_close(in.D_max, (c.gamma - 1.0) * c.chi_par_e / c.Z));
}
