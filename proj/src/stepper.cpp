#include <algorithm>
#include <cmath>
#include <limits>

#include "axmhd/mhd.hpp"

namespace axmhd {

Scheme parse_scheme(const std::string& name) {
  if (name == "euler") return Scheme::Euler;
  if (name == "rk2") return Scheme::RK2;
  if (name == "rk4") return Scheme::RK4;
  fail(ErrorCode::ConfigError, "unknown scheme '" + name + "' (euler | rk2 | rk4)");
}

PlasmaState step(const PlasmaState& s, double dt, Scheme scheme, const RhsFn& rhs, const BcFn& bc) {
  if (!(dt > 0.0)) fail(ErrorCode::ConfigError, "dt must be positive");
  auto stage = [&](const PlasmaState& base, double h, const PlasmaState& k, double t) {
    PlasmaState out = axpy(base, h, k);
    out.t = t;
    bc(out);
    return out;
  };
  switch (scheme) {
    case Scheme::Euler:
      return stage(s, dt, rhs(s), s.t + dt);
    case Scheme::RK2: {
      const PlasmaState k1 = rhs(s);
      const PlasmaState s1 = stage(s, dt, k1, s.t + dt);
      const PlasmaState k2 = rhs(s1);
      PlasmaState out = axpy(axpy(s, 0.5 * dt, k1), 0.5 * dt, k2);
      out.t = s.t + dt;
      bc(out);
      return out;
    }
    case Scheme::RK4: {
      const PlasmaState k1 = rhs(s);
      const PlasmaState k2 = rhs(stage(s, 0.5 * dt, k1, s.t + 0.5 * dt));
      const PlasmaState k3 = rhs(stage(s, 0.5 * dt, k2, s.t + 0.5 * dt));
      const PlasmaState k4 = rhs(stage(s, dt, k3, s.t + dt));
      PlasmaState out = axpy(axpy(axpy(axpy(s, dt / 6.0, k1), dt / 3.0, k2), dt / 3.0, k3), dt / 6.0, k4);
      out.t = s.t + dt;
      bc(out);
      return out;
    }
  }
  return s;
}

StabilityInputs stability_inputs(const PhysicsCoefficients& c, const PlasmaState& s) {
  double v_max = 0.0, n_min = std::numeric_limits<double>::infinity(), n_max = 0.0;
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    const double v = std::sqrt(s.v_r[i] * s.v_r[i] + s.v_phi[i] * s.v_phi[i] + s.v_z[i] * s.v_z[i]);
    v_max = std::max(v_max, v);
    n_min = std::min(n_min, s.n[i]);
    n_max = std::max(n_max, s.n[i]);
  }
  double eta_min = c.eta_max, eta_max = 0.0;
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    double eta = c.eta_max;
    if (c.eta_constant) {
      eta = *c.eta_constant;
    } else {
      const double te = std::max(s.p_e[i] / (c.Z * s.n[i]) / constants::eV, c.Te_floor_eV);
      eta = spitzer_eta(te, c.Z, c.eta_max);
    }
    eta_min = std::min(eta_min, eta);
    eta_max = std::max(eta_max, eta);
  }
  const double gm1 = c.gamma - 1.0;
  const double dilute = n_min > 0.0 ? c.n0 / n_min : 1.0;
  const double D_visc = c.nu_num * dilute;
  const double D_heat =
      gm1 * dilute * std::max({c.chi_par_e / c.Z, c.chi_par_i, c.chi_perp_e / c.Z, c.chi_perp_i});
  const double D_max = std::max({c.zeta, D_visc, D_heat, eta_max});
  double D_min = std::numeric_limits<double>::infinity();
  for (double d : {c.zeta, n_max > 0.0 ? c.nu_num * c.n0 / n_max : 0.0, eta_min})
    if (d > 0.0) D_min = std::min(D_min, d);
  if (!std::isfinite(D_min)) D_min = 0.0;
  return {v_max, D_min, D_max};
}

StabilityBound stability_dt(const PhysicsCoefficients& c, const PlasmaState& s, double h_e, double safety) {
  const auto in = stability_inputs(c, s);
  return stability_dt(in.v_max, in.D_min, in.D_max, h_e, safety);
}

}  // namespace axmhd
