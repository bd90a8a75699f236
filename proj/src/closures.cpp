#include "axmhd/closures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace axmhd {

double spitzer_eta(double Te_eV, double Z, double eta_max) {
  if (!(Te_eV > 0.0)) fail(ErrorCode::NonPositiveTemperature, "T_e = " + std::to_string(Te_eV) + " eV");
  return std::min(418.0 * Z * std::pow(Te_eV, -1.5), eta_max);
}

NodalField spitzer_eta(const NodalField& Te_eV, double Z, double eta_max) {
  NodalField out(Te_eV.size());
  for (std::size_t i = 0; i < Te_eV.size(); ++i) {
    if (!(Te_eV[i] > 0.0))
      fail(ErrorCode::NonPositiveTemperature, "T_e = " + std::to_string(Te_eV[i]) + " eV at node " + std::to_string(i));
    out[i] = std::min(418.0 * Z * std::pow(Te_eV[i], -1.5), eta_max);
  }
  return out;
}

double heat_exchange_Qie(double n, double Te_eV, double Ti_eV, double Z, double mu_i) {
  return 7.6e-33 * Z * Z * Z * (Te_eV - Ti_eV) * std::pow(Te_eV, -1.5) * n * n / mu_i;
}

NodalField heat_exchange_Qie(const NodalField& n, const NodalField& Te_eV, const NodalField& Ti_eV, double Z,
                             double mu_i) {
  NodalField out(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) out[i] = heat_exchange_Qie(n[i], Te_eV[i], Ti_eV[i], Z, mu_i);
  return out;
}

StabilityBound stability_dt(double v_max, double D_min, double D_max, double h_e, double safety) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  StabilityBound b;
  b.advective = v_max > 0.0 ? D_min / (v_max * v_max) : inf;
  b.diffusive = D_max > 0.0 ? h_e * h_e / D_max : inf;
  b.dt = safety * std::min(b.advective, b.diffusive);
  return b;
}

}  // namespace axmhd
