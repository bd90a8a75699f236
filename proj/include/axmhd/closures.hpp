#pragma once

#include "axmhd/field.hpp"

namespace axmhd {

// Magnetic diffusivity η = 418·Z·T_e^(-3/2) m²/s with T_e in eV, capped at eta_max.
double spitzer_eta(double Te_eV, double Z, double eta_max);
NodalField spitzer_eta(const NodalField& Te_eV, double Z, double eta_max);

// Ion-electron collisional exchange in W/m³ (temperatures in eV, n in 1/m³).
double heat_exchange_Qie(double n, double Te_eV, double Ti_eV, double Z, double mu_i);
NodalField heat_exchange_Qie(const NodalField& n, const NodalField& Te_eV, const NodalField& Ti_eV, double Z,
                             double mu_i);

struct StabilityBound {
  double advective = 0.0;  // D_min / v_max²
  double diffusive = 0.0;  // h_e² / D_max
  double dt = 0.0;         // safety · min of the two
};

StabilityBound stability_dt(double v_max, double D_min, double D_max, double h_e, double safety = 0.5);

}  // namespace axmhd
