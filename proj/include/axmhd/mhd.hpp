#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "axmhd/closures.hpp"
#include "axmhd/mesh.hpp"
#include "axmhd/ops.hpp"
#include "axmhd/physics.hpp"

namespace axmhd {

struct PlasmaState {
  NodalField n, v_r, v_phi, v_z, p_i, p_e, psi, f;
  double t = 0.0;

  static PlasmaState zeros(std::size_t num_nodes);
  static constexpr std::array<const char*, 8> names{"n", "v_r", "v_phi", "v_z", "p_i", "p_e", "psi", "f"};
  std::array<NodalField*, 8> fields() { return {&n, &v_r, &v_phi, &v_z, &p_i, &p_e, &psi, &f}; }
  std::array<const NodalField*, 8> fields() const { return {&n, &v_r, &v_phi, &v_z, &p_i, &p_e, &psi, &f}; }
};

// this + s * d, field by field
PlasmaState axpy(const PlasmaState& a, double s, const PlasmaState& d);

enum class CorrectionModel { None = 0, ParticleSource = 1, EnergyConserving = 2 };

struct PhysicsCoefficients {
  double mu_i = 4.0;  // ion mass number
  double Z = 1.3;
  double gamma = 5.0 / 3.0;
  double zeta = 50.0;
  double nu_num = 700.0;
  double nu_phys = 410.0;
  double n0 = 9e20;
  double chi_par_e = 16000.0;
  double chi_par_i = 5000.0;
  double chi_perp_e = 240.0;
  double chi_perp_i = 120.0;
  double eta_max = 5000.0;
  double Lambda = 10.0;
  CorrectionModel correction_model = CorrectionModel::EnergyConserving;
  // Lower limit on T_e used only inside the η and Q_ie closures.
  double Te_floor_eV = 1e-3;
  // When set, replaces Spitzer η with this constant.
  std::optional<double> eta_constant;

  double m_i() const { return mu_i * constants::proton_mass; }
  double rho0() const { return m_i() * n0; }
  double mu_num() const { return rho0() * nu_num; }
  double mu_phys() const { return rho0() * nu_phys; }
};

enum class VelocityMode { AllZero, NormalZero };
enum class PsiMode { Zero, Table, Free };

struct BoundaryConditions {
  VelocityMode velocity_mode = VelocityMode::AllZero;
  // No v_φ condition and ψ|Γ = 0.
  bool angular_momentum_mode = false;
  PsiMode psi_mode = PsiMode::Zero;
  // Values aligned with mesh.boundary_nodes(); required when psi_mode == Table.
  std::function<std::vector<double>(double t)> psi_boundary;
  // Boundary temperature; disabled leaves pressures natural.
  std::optional<double> T_wall_eV = 0.02;
  std::vector<std::int32_t> interface_nodes;
  std::optional<double> f_interface;
};

// Nodes where ψ is overwritten by the boundary condition.
std::vector<bool> psi_dirichlet_mask(const Mesh& mesh, const BoundaryConditions& bc);

void apply_boundary_conditions(const Mesh& mesh, PlasmaState& state, const BoundaryConditions& bc, double t,
                               double Z);

// Zeroes derivative entries of fields held fixed by time-independent conditions (v, ψ) so balance
// integrals see what the stepper applies.
void constrain_derivative(const Mesh& mesh, PlasmaState& dstate, const BoundaryConditions& bc);

struct NodalVector3 {
  NodalField r, phi, z;
};

NodalVector3 viscous_force(const OperatorSet& ops, const PlasmaState& s, const NodalField& mu);
NodalField viscous_heating_Qpi(const OperatorSet& ops, const PlasmaState& s, const NodalField& mu);

ElementVectorField heat_flux(const OperatorSet& ops, const NodalField& T, const ElementVectorField& B_theta_e,
                             double kappa_par, double kappa_perp);

struct DensityCorrection {
  NodalVector3 force;  // N/m³
  NodalField Q;        // W/m³
};

DensityCorrection density_corrections(const OperatorSet& ops, const PlasmaState& s, double m_i, double zeta,
                                      CorrectionModel model);

ElementVectorField poloidal_field_e(const OperatorSet& ops, const NodalField& psi);

// Every additive piece of the discrete system, kept separate for the balance diagnostics.
struct RhsTerms {
  NodalField n_adv, n_diff;
  NodalVector3 a_adv, a_pres, a_visc, a_lor_psi, a_lor_f, a_lor_phi, a_corr;
  NodalField pi_adv, pi_flux, pi_Qie, pi_Qpi, pi_Qzeta;
  NodalField pe_adv, pe_flux, pe_Qie, pe_ohm_tor, pe_ohm_pol;
  NodalField psi_adv, psi_res;
  NodalField f_adv, f_omega, f_res, f_src;
  // Intermediate fields reused by diagnostics.
  NodalField rho, delta_star_psi, eta;
};

RhsTerms evaluate_rhs_terms(const OperatorSet& ops, const PlasmaState& s, const PhysicsCoefficients& c,
                            const std::vector<bool>& psi_dirichlet, const NodalField* f_source_rate = nullptr);
PlasmaState assemble_rhs(const RhsTerms& terms);

// Time derivative of the state (t field of the result is unused).
PlasmaState compute_rhs(const OperatorSet& ops, const PlasmaState& s, const PhysicsCoefficients& c,
                        const std::vector<bool>& psi_dirichlet, const NodalField* f_source_rate = nullptr);

// Aborts with the field and node implicated when n ≤ 0, p < −1e-12·scale, or anything is non-finite.
void check_state(const PlasmaState& s);

enum class Scheme { Euler, RK2, RK4 };
Scheme parse_scheme(const std::string& name);

using RhsFn = std::function<PlasmaState(const PlasmaState&)>;
using BcFn = std::function<void(PlasmaState&)>;

// Explicit step; bc is applied to every stage state (with its stage time set) and to the result.
PlasmaState step(const PlasmaState& s, double dt, Scheme scheme, const RhsFn& rhs, const BcFn& bc);

struct StabilityInputs {
  double v_max, D_min, D_max;
};
StabilityInputs stability_inputs(const PhysicsCoefficients& c, const PlasmaState& s);
StabilityBound stability_dt(const PhysicsCoefficients& c, const PlasmaState& s, double h_e, double safety = 0.5);

}  // namespace axmhd
