#pragma once

#include <vector>

#include "axmhd/diagnostics.hpp"
#include "axmhd/mhd.hpp"
#include "axmhd/verify.hpp"

namespace axmhd {

// Smooth state on the mesh bounding box: ψ and poloidal velocity vanish on the box edges, v_φ and f do not.
PlasmaState smooth_magnetized_state(const Mesh& mesh);

// ψ|Γ = 0, v_r|Γ = v_z|Γ = 0, no v_φ or f condition, natural pressure conditions.
BoundaryConditions conservation_boundary_conditions();

struct ConservationSettings {
  PhysicsCoefficients physics;
  double dt = 2e-9;
  int steps = 1000;
  Scheme scheme = Scheme::RK2;
  bool check_every_step = true;
};

struct ConservationRun {
  double dt = 0.0;
  int steps = 0;
  ConservedRecord initial, final;
  double P_scale = 0.0;  // m_i dVᵀ(n r |v_φ|) at the start
  double max_semi_dN = 0.0, max_semi_dPhi = 0.0, max_semi_dP = 0.0, max_semi_dU = 0.0;
  double max_bracket = 0.0, max_correction = 0.0;
  double seconds = 0.0;

  double drift_N() const;
  double drift_Phi() const;
  double drift_P() const;
  double drift_U() const;
};

ConservationRun conservation_run(const Mesh& mesh, const OperatorSet& ops, const ConservationSettings& settings,
                                 PlasmaState state, double dt, int steps);

// Runs steps at dt and 2·steps at dt/2 to the same final time.
struct ConservationStudy {
  ConservationRun coarse, fine;
};
ConservationStudy conservation_study(const Mesh& mesh, const ConservationSettings& settings);

bool angular_momentum_conserved(const PhysicsCoefficients& c);
bool energy_conserved(const PhysicsCoefficients& c);

std::vector<CheckResult> conservation_checks(const ConservationStudy& study, const PhysicsCoefficients& c);

}  // namespace axmhd
