#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "axmhd/mesh.hpp"
#include "axmhd/ops.hpp"

namespace axmhd {

// Vacuum field Δ*ψ_v = 0 on the insulator mesh with a cached factorization.
class VacuumSolver {
 public:
  explicit VacuumSolver(const Mesh& insulator_mesh);

  const Mesh& mesh() const noexcept { return mesh_; }
  const OperatorSet& ops() const noexcept { return ops_; }
  // Boundary values aligned with mesh().boundary_nodes().
  NodalField solve(const std::vector<double>& boundary_values) const;
  double last_residual() const noexcept { return solver_.last_residual(); }

 private:
  Mesh mesh_;
  OperatorSet ops_;
  DeltaStarSolver solver_;
};

NodalField solve_vacuum_psi(const VacuumSolver& solver, const std::vector<double>& boundary_values);

struct WallFluxGeometry {
  double L_ins = 0.0;  // h_I·ln(r_out/r_in)
  double L_int = 0.0;  // Σ s_j/(3 r_j) over interface nodes
  std::vector<std::int32_t> interface_nodes;
};

WallFluxGeometry wall_flux_geometry(const OperatorSet& plasma_ops, const WallGeometry& wall,
                                    std::vector<std::int32_t> interface_nodes);

// Σ f_i s_i/(3 r_i) over the plasma mesh.
double plasma_toroidal_flux(const OperatorSet& ops, const NodalField& f);

// Wall value that makes plasma plus wall flux equal target_flux (zero reproduces the closed-wall constant).
double flux_constant_fI(const NodalField& f, const OperatorSet& ops, const WallFluxGeometry& wall,
                        double target_flux = 0.0);

// Plasma plus insulating-wall flux with f_I applied on the interface.
double total_toroidal_flux(const OperatorSet& ops, const NodalField& f, const WallFluxGeometry& wall, double f_I);

// External ψ on a node of the combined mesh.
using CombinedPsi = std::function<double(std::int32_t combined_node)>;

struct CoupleResult {
  NodalField psi_vacuum;
  std::vector<double> plasma_boundary;  // aligned with plasma_mesh.boundary_nodes()
};

// Steps: external ψ on both outer boundaries, plasma ψ onto the insulator's inner column, vacuum solve,
// vacuum ψ onto the plasma's outer column.
CoupleResult couple_step(const NodalField& plasma_psi, const VacuumSolver& vacuum, const DomainSplit& split,
                         const CombinedPsi& external_psi);

}  // namespace axmhd
