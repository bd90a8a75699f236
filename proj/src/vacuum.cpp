#include <cmath>
#include <unordered_map>

#include "axmhd/vacuum.hpp"

namespace axmhd {

VacuumSolver::VacuumSolver(const Mesh& insulator_mesh)
    : mesh_(insulator_mesh),
      ops_(build_operators(mesh_, compute_geometry(mesh_))),
      solver_(ops_.DeltaStar0) {}

NodalField VacuumSolver::solve(const std::vector<double>& boundary_values) const {
  const auto& loop = mesh_.boundary_nodes();
  if (boundary_values.size() != loop.size())
    fail(ErrorCode::SizeMismatch, "vacuum boundary values do not cover the insulator boundary");
  NodalField psi_b(mesh_.num_nodes());
  for (std::size_t k = 0; k < loop.size(); ++k) psi_b[loop[k]] = boundary_values[k];
  NodalField rhs = -ops_.DeltaStar(psi_b);
  for (std::size_t k = 0; k < loop.size(); ++k) rhs[loop[k]] = boundary_values[k];
  NodalField psi = solver_.solve(rhs);
  for (std::size_t k = 0; k < loop.size(); ++k) psi[loop[k]] = boundary_values[k];
  return psi;
}

NodalField solve_vacuum_psi(const VacuumSolver& solver, const std::vector<double>& boundary_values) {
  return solver.solve(boundary_values);
}

WallFluxGeometry wall_flux_geometry(const OperatorSet& ops, const WallGeometry& wall,
                                    std::vector<std::int32_t> interface_nodes) {
  if (!(wall.h_I > 0.0) || !(wall.r_in > 0.0) || !(wall.r_out > wall.r_in))
    fail(ErrorCode::ConfigError, "insulating wall needs h_I > 0 and 0 < r_in < r_out");
  WallFluxGeometry w;
  w.L_ins = wall.h_I * std::log(wall.r_out / wall.r_in);
  for (auto j : interface_nodes) w.L_int += ops.s_n[j] / (3.0 * ops.r[j]);
  w.interface_nodes = std::move(interface_nodes);
  return w;
}

double plasma_toroidal_flux(const OperatorSet& ops, const NodalField& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * ops.s_n[i] / (3.0 * ops.r[i]);
  return sum;
}

double flux_constant_fI(const NodalField& f, const OperatorSet& ops, const WallFluxGeometry& wall,
                        double target_flux) {
  NodalField f0 = f;
  for (auto j : wall.interface_nodes) f0[j] = 0.0;
  return (target_flux - plasma_toroidal_flux(ops, f0)) / (wall.L_ins + wall.L_int);
}

double total_toroidal_flux(const OperatorSet& ops, const NodalField& f, const WallFluxGeometry& wall,
                           double f_I) {
  return plasma_toroidal_flux(ops, f) + f_I * wall.L_ins;
}

CoupleResult couple_step(const NodalField& plasma_psi, const VacuumSolver& vacuum, const DomainSplit& split,
                         const CombinedPsi& external_psi) {
  const Mesh& pm = split.plasma_mesh;
  const Mesh& im = split.insulator_mesh;
  if (plasma_psi.size() != pm.num_nodes()) fail(ErrorCode::SizeMismatch, "plasma ψ length");
  std::unordered_map<std::int32_t, std::int32_t> ins_to_plasma, plasma_to_ins;
  for (const auto& p : split.interface_map) {
    ins_to_plasma[p.insulator] = p.plasma;
    plasma_to_ins[p.plasma] = p.insulator;
  }

  // (1) external values on both boundaries, (2) plasma values onto the insulator's inner column.
  std::vector<bool> ins_inner(im.num_nodes(), false);
  for (auto q : split.insulator_interface) ins_inner[q] = true;
  const auto& iloop = im.boundary_nodes();
  std::vector<double> ib(iloop.size());
  for (std::size_t k = 0; k < iloop.size(); ++k) {
    const auto q = iloop[k];
    ib[k] = ins_inner[q] ? plasma_psi[ins_to_plasma.at(q)] : external_psi(split.insulator_to_combined[q]);
  }
  // (3) vacuum solve.
  CoupleResult out{vacuum.solve(ib), {}};

  // (4) vacuum values onto the plasma's outer column.
  std::vector<bool> pl_outer(pm.num_nodes(), false);
  for (auto p : split.plasma_interface) pl_outer[p] = true;
  const auto& ploop = pm.boundary_nodes();
  out.plasma_boundary.resize(ploop.size());
  for (std::size_t k = 0; k < ploop.size(); ++k) {
    const auto p = ploop[k];
    out.plasma_boundary[k] =
        pl_outer[p] ? out.psi_vacuum[plasma_to_ins.at(p)] : external_psi(split.plasma_to_combined[p]);
  }
  return out;
}

}  // namespace axmhd
