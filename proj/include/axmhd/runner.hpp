#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "axmhd/config.hpp"
#include "axmhd/conservation.hpp"
#include "axmhd/diagnostics.hpp"
#include "axmhd/mhd.hpp"
#include "axmhd/verify.hpp"

namespace axmhd {

struct StepView {
  const Mesh& mesh;  // plasma mesh
  const OperatorSet& ops;
  const PlasmaState& state;
  int step;
  double f_I;        // wall value (coupled runs)
  double Phi_total;  // plasma plus wall toroidal flux
  double Phi_form;   // cumulative formation input
};

using StepObserver = std::function<void(const StepView&)>;

struct RunSummary {
  int steps = 0;
  double t = 0.0;
  std::size_t records = 0;
  double max_flux_error = 0.0;  // max over output steps of |Φ_tot − Φ_form|
  double max_abs_Phi_form = 0.0;
  StabilityBound stability;
  double h_min = 0.0;
  double seconds = 0.0;
};

Mesh load_run_mesh(const RunConfig& cfg);

// Shortest edge of the mesh.
double min_edge_length(const Mesh& mesh);

// Step loop: add f_form increment, step, apply boundary conditions, couple to the vacuum region,
// update f_I, record diagnostics at the output cadence. The observer sees every output step.
RunSummary simulate(const RunConfig& cfg, std::ostream& log, const StepObserver& observer = {});

// Two-level conservation study on the configured mesh and coefficients.
std::vector<CheckResult> verify_conservation(const RunConfig& cfg, std::ostream& log);

struct ClosedFlux {
  std::int32_t node = -1;
  double depth = 0.0;  // ψ at node minus the highest level joining it to the boundary
};

// Node enclosed by the deepest ψ contour that does not touch the boundary (node −1 when none exists).
ClosedFlux deepest_closed_flux(const Mesh& mesh, const NodalField& psi, const std::function<bool(Point)>& where = {});


}  // namespace axmhd
