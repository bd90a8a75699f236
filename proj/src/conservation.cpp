#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "axmhd/conservation.hpp"

namespace axmhd {

PlasmaState smooth_magnetized_state(const Mesh& mesh) {
  double r0 = 1e300, r1 = -1e300, z0 = 1e300, z1 = -1e300;
  for (const auto& p : mesh.nodes()) {
    r0 = std::min(r0, p.r);
    r1 = std::max(r1, p.r);
    z0 = std::min(z0, p.z);
    z1 = std::max(z1, p.z);
  }
  const double pi = std::numbers::pi;
  auto s = PlasmaState::zeros(mesh.num_nodes());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const double r = mesh.node(i).r;
    const double x = (r - r0) / (r1 - r0);
    const double y = (mesh.node(i).z - z0) / (z1 - z0);
    const double b = std::sin(pi * x) * std::sin(pi * y);
    s.n[i] = 9e20 * (1.0 + 0.3 * b * std::cos(pi * x));
    s.v_r[i] = 1e4 * b * std::cos(pi * y);
    s.v_z[i] = -1e4 * b * std::cos(pi * x);
    s.v_phi[i] = 1e4 * (0.5 + b) * r;
    s.p_i[i] = 1e3 * (1.0 + 0.5 * b);
    s.p_e[i] = 1e3 * (1.0 + 0.3 * b * std::sin(pi * x));
    s.psi[i] = 5e-3 * b;
    s.f[i] = 0.05 * (1.0 + 0.5 * b * std::cos(pi * y));
  }
  for (auto k : mesh.boundary_nodes()) {
    s.v_r[k] = 0.0;
    s.v_z[k] = 0.0;
    s.psi[k] = 0.0;
  }
  return s;
}

BoundaryConditions conservation_boundary_conditions() {
  BoundaryConditions bc;
  bc.velocity_mode = VelocityMode::AllZero;
  bc.angular_momentum_mode = true;
  bc.psi_mode = PsiMode::Zero;
  bc.T_wall_eV.reset();
  return bc;
}

namespace {

double rel(double d, double scale) { return scale > 0.0 ? std::abs(d) / scale : std::abs(d); }

}  // namespace

double ConservationRun::drift_N() const { return rel(final.N - initial.N, std::abs(initial.N)); }
double ConservationRun::drift_Phi() const { return rel(final.Phi - initial.Phi, std::abs(initial.Phi)); }
double ConservationRun::drift_P() const { return rel(final.P_phi - initial.P_phi, P_scale); }
double ConservationRun::drift_U() const { return rel(final.U_total - initial.U_total, std::abs(initial.U_total)); }

ConservationRun conservation_run(const Mesh& mesh, const OperatorSet& ops, const ConservationSettings& settings,
                                 PlasmaState s, double dt, int steps) {
  const auto& c = settings.physics;
  const auto bc = conservation_boundary_conditions();
  const auto mask = psi_dirichlet_mask(mesh, bc);
  const RhsFn rhs = [&](const PlasmaState& x) {
    auto d = compute_rhs(ops, x, c, mask);
    constrain_derivative(mesh, d, bc);
    return d;
  };
  const BcFn apply = [&](PlasmaState& x) { apply_boundary_conditions(mesh, x, bc, x.t, c.Z); };
  apply(s);

  ConservationRun run;
  run.dt = dt;
  run.steps = steps;
  run.initial = conserved_quantities(ops, s, c);
  run.P_scale = c.m_i() * dot(ops.dV_n, s.n * ops.r * map(s.v_phi, [](double x) { return std::abs(x); }));
  const auto start = std::chrono::steady_clock::now();
  auto sample = [&](const PlasmaState& x) {
    const auto rep = semi_discrete_balances(mesh, ops, x, c, bc);
    run.max_semi_dN = std::max(run.max_semi_dN, rep.dN.relative());
    run.max_semi_dPhi = std::max(run.max_semi_dPhi, rep.dPhi.relative());
    run.max_semi_dP = std::max(run.max_semi_dP, rep.dP_phi.relative());
    run.max_semi_dU = std::max(run.max_semi_dU, rep.dU.relative());
    for (const auto& b : rep.brackets) {
      if (b.name == "viscous" && c.nu_num != c.nu_phys) continue;
      run.max_bracket = std::max(run.max_bracket, b.relative());
    }
    for (int k = 0; k < 3; ++k)
      run.max_correction = std::max(
          {run.max_correction, rep.correction_momentum[k].relative(), rep.correction_energy[k].relative()});
  };
  for (int k = 0; k < steps; ++k) {
    if (settings.check_every_step || k == 0) sample(s);
    s = step(s, dt, settings.scheme, rhs, apply);
  }
  sample(s);
  run.final = conserved_quantities(ops, s, c);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

ConservationStudy conservation_study(const Mesh& mesh, const ConservationSettings& settings) {
  const auto ops = build_operators(mesh, compute_geometry(mesh));
  const auto s0 = smooth_magnetized_state(mesh);
  ConservationStudy st;
  st.coarse = conservation_run(mesh, ops, settings, s0, settings.dt, settings.steps);
  st.fine = conservation_run(mesh, ops, settings, s0, 0.5 * settings.dt, 2 * settings.steps);
  return st;
}

bool angular_momentum_conserved(const PhysicsCoefficients& c) {
  return c.zeta == 0.0 || c.correction_model != CorrectionModel::EnergyConserving;
}

bool energy_conserved(const PhysicsCoefficients& c) {
  return c.nu_num == c.nu_phys && (c.zeta == 0.0 || c.correction_model != CorrectionModel::None);
}

std::vector<CheckResult> conservation_checks(const ConservationStudy& st, const PhysicsCoefficients& c) {
  std::vector<CheckResult> out;
  auto add = [&](std::string name, double value, double tol, std::string note = {}) {
    out.push_back({std::move(name), value, tol, value <= tol, std::move(note)});
  };
  auto ratio = [](double a, double b) { return b > 0.0 ? a / b : std::numeric_limits<double>::infinity(); };
  for (const auto* run : {&st.coarse, &st.fine}) {
    const std::string tag = run == &st.coarse ? " (dt)" : " (dt/2)";
    add("semi-discrete dN" + tag, run->max_semi_dN, 1e-12);
    add("semi-discrete dPhi" + tag, run->max_semi_dPhi, 1e-12);
    add("drift N" + tag, run->drift_N(), 1e-12);
    add("drift Phi" + tag, run->drift_Phi(), 1e-12);
  }
  if (angular_momentum_conserved(c)) {
    add("semi-discrete dP_phi", std::max(st.coarse.max_semi_dP, st.fine.max_semi_dP), 1e-11);
    add("drift P_phi (dt)", st.coarse.drift_P(), 1e-9);
    add("drift P_phi (dt/2)", st.fine.drift_P(), 1e-9);
    const double q = ratio(st.coarse.drift_P(), st.fine.drift_P());
    out.push_back({"P_phi drift shrink on dt/2", q, 3.5, q >= 3.5, "minimum ratio"});
  } else {
    out.push_back({"angular momentum", st.coarse.drift_P(), 0.0, true, "not conserved (model 2)"});
  }
  if (energy_conserved(c)) {
    add("semi-discrete dU", std::max(st.coarse.max_semi_dU, st.fine.max_semi_dU), 1e-11);
    add("energy brackets", std::max(st.coarse.max_bracket, st.fine.max_bracket), 1e-11);
    add("drift U (dt)", st.coarse.drift_U(), 1e-9);
    add("drift U (dt/2)", st.fine.drift_U(), 1e-9);
    const double q = ratio(st.coarse.drift_U(), st.fine.drift_U());
    out.push_back({"U drift shrink on dt/2", q, 3.5, q >= 3.5, "minimum ratio"});
  } else {
    out.push_back({"energy", st.coarse.drift_U(), 0.0, true, "not conserved (nu_num != nu_phys)"});
  }
  add("density-correction residuals", std::max(st.coarse.max_correction, st.fine.max_correction), 1e-11);
  return out;
}

}  // namespace axmhd
