#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

#include "axmhd/runner.hpp"
#include "axmhd/scenario.hpp"
#include "axmhd/vacuum.hpp"
#include "json.hpp"

namespace axmhd {

Mesh load_run_mesh(const RunConfig& cfg) {
  if (!cfg.mesh_path.empty()) return load_mesh(cfg.resolve(cfg.mesh_path));
  return generate_rect_mesh(*cfg.rect_r, *cfg.rect_z, cfg.h_e);
}

double min_edge_length(const Mesh& mesh) {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& el : mesh.elements())
    for (int k = 0; k < 3; ++k) {
      const auto& a = mesh.node(el[k]);
      const auto& b = mesh.node(el[(k + 1) % 3]);
      h = std::min(h, std::hypot(a.r - b.r, a.z - b.z));
    }
  return h;
}

ClosedFlux deepest_closed_flux(const Mesh& mesh, const NodalField& psi, const std::function<bool(Point)>& where) {
  // pass[i]: highest level ℓ such that a path from the boundary to i stays within ψ ≥ ℓ.
  const std::size_t n = mesh.num_nodes();
  std::vector<double> pass(n, -std::numeric_limits<double>::infinity());
  std::vector<std::vector<std::int32_t>> nbr(n);
  for (const auto& el : mesh.elements())
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) nbr[el[a]].push_back(el[b]);
  using Item = std::pair<double, std::int32_t>;
  std::priority_queue<Item> queue;
  for (auto b : mesh.boundary_nodes()) {
    pass[b] = psi[b];
    queue.emplace(psi[b], b);
  }
  std::vector<bool> done(n, false);
  while (!queue.empty()) {
    const auto [level, i] = queue.top();
    queue.pop();
    if (done[i]) continue;
    done[i] = true;
    for (auto j : nbr[i]) {
      const double w = std::min(level, psi[j]);
      if (w > pass[j]) {
        pass[j] = w;
        queue.emplace(w, j);
      }
    }
  }
  ClosedFlux best;
  for (std::size_t i = 0; i < n; ++i) {
    if (where && !where(mesh.node(i))) continue;
    const double depth = psi[i] - pass[i];
    if (depth > best.depth) best = {static_cast<std::int32_t>(i), depth};
  }
  return best;
}

namespace {

struct Coupling {
  DomainSplit split;
  VacuumSolver vacuum;
  WallFluxGeometry wall;
};

CoilDrive load_coils(const RunConfig& cfg) {
  CoilDrive coils;
  if (!cfg.psi_main_table.empty()) {
    coils.psi_main = load_node_table(cfg.resolve(cfg.psi_main_table));
    for (auto& v : coils.psi_main.values) v *= cfg.I_main;
  }
  if (!cfg.psi_lev_table.empty()) coils.psi_lev = load_node_table(cfg.resolve(cfg.psi_lev_table));
  if (!cfg.psi_comp_table.empty()) coils.psi_comp = load_node_table(cfg.resolve(cfg.psi_comp_table));
  if (!cfg.I_lev_waveform.empty()) coils.I_lev_tilde = load_waveform(cfg.resolve(cfg.I_lev_waveform));
  if (!cfg.I_comp_waveform.empty()) coils.I_comp_tilde = load_waveform(cfg.resolve(cfg.I_comp_waveform));
  coils.t_comp = cfg.t_comp;
  return coils;
}

// Vacuum field on a mesh for the given boundary values.
NodalField vacuum_field(const Mesh& mesh, const OperatorSet& ops, const std::vector<double>& boundary) {
  const auto& loop = mesh.boundary_nodes();
  NodalField psi_b(mesh.num_nodes());
  for (std::size_t k = 0; k < loop.size(); ++k) psi_b[loop[k]] = boundary[k];
  NodalField rhs = -ops.DeltaStar(psi_b);
  for (std::size_t k = 0; k < loop.size(); ++k) rhs[loop[k]] = boundary[k];
  DeltaStarSolver solver(ops.DeltaStar0);
  auto psi = solver.solve(rhs);
  for (std::size_t k = 0; k < loop.size(); ++k) psi[loop[k]] = boundary[k];
  return psi;
}

std::string with_step(int step, double t, const std::string& what) {
  std::ostringstream os;
  os << "step " << step << " (t = " << std::setprecision(9) << t << " s): " << what;
  return os.str();
}

}  // namespace

RunSummary simulate(const RunConfig& cfg, std::ostream& log, const StepObserver& observer) {
  const auto wall_start = std::chrono::steady_clock::now();
  const Mesh combined = load_run_mesh(cfg);
  const bool coupled = cfg.interface_r_outer.has_value();
  std::optional<Coupling> cp;
  if (coupled) {
    auto split = split_domain(combined, cfg.interface_r_inner.value_or(*cfg.interface_r_outer),
                              *cfg.interface_r_outer, cfg.wall);
    VacuumSolver vac(split.insulator_mesh);
    cp.emplace(Coupling{std::move(split), std::move(vac), {}});
  }
  const Mesh& mesh = coupled ? cp->split.plasma_mesh : combined;
  const OperatorSet ops = build_operators(mesh, compute_geometry(mesh));
  if (coupled) cp->wall = wall_flux_geometry(ops, cfg.wall, cp->split.plasma_interface);
  const PhysicsCoefficients& c = cfg.physics;

  const CoilDrive coils = load_coils(cfg);
  auto to_combined = [&](std::int32_t p) { return coupled ? cp->split.plasma_to_combined[p] : p; };
  const auto& loop = mesh.boundary_nodes();
  std::vector<bool> outer_column(mesh.num_nodes(), false);
  if (coupled)
    for (auto p : cp->split.plasma_interface) outer_column[p] = true;
  std::vector<double> column_values(mesh.num_nodes(), 0.0);

  BoundaryConditions bc;
  bc.velocity_mode = cfg.velocity_mode;
  bc.angular_momentum_mode = cfg.angular_momentum_mode;
  bc.psi_mode = coupled ? PsiMode::Table : cfg.psi_mode;
  bc.T_wall_eV = cfg.T_wall_eV;
  bc.psi_boundary = [&](double t) {
    std::vector<double> v(loop.size());
    for (std::size_t k = 0; k < loop.size(); ++k)
      v[k] = outer_column[loop[k]] ? column_values[loop[k]] : coils.value(to_combined(loop[k]), t);
    return v;
  };
  double f_I = 0.0;
  if (coupled) {
    bc.interface_nodes = cp->split.plasma_interface;
    bc.f_interface = 0.0;
  }
  const auto mask = psi_dirichlet_mask(mesh, bc);

  std::optional<FormationDrive> drive;
  std::optional<FormationFluxIntegrator> integ;
  if (!cfg.V_gun_waveform.empty()) {
    auto V = load_waveform(cfg.resolve(cfg.V_gun_waveform));
    std::vector<double> scaled = V.values();
    for (auto& x : scaled) x *= cfg.V_form;
    drive.emplace(ops, mesh, Waveform(V.times(), scaled), cfg.tau_LR, cfg.m_slope, cfg.z_gp);
    integ.emplace(drive->V_gun, drive->tau_LR);
  }

  // Initial state.
  PlasmaState s;
  if (cfg.initial == "smooth") {
    s = smooth_magnetized_state(mesh);
  } else {
    s = PlasmaState::zeros(mesh.num_nodes());
    s.n = initial_density(mesh, c.n0, cfg.sigma_n2, cfg.n_high, cfg.n_low, cfg.z_gp);
    const double T = cfg.T_init_eV * constants::eV;
    s.p_i = T * s.n;
    s.p_e = (c.Z * T) * s.n;
    if (coupled) {
      const OperatorSet cops = build_operators(combined, compute_geometry(combined));
      std::vector<double> cb;
      for (auto k : combined.boundary_nodes()) cb.push_back(coils.value(k, 0.0));
      const NodalField psi_c = vacuum_field(combined, cops, cb);
      for (std::size_t i = 0; i < mesh.num_nodes(); ++i) s.psi[i] = psi_c[cp->split.plasma_to_combined[i]];
    } else if (bc.psi_mode == PsiMode::Table) {
      s.psi = vacuum_field(mesh, ops, bc.psi_boundary(0.0));
    }
  }
  if (coupled) {
    const auto res = couple_step(s.psi, cp->vacuum, cp->split, [&](std::int32_t k) { return coils.value(k, 0.0); });
    for (std::size_t k = 0; k < loop.size(); ++k) column_values[loop[k]] = res.plasma_boundary[k];
  }
  apply_boundary_conditions(mesh, s, bc, 0.0, c.Z);

  RunSummary sum;
  sum.h_min = min_edge_length(mesh);
  sum.stability = stability_dt(c, s, sum.h_min);
  log << "mesh: " << mesh.num_nodes() << " nodes, " << mesh.num_elements() << " elements"
      << (coupled ? ", coupled to " + std::to_string(cp->split.insulator_mesh.num_nodes()) + " insulator nodes" : "")
      << "\nstability: advective " << sum.stability.advective << " s, diffusive " << sum.stability.diffusive
      << " s, advised dt " << sum.stability.dt << " s (configured " << cfg.dt << " s)\n";
  if (cfg.dt > sum.stability.dt) {
    if (cfg.strict_stability)
      fail(ErrorCode::ConfigError, "dt exceeds the stability estimate " + std::to_string(sum.stability.dt));
    log << "warning: dt exceeds the stability estimate\n";
  }

  // Outputs.
  std::filesystem::create_directories(cfg.output_dir);
  save_mesh(mesh, cfg.output_dir + "/plasma.mesh");
  const auto frame = boundary_frame(mesh);
  std::vector<Probe> probes;
  std::vector<std::string> columns;
  for (const auto& p : cfg.probes) {
    probes.push_back(make_probe(mesh, frame, p.name, p.location, p.channel));
    columns.push_back(p.name);
    log << "probe " << p.name << " snapped to node " << probes.back().node << " at distance "
        << probes.back().snap_distance << " m\n";
  }
  for (const auto& ch : cfg.chords) columns.push_back(ch.name);
  TimeSeriesWriter series(cfg.output_dir + "/timeseries.csv", columns);
  std::ofstream flux(cfg.output_dir + "/flux.csv");
  if (!flux) fail(ErrorCode::IoError, "cannot write " + cfg.output_dir + "/flux.csv");
  flux << "t,Phi_plasma,f_I,Phi_total,Phi_form,Phi_error\n" << std::setprecision(17);
  std::optional<SnapshotWriter> snaps;
  if (cfg.snapshots) snaps.emplace(cfg.output_dir + "/snapshots");

  double Phi_form = 0.0;
  auto Phi_total = [&]() {
    return coupled ? total_toroidal_flux(ops, s.f, cp->wall, f_I) : plasma_toroidal_flux(ops, s.f);
  };
  auto record = [&](int k) {
    const double tot = Phi_total();
    const double err = std::abs(tot - Phi_form);
    sum.max_flux_error = std::max(sum.max_flux_error, err);
    sum.max_abs_Phi_form = std::max(sum.max_abs_Phi_form, std::abs(Phi_form));
    auto extra = probe_signals(ops, s, probes, frame);
    for (const auto& ch : cfg.chords) extra.push_back(chord_average(mesh, s, ch, c.Z));
    series.write(conserved_quantities(ops, s, c), extra);
    flux << s.t << ',' << plasma_toroidal_flux(ops, s.f) << ',' << f_I << ',' << tot << ',' << Phi_form << ','
         << tot - Phi_form << '\n';
    if (snaps) snaps->write(s);
    if (observer) observer(StepView{mesh, ops, s, k, f_I, tot, Phi_form});
    ++sum.records;
  };
  record(0);

  const RhsFn rhs = [&](const PlasmaState& x) {
    auto d = compute_rhs(ops, x, c, mask);
    constrain_derivative(mesh, d, bc);
    return d;
  };
  const BcFn apply = [&](PlasmaState& x) { apply_boundary_conditions(mesh, x, bc, x.t, c.Z); };

  const int n_steps = static_cast<int>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  double next_output = cfg.output_dt;
  for (int k = 1; k <= n_steps; ++k) {
    const double t_new = k * cfg.dt;
    try {
      if (drive) {
        const double before = integ->value();
        Phi_form = integ->advance(t_new);
        s.f += drive->field(Phi_form - before);
      }
      s = step(s, cfg.dt, cfg.scheme, rhs, apply);
      s.t = t_new;
      if (coupled) {
        const auto res =
            couple_step(s.psi, cp->vacuum, cp->split, [&](std::int32_t q) { return coils.value(q, t_new); });
        for (std::size_t j = 0; j < loop.size(); ++j) column_values[loop[j]] = res.plasma_boundary[j];
        f_I = flux_constant_fI(s.f, ops, cp->wall, Phi_form);
        bc.f_interface = f_I;
      }
      apply_boundary_conditions(mesh, s, bc, t_new, c.Z);
      check_state(s);
    } catch (const Error& e) {
      fail(e.code(), with_step(k, t_new, e.detail()));
    }
    if (cfg.output_dt <= 0.0 || t_new >= next_output - 1e-9 * cfg.dt || k == n_steps) {
      record(k);
      while (cfg.output_dt > 0.0 && next_output <= t_new + 1e-9 * cfg.dt) next_output += cfg.output_dt;
    }
    sum.steps = k;
    sum.t = t_new;
  }
  sum.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

  nlohmann::json j = {{"steps", sum.steps},
                      {"t_end", sum.t},
                      {"records", sum.records},
                      {"max_flux_error", sum.max_flux_error},
                      {"max_abs_Phi_form", sum.max_abs_Phi_form},
                      {"h_min", sum.h_min},
                      {"stability_dt", sum.stability.dt},
                      {"seconds", sum.seconds}};
  std::ofstream(cfg.output_dir + "/summary.json") << j.dump(2) << '\n';
  log << "done: " << sum.steps << " steps to t = " << sum.t << " s, " << sum.records << " records, max |Phi_tot - Phi_form| = "
      << sum.max_flux_error << " Wb\n";
  return sum;
}

std::vector<CheckResult> verify_conservation(const RunConfig& cfg, std::ostream& log) {
  const Mesh mesh = load_run_mesh(cfg);
  ConservationSettings st;
  st.physics = cfg.physics;
  st.dt = cfg.dt;
  st.steps = cfg.steps;
  st.scheme = cfg.scheme;
  log << "conservation study: " << mesh.num_nodes() << " nodes, " << st.steps << " steps at dt = " << st.dt
      << " s and " << 2 * st.steps << " at dt/2\n";
  const auto study = conservation_study(mesh, st);
  return conservation_checks(study, st.physics);
}

}  // namespace axmhd
