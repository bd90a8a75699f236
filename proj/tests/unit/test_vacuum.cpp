#include <algorithm>
#include <cmath>
#include <random>

#include "axmhd/vacuum.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace axmhd;
using namespace testutil;

namespace {

std::vector<double> boundary_values(const Mesh& m, const std::function<double(Point)>& f) {
  std::vector<double> v;
  for (auto i : m.boundary_nodes()) v.push_back(f(m.node(i)));
  return v;
}

struct Coupled {
  Mesh combined = generate_rect_mesh({0.2, 1.0}, {-0.2, 0.3}, 0.05);
  WallGeometry wall{0.5, 0.75, 1.0};
  DomainSplit split = split_domain(combined, 0.7, 0.75, wall);
  VacuumSolver vacuum{split.insulator_mesh};
};

}  // namespace

TEST_CASE("vacuum solve with constant and zero boundary data") {
  const VacuumSolver v(rect_mesh(0.05));
  const auto& m = v.mesh();
  const auto c = solve_vacuum_psi(v, std::vector<double>(m.boundary_nodes().size(), 0.37));
  for (double x : c) CHECK(std::abs(x - 0.37) <= 1e-10);
  CHECK(v.last_residual() <= 1e-10);
  const auto z = solve_vacuum_psi(v, std::vector<double>(m.boundary_nodes().size(), 0.0));
  CHECK(max_abs(z) == 0.0);
  CHECK_THROWS_AS(v.solve(std::vector<double>(3, 0.0)), Error);
}

TEST_CASE("vacuum solve preserves boundary values") {
  const VacuumSolver v(perturbed_mesh(0.05));
  const auto& m = v.mesh();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> b(m.boundary_nodes().size());
  for (auto& x : b) x = u(rng);
  const auto psi = v.solve(b);
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(psi[m.boundary_nodes()[k]] == b[k]);
  const auto ds = apply_delta_star(v.ops(), psi);
  double scale = 0.0;
  for (std::size_t i = 0; i < m.num_nodes(); ++i) scale = std::max(scale, std::abs(v.ops().DeltaStar.matrix().at(i, i)));
  for (std::size_t i = 0; i < m.num_nodes(); ++i)
    if (!m.is_boundary(i)) CHECK(std::abs(ds[i]) <= 1e-10 * scale);
}

TEST_CASE("vacuum field r^2 converges under refinement") {
  const double hs[3] = {0.1, 0.05, 0.025};
  double err[3];
  for (int k = 0; k < 3; ++k) {
    const VacuumSolver v(warp(generate_rect_mesh({0.2, 1.0}, {-0.4, 0.4}, hs[k]), [](Point p) {
      const double xi = (p.r - 0.2) / 0.8, eta = (p.z + 0.4) / 0.8;
      return Point{0.2 + 0.8 * (xi + 0.05 * std::sin(2 * M_PI * xi) * std::sin(M_PI * eta)),
                   -0.4 + 0.8 * (eta + 0.05 * std::sin(2 * M_PI * eta) * std::sin(M_PI * xi))};
    }));
    const auto& m = v.mesh();
    const auto psi = v.solve(boundary_values(m, [](Point p) { return p.r * p.r; }));
    err[k] = 0.0;
    for (std::size_t i = 0; i < m.num_nodes(); ++i)
      err[k] = std::max(err[k], std::abs(psi[i] - m.node(i).r * m.node(i).r));
  }
  CHECK(err[2] < err[0]);
  for (int k = 0; k < 2; ++k) CHECK(std::log2(err[k] / err[k + 1]) >= 0.9);
}

TEST_CASE("couple_step with zero data") {
  const Coupled c;
  const NodalField zero(c.split.plasma_mesh.num_nodes());
  const auto res = couple_step(zero, c.vacuum, c.split, [](std::int32_t) { return 0.0; });
  CHECK(max_abs(res.psi_vacuum) == 0.0);
  for (double x : res.plasma_boundary) CHECK(x == 0.0);
}

TEST_CASE("couple_step keeps the uniform axial field fixed") {
  const Coupled c;
  auto half_r2 = [](Point p) { return 0.5 * p.r * p.r; };
  const VacuumSolver whole(c.combined);
  const auto psi_c = whole.solve(boundary_values(c.combined, half_r2));
  for (std::size_t i = 0; i < psi_c.size(); ++i) CHECK(std::abs(psi_c[i] - half_r2(c.combined.node(i))) <= 1e-4);

  const auto& pm = c.split.plasma_mesh;
  NodalField psi(pm.num_nodes());
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = psi_c[c.split.plasma_to_combined[i]];
  const CombinedPsi ext = [&](std::int32_t k) { return half_r2(c.combined.node(k)); };
  const auto res = couple_step(psi, c.vacuum, c.split, ext);
  const auto& loop = pm.boundary_nodes();
  for (std::size_t k = 0; k < loop.size(); ++k) CHECK(std::abs(res.plasma_boundary[k] - psi[loop[k]]) <= 1e-10);
  const auto& im = c.split.insulator_mesh;
  for (std::size_t i = 0; i < im.num_nodes(); ++i)
    CHECK(std::abs(res.psi_vacuum[i] - psi_c[c.split.insulator_to_combined[i]]) <= 1e-10);

  auto again = psi;
  for (std::size_t k = 0; k < loop.size(); ++k) again[loop[k]] = res.plasma_boundary[k];
  const auto res2 = couple_step(again, c.vacuum, c.split, ext);
  for (std::size_t k = 0; k < loop.size(); ++k)
    CHECK(std::abs(res2.plasma_boundary[k] - res.plasma_boundary[k]) <= 1e-10);
}

TEST_CASE("couple_step passes plasma flux through the vacuum region") {
  const Coupled c;
  const auto& pm = c.split.plasma_mesh;
  std::mt19937_64 rng(2);
  const auto psi = random_nodal(pm, rng);
  const auto res = couple_step(psi, c.vacuum, c.split, [](std::int32_t) { return 0.0; });
  const auto& im = c.split.insulator_mesh;
  for (const auto& pair : c.split.interface_map) {
    const bool inner = std::find(c.split.insulator_interface.begin(), c.split.insulator_interface.end(),
                                 pair.insulator) != c.split.insulator_interface.end();
    if (inner) CHECK(res.psi_vacuum[pair.insulator] == psi[pair.plasma]);
  }
  std::vector<bool> column(pm.num_nodes(), false);
  for (auto p : c.split.plasma_interface) column[p] = true;
  const auto& loop = pm.boundary_nodes();
  double moved = 0.0;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    if (!column[loop[k]]) {
      CHECK(res.plasma_boundary[k] == 0.0);
    } else {
      const auto combined = c.split.plasma_to_combined[loop[k]];
      const auto it = std::find(c.split.insulator_to_combined.begin(), c.split.insulator_to_combined.end(), combined);
      REQUIRE(it != c.split.insulator_to_combined.end());
      CHECK(res.plasma_boundary[k] == res.psi_vacuum[it - c.split.insulator_to_combined.begin()]);
      moved = std::max(moved, std::abs(res.plasma_boundary[k]));
    }
  }
  CHECK(moved > 0.0);
  CHECK(im.num_nodes() > 0);
}

TEST_CASE("wall flux geometry and f_I") {
  const Coupled c;
  const auto& pm = c.split.plasma_mesh;
  const auto ops = build_operators(pm, compute_geometry(pm));
  const auto wall = wall_flux_geometry(ops, c.wall, c.split.plasma_interface);
  CHECK(wall.L_ins == doctest::Approx(0.5 * std::log(1.0 / 0.75)).epsilon(1e-15));
  double L_int = 0.0;
  for (auto j : c.split.plasma_interface) L_int += ops.s_n[j] / (3.0 * ops.r[j]);
  CHECK(wall.L_int == doctest::Approx(L_int).epsilon(1e-14));
  CHECK_THROWS_AS(wall_flux_geometry(ops, {0.0, 0.75, 1.0}, c.split.plasma_interface), Error);
  CHECK_THROWS_AS(wall_flux_geometry(ops, {0.5, 1.0, 0.75}, c.split.plasma_interface), Error);

  NodalField f(pm.num_nodes());
  CHECK(flux_constant_fI(f, ops, wall) == 0.0);
  for (auto j : wall.interface_nodes) f[j] = 3.0;
  CHECK(flux_constant_fI(f, ops, wall) == 0.0);

  std::size_t node = 0;
  while (pm.is_boundary(node)) ++node;
  const double w = ops.s_n[node] / (3.0 * ops.r[node]);
  NodalField toy(pm.num_nodes());
  toy[node] = 0.01 / w;
  const WallFluxGeometry toy_wall{0.06, 0.04, wall.interface_nodes};
  CHECK(flux_constant_fI(toy, ops, toy_wall) == doctest::Approx(-0.1).epsilon(1e-14));
}

TEST_CASE("flux closure with f_I applied") {
  const Coupled c;
  const auto& pm = c.split.plasma_mesh;
  const auto ops = build_operators(pm, compute_geometry(pm));
  const auto wall = wall_flux_geometry(ops, c.wall, c.split.plasma_interface);
  std::mt19937_64 rng(7);
  auto f = random_nodal(pm, rng);
  for (double target : {0.0, 0.02}) {
    const double fI = flux_constant_fI(f, ops, wall, target);
    auto applied = f;
    for (auto j : wall.interface_nodes) applied[j] = fI;
    double scale = std::abs(fI) * wall.L_ins;
    for (std::size_t i = 0; i < f.size(); ++i) scale += std::abs(applied[i]) * ops.s_n[i] / (3.0 * ops.r[i]);
    const double closure = plasma_toroidal_flux(ops, applied) + fI * wall.L_ins - target;
    CHECK(std::abs(closure) <= 1e-12 * scale);
    CHECK(std::abs(total_toroidal_flux(ops, applied, wall, fI) - target) <= 1e-12 * scale);
  }
}
