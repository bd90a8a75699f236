#include <chrono>
#include <cmath>
#include <random>

#include "axmhd/verify.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace axmhd;
using namespace testutil;

namespace {

struct Built {
  Mesh mesh;
  GeometryTables geom;
  OperatorSet ops;
};

Built build(Mesh m) {
  auto g = compute_geometry(m);
  auto o = build_operators(m, g);
  return {std::move(m), std::move(g), std::move(o)};
}

}  // namespace

TEST_CASE("single triangle coefficients") {
  const auto b = build(single_triangle());
  CHECK(b.ops.Dre.matrix().at(0, 0) == -1.0);
  CHECK(b.ops.Dre.matrix().at(0, 1) == 1.0);
  CHECK(b.ops.Dre.matrix().at(0, 2) == 0.0);
  CHECK(b.ops.Dze.matrix().at(0, 0) == -1.0);
  CHECK(b.ops.Dze.matrix().at(0, 1) == 0.0);
  CHECK(b.ops.Dze.matrix().at(0, 2) == 1.0);
  CHECK(b.ops.Drn.matrix().at(0, 0) == 3.0);
  CHECK(b.ops.Drn.matrix().at(1, 0) == -3.0);
  CHECK(b.ops.Drn.matrix().at(2, 0) == 0.0);
}

TEST_CASE("volume average on the single triangle") {
  const auto b = build(single_triangle());
  const double U = 2.5;
  const auto w = volume_average_to_nodes(b.ops, ElementField{U});
  CHECK(w[0] == doctest::Approx(4 * U / 3).epsilon(1e-15));
  CHECK(w[1] == doctest::Approx(2 * U / 3).epsilon(1e-15));
  CHECK(w[2] == doctest::Approx(4 * U / 3).epsilon(1e-15));
  CHECK(max_abs(volume_average_to_nodes(b.ops, ElementField{0.0})) == 0.0);
}

TEST_CASE("volume average weighting identity with nodal Q") {
  const auto b = build(perturbed_mesh(0.1, 5));
  std::mt19937_64 rng(3);
  const auto q = random_nodal(b.mesh, rng);
  const auto ue = random_element(b.mesh, rng);
  const double lhs = integrate(b.ops, q * volume_average_to_nodes(b.ops, ue));
  const double rhs = integrate(b.ops, node_to_element_average(b.ops, q) * ue);
  CHECK(std::abs(lhs - rhs) <= 1e-13 * abs_weighted(b.ops.dV_e, ue));
}

TEST_CASE("constants and linears") {
  for (auto m : {two_element_mesh(), rect_mesh(), perturbed_mesh()}) {
    const auto b = build(m);
    const NodalField five(m.num_nodes(), 5.0);
    CHECK(max_abs(b.ops.Dre(five)) == 0.0);
    CHECK(max_abs(b.ops.Dr(five)) == 0.0);
    CHECK(max_abs(apply_laplacian(b.ops, five)) == 0.0);
    CHECK(max_abs(apply_delta_star(b.ops, five)) == 0.0);
    const auto g = gradient_node_to_element(b.ops, m.z());
    for (std::size_t e = 0; e < m.num_elements(); ++e) {
      CHECK(std::abs(g.r[e]) < 1e-13);
      CHECK(std::abs(g.z[e] - 1.0) < 1e-13);
    }
    const auto gn = gradient_node_to_node(b.ops, five);
    CHECK(max_abs(gn.r) == 0.0);
    CHECK(max_abs(gn.z) == 0.0);
  }
}

TEST_CASE("operator factorizations hold entrywise") {
  const auto b = build(perturbed_mesh(0.1, 9));
  const auto& Dre = b.ops.Dre.matrix();
  const auto& Drn = b.ops.Drn.matrix();
  for (std::size_t e = 0; e < b.mesh.num_elements(); ++e)
    for (auto v : b.mesh.element(e))
      CHECK(Drn.at(v, e) == doctest::Approx(-3.0 * Dre.at(e, v) * b.geom.s_e[e] / b.geom.s_n[v]).epsilon(1e-14));
  // Dr row = area-weighted average of incident element rows
  for (std::size_t i = 0; i < b.mesh.num_nodes(); i += 7) {
    for (auto j : b.mesh.one_ring(i)) {
      double want = 0.0;
      for (std::size_t e = 0; e < b.mesh.num_elements(); ++e) {
        const auto& el = b.mesh.element(e);
        if (el[0] == (int)i || el[1] == (int)i || el[2] == (int)i) want += b.geom.s_e[e] * Dre.at(e, j);
      }
      want /= b.geom.s_n[i];
      CHECK(std::abs(b.ops.Dr.matrix().at(i, j) - want) <= 1e-12 * (1 + std::abs(want)));
    }
  }
}

TEST_CASE("identity suite passes on three meshes within the time budget") {
  const auto t0 = std::chrono::steady_clock::now();
  for (auto m : {two_element_mesh(), rect_mesh(), perturbed_mesh()}) {
    const auto checks = operator_identity_suite(m, 100, 42);
    for (const auto& c : checks) {
      INFO(c.name << " = " << c.value);
      CHECK(c.pass);
    }
  }
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 10.0);
}

TEST_CASE("DeltaStar0 construction and solve") {
  const auto b = build(rect_mesh(0.1));
  const auto& m = b.mesh;
  std::mt19937_64 rng(5);
  const auto u = zero_on_boundary(m, random_nodal(m, rng));
  const auto full = apply_delta_star(b.ops, u);
  const auto zero = b.ops.DeltaStar0(u);
  for (std::size_t i = 0; i < m.num_nodes(); ++i)
    if (!m.is_boundary(i)) CHECK(zero[i] == doctest::Approx(full[i]).epsilon(1e-14));

  const auto v = random_nodal(m, rng);
  const auto out = b.ops.DeltaStar0(v);
  for (auto i : m.boundary_nodes()) CHECK(out[i] == v[i]);

  const double c = 0.37;
  NodalField psi_b(m.num_nodes());
  for (auto i : m.boundary_nodes()) psi_b[i] = c;
  NodalField rhs = -apply_delta_star(b.ops, psi_b);
  for (auto i : m.boundary_nodes()) rhs[i] = c;
  const DeltaStarSolver solver(b.ops.DeltaStar0);
  const auto x = solver.solve(rhs);
  for (double xi : x) CHECK(std::abs(xi - c) <= 1e-10);
}

TEST_CASE("refinement of Lap(r^2) and DeltaStar(r^2) on smoothly mapped meshes") {
  double err_lap[3], err_ds[3];
  const double hs[3] = {0.1, 0.05, 0.025};
  for (int k = 0; k < 3; ++k) {
    const auto b = build(warp(generate_rect_mesh({0.2, 1.0}, {-0.4, 0.4}, hs[k]), [](Point p) {
      const double xi = (p.r - 0.2) / 0.8, eta = (p.z + 0.4) / 0.8;
      return Point{0.2 + 0.8 * (xi + 0.05 * std::sin(2 * M_PI * xi) * std::sin(M_PI * eta)),
                   -0.4 + 0.8 * (eta + 0.05 * std::sin(2 * M_PI * eta) * std::sin(M_PI * xi))};
    }));
    const auto lap = apply_laplacian(b.ops, b.ops.r2);
    const auto ds = apply_delta_star(b.ops, b.ops.r2);
    err_lap[k] = err_ds[k] = 0.0;
    for (std::size_t i = 0; i < b.mesh.num_nodes(); ++i) {
      if (b.mesh.is_boundary(i)) continue;
      err_lap[k] = std::max(err_lap[k], std::abs(lap[i] - 4.0));
      err_ds[k] = std::max(err_ds[k], std::abs(ds[i]));
    }
  }
  for (int k = 0; k < 2; ++k) {
    CHECK(std::log2(err_lap[k] / err_lap[k + 1]) >= 0.9);
    CHECK(std::log2(err_ds[k] / err_ds[k + 1]) >= 0.9);
  }
}

TEST_CASE("Lap(r^2) is exact to rounding on uniform rectangles") {
  const auto b = build(generate_rect_mesh({0.2, 1.0}, {-0.4, 0.4}, 0.05));
  const auto lap = apply_laplacian(b.ops, b.ops.r2);
  for (std::size_t i = 0; i < b.mesh.num_nodes(); ++i)
    if (!b.mesh.is_boundary(i)) CHECK(std::abs(lap[i] - 4.0) < 1e-10);
}
