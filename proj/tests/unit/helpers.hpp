#pragma once

#include <cmath>
#include <random>

#include "axmhd/mesh.hpp"
#include "axmhd/ops.hpp"

namespace testutil {

using namespace axmhd;

inline Mesh two_element_mesh() {
  return Mesh({{1, 0}, {2, 0}, {2, 1}, {1, 1}}, {{0, 1, 2}, {0, 2, 3}});
}

inline Mesh single_triangle() { return Mesh({{1, 0}, {2, 0}, {1, 1}}, {{0, 1, 2}}); }

inline Mesh rect_mesh(double h = 0.05) { return generate_rect_mesh({0.2, 1.0}, {-0.2, 0.3}, h); }

inline Mesh perturbed_mesh(double h = 0.05, std::uint64_t seed = 7) {
  return perturb_interior(rect_mesh(h), h, 0.25, seed);
}

template <class Tag>
Field<Tag> random_field(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Field<Tag> f(n);
  for (auto& x : f) x = u(rng);
  return f;
}

inline NodalField random_nodal(const Mesh& m, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  return random_field<NodeTag>(m.num_nodes(), rng, lo, hi);
}

inline ElementField random_element(const Mesh& m, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  return random_field<ElemTag>(m.num_elements(), rng, lo, hi);
}

inline NodalField zero_on_boundary(const Mesh& m, NodalField u) {
  for (auto b : m.boundary_nodes()) u[b] = 0.0;
  return u;
}

// Sum of |dV_i * a_i * b_i|, the scale against which a cancelling volume sum is judged.
template <class Tag>
double abs_weighted(const Field<Tag>& w, const Field<Tag>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(w[i] * a[i]);
  return s;
}

}  // namespace testutil
