#include <algorithm>
#include <cmath>

#include "axmhd/mesh.hpp"

namespace axmhd {
namespace {

constexpr double kColumnTol = 1e-9;

struct SubMesh {
  Mesh mesh;
  std::vector<std::int32_t> to_combined;
  std::vector<std::int32_t> from_combined;
};

SubMesh extract(const Mesh& combined, const std::vector<bool>& keep_element, const char* tag) {
  std::vector<std::int32_t> from(combined.num_nodes(), -1);
  std::vector<Element> els;
  for (std::size_t e = 0; e < combined.num_elements(); ++e) {
    if (!keep_element[e]) continue;
    els.push_back(combined.element(e));
    for (auto v : combined.element(e)) from[v] = 0;
  }
  std::vector<Point> nodes;
  std::vector<std::string> tags;
  std::vector<std::int32_t> to;
  for (std::size_t i = 0; i < combined.num_nodes(); ++i) {
    if (from[i] < 0) continue;
    from[i] = static_cast<std::int32_t>(nodes.size());
    nodes.push_back(combined.node(i));
    tags.push_back(combined.tags()[i]);
    to.push_back(static_cast<std::int32_t>(i));
  }
  if (els.empty()) fail(ErrorCode::InterfaceNotFound, std::string(tag) + " region is empty");
  for (auto& el : els)
    for (auto& v : el) v = from[v];
  return {Mesh(std::move(nodes), std::move(els), std::move(tags)), std::move(to), std::move(from)};
}

}  // namespace

DomainSplit split_domain(const Mesh& combined, double interface_r, const WallGeometry& wall) {
  return split_domain(combined, interface_r, interface_r, wall);
}

DomainSplit split_domain(const Mesh& combined, double r_a, double r_b, const WallGeometry& wall) {
  if (!(wall.r_in < wall.r_out)) fail(ErrorCode::InterfaceNotFound, "wall radii must satisfy r_in < r_out");
  if (r_a > r_b) std::swap(r_a, r_b);
  std::vector<bool> col_a(combined.num_nodes()), col_b(combined.num_nodes());
  std::size_t na = 0, nb = 0;
  for (std::size_t i = 0; i < combined.num_nodes(); ++i) {
    col_a[i] = std::abs(combined.node(i).r - r_a) <= kColumnTol;
    col_b[i] = std::abs(combined.node(i).r - r_b) <= kColumnTol;
    na += col_a[i];
    nb += col_b[i];
  }
  if (na == 0 || nb == 0) fail(ErrorCode::InterfaceNotFound, "no node column at the requested interface radius");

  std::vector<bool> in_plasma(combined.num_elements()), in_insulator(combined.num_elements());
  for (std::size_t e = 0; e < combined.num_elements(); ++e) {
    double rmin = 1e300, rmax = -1e300;
    for (auto v : combined.element(e)) {
      rmin = std::min(rmin, combined.node(v).r);
      rmax = std::max(rmax, combined.node(v).r);
    }
    in_plasma[e] = rmax <= r_b + kColumnTol;
    in_insulator[e] = rmin >= r_a - kColumnTol;
    if (!in_plasma[e] && !in_insulator[e])
      fail(ErrorCode::InterfaceNotFound, "element " + std::to_string(e + 1) + " crosses the interface columns");
  }
  auto plasma = extract(combined, in_plasma, "plasma");
  auto insulator = extract(combined, in_insulator, "insulator");

  DomainSplit s{std::move(plasma.mesh), std::move(insulator.mesh), {}, wall, std::move(plasma.to_combined),
                std::move(insulator.to_combined), {}, {}};
  for (std::size_t i = 0; i < combined.num_nodes(); ++i) {
    if (!col_a[i] && !col_b[i]) continue;
    const auto p = plasma.from_combined[i];
    const auto q = insulator.from_combined[i];
    if (p < 0 || q < 0)
      fail(ErrorCode::UnpairedInterfaceNode, "column node " + std::to_string(i + 1) + " is missing from one region");
    s.interface_map.push_back({p, q});
    if (col_b[i]) {
      if (!s.plasma_mesh.is_boundary(p))
        fail(ErrorCode::UnpairedInterfaceNode, "node " + std::to_string(i + 1) + " not on the plasma boundary");
      s.plasma_interface.push_back(p);
    }
    if (col_a[i]) {
      if (!s.insulator_mesh.is_boundary(q))
        fail(ErrorCode::UnpairedInterfaceNode, "node " + std::to_string(i + 1) + " not on the insulator boundary");
      s.insulator_interface.push_back(q);
    }
  }
  return s;
}

}  // namespace axmhd
