#include <cmath>
#include <numbers>

#include "axmhd/mesh.hpp"

namespace axmhd {

GeometryTables compute_geometry(const Mesh& mesh) {
  const auto ne = mesh.num_elements();
  const auto nn = mesh.num_nodes();
  GeometryTables g;
  g.s_e = ElementField(ne);
  g.r_e = ElementField(ne);
  g.z_e = ElementField(ne);
  g.dV_e = ElementField(ne);
  g.s_n = NodalField(nn);
  g.dV_n = NodalField(nn);
  std::vector<Triplet> conn;
  conn.reserve(3 * ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& el = mesh.element(e);
    g.s_e[e] = 0.5 * twice_area(mesh, e);
    g.r_e[e] = (mesh.node(el[0]).r + mesh.node(el[1]).r + mesh.node(el[2]).r) / 3.0;
    g.z_e[e] = (mesh.node(el[0]).z + mesh.node(el[1]).z + mesh.node(el[2]).z) / 3.0;
    g.dV_e[e] = 2.0 * std::numbers::pi * g.s_e[e] * g.r_e[e];
    for (auto v : el) conn.push_back({static_cast<std::int32_t>(e), v, 1.0});
  }
  g.M_e = Operator<ElemTag, NodeTag>(CsrMatrix::from_triplets(ne, nn, std::move(conn)));
  g.s_n = g.M_e.transpose()(g.s_e);
  for (std::size_t i = 0; i < nn; ++i) g.dV_n[i] = (2.0 * std::numbers::pi / 3.0) * g.s_n[i] * mesh.node(i).r;
  return g;
}

ElementField node_to_element_average(const Mesh& mesh, const NodalField& u) {
  if (u.size() != mesh.num_nodes()) fail(ErrorCode::SizeMismatch, "nodal field length");
  ElementField out(mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.element(e);
    out[e] = (u[el[0]] + u[el[1]] + u[el[2]]) / 3.0;
  }
  return out;
}

BoundaryFrame boundary_frame(const Mesh& mesh) {
  BoundaryFrame f;
  const auto& loop = mesh.boundary_nodes();
  const auto nb = loop.size();
  f.nodes = loop;
  f.tangent.resize(nb);
  f.normal.resize(nb);
  f.corner.resize(nb);
  auto unit = [](Point a, Point b) {
    const double dr = b.r - a.r, dz = b.z - a.z;
    const double len = std::hypot(dr, dz);
    return Point{dr / len, dz / len};
  };
  for (std::size_t k = 0; k < nb; ++k) {
    const Point& prev = mesh.node(loop[(k + nb - 1) % nb]);
    const Point& cur = mesh.node(loop[k]);
    const Point& next = mesh.node(loop[(k + 1) % nb]);
    const Point e1 = unit(prev, cur);
    const Point e2 = unit(cur, next);
    Point t{e1.r + e2.r, e1.z + e2.z};
    double len = std::hypot(t.r, t.z);
    if (len < 1e-12) {
      t = e2;
      len = 1.0;
    }
    t = {t.r / len, t.z / len};
    f.tangent[k] = t;
    f.normal[k] = {t.z, -t.r};
    f.corner[k] = std::abs(e1.r * e2.z - e1.z * e2.r) > 1e-9 || (e1.r * e2.r + e1.z * e2.z) < 0.0;
  }
  return f;
}

}  // namespace axmhd
