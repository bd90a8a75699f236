#include "axmhd/ops.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

namespace axmhd {

OperatorSet build_operators(const Mesh& mesh, const GeometryTables& geom) {
  const auto ne = mesh.num_elements();
  const auto nn = mesh.num_nodes();
  std::vector<Triplet> tr, tz, ta;
  tr.reserve(3 * ne);
  tz.reserve(3 * ne);
  ta.reserve(3 * ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& el = mesh.element(e);
    const Point& p1 = mesh.node(el[0]);
    const Point& p2 = mesh.node(el[1]);
    const Point& p3 = mesh.node(el[2]);
    const double two_s = twice_area(mesh, e);
    if (std::abs(two_s) < kSingularTwiceArea)
      fail(ErrorCode::SingularElement, "element " + std::to_string(e + 1) + " has |2s| below threshold");
    // Rows 2 and 3 of the inverse vertex matrix [1 r z]^-1.
    const double b[3] = {(p2.z - p3.z) / two_s, (p3.z - p1.z) / two_s, (p1.z - p2.z) / two_s};
    const double c[3] = {(p3.r - p2.r) / two_s, (p1.r - p3.r) / two_s, (p2.r - p1.r) / two_s};
    const auto row = static_cast<std::int32_t>(e);
    for (int k = 0; k < 3; ++k) {
      tr.push_back({row, el[k], b[k]});
      tz.push_back({row, el[k], c[k]});
      ta.push_back({row, el[k], 1.0 / 3.0});
    }
  }

  OperatorSet ops;
  ops.r = mesh.r();
  ops.inv_r = map(ops.r, [](double x) { return 1.0 / x; });
  ops.r2 = ops.r * ops.r;
  ops.r_e = geom.r_e;
  ops.inv_r_e = map(ops.r_e, [](double x) { return 1.0 / x; });
  ops.r_e2 = ops.r_e * ops.r_e;
  ops.dV_n = geom.dV_n;
  ops.dV_e = geom.dV_e;
  ops.s_n = geom.s_n;
  ops.s_e = geom.s_e;

  ops.Dre = NodeToElement(CsrMatrix::from_triplets(ne, nn, std::move(tr)));
  ops.Dze = NodeToElement(CsrMatrix::from_triplets(ne, nn, std::move(tz)));
  ops.Avg = NodeToElement(CsrMatrix::from_triplets(ne, nn, std::move(ta)));
  std::vector<std::int32_t> first_vertex(ne), diagonal(nn);
  for (std::size_t e = 0; e < ne; ++e) first_vertex[e] = mesh.element(e)[0];
  for (std::size_t i = 0; i < nn; ++i) diagonal[i] = static_cast<std::int32_t>(i);
  ops.Dre.anchor_rows(first_vertex);
  ops.Dze.anchor_rows(first_vertex);

  const NodalField inv_s = map(geom.s_n, [](double x) { return 1.0 / x; });
  const ElementToNode Mt = geom.M_e.transpose();

  // Drn = -3 S^-1 Dre^T Ŝ
  ops.Drn = ops.Dre.transpose().col_scaled(geom.s_e).row_scaled(-3.0 * inv_s);
  ops.Dzn = ops.Dze.transpose().col_scaled(geom.s_e).row_scaled(-3.0 * inv_s);

  // Dr = S^-1 M^T Ŝ Dre
  const ElementToNode area_avg = Mt.col_scaled(geom.s_e).row_scaled(inv_s);
  ops.Dr = area_avg * ops.Dre;
  ops.Dz = area_avg * ops.Dze;
  ops.Dr.anchor_rows(diagonal);
  ops.Dz.anchor_rows(diagonal);

  // Wn = R^-1 S^-1 M^T Ŝ R̂
  ops.Wn = Mt.col_scaled(geom.s_e * geom.r_e).row_scaled(inv_s * ops.inv_r);

  // Lap = R^-1 [Drn R̂ Dre + Dzn R̂ Dze]
  ops.Lap = (ops.Drn.col_scaled(ops.r_e) * ops.Dre + ops.Dzn.col_scaled(ops.r_e) * ops.Dze).row_scaled(ops.inv_r);
  // Δ* = R [Drn R̂^-1 Dre + Dzn R̂^-1 Dze]
  ops.DeltaStar =
      (ops.Drn.col_scaled(ops.inv_r_e) * ops.Dre + ops.Dzn.col_scaled(ops.inv_r_e) * ops.Dze).row_scaled(ops.r);

  ops.Lap.anchor_rows(diagonal);
  ops.DeltaStar.anchor_rows(diagonal);

  ops.interior_mask.resize(nn);
  for (std::size_t i = 0; i < nn; ++i) ops.interior_mask[i] = !mesh.is_boundary(i);
  ops.DeltaStar0 = build_delta_star0(ops, mesh.boundary_mask());
  return ops;
}

NodeToNode build_delta_star0(const OperatorSet& ops, const std::vector<bool>& boundary) {
  const auto& a = ops.DeltaStar.matrix();
  if (boundary.size() != a.rows()) fail(ErrorCode::SizeMismatch, "boundary mask length");
  std::vector<Triplet> t;
  t.reserve(a.nnz());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (boundary[i]) {
      t.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(i), 1.0});
      continue;
    }
    for (auto k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const auto j = a.col_index()[k];
      if (!boundary[j]) t.push_back({static_cast<std::int32_t>(i), j, a.values()[k]});
    }
  }
  return NodeToNode(CsrMatrix::from_triplets(a.rows(), a.cols(), std::move(t)));
}

ElementField node_to_element_average(const OperatorSet& ops, const NodalField& u) { return ops.Avg(u); }

NodalField volume_average_to_nodes(const OperatorSet& ops, const ElementField& u_e) { return ops.Wn(u_e); }

ElementVectorField gradient_node_to_element(const OperatorSet& ops, const NodalField& u) {
  return {ops.Dre(u), ops.Dze(u)};
}

NodalVectorField gradient_element_to_node(const OperatorSet& ops, const ElementField& u_e) {
  return {ops.Drn(u_e), ops.Dzn(u_e)};
}

NodalVectorField gradient_node_to_node(const OperatorSet& ops, const NodalField& u) { return {ops.Dr(u), ops.Dz(u)}; }

ElementField divergence_node_to_element(const OperatorSet& ops, const NodalVectorField& p) {
  return (ops.Dre.scaled(ops.r, p.r) + ops.Dze.scaled(ops.r, p.z)) * ops.inv_r_e;
}

NodalField divergence_element_to_node(const OperatorSet& ops, const ElementVectorField& p_e) {
  return (ops.Drn.scaled(ops.r_e, p_e.r) + ops.Dzn.scaled(ops.r_e, p_e.z)) * ops.inv_r;
}

NodalField divergence_node_to_node(const OperatorSet& ops, const NodalVectorField& p) {
  return (ops.Dr.scaled(ops.r, p.r) + ops.Dz.scaled(ops.r, p.z)) * ops.inv_r;
}

NodalField apply_laplacian(const OperatorSet& ops, const NodalField& u) { return ops.Lap(u); }

NodalField apply_delta_star(const OperatorSet& ops, const NodalField& psi) { return ops.DeltaStar(psi); }

double integrate(const OperatorSet& ops, const NodalField& u) { return dot(ops.dV_n, u); }

double integrate(const OperatorSet& ops, const ElementField& u_e) { return dot(ops.dV_e, u_e); }

void dump_operators(const OperatorSet& ops, const std::string& directory) {
  std::filesystem::create_directories(directory);
  auto dump = [&](const char* name, const CsrMatrix& m) {
    std::ofstream out(std::filesystem::path(directory) / (std::string(name) + ".mtx"));
    if (!out) fail(ErrorCode::IoError, std::string("cannot write operator ") + name);
    m.write_matrix_market(out);
  };
  dump("Dre", ops.Dre.matrix());
  dump("Dze", ops.Dze.matrix());
  dump("Drn", ops.Drn.matrix());
  dump("Dzn", ops.Dzn.matrix());
  dump("Dr", ops.Dr.matrix());
  dump("Dz", ops.Dz.matrix());
  dump("Wn", ops.Wn.matrix());
  dump("Lap", ops.Lap.matrix());
  dump("DeltaStar", ops.DeltaStar.matrix());
  dump("DeltaStar0", ops.DeltaStar0.matrix());
}

}  // namespace axmhd
