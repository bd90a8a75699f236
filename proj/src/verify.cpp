#include "axmhd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

namespace axmhd {

double max_interior_entry(const CsrMatrix& a, const std::vector<bool>& interior) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (auto k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      if (interior[i] || interior[a.col_index()[k]]) m = std::max(m, std::abs(a.values()[k]));
  return m;
}

NodalVectorField project_tangential(const Mesh& mesh, NodalVectorField p) {
  const auto frame = boundary_frame(mesh);
  for (std::size_t k = 0; k < frame.nodes.size(); ++k) {
    const auto i = frame.nodes[k];
    if (frame.corner[k]) {
      p.r[i] = 0.0;
      p.z[i] = 0.0;
      continue;
    }
    const auto t = frame.tangent[k];
    const double pt = p.r[i] * t.r + p.z[i] * t.z;
    p.r[i] = pt * t.r;
    p.z[i] = pt * t.z;
  }
  return p;
}

namespace {

template <class Tag>
double abs_sum(const Field<Tag>& w, const Field<Tag>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(w[i] * a[i]);
  return s;
}

double rel(double residual, double scale) { return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual); }

struct Worst {
  double value = 0.0;
  void take(double v) { value = std::max(value, v); }
};

}  // namespace

std::vector<CheckResult> operator_identity_suite(const Mesh& mesh, int random_fields, std::uint64_t seed) {
  const auto geom = compute_geometry(mesh);
  const auto ops = build_operators(mesh, geom);
  const auto& interior = ops.interior_mask;
  std::vector<CheckResult> out;
  auto add = [&](std::string name, double value, double tol, std::string note = {}) {
    out.push_back({std::move(name), value, tol, value <= tol, std::move(note)});
  };

  {
    const auto S = NodeToNode(CsrMatrix::diagonal(ops.s_n.values()));
    const auto SDr = S * ops.Dr;
    const auto SDz = S * ops.Dz;
    const auto ar = SDr + SDr.transpose();
    const auto az = SDz + SDz.transpose();
    add("antisymmetry S*Dr + Dr^T*S (interior)", max_interior_entry(ar.matrix(), interior) / SDr.matrix().max_abs(),
        1e-13);
    add("antisymmetry S*Dz + Dz^T*S (interior)", max_interior_entry(az.matrix(), interior) / SDz.matrix().max_abs(),
        1e-13);
    const auto Se = Operator<ElemTag, ElemTag>(CsrMatrix::diagonal(ops.s_e.values()));
    const auto zr = ops.Dze.transpose() * Se * ops.Dre;
    const auto rz = ops.Dre.transpose() * Se * ops.Dze;
    add("Dze^T S Dre - Dre^T S Dze (interior)", max_interior_entry((zr - rz).matrix(), interior) / zr.matrix().max_abs(),
        1e-13);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto nodal = [&] {
    NodalField f(mesh.num_nodes());
    for (auto& x : f) x = u(rng);
    return f;
  };
  auto element = [&] {
    ElementField f(mesh.num_elements());
    for (auto& x : f) x = u(rng);
    return f;
  };

  Worst adj, adj1, div0, lap0, ds0, wn, prod_u, prod_p, nn_div;
  for (int trial = 0; trial < random_fields; ++trial) {
    const NodalVectorField p{nodal(), nodal()};
    const ElementField ue = element();
    {
      const auto g = gradient_element_to_node(ops, ue);
      const auto d = divergence_node_to_element(ops, p);
      const NodalField a = p.r * g.r + p.z * g.z;
      const ElementField b = ue * d;
      adj.take(rel(integrate(ops, a) + integrate(ops, b), abs_sum(ops.dV_n, a) + abs_sum(ops.dV_e, b)));
    }
    {
      const ElementVectorField pe{element(), element()};
      const NodalField un = nodal();
      const auto g = gradient_node_to_element(ops, un);
      const auto d = divergence_element_to_node(ops, pe);
      const ElementField a = pe.r * g.r + pe.z * g.z;
      const NodalField b = un * d;
      adj1.take(rel(integrate(ops, a) + integrate(ops, b), abs_sum(ops.dV_e, a) + abs_sum(ops.dV_n, b)));
      div0.take(rel(integrate(ops, d), abs_sum(ops.dV_n, d)));
    }
    {
      const NodalField f = nodal();
      const auto l = apply_laplacian(ops, f);
      lap0.take(rel(integrate(ops, l), abs_sum(ops.dV_n, l)));
      const NodalField d = apply_delta_star(ops, f) * square(ops.inv_r);
      ds0.take(rel(integrate(ops, d), abs_sum(ops.dV_n, d)));
      const auto w = volume_average_to_nodes(ops, ue);
      wn.take(rel(integrate(ops, w) - integrate(ops, ue), abs_sum(ops.dV_n, w) + abs_sum(ops.dV_e, ue)));
    }
    {
      NodalField uz = nodal();
      for (auto b : mesh.boundary_nodes()) uz[b] = 0.0;
      const auto g = gradient_node_to_node(ops, uz);
      const auto d = divergence_node_to_node(ops, p);
      const NodalField a = uz * d;
      const NodalField b = g.r * p.r + g.z * p.z;
      prod_u.take(rel(integrate(ops, a + b), abs_sum(ops.dV_n, a) + abs_sum(ops.dV_n, b)));
      const auto pt = project_tangential(mesh, p);
      const NodalField full = nodal();
      const auto g2 = gradient_node_to_node(ops, full);
      const auto d2 = divergence_node_to_node(ops, pt);
      const NodalField a2 = full * d2;
      const NodalField b2 = g2.r * pt.r + g2.z * pt.z;
      prod_p.take(rel(integrate(ops, a2 + b2), abs_sum(ops.dV_n, a2) + abs_sum(ops.dV_n, b2)));
      nn_div.take(rel(integrate(ops, d2), abs_sum(ops.dV_n, d2)));
    }
  }
  add("adjoint: dV.(P.grad_n U) + dVe.(U div_e P)", adj.value, 1e-12);
  add("adjoint: dVe.(P.grad_e U) + dV.(U div_n P)", adj1.value, 1e-12);
  add("dV.(div_n P_e) = 0", div0.value, 1e-12);
  add("dV.(Lap u) = 0", lap0.value, 1e-12);
  add("dV.(DeltaStar psi / r^2) = 0", ds0.value, 1e-12);
  add("dV.(Wn u_e) = dVe.u_e", wn.value, 1e-12);
  add("product rule, U|bdry = 0", prod_u.value, 1e-12);
  add("product rule, P_perp|bdry = 0", prod_p.value, 1e-12);
  add("dV.(div P) = 0, P_perp|bdry = 0", nn_div.value, 1e-12);

  {
    const double a = 0.7, b = -1.3, c = 2.1;
    const NodalField lin = a + b * ops.r + c * mesh.z();
    double err = 0.0;
    for (double x : ops.Dre(lin)) err = std::max(err, std::abs(x - b));
    for (double x : ops.Dze(lin)) err = std::max(err, std::abs(x - c));
    for (double x : ops.Dr(lin)) err = std::max(err, std::abs(x - b));
    for (double x : ops.Dz(lin)) err = std::max(err, std::abs(x - c));
    add("exact derivatives of a + b r + c z", err / std::max(std::abs(b), std::abs(c)), 1e-13);
    const NodalField k(mesh.num_nodes(), 5.0);
    add("Lap and DeltaStar of a constant", std::max(max_abs(ops.Lap(k)), max_abs(ops.DeltaStar(k))), 0.0);
  }
  {
    bool ok = true;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
      ok = ok && ops.Dre.matrix().row_nnz(e) == 3 && ops.Dze.matrix().row_nnz(e) == 3;
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
      const auto ring = mesh.one_ring(i).size();
      ok = ok && ops.Dr.matrix().row_nnz(i) == ring && ops.Dz.matrix().row_nnz(i) == ring;
    }
    add("sparsity: 3 per Dre/Dze row, 1-ring per Dr/Dz row", ok ? 0.0 : 1.0, 0.0);
  }
  return out;
}

void print_checks(std::ostream& os, const std::vector<CheckResult>& checks) {
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  for (const auto& c : checks) {
    os << (c.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << c.name << "  "
       << std::scientific << std::setprecision(3) << c.value << " <= " << c.tolerance;
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << '\n';
  }
  os << std::defaultfloat;
}

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

}  // namespace axmhd
