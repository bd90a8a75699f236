#pragma once

#include <memory>
#include <vector>

#include "axmhd/field.hpp"
#include "axmhd/mesh.hpp"
#include "axmhd/sparse.hpp"

namespace axmhd {

using NodeToElement = Operator<ElemTag, NodeTag>;
using ElementToNode = Operator<NodeTag, ElemTag>;
using NodeToNode = Operator<NodeTag, NodeTag>;

inline constexpr double kSingularTwiceArea = 1e-14;

struct OperatorSet {
  NodeToElement Dre, Dze;
  ElementToNode Drn, Dzn;
  NodeToNode Dr, Dz;
  ElementToNode Wn;
  NodeToElement Avg;  // node-to-element average (M_e / 3)
  NodeToNode Lap;
  NodeToNode DeltaStar;
  NodeToNode DeltaStar0;
  std::vector<bool> interior_mask;

  NodalField r, inv_r, r2;
  ElementField r_e, inv_r_e, r_e2;
  NodalField dV_n;
  ElementField dV_e;
  NodalField s_n;
  ElementField s_e;
};

OperatorSet build_operators(const Mesh& mesh, const GeometryTables& geom);

// Rows and columns at the boundary set zeroed, unit diagonal on boundary rows.
NodeToNode build_delta_star0(const OperatorSet& ops, const std::vector<bool>& boundary);

ElementField node_to_element_average(const OperatorSet& ops, const NodalField& u);
NodalField volume_average_to_nodes(const OperatorSet& ops, const ElementField& u_e);

ElementVectorField gradient_node_to_element(const OperatorSet& ops, const NodalField& u);
NodalVectorField gradient_element_to_node(const OperatorSet& ops, const ElementField& u_e);
NodalVectorField gradient_node_to_node(const OperatorSet& ops, const NodalField& u);

ElementField divergence_node_to_element(const OperatorSet& ops, const NodalVectorField& p);
NodalField divergence_element_to_node(const OperatorSet& ops, const ElementVectorField& p_e);
NodalField divergence_node_to_node(const OperatorSet& ops, const NodalVectorField& p);

NodalField apply_laplacian(const OperatorSet& ops, const NodalField& u);
NodalField apply_delta_star(const OperatorSet& ops, const NodalField& psi);

double integrate(const OperatorSet& ops, const NodalField& u);
double integrate(const OperatorSet& ops, const ElementField& u_e);

// Cached direct factorization of a DeltaStar0-type matrix.
class DeltaStarSolver {
 public:
  explicit DeltaStarSolver(const NodeToNode& a, double tolerance = 1e-10);
  ~DeltaStarSolver();
  DeltaStarSolver(DeltaStarSolver&&) noexcept;
  DeltaStarSolver& operator=(DeltaStarSolver&&) noexcept;

  NodalField solve(const NodalField& rhs) const;
  double last_residual() const noexcept { return last_residual_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  NodeToNode a_;
  double tol_;
  mutable double last_residual_ = 0.0;
};

void dump_operators(const OperatorSet& ops, const std::string& directory);

}  // namespace axmhd
