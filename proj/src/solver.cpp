#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>

#include "axmhd/ops.hpp"

namespace axmhd {

struct DeltaStarSolver::Impl {
  Eigen::SparseMatrix<double> a;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

DeltaStarSolver::DeltaStarSolver(const NodeToNode& a, double tolerance)
    : impl_(std::make_unique<Impl>()), a_(a), tol_(tolerance) {
  const auto& m = a.matrix();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(m.nnz());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (auto k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k)
      t.emplace_back(static_cast<int>(i), m.col_index()[k], m.values()[k]);
  impl_->a.resize(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  impl_->a.setFromTriplets(t.begin(), t.end());
  impl_->a.makeCompressed();
  impl_->lu.analyzePattern(impl_->a);
  impl_->lu.factorize(impl_->a);
  if (impl_->lu.info() != Eigen::Success)
    fail(ErrorCode::SolverDiverged, "factorization failed: " + impl_->lu.lastErrorMessage());
}

DeltaStarSolver::~DeltaStarSolver() = default;
DeltaStarSolver::DeltaStarSolver(DeltaStarSolver&&) noexcept = default;
DeltaStarSolver& DeltaStarSolver::operator=(DeltaStarSolver&&) noexcept = default;

NodalField DeltaStarSolver::solve(const NodalField& rhs) const {
  const auto n = static_cast<Eigen::Index>(rhs.size());
  if (rhs.size() != a_.rows()) fail(ErrorCode::SizeMismatch, "solver right-hand side length");
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), n);
  Eigen::VectorXd x = impl_->lu.solve(b);
  // One step of iterative refinement keeps the residual well below tolerance on graded meshes.
  Eigen::VectorXd res = b - impl_->a * x;
  x += impl_->lu.solve(res);
  res = b - impl_->a * x;
  const double bn = b.norm();
  last_residual_ = bn > 0.0 ? res.norm() / bn : res.norm();
  if (!std::isfinite(last_residual_) || last_residual_ > tol_)
    fail(ErrorCode::SolverDiverged, "relative residual " + std::to_string(last_residual_));
  return NodalField(std::vector<double>(x.data(), x.data() + n));
}

}  // namespace axmhd
