#include "axmhd/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace axmhd {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row < 0 || static_cast<std::size_t>(t.row) >= rows || t.col < 0 ||
        static_cast<std::size_t>(t.col) >= cols)
      fail(ErrorCode::SizeMismatch, "triplet index out of range");
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m(rows, cols);
  m.col_.reserve(triplets.size());
  m.val_.reserve(triplets.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    while (k < triplets.size() && static_cast<std::size_t>(triplets[k].row) == i) {
      const auto c = triplets[k].col;
      double v = 0.0;
      while (k < triplets.size() && static_cast<std::size_t>(triplets[k].row) == i && triplets[k].col == c)
        v += triplets[k++].value;
      m.col_.push_back(c);
      m.val_.push_back(v);
    }
    m.row_ptr_[i + 1] = static_cast<std::int64_t>(m.col_.size());
  }
  return m;
}

CsrMatrix CsrMatrix::diagonal(const std::vector<double>& d) {
  std::vector<Triplet> t;
  t.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    t.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(i), d[i]});
  return from_triplets(d.size(), d.size(), std::move(t));
}

void CsrMatrix::anchor_rows(const std::vector<std::int32_t>& anchor) {
  if (anchor.size() != rows_) fail(ErrorCode::SizeMismatch, "anchor list length");
  for (std::size_t i = 0; i < rows_; ++i) {
    std::int64_t at_k = -1;
    double others = 0.0;
    for (auto k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_[k] == anchor[i]) at_k = k;
      else others += val_[k];
    }
    if (at_k < 0) fail(ErrorCode::SizeMismatch, "anchor column not in row " + std::to_string(i));
    val_[at_k] = -others;
  }
  anchor_ = anchor;
}

void CsrMatrix::apply(const double* x, double* y) const {
  if (anchor_.empty())
    simd::kernels().spmv(view(), x, y);
  else
    simd::kernels().spmv_anchored(view(), anchor_.data(), x, y);
}

void CsrMatrix::apply_scaled(const double* d, const double* x, double* y) const {
  simd::kernels().spmv_scaled(view(), d, x, y);
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  const auto b = col_.begin() + row_ptr_[i];
  const auto e = col_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(b, e, static_cast<std::int32_t>(j));
  if (it == e || *it != static_cast<std::int32_t>(j)) return 0.0;
  return val_[static_cast<std::size_t>(it - col_.begin())];
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : val_) m = std::max(m, std::abs(v));
  return m;
}

CsrMatrix CsrMatrix::transpose() const {
  CsrMatrix t(cols_, rows_);
  std::vector<std::int64_t> count(cols_ + 1, 0);
  for (auto c : col_) ++count[static_cast<std::size_t>(c) + 1];
  for (std::size_t j = 0; j < cols_; ++j) count[j + 1] += count[j];
  t.row_ptr_ = count;
  t.col_.resize(nnz());
  t.val_.resize(nnz());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (auto k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const auto dst = count[static_cast<std::size_t>(col_[k])]++;
      t.col_[dst] = static_cast<std::int32_t>(i);
      t.val_[dst] = val_[k];
    }
  }
  return t;
}

CsrMatrix CsrMatrix::scale_rows(const std::vector<double>& d) const {
  if (d.size() != rows_) fail(ErrorCode::SizeMismatch, "row scaling length");
  CsrMatrix m = *this;
  for (std::size_t i = 0; i < rows_; ++i)
    for (auto k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) m.val_[k] *= d[i];
  return m;
}

CsrMatrix CsrMatrix::scale_cols(const std::vector<double>& d) const {
  if (d.size() != cols_) fail(ErrorCode::SizeMismatch, "column scaling length");
  CsrMatrix m = *this;
  m.anchor_.clear();
  for (std::size_t k = 0; k < val_.size(); ++k) m.val_[k] *= d[static_cast<std::size_t>(col_[k])];
  return m;
}

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.cols_ != b.rows_) fail(ErrorCode::SizeMismatch, "matrix product inner dimension");
  CsrMatrix c(a.rows_, b.cols_);
  std::vector<double> acc(b.cols_, 0.0);
  std::vector<std::int64_t> mark(b.cols_, -1);
  std::vector<std::int32_t> cols;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    cols.clear();
    for (auto ka = a.row_ptr_[i]; ka < a.row_ptr_[i + 1]; ++ka) {
      const auto k = static_cast<std::size_t>(a.col_[ka]);
      const double av = a.val_[ka];
      for (auto kb = b.row_ptr_[k]; kb < b.row_ptr_[k + 1]; ++kb) {
        const auto j = b.col_[kb];
        if (mark[j] != static_cast<std::int64_t>(i)) {
          mark[j] = static_cast<std::int64_t>(i);
          acc[j] = 0.0;
          cols.push_back(j);
        }
        acc[j] += av * b.val_[kb];
      }
    }
    std::sort(cols.begin(), cols.end());
    for (auto j : cols) {
      c.col_.push_back(j);
      c.val_.push_back(acc[j]);
    }
    c.row_ptr_[i + 1] = static_cast<std::int64_t>(c.col_.size());
  }
  return c;
}

CsrMatrix add(const CsrMatrix& a, double alpha, const CsrMatrix& b, double beta) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorCode::SizeMismatch, "matrix sum shapes");
  CsrMatrix c(a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    auto ka = a.row_ptr_[i], ea = a.row_ptr_[i + 1];
    auto kb = b.row_ptr_[i], eb = b.row_ptr_[i + 1];
    while (ka < ea || kb < eb) {
      if (kb >= eb || (ka < ea && a.col_[ka] < b.col_[kb])) {
        c.col_.push_back(a.col_[ka]);
        c.val_.push_back(alpha * a.val_[ka++]);
      } else if (ka >= ea || b.col_[kb] < a.col_[ka]) {
        c.col_.push_back(b.col_[kb]);
        c.val_.push_back(beta * b.val_[kb++]);
      } else {
        c.col_.push_back(a.col_[ka]);
        c.val_.push_back(alpha * a.val_[ka++] + beta * b.val_[kb++]);
      }
    }
    c.row_ptr_[i + 1] = static_cast<std::int64_t>(c.col_.size());
  }
  return c;
}

void CsrMatrix::write_matrix_market(std::ostream& os) const {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << rows_ << ' ' << cols_ << ' ' << nnz() << '\n';
  os << std::setprecision(17);
  for (std::size_t i = 0; i < rows_; ++i)
    for (auto k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) os << i + 1 << ' ' << col_[k] + 1 << ' ' << val_[k] << '\n';
}

}  // namespace axmhd
