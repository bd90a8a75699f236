#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "axmhd/field.hpp"
#include "axmhd/simd/kernels.hpp"

namespace axmhd {

struct Triplet {
  std::int32_t row;
  std::int32_t col;
  double value;
};

// Compressed-row sparse matrix. Structural entries are kept even when a product cancels to 0.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(std::size_t rows, std::size_t cols);

  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);
  static CsrMatrix diagonal(const std::vector<double>& d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return val_.size(); }
  const std::vector<std::int64_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::int32_t>& col_index() const noexcept { return col_; }
  const std::vector<double>& values() const noexcept { return val_; }
  std::vector<double>& values() noexcept { return val_; }
  std::size_t row_nnz(std::size_t i) const { return static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i]); }

  simd::CsrView view() const noexcept { return {rows_, row_ptr_.data(), col_.data(), val_.data()}; }

  // Marks each row i as annihilating constants: the entry at column anchor[i] is reset to minus the
  // sum of the others and products are evaluated in difference form.
  void anchor_rows(const std::vector<std::int32_t>& anchor);
  bool anchored() const noexcept { return !anchor_.empty(); }

  void apply(const double* x, double* y) const;
  void apply_scaled(const double* d, const double* x, double* y) const;

  double at(std::size_t i, std::size_t j) const;
  double max_abs() const;

  CsrMatrix transpose() const;
  CsrMatrix scale_rows(const std::vector<double>& d) const;
  CsrMatrix scale_cols(const std::vector<double>& d) const;

  friend CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);
  friend CsrMatrix add(const CsrMatrix& a, double alpha, const CsrMatrix& b, double beta);

  void write_matrix_market(std::ostream& os) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<std::int32_t> col_;
  std::vector<double> val_;
  std::vector<std::int32_t> anchor_;
};

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);
CsrMatrix add(const CsrMatrix& a, double alpha, const CsrMatrix& b, double beta);

// Sparse operator mapping fields on index set Col to fields on index set Row.
template <class Row, class Col>
class Operator {
 public:
  Operator() = default;
  explicit Operator(CsrMatrix m) : m_(std::move(m)) {}

  const CsrMatrix& matrix() const noexcept { return m_; }
  void anchor_rows(const std::vector<std::int32_t>& anchor) { m_.anchor_rows(anchor); }
  std::size_t rows() const noexcept { return m_.rows(); }
  std::size_t cols() const noexcept { return m_.cols(); }

  Field<Row> operator()(const Field<Col>& x) const {
    check_in(x);
    Field<Row> y(m_.rows());
    m_.apply(x.data(), y.data());
    return y;
  }

  // A (d ∘ x) without materializing the product.
  Field<Row> scaled(const Field<Col>& d, const Field<Col>& x) const {
    check_in(x);
    x.check(d);
    Field<Row> y(m_.rows());
    m_.apply_scaled(d.data(), x.data(), y.data());
    return y;
  }

  Operator<Col, Row> transpose() const { return Operator<Col, Row>(m_.transpose()); }
  Operator row_scaled(const Field<Row>& d) const { return Operator(m_.scale_rows(d.values())); }
  Operator col_scaled(const Field<Col>& d) const { return Operator(m_.scale_cols(d.values())); }

 private:
  void check_in(const Field<Col>& x) const {
    if (x.size() != m_.cols())
      fail(ErrorCode::SizeMismatch,
           "operator expects " + std::to_string(m_.cols()) + " entries, got " + std::to_string(x.size()));
  }
  CsrMatrix m_;
};

template <class A, class B, class C>
Operator<A, C> operator*(const Operator<A, B>& x, const Operator<B, C>& y) {
  return Operator<A, C>(multiply(x.matrix(), y.matrix()));
}

template <class A, class B>
Operator<A, B> operator+(const Operator<A, B>& x, const Operator<A, B>& y) {
  return Operator<A, B>(add(x.matrix(), 1.0, y.matrix(), 1.0));
}

template <class A, class B>
Operator<A, B> operator-(const Operator<A, B>& x, const Operator<A, B>& y) {
  return Operator<A, B>(add(x.matrix(), 1.0, y.matrix(), -1.0));
}

template <class A, class B>
Operator<A, B> operator*(double s, const Operator<A, B>& x) {
  return Operator<A, B>(add(x.matrix(), s, CsrMatrix(x.rows(), x.cols()), 0.0));
}

}  // namespace axmhd
