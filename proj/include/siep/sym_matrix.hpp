#ifndef SIEP_SYM_MATRIX_HPP
#define SIEP_SYM_MATRIX_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace siep {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dense real symmetric matrix. Symmetry is bit-exact: (i,j) and (j,i) hold
/// the same value, and every entry is finite. Order is at least 1.
template <typename Scalar>
class SymMatrix {
 public:
  using Dense = MatrixX<Scalar>;

  SymMatrix() : data_(Dense::Zero(1, 1)) {}

  /// Validates an arbitrary dense matrix; throws std::invalid_argument when it
  /// is empty, non-square, non-finite or not exactly symmetric.
  explicit SymMatrix(Dense m) : data_(std::move(m)) { validate(); }

  static SymMatrix zero(Eigen::Index n) { return SymMatrix(Dense::Zero(n, n)); }
  static SymMatrix identity(Eigen::Index n) { return SymMatrix(Dense::Identity(n, n)); }

  static SymMatrix diagonal(const VectorX<Scalar>& d) {
    return SymMatrix(Dense(d.asDiagonal()));
  }

  /// Mirrors the upper triangle onto the lower one.
  static SymMatrix from_upper(const Dense& m) {
    Dense s = m.template triangularView<Eigen::Upper>();
    s.template triangularView<Eigen::StrictlyLower>() = s.transpose();
    return SymMatrix(std::move(s));
  }

  Eigen::Index order() const { return data_.rows(); }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }
  const Dense& dense() const { return data_; }

  VectorX<Scalar> diagonal() const { return data_.diagonal(); }

  /// Copy with the main diagonal replaced; off-diagonal entries are untouched.
  SymMatrix with_diagonal(const VectorX<Scalar>& d) const {
    if (d.size() != order()) throw std::invalid_argument("with_diagonal: size mismatch");
    SymMatrix out = *this;
    out.data_.diagonal() = d;
    out.check_finite();
    return out;
  }

  /// Copy with entries (i,j) and (j,i) set to v.
  SymMatrix with_entry(Eigen::Index i, Eigen::Index j, Scalar v) const {
    SymMatrix out = *this;
    out.data_(i, j) = v;
    out.data_(j, i) = v;
    out.check_finite();
    return out;
  }

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.order() == b.order() && a.data_ == b.data_;
  }

 private:
  void check_finite() const {
    if (!data_.allFinite()) throw std::invalid_argument("SymMatrix: non-finite entry");
  }

  void validate() const {
    if (data_.rows() < 1 || data_.rows() != data_.cols())
      throw std::invalid_argument("SymMatrix: matrix must be square with order >= 1");
    check_finite();
    for (Eigen::Index j = 0; j < data_.cols(); ++j)
      for (Eigen::Index i = j + 1; i < data_.rows(); ++i)
        if (data_(i, j) != data_(j, i))
          throw std::invalid_argument("SymMatrix: entries (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") are not symmetric");
  }

  Dense data_;
};

using SymMatrixd = SymMatrix<double>;

/// A ⊕ B as a block-diagonal matrix.
template <typename Scalar>
SymMatrix<Scalar> direct_sum(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b) {
  const Eigen::Index n = a.order(), m = b.order();
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(n + m, n + m);
  out.topLeftCorner(n, n) = a.dense();
  out.bottomRightCorner(m, m) = b.dense();
  return SymMatrix<Scalar>(std::move(out));
}

/// A ⊕ [c].
template <typename Scalar>
SymMatrix<Scalar> append_diagonal(const SymMatrix<Scalar>& a, Scalar c) {
  MatrixX<Scalar> one(1, 1);
  one(0, 0) = c;
  return direct_sum(a, SymMatrix<Scalar>(std::move(one)));
}

}  // namespace siep

#endif  // SIEP_SYM_MATRIX_HPP
