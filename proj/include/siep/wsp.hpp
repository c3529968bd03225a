#ifndef SIEP_WSP_HPP
#define SIEP_WSP_HPP

#include <optional>
#include <utility>

#include "siep/linalg.hpp"
#include "siep/sym_matrix.hpp"

namespace siep {

/// Verdict on the weak spectral property: X = O is the only zero-diagonal
/// symmetric matrix commuting with A.
///
/// Singular values refer to the constraint matrix of `wsp_constraint_matrix`.
/// `smallest_kept_singular_value` is the smallest value above the kernel
/// threshold and `largest_dropped_singular_value` the largest value at or below
/// it (0 when nothing was dropped). For order 1 both are 0.
struct WspCertificate {
  bool holds = true;
  Eigen::Index kernel_dimension = 0;
  std::optional<SymMatrixd> witness;
  double smallest_kept_singular_value = 0.0;
  double largest_dropped_singular_value = 0.0;
};

/// Number of free off-diagonal unknowns x_pq (p < q) for order n.
inline Eigen::Index wsp_unknown_count(Eigen::Index n) { return n * (n - 1) / 2; }

/// Position of x_pq (p < q) in row-major upper-triangular order.
inline Eigen::Index wsp_unknown_index(Eigen::Index n, Eigen::Index p, Eigen::Index q) {
  return p * n - p * (p + 1) / 2 + (q - p - 1);
}

/// Inverse of wsp_unknown_index.
std::pair<Eigen::Index, Eigen::Index> wsp_unknown_pair(Eigen::Index n, Eigen::Index index);

/// Coefficient of x_pq in ([X, A])_ij, for i < j and p < q.
template <typename Scalar>
Scalar wsp_coefficient(const MatrixX<Scalar>& a, Eigen::Index i, Eigen::Index j, Eigen::Index p,
                       Eigen::Index q) {
  Scalar c = 0;
  if (i == p) c += a(q, j);
  if (i == q) c += a(p, j);
  if (j == q) c -= a(i, p);
  if (j == p) c -= a(i, q);
  return c;
}

/// Linear map from the unknowns x_pq to the strictly-upper entries of [X, A].
/// Rows and columns share the row-major upper-triangular ordering. Requires
/// order >= 2.
template <typename Scalar>
MatrixX<Scalar> wsp_constraint_matrix(const SymMatrix<Scalar>& a) {
  const Eigen::Index n = a.order();
  if (n < 2) throw std::invalid_argument("wsp_constraint_matrix: order must be >= 2");
  const Eigen::Index m = wsp_unknown_count(n);
  MatrixX<Scalar> c = MatrixX<Scalar>::Zero(m, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Eigen::Index row = wsp_unknown_index(n, i, j);
      // Only unknowns sharing an index with (i, j) contribute.
      for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = p + 1; q < n; ++q)
          if (p == i || p == j || q == i || q == j)
            c(row, wsp_unknown_index(n, p, q)) = wsp_coefficient(a.dense(), i, j, p, q);
    }
  return c;
}

/// Zero-diagonal symmetric matrix whose strictly-upper entries are `x`.
SymMatrixd wsp_unknowns_to_matrix(Eigen::Index n, const VectorX<double>& x);

/// Kernel dimension counts singular values <= tol·σ_max (σ_max replaced by 1
/// when it is 0). A failing verdict carries a unit-Frobenius witness.
WspCertificate has_wsp(const SymMatrixd& a, double tol = 1e-9);

}  // namespace siep

#endif  // SIEP_WSP_HPP
