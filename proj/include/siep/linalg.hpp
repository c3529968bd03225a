#ifndef SIEP_LINALG_HPP
#define SIEP_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Jacobi>

#include "siep/sym_matrix.hpp"

namespace siep {

/// Eigenvalues ascending, eigenvectors as the matching columns of an
/// orthogonal matrix.
template <typename Scalar>
struct EigenDecomposition {
  VectorX<Scalar> values;
  MatrixX<Scalar> vectors;
};

/// Right singular vectors and singular values, values descending.
template <typename Scalar>
struct SingularValueDecomposition {
  VectorX<Scalar> values;
  MatrixX<Scalar> right_vectors;
};

struct JacobiOptions {
  double relative_off_tolerance = 1e-14;
  int max_sweeps = 100;
};

namespace detail {

template <typename Scalar>
Scalar off_diagonal_norm(const MatrixX<Scalar>& a) {
  Scalar sum = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

template <typename Scalar>
std::vector<Eigen::Index> stable_order(const VectorX<Scalar>& v, bool ascending) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return ascending ? v(a) < v(b) : v(a) > v(b);
  });
  return idx;
}

}  // namespace detail

/// Cyclic Jacobi eigensolver. Sweeps every (p,q) pair in row order until the
/// off-diagonal Frobenius mass drops to relative_off_tolerance·‖A‖_F or the
/// sweep cap is reached. Deterministic for identical input.
template <typename Scalar>
EigenDecomposition<Scalar> sym_eigen(const SymMatrix<Scalar>& a, const JacobiOptions& opts = {}) {
  const Eigen::Index n = a.order();
  MatrixX<Scalar> m = a.dense();
  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);
  const Scalar threshold = Scalar(opts.relative_off_tolerance) * m.norm();

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    if (detail::off_diagonal_norm(m) <= threshold) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (m(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(m(p, p), m(p, q), m(q, q));
        m.applyOnTheLeft(p, q, rot.adjoint());
        m.applyOnTheRight(p, q, rot);
        v.applyOnTheRight(p, q, rot);
        m(p, q) = m(q, p) = Scalar(0);
      }
    }
  }

  const VectorX<Scalar> diag = m.diagonal();
  const auto order = detail::stable_order(diag, true);
  EigenDecomposition<Scalar> out{VectorX<Scalar>(n), MatrixX<Scalar>(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = diag(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

template <typename Scalar>
VectorX<Scalar> eigenvalues(const SymMatrix<Scalar>& a) {
  return sym_eigen(a).values;
}

/// One-sided (Hestenes) Jacobi SVD of a general matrix. Orthogonalizes the
/// columns of a working copy of `c`; singular values are the final column
/// norms, right singular vectors the accumulated rotations.
template <typename Scalar>
SingularValueDecomposition<Scalar> jacobi_svd(const MatrixX<Scalar>& c, int max_sweeps = 100) {
  const Eigen::Index k = c.cols();
  MatrixX<Scalar> u = c;
  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(k, k);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index i = 0; i + 1 < k; ++i) {
      for (Eigen::Index j = i + 1; j < k; ++j) {
        const Scalar alpha = u.col(i).squaredNorm();
        const Scalar beta = u.col(j).squaredNorm();
        const Scalar gamma = u.col(i).dot(u.col(j));
        if (gamma == Scalar(0) || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Scalar zeta = (beta - alpha) / (Scalar(2) * gamma);
        const Scalar t = (zeta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(zeta) + std::sqrt(Scalar(1) + zeta * zeta));
        const Scalar cs = Scalar(1) / std::sqrt(Scalar(1) + t * t);
        const Scalar sn = cs * t;
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
          const Scalar ui = u(r, i), uj = u(r, j);
          u(r, i) = cs * ui - sn * uj;
          u(r, j) = sn * ui + cs * uj;
        }
        for (Eigen::Index r = 0; r < k; ++r) {
          const Scalar vi = v(r, i), vj = v(r, j);
          v(r, i) = cs * vi - sn * vj;
          v(r, j) = sn * vi + cs * vj;
        }
      }
    }
    if (!rotated) break;
  }

  VectorX<Scalar> norms(k);
  for (Eigen::Index j = 0; j < k; ++j) norms(j) = u.col(j).norm();
  const auto order = detail::stable_order(norms, false);
  SingularValueDecomposition<Scalar> out{VectorX<Scalar>(k), MatrixX<Scalar>(k, k)};
  for (Eigen::Index j = 0; j < k; ++j) {
    out.values(j) = norms(order[static_cast<std::size_t>(j)]);
    out.right_vectors.col(j) = v.col(order[static_cast<std::size_t>(j)]);
  }
  return out;
}

/// ‖A‖_op. For symmetric A this is the largest |λ|.
template <typename Scalar>
Scalar operator_norm(const SymMatrix<Scalar>& a) {
  const VectorX<Scalar> ev = eigenvalues(a);
  return ev.cwiseAbs().maxCoeff();
}

/// ‖A − B‖_op for symmetric A, B of equal order.
template <typename Scalar>
Scalar operator_norm_difference(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b) {
  if (a.order() != b.order()) throw std::invalid_argument("operator_norm_difference: order mismatch");
  return operator_norm(SymMatrix<Scalar>(MatrixX<Scalar>(a.dense() - b.dense())));
}

/// XA − AX. Skew-symmetric whenever both arguments are symmetric.
template <typename Scalar>
MatrixX<Scalar> commutator(const SymMatrix<Scalar>& x, const SymMatrix<Scalar>& a) {
  if (x.order() != a.order()) throw std::invalid_argument("commutator: order mismatch");
  return x.dense() * a.dense() - a.dense() * x.dense();
}

/// Row k (0-based) holds the main diagonal of A^k, k = 0..k_max-1, built from
/// a running power.
template <typename Scalar>
MatrixX<Scalar> power_diagonals(const SymMatrix<Scalar>& a, Eigen::Index k_max) {
  if (k_max < 1) throw std::invalid_argument("power_diagonals: k_max must be >= 1");
  const Eigen::Index n = a.order();
  MatrixX<Scalar> rows(k_max, n);
  MatrixX<Scalar> power = MatrixX<Scalar>::Identity(n, n);
  for (Eigen::Index k = 0; k < k_max; ++k) {
    rows.row(k) = power.diagonal().transpose();
    if (k + 1 < k_max) power = power * a.dense();
  }
  return rows;
}

/// Hausdorff distance between two finite nonempty sets of reals.
template <typename Scalar>
Scalar hausdorff_distance(std::span<const Scalar> s, std::span<const Scalar> t) {
  if (s.empty() || t.empty()) throw std::invalid_argument("hausdorff_distance: empty set");
  auto directed = [](std::span<const Scalar> from, std::span<const Scalar> to) {
    std::vector<Scalar> sorted(to.begin(), to.end());
    std::sort(sorted.begin(), sorted.end());
    Scalar worst = 0;
    for (Scalar x : from) {
      auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
      Scalar best = std::numeric_limits<Scalar>::infinity();
      if (it != sorted.end()) best = std::min(best, *it - x);
      if (it != sorted.begin()) best = std::min(best, x - *std::prev(it));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(s, t), directed(t, s));
}

template <typename Scalar>
Scalar hausdorff_distance(const VectorX<Scalar>& s, const VectorX<Scalar>& t) {
  return hausdorff_distance<Scalar>(std::span<const Scalar>(s.data(), static_cast<std::size_t>(s.size())),
                                    std::span<const Scalar>(t.data(), static_cast<std::size_t>(t.size())));
}

}  // namespace siep

#endif  // SIEP_LINALG_HPP
