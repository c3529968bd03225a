#include "siep/wsp.hpp"

#include <stdexcept>

namespace siep {

std::pair<Eigen::Index, Eigen::Index> wsp_unknown_pair(Eigen::Index n, Eigen::Index index) {
  for (Eigen::Index p = 0; p + 1 < n; ++p) {
    const Eigen::Index row_len = n - p - 1;
    if (index < row_len) return {p, p + 1 + index};
    index -= row_len;
  }
  throw std::out_of_range("wsp_unknown_pair: index out of range");
}

SymMatrixd wsp_unknowns_to_matrix(Eigen::Index n, const VectorX<double>& x) {
  if (x.size() != wsp_unknown_count(n)) throw std::invalid_argument("wsp_unknowns_to_matrix: size mismatch");
  MatrixX<double> m = MatrixX<double>::Zero(n, n);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const auto [p, q] = wsp_unknown_pair(n, k);
    m(p, q) = m(q, p) = x(k);
  }
  return SymMatrixd(std::move(m));
}

WspCertificate has_wsp(const SymMatrixd& a, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("has_wsp: tol must be > 0");
  WspCertificate cert;
  const Eigen::Index n = a.order();
  if (n < 2) return cert;

  const auto svd = jacobi_svd(wsp_constraint_matrix(a));
  const double largest = svd.values(0);
  const double threshold = tol * (largest > 0.0 ? largest : 1.0);

  Eigen::Index kept = 0;
  while (kept < svd.values.size() && svd.values(kept) > threshold) ++kept;
  cert.kernel_dimension = svd.values.size() - kept;
  cert.holds = cert.kernel_dimension == 0;
  cert.smallest_kept_singular_value = kept > 0 ? svd.values(kept - 1) : 0.0;
  cert.largest_dropped_singular_value = cert.holds ? 0.0 : svd.values(kept);

  if (!cert.holds) {
    VectorX<double> x = svd.right_vectors.col(svd.values.size() - 1);
    // Off-diagonal entries appear twice in X.
    x /= std::sqrt(2.0) * x.norm();
    cert.witness = wsp_unknowns_to_matrix(n, x);
  }
  return cert;
}

}  // namespace siep
