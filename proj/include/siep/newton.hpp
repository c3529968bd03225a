#ifndef SIEP_NEWTON_HPP
#define SIEP_NEWTON_HPP

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "siep/linalg.hpp"
#include "siep/sym_matrix.hpp"

namespace siep {

/// p_k = (1/k)·Σ λ_i^k for k = 1..n, together with the sorted spectrum it was
/// computed from and the per-component scale (1/k)·Σ|λ_i|^k used to make
/// residuals relative.
struct PowerSumTarget {
  VectorX<double> p;
  VectorX<double> spectrum;
  VectorX<double> scale;

  Eigen::Index size() const { return p.size(); }
};

/// Throws SiepError(DuplicateEigenvalues) unless the values are pairwise
/// distinct.
PowerSumTarget powersum_targets(std::span<const double> lambdas);

/// (tr M, ½ tr M², ..., (1/n) tr Mⁿ) from running matrix powers.
VectorX<double> g_eval(const SymMatrixd& m);

/// Derivative of g with respect to the diagonal: row k holds diag(A^k),
/// k = 0..n-1.
inline MatrixX<double> jac_x(const SymMatrixd& a) { return power_diagonals(a, a.order()); }

/// max_k |g_k(M) − p_k| / scale_k.
double relative_powersum_residual(const SymMatrixd& m, const PowerSumTarget& target);

struct OffDiagEntry {
  Eigen::Index i;
  Eigen::Index j;
  double value;
};

enum class NewtonSystem {
  /// Residual Λ − λ(M), Jacobian ∂λ_k/∂x_i = V_ik². Same Newton system as the
  /// power-sum one, expressed in eigenvalue coordinates.
  spectral,
  /// Residual p − g(M), Jacobian jac_x(M), solved by partial-pivot LU.
  power_sums,
};

struct NewtonOptions {
  /// Bound on the relative power-sum residual.
  double tol = 1e-12;
  /// Spectral mode also requires max|λ(M) − Λ| <= spectral_tol·max(1, max|Λ|).
  double spectral_tol = 1e-12;
  int max_newton_iterations = 50;
  int max_continuation_steps = 60;
  double condition_limit = 1e12;
  NewtonSystem system = NewtonSystem::spectral;

  /// When set, the result must satisfy ‖M − reference‖_op < norm_budget.
  std::optional<SymMatrixd> reference;
  double norm_budget = std::numeric_limits<double>::infinity();
  /// Smallest admissible |value| of a scaled frozen entry.
  double edge_floor = 0.0;
  /// Extra acceptance test on a converged matrix (e.g. a WSP check).
  std::function<bool(const SymMatrixd&)> accept;
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  double final_residual = 0.0;
  double jacobian_condition_estimate = 1.0;
  int continuation_steps = 0;
  /// Factor applied to the frozen entries' displacement in the result (1 when
  /// the requested values were reached).
  double scale = 1.0;
};

struct CorrectionResult {
  SymMatrixd matrix;
  NewtonReport report;
};

/// Moves the entries listed in `frozen` from their values in `start` to the
/// requested values along a continuation path s: 0 → 1, re-solving for the
/// diagonal at every step so that g(M) matches `target`. Off-diagonal entries
/// not listed in `frozen` are never written.
///
/// A failed Newton solve halves the continuation step. A converged matrix that
/// violates the norm budget or `accept` shrinks the final scale by half and
/// the path is re-walked.
///
/// Errors (SiepError): JacobianSingular when the Jacobian at `start` exceeds
/// condition_limit; NoConvergence when the continuation step budget runs out;
/// BudgetInfeasible when shrinking would push a frozen entry below edge_floor;
/// WspLost when that shrinking was forced by `accept`.
CorrectionResult solve_diagonal_correction(const SymMatrixd& start, std::span<const OffDiagEntry> frozen,
                                           const PowerSumTarget& target, const NewtonOptions& opts = {});

}  // namespace siep

#endif  // SIEP_NEWTON_HPP
