#include "siep/newton.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

#include "siep/errors.hpp"

namespace siep {

PowerSumTarget powersum_targets(std::span<const double> lambdas) {
  if (lambdas.empty()) throw SiepError(ErrorKind::InvalidArgument, "powersum_targets: empty spectrum");
  std::vector<double> sorted(lambdas.begin(), lambdas.end());
  for (double v : sorted)
    if (!std::isfinite(v)) throw SiepError(ErrorKind::InvalidArgument, "powersum_targets: non-finite value");
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 1; k < sorted.size(); ++k)
    if (sorted[k] == sorted[k - 1])
      throw SiepError(ErrorKind::DuplicateEigenvalues, "value " + std::to_string(sorted[k]) + " repeats");

  const auto n = static_cast<Eigen::Index>(sorted.size());
  PowerSumTarget t{VectorX<double>::Zero(n), VectorX<double>(n), VectorX<double>::Zero(n)};
  for (Eigen::Index i = 0; i < n; ++i) t.spectrum(i) = sorted[static_cast<std::size_t>(i)];
  VectorX<double> power = VectorX<double>::Ones(n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    power = power.cwiseProduct(t.spectrum);
    t.p(k - 1) = power.sum() / static_cast<double>(k);
    const double s = power.cwiseAbs().sum() / static_cast<double>(k);
    t.scale(k - 1) = s >= DBL_MIN ? s : 1.0;
  }
  return t;
}

VectorX<double> g_eval(const SymMatrixd& m) {
  const Eigen::Index n = m.order();
  VectorX<double> g(n);
  MatrixX<double> power = m.dense();
  for (Eigen::Index k = 1; k <= n; ++k) {
    g(k - 1) = power.trace() / static_cast<double>(k);
    if (k < n) power = power * m.dense();
  }
  return g;
}

double relative_powersum_residual(const SymMatrixd& m, const PowerSumTarget& target) {
  if (target.size() != m.order()) throw std::invalid_argument("relative_powersum_residual: size mismatch");
  const VectorX<double> g = g_eval(m);
  return ((g - target.p).cwiseAbs().cwiseQuotient(target.scale)).maxCoeff();
}

namespace {

struct Linearization {
  MatrixX<double> jacobian;
  VectorX<double> residual;
  double spectral_error = 0.0;
};

Linearization linearize(const SymMatrixd& m, const PowerSumTarget& target, NewtonSystem system) {
  Linearization lin;
  if (system == NewtonSystem::spectral) {
    const auto eig = sym_eigen(m);
    lin.jacobian = eig.vectors.cwiseAbs2().transpose();
    lin.residual = target.spectrum - eig.values;
    lin.spectral_error = lin.residual.cwiseAbs().maxCoeff();
  } else {
    lin.jacobian = jac_x(m);
    lin.residual = target.p - g_eval(m);
    lin.spectral_error = hausdorff_distance(VectorX<double>(eigenvalues(m)), target.spectrum);
  }
  return lin;
}

double condition_estimate(const Eigen::PartialPivLU<MatrixX<double>>& lu) {
  const double rc = lu.rcond();
  return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

struct InnerResult {
  bool ok = false;
  VectorX<double> diagonal;
  int iterations = 0;
  double residual = 0.0;
  double condition = 1.0;
};

// Full Newton on the diagonal with the off-diagonal of `frame` held fixed.
InnerResult newton_on_diagonal(const MatrixX<double>& frame, VectorX<double> x, const PowerSumTarget& target,
                               const NewtonOptions& opts) {
  InnerResult out;
  const double spectral_bound = opts.spectral_tol * std::max(1.0, target.spectrum.cwiseAbs().maxCoeff());
  double best = std::numeric_limits<double>::infinity();
  MatrixX<double> work = frame;
  for (int it = 0;; ++it) {
    work.diagonal() = x;
    const SymMatrixd m(work);
    const Linearization lin = linearize(m, target, opts.system);
    const double rel = relative_powersum_residual(m, target);
    out.iterations = it;
    out.residual = rel;
    if (!std::isfinite(rel) || !std::isfinite(lin.spectral_error)) return out;
    const bool spectral_ok = opts.system != NewtonSystem::spectral || lin.spectral_error <= spectral_bound;
    if (rel <= opts.tol && spectral_ok) {
      out.ok = true;
      out.diagonal = std::move(x);
      return out;
    }
    if (it >= opts.max_newton_iterations) return out;
    // Divergence guard: a correct branch never grows the error tenfold.
    const double err = lin.residual.cwiseAbs().maxCoeff();
    if (err > 10.0 * best) return out;
    best = std::min(best, err);

    const Eigen::PartialPivLU<MatrixX<double>> lu(lin.jacobian);
    out.condition = condition_estimate(lu);
    if (!(out.condition <= opts.condition_limit)) return out;
    x += lu.solve(lin.residual);
    if (!x.allFinite()) return out;
  }
}

double frozen_value(const SymMatrixd& start, const OffDiagEntry& f, double s) {
  if (s == 1.0) return f.value;
  const double a0 = start(f.i, f.j);
  return a0 + s * (f.value - a0);
}

MatrixX<double> frame_at(const SymMatrixd& start, std::span<const OffDiagEntry> frozen, double s) {
  MatrixX<double> m = start.dense();
  for (const auto& f : frozen) m(f.i, f.j) = m(f.j, f.i) = frozen_value(start, f, s);
  return m;
}

}  // namespace

CorrectionResult solve_diagonal_correction(const SymMatrixd& start, std::span<const OffDiagEntry> frozen,
                                           const PowerSumTarget& target, const NewtonOptions& opts) {
  const Eigen::Index n = start.order();
  if (target.size() != n) throw SiepError(ErrorKind::InvalidArgument, "target size differs from matrix order");
  for (std::size_t a = 0; a < frozen.size(); ++a) {
    const auto& f = frozen[a];
    if (f.i == f.j || f.i < 0 || f.j < 0 || f.i >= n || f.j >= n || !std::isfinite(f.value))
      throw SiepError(ErrorKind::InvalidArgument, "frozen entry must be a finite off-diagonal position");
    for (std::size_t b = 0; b < a; ++b)
      if (std::minmax(f.i, f.j) == std::minmax(frozen[b].i, frozen[b].j))
        throw SiepError(ErrorKind::InvalidArgument, "frozen position listed twice");
  }
  if (opts.reference && opts.reference->order() != n)
    throw SiepError(ErrorKind::InvalidArgument, "reference order differs from matrix order");

  {
    const Linearization lin = linearize(start, target, opts.system);
    const double cond = condition_estimate(Eigen::PartialPivLU<MatrixX<double>>(lin.jacobian));
    if (!(cond <= opts.condition_limit))
      throw SiepError(ErrorKind::JacobianSingular,
                      "condition estimate " + std::to_string(cond) + " at the unperturbed matrix");
  }

  NewtonReport report;
  double final_scale = 1.0;
  bool last_shrink_for_accept = false;
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (const auto& f : frozen) {
      const double v = frozen_value(start, f, final_scale);
      if (f.value != 0.0 && (v == 0.0 || std::abs(v) < opts.edge_floor)) {
        const ErrorKind kind = last_shrink_for_accept ? ErrorKind::WspLost : ErrorKind::BudgetInfeasible;
        throw SiepError(kind, "entry (" + std::to_string(f.i) + "," + std::to_string(f.j) +
                                  ") would drop below the edge floor at scale " + std::to_string(final_scale));
      }
    }

    report.continuation_steps = 0;
    InnerResult inner = newton_on_diagonal(frame_at(start, frozen, 0.0), start.diagonal(), target, opts);
    report.iterations += inner.iterations;
    if (!inner.ok)
      throw SiepError(ErrorKind::NoConvergence, "Newton failed on the unperturbed matrix");
    VectorX<double> x = inner.diagonal;

    double s = frozen.empty() ? final_scale : 0.0;
    double ds = final_scale;
    while (s < final_scale) {
      if (report.continuation_steps >= opts.max_continuation_steps)
        throw SiepError(ErrorKind::NoConvergence, "continuation stalled at s=" + std::to_string(s) + " of " +
                                                      std::to_string(final_scale));
      const double s_next = s + ds >= final_scale ? final_scale : s + ds;
      inner = newton_on_diagonal(frame_at(start, frozen, s_next), x, target, opts);
      ++report.continuation_steps;
      report.iterations += inner.iterations;
      if (inner.ok) {
        s = s_next;
        x = inner.diagonal;
        ds *= 2.0;
      } else {
        ds *= 0.5;
      }
    }

    MatrixX<double> dense = frame_at(start, frozen, final_scale);
    dense.diagonal() = x;
    SymMatrixd result(std::move(dense));

    if (opts.reference && !(operator_norm_difference(result, *opts.reference) < opts.norm_budget)) {
      final_scale *= 0.5;
      last_shrink_for_accept = false;
      continue;
    }
    if (opts.accept && !opts.accept(result)) {
      final_scale *= 0.5;
      last_shrink_for_accept = true;
      continue;
    }

    const Linearization lin = linearize(result, target, opts.system);
    report.jacobian_condition_estimate = condition_estimate(Eigen::PartialPivLU<MatrixX<double>>(lin.jacobian));
    report.final_residual = relative_powersum_residual(result, target);
    report.converged = report.final_residual <= opts.tol;
    report.scale = final_scale;
    return {std::move(result), report};
  }
  throw SiepError(ErrorKind::BudgetInfeasible, "no admissible scale found");
}

}  // namespace siep
