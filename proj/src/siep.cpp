#include "siep/siep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "siep/errors.hpp"

namespace siep {

double spectrum_scale(std::span<const double> lambdas) {
  if (lambdas.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(lambdas.begin(), lambdas.end());
  return std::max(1.0, *hi - *lo);
}

StepResult step_base(double lambda, const SiepOptions& opts) {
  if (!std::isfinite(lambda)) throw SiepError(ErrorKind::InvalidArgument, "non-finite eigenvalue", 1);
  MatrixX<double> m(1, 1);
  m(0, 0) = lambda;
  StepResult out{SymMatrixd(std::move(m)), {}};
  out.record.step_index = 1;
  out.record.appended_eigenvalue = lambda;
  out.record.budget = opts.budget(1);
  out.record.newton.converged = true;
  return out;
}

StepResult step_extend(const SymMatrixd& a_prev, std::span<const double> prev_lambdas, double lambda_new,
                       std::span<const Vertex> new_neighbors, double budget, const SiepOptions& opts) {
  const Eigen::Index n_prev = a_prev.order();
  const Eigen::Index step = n_prev + 1;
  if (static_cast<Eigen::Index>(prev_lambdas.size()) != n_prev)
    throw SiepError(ErrorKind::InvalidArgument, "previous spectrum size differs from matrix order", step);
  if (!(budget > 0.0)) throw SiepError(ErrorKind::BudgetInfeasible, "budget must be positive", step);

  std::vector<Vertex> neighbors(new_neighbors.begin(), new_neighbors.end());
  std::sort(neighbors.begin(), neighbors.end());
  if (std::adjacent_find(neighbors.begin(), neighbors.end()) != neighbors.end())
    throw SiepError(ErrorKind::InvalidArgument, "neighbor listed twice", step);
  for (Vertex j : neighbors)
    if (j < 0 || j >= n_prev) throw SiepError(ErrorKind::InvalidArgument, "neighbor index out of range", step);

  std::vector<double> all(prev_lambdas.begin(), prev_lambdas.end());
  all.push_back(lambda_new);
  const PowerSumTarget target = powersum_targets(all);
  const double scale = spectrum_scale(all);

  const VectorX<double> prev_spectrum = eigenvalues(a_prev);
  const double gap = (prev_spectrum.array() - lambda_new).abs().minCoeff();
  if (!(gap > opts.collision_gap * scale))
    throw SiepError(ErrorKind::EigenvalueCollision,
                    "appended value " + std::to_string(lambda_new) + " lies within " + std::to_string(gap) +
                        " of the previous spectrum",
                    step);
  if (!has_wsp(a_prev, opts.wsp_tol).holds)
    throw SiepError(ErrorKind::WspLost, "previous matrix lacks the weak spectral property", step);

  const SymMatrixd reference = append_diagonal(a_prev, lambda_new);

  StepResult out{reference, {}};
  StepRecord& rec = out.record;
  rec.step_index = step;
  rec.appended_eigenvalue = lambda_new;
  rec.budget = budget;
  for (Vertex j : neighbors) rec.new_edges.push_back({j, n_prev});

  if (neighbors.empty()) {
    rec.wsp = has_wsp(reference, opts.wsp_tol);
    if (!rec.wsp.holds) throw SiepError(ErrorKind::WspLost, "direct sum lost the weak spectral property", step);
    rec.newton.converged = true;
    rec.newton.final_residual = relative_powersum_residual(reference, target);
    return out;
  }

  const double magnitude = budget / (4.0 * std::sqrt(static_cast<double>(neighbors.size())));
  if (magnitude < opts.edge_floor)
    throw SiepError(ErrorKind::BudgetInfeasible,
                    "edge magnitude " + std::to_string(magnitude) + " is below the edge floor", step);

  std::vector<OffDiagEntry> frozen;
  for (Vertex j : neighbors) frozen.push_back({j, n_prev, magnitude});

  NewtonOptions nopts;
  nopts.tol = opts.tol;
  nopts.system = opts.system;
  nopts.reference = reference;
  nopts.norm_budget = budget;
  nopts.edge_floor = opts.edge_floor;
  const double wsp_tol = opts.wsp_tol;
  nopts.accept = [wsp_tol](const SymMatrixd& m) { return has_wsp(m, wsp_tol).holds; };

  CorrectionResult solved;
  try {
    solved = solve_diagonal_correction(reference, frozen, target, nopts);
  } catch (const SiepError& e) {
    throw e.at_step(step);
  }

  out.matrix = solved.matrix;
  rec.newton = solved.report;
  for (Vertex j : neighbors) rec.edge_values.push_back(out.matrix(j, n_prev));
  rec.achieved_norm_delta = operator_norm_difference(out.matrix, reference);
  rec.wsp = has_wsp(out.matrix, opts.wsp_tol);
  return out;
}

SiepSolution solve_finite(const FiniteGraph& g, std::span<const double> lambdas, const SiepOptions& opts) {
  const Eigen::Index n = g.n();
  if (n < 1) throw SiepError(ErrorKind::InvalidArgument, "graph has no vertices");
  if (static_cast<Eigen::Index>(lambdas.size()) != n)
    throw SiepError(ErrorKind::InvalidArgument, "graph has " + std::to_string(n) + " vertices but " +
                                                    std::to_string(lambdas.size()) + " eigenvalues were given");
  powersum_targets(lambdas);

  SiepSolution sol;
  sol.graph = g;
  sol.target_spectrum.assign(lambdas.begin(), lambdas.end());

  StepResult current = step_base(lambdas[0], opts);
  sol.levels.push_back(current.matrix);
  sol.per_step.push_back(current.record);
  for (Eigen::Index k = 1; k < n; ++k) {
    const auto neighbors = g.lower_neighbors(k);
    current = step_extend(current.matrix, lambdas.first(static_cast<std::size_t>(k)),
                          lambdas[static_cast<std::size_t>(k)], neighbors, opts.budget(k + 1), opts);
    sol.levels.push_back(current.matrix);
    sol.per_step.push_back(current.record);
  }
  sol.matrix = current.matrix;

  const auto pattern = validate_pattern(sol.matrix, g, opts.edge_floor);
  if (!pattern.ok)
    throw SiepError(ErrorKind::BudgetInfeasible, "pattern check failed: " + describe(pattern.violations.front()), n);
  const VectorX<double> target = Eigen::Map<const VectorX<double>>(lambdas.data(), n);
  const double dist = hausdorff_distance(VectorX<double>(eigenvalues(sol.matrix)), target);
  if (!(dist <= opts.spectrum_tol * spectrum_scale(lambdas)))
    throw SiepError(ErrorKind::NoConvergence, "final spectrum misses the target by " + std::to_string(dist), n);
  return sol;
}

}  // namespace siep
