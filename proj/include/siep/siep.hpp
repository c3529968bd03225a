#ifndef SIEP_SIEP_HPP
#define SIEP_SIEP_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "siep/graph.hpp"
#include "siep/newton.hpp"
#include "siep/wsp.hpp"

namespace siep {

struct SiepOptions {
  /// User cap ε on every step's operator-norm budget.
  double user_budget = std::numeric_limits<double>::infinity();
  /// Budget for order m is min(ε, decay^(m-1)).
  double budget_decay = 0.5;
  /// Replaces the schedule above when set; the argument is the order m of
  /// the matrix being built.
  std::function<double(Eigen::Index)> budget_schedule;
  double edge_floor = 1e-10;
  /// Relative power-sum tolerance handed to Newton.
  double tol = 1e-12;
  /// Final check: d_H(σ(A), Λ) <= spectrum_tol·max(1, spread(Λ)).
  double spectrum_tol = 1e-8;
  double wsp_tol = 1e-9;
  /// λ_new must be farther than collision_gap·max(1, spread) from σ(A_prev).
  double collision_gap = 1e-6;
  NewtonSystem system = NewtonSystem::spectral;

  double budget(Eigen::Index order) const {
    if (budget_schedule) return budget_schedule(order);
    return std::min(user_budget, std::pow(budget_decay, static_cast<double>(order - 1)));
  }
};

/// Audit trail of one induction step: the matrix of order `step_index` was
/// built from A_prev ⊕ [appended_eigenvalue].
struct StepRecord {
  Eigen::Index step_index = 1;
  double appended_eigenvalue = 0.0;
  std::vector<Edge> new_edges;
  std::vector<double> edge_values;
  double budget = 0.0;
  double achieved_norm_delta = 0.0;
  WspCertificate wsp;
  NewtonReport newton;
};

struct SiepSolution {
  SymMatrixd matrix;
  FiniteGraph graph;
  /// Targets in processing order (not sorted).
  std::vector<double> target_spectrum;
  std::vector<StepRecord> per_step;
  /// Ã_1, ..., Ã_n.
  std::vector<SymMatrixd> levels;
};

struct StepResult {
  SymMatrixd matrix;
  StepRecord record;
};

/// Base of the induction: [λ_1].
StepResult step_base(double lambda, const SiepOptions& opts = {});

/// One induction step. `prev_lambdas` is the spectrum of A_prev; the new
/// vertex n = A_prev.order() is joined to every vertex in `new_neighbors`.
/// The border starts at zero and moves to the default magnitudes
/// budget/(4·√d); the diagonal is corrected so σ(Ã) = prev_lambdas ∪ {λ_new}.
StepResult step_extend(const SymMatrixd& a_prev, std::span<const double> prev_lambdas, double lambda_new,
                       std::span<const Vertex> new_neighbors, double budget, const SiepOptions& opts = {});

/// Builds a matrix with graph `g` and spectrum `lambdas`, one vertex at a time
/// in label order; vertex k receives lambdas[k] as its appended eigenvalue.
SiepSolution solve_finite(const FiniteGraph& g, std::span<const double> lambdas, const SiepOptions& opts = {});

/// max(1, max Λ − min Λ).
double spectrum_scale(std::span<const double> lambdas);

}  // namespace siep

#endif  // SIEP_SIEP_HPP
