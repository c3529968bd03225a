#ifndef SIEP_INFINITE_HPP
#define SIEP_INFINITE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "siep/graph.hpp"
#include "siep/siep.hpp"

namespace siep {

enum class SequenceFamily {
  /// 1, 1/2, 1/3, ...
  harmonic,
  /// 0, 1, 1/2, 1/3, ...
  harmonic_with_zero,
  /// a, b, then a + (b−a)·v_k for the van der Corput sequence v_k.
  dyadic,
  /// L_1 + r, L_2 + r, ..., L_1 + r/2, L_2 + r/2, ... (round-robin).
  converging,
  explicit_list,
};

/// An enumeration λ_1, λ_2, ... of pairwise distinct reals bounded by
/// `bound()`, standing in for a countable dense subset of a compact set.
class DenseSequence {
 public:
  static DenseSequence harmonic(bool leading_zero = false);
  static DenseSequence dyadic(double a, double b);
  static DenseSequence converging(std::vector<double> limits, double radius);
  static DenseSequence from_list(std::vector<double> terms);
  /// Parses `harmonic`, `harmonic0`, `dyadic:a,b`, `converging:L1,L2,...;r=R`.
  static DenseSequence parse(const std::string& spec);

  SequenceFamily family() const { return family_; }
  /// Term i (0-based); nullopt past the end of an explicit list.
  std::optional<double> term(std::size_t i) const;
  /// First `count` terms; throws SiepError(SequenceExhausted) if unavailable
  /// and SiepError(DuplicateEigenvalues) if two coincide.
  std::vector<double> first(std::size_t count) const;
  double bound() const { return bound_; }
  const std::vector<double>& declared_limit_points() const { return limits_; }
  /// Round-trips through parse() for built-in families.
  std::string describe() const;

 private:
  SequenceFamily family_ = SequenceFamily::harmonic;
  double a_ = 0.0, b_ = 1.0, radius_ = 1.0;
  std::vector<double> limits_;
  std::vector<double> terms_;
  double bound_ = 1.0;
};

struct TowerOptions {
  SiepOptions siep;
};

/// Solved truncations Ã_1..Ã_N of one infinite problem. `step_norm_deltas[k]`
/// is ‖Ã_{k+1} ⊕ [λ_{k+2}] − Ã_{k+2}‖_op (k 0-based) and
/// `budgets[k]` = 2^-(k+1) (or the overridden schedule).
struct TruncationTower {
  std::vector<SymMatrixd> matrices;
  std::vector<double> step_norm_deltas;
  std::vector<double> budgets;
  std::vector<StepRecord> steps;
  std::vector<double> terms;
  std::vector<std::vector<Vertex>> lower_adjacency;
  DenseSequence sequence;
  std::string graph_header;

  Eigen::Index levels() const { return static_cast<Eigen::Index>(matrices.size()); }
};

/// Runs the finite induction on the prefixes of `graph` with the terms of
/// `sequence`, checking every step delta against its budget by direct
/// operator-norm evaluation.
TruncationTower build_tower(LowerAdjacencyStream& graph, const DenseSequence& sequence, Eigen::Index levels,
                            const TowerOptions& opts = {});

/// 2^-(N-1) = Σ_{k>=N} 2^-k.
double tower_tail_bound(Eigen::Index levels);

struct SpectralCertificate {
  Eigen::Index truncation_level = 0;
  /// Computed σ(Ã_N), ascending.
  std::vector<double> level_spectrum;
  /// λ_{N+1}, ..., λ_{N+M}.
  std::vector<double> tail_sample;
  double tail_bound = 0.0;

  /// level_spectrum followed by tail_sample.
  std::vector<double> approx_spectrum() const;
  std::string hausdorff_guarantee() const;
};

/// Tail sample size defaults to 10·N.
SpectralCertificate certify_spectrum(const TruncationTower& tower, std::optional<std::size_t> tail_sample = {});

struct LimitPointOptions {
  /// A sample point is a candidate when at least this many other points lie
  /// within delta of it.
  std::size_t cluster_min = 5;
  /// Within a δ-connected run of candidates, only points whose distance to
  /// their cluster_min-th neighbour is within this factor of the run minimum
  /// count as accumulation sites.
  double plateau_factor = 4.0;
};

/// Estimated accumulation points of a finite sample at resolution delta:
/// one representative (mean) per δ-wide chunk of accumulation sites.
std::vector<double> limit_points(std::vector<double> sample, double delta, const LimitPointOptions& opts = {});

struct IsolatedPoint {
  double value;
  int multiplicity;
};

struct SpectralFingerprint {
  double delta = 0.0;
  std::vector<double> essential_spectrum_estimate;
  std::vector<IsolatedPoint> isolated_points;
  /// The estimate is a single point λ, so T − λI is compact.
  bool compact_perturbation_of_scalar = false;
};

/// Essential-spectrum estimate from limit_points over the certified spectrum;
/// isolated points are sample points with no other sample point within delta
/// and farther than delta from the estimate, with multiplicity counted over
/// the certified spectrum within tail_bound + delta/2. delta defaults to
/// 2·tail_bound.
SpectralFingerprint fingerprint(const SpectralCertificate& cert, std::optional<double> delta = {},
                                const LimitPointOptions& opts = {});

struct EquivalenceVerdict {
  bool equivalent = false;
  std::vector<std::string> reasons;
};

/// Compares essential estimates (Hausdorff distance <= resolution) and
/// isolated points away from either estimate (same value within resolution,
/// same multiplicity). The resolution is the larger of the two deltas.
EquivalenceVerdict compare_fingerprints(const SpectralFingerprint& a, const SpectralFingerprint& b);

}  // namespace siep

#endif  // SIEP_INFINITE_HPP
