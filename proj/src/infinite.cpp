#include "siep/infinite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "siep/errors.hpp"
#include "siep/io.hpp"
#include "siep/linalg.hpp"

namespace siep {

namespace {

// Base-2 radical inverse: 1 -> 1/2, 2 -> 1/4, 3 -> 3/4, 4 -> 1/8, ...
double van_der_corput(std::size_t k) {
  double v = 0.0, unit = 0.5;
  for (; k; k >>= 1, unit *= 0.5)
    if (k & 1) v += unit;
  return v;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) out.push_back(io::parse_double(tok));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + io::format_double(v[i]);
  return s;
}

}  // namespace

DenseSequence DenseSequence::harmonic(bool leading_zero) {
  DenseSequence s;
  s.family_ = leading_zero ? SequenceFamily::harmonic_with_zero : SequenceFamily::harmonic;
  s.limits_ = {0.0};
  s.bound_ = 1.0;
  return s;
}

DenseSequence DenseSequence::dyadic(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw SiepError(ErrorKind::InvalidArgument, "dyadic sequence needs finite a < b");
  DenseSequence s;
  s.family_ = SequenceFamily::dyadic;
  s.a_ = a;
  s.b_ = b;
  s.bound_ = std::max(std::abs(a), std::abs(b));
  return s;
}

DenseSequence DenseSequence::converging(std::vector<double> limits, double radius) {
  if (limits.empty() || !(radius > 0.0) || !std::isfinite(radius))
    throw SiepError(ErrorKind::InvalidArgument, "converging sequence needs limits and a positive radius");
  DenseSequence s;
  s.family_ = SequenceFamily::converging;
  s.radius_ = radius;
  double m = 0.0;
  for (double l : limits) {
    if (!std::isfinite(l)) throw SiepError(ErrorKind::InvalidArgument, "non-finite limit point");
    m = std::max(m, std::abs(l));
  }
  s.limits_ = std::move(limits);
  s.bound_ = m + radius;
  return s;
}

DenseSequence DenseSequence::from_list(std::vector<double> terms) {
  DenseSequence s;
  s.family_ = SequenceFamily::explicit_list;
  double m = 0.0;
  for (double t : terms) {
    if (!std::isfinite(t)) throw SiepError(ErrorKind::InvalidArgument, "non-finite sequence term");
    m = std::max(m, std::abs(t));
  }
  s.terms_ = std::move(terms);
  s.bound_ = m;
  return s;
}

DenseSequence DenseSequence::parse(const std::string& spec) {
  if (spec == "harmonic") return harmonic(false);
  if (spec == "harmonic0") return harmonic(true);
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (name == "dyadic") {
      const auto ab = parse_list(rest);
      if (ab.size() != 2) throw SiepError(ErrorKind::InvalidArgument, "dyadic needs `dyadic:a,b`");
      return dyadic(ab[0], ab[1]);
    }
    if (name == "converging") {
      const auto semi = rest.find(";r=");
      if (semi == std::string::npos)
        throw SiepError(ErrorKind::InvalidArgument, "converging needs `converging:L1,L2,...;r=R`");
      return converging(parse_list(rest.substr(0, semi)), io::parse_double(rest.substr(semi + 3)));
    }
    if (name == "list") return from_list(parse_list(rest));
  } catch (const io::ParseError& e) {
    throw SiepError(ErrorKind::InvalidArgument, "sequence '" + spec + "': " + e.what());
  }
  throw SiepError(ErrorKind::InvalidArgument, "unknown sequence '" + spec + "'");
}

std::optional<double> DenseSequence::term(std::size_t i) const {
  switch (family_) {
    case SequenceFamily::harmonic:
      return 1.0 / static_cast<double>(i + 1);
    case SequenceFamily::harmonic_with_zero:
      return i == 0 ? 0.0 : 1.0 / static_cast<double>(i);
    case SequenceFamily::dyadic:
      if (i == 0) return a_;
      if (i == 1) return b_;
      return a_ + (b_ - a_) * van_der_corput(i - 1);
    case SequenceFamily::converging: {
      const std::size_t m = limits_.size();
      return limits_[i % m] + radius_ / static_cast<double>(i / m + 1);
    }
    case SequenceFamily::explicit_list:
      if (i < terms_.size()) return terms_[i];
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<double> DenseSequence::first(std::size_t count) const {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto t = term(i);
    if (!t)
      throw SiepError(ErrorKind::SequenceExhausted,
                      "sequence has " + std::to_string(i) + " terms, " + std::to_string(count) + " needed");
    out.push_back(*t);
  }
  std::vector<double> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw SiepError(ErrorKind::DuplicateEigenvalues, "sequence repeats a value within its first " +
                                                         std::to_string(count) + " terms");
  return out;
}

std::string DenseSequence::describe() const {
  switch (family_) {
    case SequenceFamily::harmonic: return "harmonic";
    case SequenceFamily::harmonic_with_zero: return "harmonic0";
    case SequenceFamily::dyadic: return "dyadic:" + io::format_double(a_) + "," + io::format_double(b_);
    case SequenceFamily::converging: return "converging:" + join(limits_) + ";r=" + io::format_double(radius_);
    case SequenceFamily::explicit_list: return "list:" + join(terms_);
  }
  return "unknown";
}

namespace {

FiniteGraph prefix_of(const FiniteGraph& g, Vertex n) {
  std::vector<Edge> edges;
  for (const auto& e : g.edges())
    if (e.j < n) edges.push_back(e);
  return FiniteGraph(n, std::move(edges));
}

}  // namespace

TruncationTower build_tower(LowerAdjacencyStream& graph, const DenseSequence& sequence, Eigen::Index levels,
                            const TowerOptions& opts) {
  if (levels < 1) throw SiepError(ErrorKind::InvalidArgument, "a tower needs at least one level");
  TruncationTower tower;
  tower.sequence = sequence;
  tower.graph_header = graph.header();
  tower.terms = sequence.first(static_cast<std::size_t>(levels + 1));

  const FiniteGraph g = induced_prefix(graph, levels);
  for (Vertex k = 0; k < levels; ++k) tower.lower_adjacency.push_back(g.lower_neighbors(k));

  const std::span<const double> lambdas(tower.terms.data(), static_cast<std::size_t>(levels));
  SiepSolution sol = solve_finite(g, lambdas, opts.siep);
  tower.matrices = std::move(sol.levels);
  tower.steps = std::move(sol.per_step);

  for (Eigen::Index k = 0; k + 1 < levels; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double budget = tower.steps[ku + 1].budget;
    const SymMatrixd embedded = append_diagonal(tower.matrices[ku], tower.terms[ku + 1]);
    const double delta = operator_norm_difference(embedded, tower.matrices[ku + 1]);
    if (!(delta < budget))
      throw SiepError(ErrorKind::BudgetInfeasible,
                      "level delta " + io::format_double(delta) + " is not below " + io::format_double(budget), k + 2);
    tower.step_norm_deltas.push_back(delta);
    tower.budgets.push_back(budget);
  }
  for (Eigen::Index k = 0; k < levels; ++k) {
    const auto report = validate_pattern(tower.matrices[static_cast<std::size_t>(k)], prefix_of(g, k + 1),
                                         opts.siep.edge_floor);
    if (!report.ok)
      throw SiepError(ErrorKind::BudgetInfeasible, "pattern check failed: " + describe(report.violations.front()),
                      k + 1);
  }
  return tower;
}

double tower_tail_bound(Eigen::Index levels) { return std::ldexp(1.0, -static_cast<int>(levels - 1)); }

std::vector<double> SpectralCertificate::approx_spectrum() const {
  std::vector<double> out = level_spectrum;
  out.insert(out.end(), tail_sample.begin(), tail_sample.end());
  return out;
}

std::string SpectralCertificate::hausdorff_guarantee() const {
  std::ostringstream os;
  os << "d_H(sigma(T), sigma(T_" << truncation_level << ")) <= " << io::format_double(tail_bound)
     << "; sigma(T_" << truncation_level << ") is represented by sigma(A_" << truncation_level << ") and "
     << tail_sample.size() << " sampled tail terms, so the bound is stated against the sampled set only";
  return os.str();
}

SpectralCertificate certify_spectrum(const TruncationTower& tower, std::optional<std::size_t> tail_sample) {
  SpectralCertificate cert;
  const Eigen::Index n = tower.levels();
  cert.truncation_level = n;
  cert.tail_bound = tower_tail_bound(n);
  const VectorX<double> ev = eigenvalues(tower.matrices.back());
  cert.level_spectrum.assign(ev.data(), ev.data() + ev.size());
  const std::size_t m = tail_sample.value_or(static_cast<std::size_t>(10 * n));
  for (std::size_t i = 0; i < m; ++i) {
    const auto t = tower.sequence.term(static_cast<std::size_t>(n) + i);
    if (!t) break;
    cert.tail_sample.push_back(*t);
  }
  return cert;
}

std::vector<double> limit_points(std::vector<double> sample, double delta, const LimitPointOptions& opts) {
  if (!(delta > 0.0)) throw SiepError(ErrorKind::InvalidArgument, "limit_points needs delta > 0");
  std::sort(sample.begin(), sample.end());
  const std::size_t n = sample.size();
  const std::size_t k = opts.cluster_min;
  if (k == 0 || n <= k) return {};

  // radius[i]: distance from sample[i] to its k-th nearest other point.
  std::vector<double> radius(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i, hi = i;
    double r = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
      const double left = lo > 0 ? sample[i] - sample[lo - 1] : INFINITY;
      const double right = hi + 1 < n ? sample[hi + 1] - sample[i] : INFINITY;
      if (left <= right) {
        r = left;
        --lo;
      } else {
        r = right;
        ++hi;
      }
    }
    radius[i] = r;
  }

  std::vector<double> sites;
  std::size_t i = 0;
  while (i < n) {
    if (!(radius[i] <= delta)) {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (end < n && radius[end] <= delta && sample[end] - sample[end - 1] <= delta) ++end;
    const double floor = *std::min_element(radius.begin() + static_cast<std::ptrdiff_t>(i),
                                           radius.begin() + static_cast<std::ptrdiff_t>(end));
    for (std::size_t t = i; t < end; ++t)
      if (radius[t] <= opts.plateau_factor * floor) sites.push_back(sample[t]);
    i = end;
  }

  std::vector<double> reps;
  for (std::size_t s = 0; s < sites.size();) {
    std::size_t e = s;
    double sum = 0.0;
    while (e < sites.size() && sites[e] - sites[s] <= delta) sum += sites[e++];
    const double mean = sum / static_cast<double>(e - s);
    if (reps.empty() || mean - reps.back() >= delta) reps.push_back(mean);
    s = e;
  }
  return reps;
}

SpectralFingerprint fingerprint(const SpectralCertificate& cert, std::optional<double> delta,
                                const LimitPointOptions& opts) {
  SpectralFingerprint fp;
  fp.delta = delta.value_or(2.0 * cert.tail_bound);
  std::vector<double> sample = cert.approx_spectrum();
  std::sort(sample.begin(), sample.end());
  fp.essential_spectrum_estimate = limit_points(sample, fp.delta, opts);
  fp.compact_perturbation_of_scalar = fp.essential_spectrum_estimate.size() == 1;

  const double window = cert.tail_bound + fp.delta / 2.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double x = sample[i];
    const bool lonely = (i == 0 || x - sample[i - 1] > fp.delta) && (i + 1 == sample.size() || sample[i + 1] - x > fp.delta);
    if (!lonely) continue;
    bool near_essential = false;
    for (double e : fp.essential_spectrum_estimate) near_essential |= std::abs(x - e) <= fp.delta;
    if (near_essential) continue;
    const auto lo = std::lower_bound(sample.begin(), sample.end(), x - window);
    const auto hi = std::upper_bound(sample.begin(), sample.end(), x + window);
    fp.isolated_points.push_back({x, static_cast<int>(hi - lo)});
  }
  return fp;
}

namespace {

bool near_any(double x, const std::vector<double>& set, double r) {
  for (double s : set)
    if (std::abs(x - s) <= r) return true;
  return false;
}

void match_isolated(const SpectralFingerprint& from, const SpectralFingerprint& to, const char* from_name,
                    const char* to_name, double r, EquivalenceVerdict& out) {
  for (const auto& p : from.isolated_points) {
    if (near_any(p.value, to.essential_spectrum_estimate, r)) continue;
    const IsolatedPoint* match = nullptr;
    for (const auto& q : to.isolated_points)
      if (std::abs(p.value - q.value) <= r) match = &q;
    std::ostringstream os;
    os.precision(17);
    if (!match) {
      os << "isolated point " << p.value << " of " << from_name << " has no counterpart in " << to_name;
      out.reasons.push_back(os.str());
    } else if (match->multiplicity != p.multiplicity) {
      os << "isolated point " << p.value << " has multiplicity " << p.multiplicity << " in " << from_name << " but "
         << match->multiplicity << " in " << to_name;
      out.reasons.push_back(os.str());
    }
  }
}

}  // namespace

EquivalenceVerdict compare_fingerprints(const SpectralFingerprint& a, const SpectralFingerprint& b) {
  EquivalenceVerdict out;
  const double r = std::max(a.delta, b.delta);
  const auto& ea = a.essential_spectrum_estimate;
  const auto& eb = b.essential_spectrum_estimate;
  if (ea.empty() != eb.empty()) {
    out.reasons.push_back("one essential spectrum estimate is empty and the other is not");
  } else if (!ea.empty()) {
    const double d = hausdorff_distance<double>(ea, eb);
    if (!(d <= r)) {
      std::ostringstream os;
      os.precision(17);
      os << "essential spectrum estimates are " << d << " apart (resolution " << r << ")";
      out.reasons.push_back(os.str());
    }
  }
  match_isolated(a, b, "first", "second", r, out);
  match_isolated(b, a, "second", "first", r, out);
  out.equivalent = out.reasons.empty();
  return out;
}

}  // namespace siep
