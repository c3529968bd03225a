#include "siep/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "siep/errors.hpp"
#include "siep/io.hpp"
#include "siep/linalg.hpp"
#include "siep/oracle.hpp"

namespace siep::artifacts {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

std::string fmt(double v) { return io::format_double(v); }

json edges_to_json(const std::vector<Edge>& edges) {
  json out = json::array();
  for (const auto& e : edges) out.push_back({e.i, e.j});
  return out;
}

json load_json(const fs::path& path) {
  const std::string text = io::load_text(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw io::ParseError(path.string() + ": " + e.what());
  }
}

FiniteGraph prefix_of(const FiniteGraph& g, Vertex n) {
  std::vector<Edge> edges;
  for (const auto& e : g.edges())
    if (e.j < n) edges.push_back(e);
  return FiniteGraph(n, std::move(edges));
}

// Collects failures of one named check; at most a handful are spelled out.
class CheckBuilder {
 public:
  explicit CheckBuilder(std::string name) : name_(std::move(name)) {}
  void fail(const std::string& what) {
    if (++failures_ <= 5) details_ += (details_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& what) { note_ = what; }
  Check done() const {
    Check c{name_, failures_ == 0, note_};
    if (failures_) {
      c.detail = details_;
      if (failures_ > 5) c.detail += "; ... " + std::to_string(failures_ - 5) + " more";
    }
    return c;
  }

 private:
  std::string name_;
  std::string details_;
  std::string note_;
  int failures_ = 0;
};

bool same_offdiagonal_block(const SymMatrixd& small, const SymMatrixd& big) {
  for (Eigen::Index i = 0; i < small.order(); ++i)
    for (Eigen::Index j = i + 1; j < small.order(); ++j)
      if (std::bit_cast<std::uint64_t>(small(i, j)) != std::bit_cast<std::uint64_t>(big(i, j))) return false;
  return true;
}

std::vector<double> sorted_eigenvalues(const SymMatrixd& a) {
  const VectorX<double> ev = eigenvalues(a);
  return {ev.data(), ev.data() + ev.size()};
}

// Per-level checks shared by solutions and towers. `lambdas[k]` is the value
// appended at level k + 1; `records` holds the stored step records.
void verify_levels(const std::vector<SymMatrixd>& levels, const FiniteGraph& g, const std::vector<double>& lambdas,
                   const json& records, const SiepOptions& opts, std::vector<Check>& out) {
  CheckBuilder orders("level orders"), pattern("level patterns"), spectra("level spectra"), wsp("level WSP"),
      exact("level WSP, exact arithmetic (orders <= 6)"), budgets("step budgets"), deltas("recorded deltas"),
      immutable("old entries unchanged"), recs("step records");

  if (records.size() != levels.size())
    recs.fail(std::to_string(records.size()) + " records for " + std::to_string(levels.size()) + " levels");

  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto order = static_cast<Eigen::Index>(k + 1);
    const SymMatrixd& a = levels[k];
    const std::string at = "level " + std::to_string(order);
    if (a.order() != order) {
      orders.fail(at + " has order " + std::to_string(a.order()));
      continue;
    }

    const auto report = validate_pattern(a, prefix_of(g, order), opts.edge_floor);
    if (!report.ok) pattern.fail(at + ": " + describe(report.violations.front()));

    const std::span<const double> prefix(lambdas.data(), k + 1);
    const auto ev = sorted_eigenvalues(a);
    const double dist = hausdorff_distance<double>(ev, prefix);
    if (!(dist <= opts.spectrum_tol * spectrum_scale(prefix))) spectra.fail(at + " misses its spectrum by " + fmt(dist));

    const auto cert = has_wsp(a, opts.wsp_tol);
    if (!cert.holds) wsp.fail(at + " has kernel dimension " + std::to_string(cert.kernel_dimension));
    if (order <= 6) {
      const auto ker = oracle::wsp_exact(a);
      if (ker.dimension != 0) exact.fail(at + " has exact kernel dimension " + std::to_string(ker.dimension));
    }

    if (k < records.size()) {
      const json& r = records[k];
      if (r.at("step_index").get<long>() != order) recs.fail(at + ": wrong step_index");
      if (r.at("appended_eigenvalue").get<double>() != lambdas[k]) recs.fail(at + ": wrong appended eigenvalue");
      if (!r.at("wsp").at("holds").get<bool>()) recs.fail(at + ": record claims WSP fails");
      std::vector<Edge> expected;
      for (Vertex j : g.lower_neighbors(order - 1)) expected.push_back({j, order - 1});
      std::vector<Edge> stored;
      for (const auto& e : r.at("new_edges")) stored.push_back({e.at(0).get<long>(), e.at(1).get<long>()});
      if (stored != expected) recs.fail(at + ": new edges differ from the graph");
    }

    if (k == 0) continue;
    const SymMatrixd& prev = levels[k - 1];
    if (prev.order() != order - 1) continue;
    if (!same_offdiagonal_block(prev, a)) immutable.fail(at + " rewrote an off-diagonal entry of level " + std::to_string(order - 1));

    const double delta = operator_norm_difference(a, append_diagonal(prev, lambdas[k]));
    const double expected_budget = opts.budget(order);
    if (!(delta < expected_budget)) budgets.fail(at + ": delta " + fmt(delta) + " >= budget " + fmt(expected_budget));
    if (k < records.size()) {
      const json& r = records[k];
      if (r.at("budget").get<double>() != expected_budget)
        budgets.fail(at + ": recorded budget " + fmt(r.at("budget").get<double>()) + " differs from the schedule");
      const double recorded = r.at("achieved_norm_delta").get<double>();
      if (!(std::abs(recorded - delta) <= 1e-12 * std::max(1.0, delta)))
        deltas.fail(at + ": recorded " + fmt(recorded) + ", recomputed " + fmt(delta));
    }
  }
  for (const auto* c : {&orders, &pattern, &spectra, &wsp, &exact, &budgets, &deltas, &immutable, &recs})
    out.push_back(c->done());
}

std::vector<SymMatrixd> load_levels(const fs::path& dir, Eigen::Index n) {
  std::vector<SymMatrixd> out;
  for (Eigen::Index k = 1; k <= n; ++k) out.push_back(io::load_coo_sym(dir / level_file_name(k)));
  return out;
}

VerifyReport verify_solution(const fs::path& dir) {
  VerifyReport rep;
  rep.kind = "solution";
  const json sol = load_json(dir / "solution.json");
  const SiepOptions opts = options_from_json(sol.at("options"));
  const FiniteGraph g = io::load_graph_json(dir / "graph.json");
  const SymMatrixd a = io::load_coo_sym(dir / "matrix.coo");
  const auto lambdas = sol.at("target_spectrum").get<std::vector<double>>();

  CheckBuilder shape("shape");
  if (a.order() != g.n()) shape.fail("matrix order " + std::to_string(a.order()) + " vs graph order " + std::to_string(g.n()));
  if (static_cast<Vertex>(lambdas.size()) != g.n()) shape.fail(std::to_string(lambdas.size()) + " target eigenvalues");
  rep.checks.push_back(shape.done());
  if (!rep.checks.back().passed) return rep;

  CheckBuilder pattern("pattern");
  const auto report = validate_pattern(a, g, opts.edge_floor);
  for (const auto& v : report.violations) pattern.fail(describe(v));
  rep.checks.push_back(pattern.done());

  CheckBuilder spectrum("spectrum");
  const double dist = hausdorff_distance<double>(sorted_eigenvalues(a), lambdas);
  const double allowed = opts.spectrum_tol * spectrum_scale(lambdas);
  if (!(dist <= allowed)) spectrum.fail("distance " + fmt(dist) + " exceeds " + fmt(allowed));
  spectrum.note("distance " + fmt(dist));
  rep.checks.push_back(spectrum.done());

  CheckBuilder charpoly("characteristic polynomial oracle");
  if (a.order() <= 12) {
    for (const auto& f : oracle::charpoly_spectrum_check(a, lambdas, opts.spectrum_tol).failures) charpoly.fail(f);
  } else {
    charpoly.note("skipped above order 12");
  }
  rep.checks.push_back(charpoly.done());

  const auto levels = load_levels(dir / "levels", g.n());
  CheckBuilder last("final level equals matrix");
  if (!(levels.back() == a)) last.fail("matrix.coo differs from the last level");
  rep.checks.push_back(last.done());
  verify_levels(levels, g, lambdas, sol.at("steps"), opts, rep.checks);
  return rep;
}

VerifyReport verify_tower(const fs::path& dir) {
  VerifyReport rep;
  rep.kind = "tower";
  const json tw = load_json(dir / "tower.json");
  const SiepOptions opts = options_from_json(tw.at("options"));
  const auto n = tw.at("levels").get<Eigen::Index>();
  if (n < 1) throw io::ParseError("tower.json: levels must be positive");
  const auto terms = tw.at("terms").get<std::vector<double>>();
  const DenseSequence seq = DenseSequence::parse(tw.at("sequence").get<std::string>());

  CheckBuilder sequence("sequence terms");
  try {
    if (seq.first(static_cast<std::size_t>(n + 1)) != terms) sequence.fail("stored terms differ from the sequence");
  } catch (const SiepError& e) {
    sequence.fail(e.what());
  }
  rep.checks.push_back(sequence.done());

  LowerAdjacencyStream stored_graph = io::load_ladj(dir / "graph.ladj");
  const FiniteGraph g = induced_prefix(stored_graph, n);
  CheckBuilder family("graph matches its family");
  const auto header = tw.at("graph_header").get<std::string>();
  {
    std::istringstream hs(header);
    LowerAdjacencyStream declared = io::read_ladj(hs);
    if (declared.source() == GraphFamily::file) {
      family.note("file graph; nothing to regenerate");
    } else {
      try {
        if (!(induced_prefix(declared, n) == g)) family.fail("graph.ladj differs from " + header);
      } catch (const SiepError& e) {
        family.fail(e.what());
      }
    }
  }
  rep.checks.push_back(family.done());

  const auto levels = load_levels(dir, n);
  if (static_cast<Eigen::Index>(terms.size()) < n) throw io::ParseError("tower.json: too few terms");
  verify_levels(levels, g, terms, tw.at("steps"), opts, rep.checks);

  CheckBuilder chain("chain bound delta_n < 2^-n");
  const auto stored_deltas = tw.at("step_norm_deltas").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(stored_deltas.size()) != n - 1) chain.fail("wrong number of deltas");
  for (Eigen::Index k = 1; k < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double delta = operator_norm_difference(levels[ku], append_diagonal(levels[ku - 1], terms[ku]));
    if (!(delta < std::ldexp(1.0, -static_cast<int>(k))))
      chain.fail("delta_" + std::to_string(k) + " = " + fmt(delta));
    if (ku - 1 < stored_deltas.size() && !(std::abs(stored_deltas[ku - 1] - delta) <= 1e-12 * std::max(1.0, delta)))
      chain.fail("stored delta_" + std::to_string(k) + " differs from recomputed");
  }
  rep.checks.push_back(chain.done());

  CheckBuilder telescope("telescoping bound");
  for (Eigen::Index m = 1; m < n; ++m) {
    SymMatrixd padded = levels[static_cast<std::size_t>(m - 1)];
    for (Eigen::Index k = m; k < n; ++k) padded = append_diagonal(padded, terms[static_cast<std::size_t>(k)]);
    const double d = operator_norm_difference(levels.back(), padded);
    double bound = 0.0;
    for (Eigen::Index k = m; k < n; ++k) bound += std::ldexp(1.0, -static_cast<int>(k));
    if (!(d <= bound)) telescope.fail("level " + std::to_string(m) + ": " + fmt(d) + " > " + fmt(bound));
  }
  rep.checks.push_back(telescope.done());

  const json& c = tw.at("certificate");
  SpectralCertificate cert;
  cert.truncation_level = n;
  cert.tail_bound = tower_tail_bound(n);
  cert.level_spectrum = sorted_eigenvalues(levels.back());
  const auto tail_size = c.at("tail_sample_size").get<std::size_t>();
  for (std::size_t i = 0; i < tail_size; ++i)
    if (const auto t = seq.term(static_cast<std::size_t>(n) + i)) cert.tail_sample.push_back(*t);

  CheckBuilder tail("tail bound");
  if (c.at("tail_bound").get<double>() != cert.tail_bound)
    tail.fail("stored " + fmt(c.at("tail_bound").get<double>()) + ", expected " + fmt(cert.tail_bound));
  rep.checks.push_back(tail.done());

  CheckBuilder level_spec("certified level spectrum");
  const auto stored_spec = c.at("level_spectrum").get<std::vector<double>>();
  if (stored_spec.size() != cert.level_spectrum.size()) {
    level_spec.fail("wrong size");
  } else {
    for (std::size_t i = 0; i < stored_spec.size(); ++i)
      if (!(std::abs(stored_spec[i] - cert.level_spectrum[i]) <= 1e-12 * spectrum_scale(terms)))
        level_spec.fail("eigenvalue " + std::to_string(i) + " stored " + fmt(stored_spec[i]));
  }
  rep.checks.push_back(level_spec.done());

  CheckBuilder contain("spectrum containment");
  const auto approx = cert.approx_spectrum();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = terms[static_cast<std::size_t>(i)];
    double best = INFINITY;
    for (double y : approx) best = std::min(best, std::abs(x - y));
    if (!(best <= cert.tail_bound)) contain.fail("lambda_" + std::to_string(i + 1) + " is " + fmt(best) + " away");
  }
  rep.checks.push_back(contain.done());

  const json& fj = tw.at("fingerprint");
  const SpectralFingerprint stored_fp = fingerprint_from_json(fj);
  const SpectralFingerprint fp = fingerprint(cert, stored_fp.delta);
  CheckBuilder fpc("fingerprint");
  if (stored_fp.delta != 2.0 * cert.tail_bound && !fj.value("delta_overridden", false))
    fpc.fail("delta is not 2*tail_bound");
  if (fp.essential_spectrum_estimate != stored_fp.essential_spectrum_estimate)
    fpc.fail("essential spectrum estimate differs");
  if (fp.isolated_points.size() != stored_fp.isolated_points.size()) {
    fpc.fail("isolated point count differs");
  } else {
    for (std::size_t i = 0; i < fp.isolated_points.size(); ++i) {
      const auto& p = fp.isolated_points[i];
      const auto& q = stored_fp.isolated_points[i];
      if (p.value != q.value || p.multiplicity != q.multiplicity) fpc.fail("isolated point " + fmt(q.value) + " differs");
      if (q.multiplicity < 1) fpc.fail("non-positive multiplicity at " + fmt(q.value));
    }
  }
  if (fp.compact_perturbation_of_scalar != stored_fp.compact_perturbation_of_scalar)
    fpc.fail("compact-perturbation flag differs");
  rep.checks.push_back(fpc.done());
  rep.fingerprint = fp;
  return rep;
}

}  // namespace

std::string level_file_name(Eigen::Index level) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "level_%04ld.coo", static_cast<long>(level));
  return buf;
}

json options_to_json(const SiepOptions& opts) {
  if (opts.budget_schedule) throw SiepError(ErrorKind::InvalidArgument, "a custom budget schedule cannot be stored");
  return {{"budget_cap", number_or_null(opts.user_budget)},
          {"budget_decay", opts.budget_decay},
          {"edge_floor", opts.edge_floor},
          {"tol", opts.tol},
          {"spectrum_tol", opts.spectrum_tol},
          {"wsp_tol", opts.wsp_tol},
          {"collision_gap", opts.collision_gap},
          {"newton_system", opts.system == NewtonSystem::spectral ? "spectral" : "power_sums"}};
}

SiepOptions options_from_json(const json& j) {
  SiepOptions o;
  o.user_budget = number_or_inf(j.at("budget_cap"));
  o.budget_decay = j.at("budget_decay").get<double>();
  o.edge_floor = j.at("edge_floor").get<double>();
  o.tol = j.at("tol").get<double>();
  o.spectrum_tol = j.at("spectrum_tol").get<double>();
  o.wsp_tol = j.at("wsp_tol").get<double>();
  o.collision_gap = j.at("collision_gap").get<double>();
  o.system = j.at("newton_system").get<std::string>() == "power_sums" ? NewtonSystem::power_sums : NewtonSystem::spectral;
  return o;
}

json step_to_json(const StepRecord& rec) {
  return {{"step_index", rec.step_index},
          {"appended_eigenvalue", rec.appended_eigenvalue},
          {"new_edges", edges_to_json(rec.new_edges)},
          {"edge_values", rec.edge_values},
          {"budget", number_or_null(rec.budget)},
          {"achieved_norm_delta", rec.achieved_norm_delta},
          {"wsp",
           {{"holds", rec.wsp.holds},
            {"kernel_dimension", rec.wsp.kernel_dimension},
            {"smallest_kept_singular_value", rec.wsp.smallest_kept_singular_value},
            {"largest_dropped_singular_value", rec.wsp.largest_dropped_singular_value}}},
          {"newton",
           {{"converged", rec.newton.converged},
            {"iterations", rec.newton.iterations},
            {"final_residual", rec.newton.final_residual},
            {"jacobian_condition_estimate", number_or_null(rec.newton.jacobian_condition_estimate)},
            {"continuation_steps", rec.newton.continuation_steps},
            {"scale", rec.newton.scale}}}};
}

json fingerprint_to_json(const SpectralFingerprint& fp) {
  json iso = json::array();
  for (const auto& p : fp.isolated_points) iso.push_back({{"value", p.value}, {"multiplicity", p.multiplicity}});
  return {{"delta", fp.delta},
          {"essential_spectrum_estimate", fp.essential_spectrum_estimate},
          {"isolated_points", iso},
          {"compact_perturbation_of_scalar", fp.compact_perturbation_of_scalar}};
}

SpectralFingerprint fingerprint_from_json(const json& j) {
  SpectralFingerprint fp;
  fp.delta = j.at("delta").get<double>();
  fp.essential_spectrum_estimate = j.at("essential_spectrum_estimate").get<std::vector<double>>();
  for (const auto& p : j.at("isolated_points"))
    fp.isolated_points.push_back({p.at("value").get<double>(), p.at("multiplicity").get<int>()});
  fp.compact_perturbation_of_scalar = j.at("compact_perturbation_of_scalar").get<bool>();
  return fp;
}

void write_solution(const fs::path& dir, const SiepSolution& sol, const SiepOptions& opts, std::uint64_t seed) {
  fs::create_directories(dir / "levels");
  json steps = json::array();
  for (const auto& r : sol.per_step) steps.push_back(step_to_json(r));
  const auto ev = sorted_eigenvalues(sol.matrix);
  const json doc = {{"kind", "siep-solution"},
                    {"seed", seed},
                    {"options", options_to_json(opts)},
                    {"n", sol.graph.n()},
                    {"target_spectrum", sol.target_spectrum},
                    {"achieved_spectrum", ev},
                    {"spectrum_distance", hausdorff_distance<double>(ev, sol.target_spectrum)},
                    {"steps", steps}};
  io::save_text(dir / "solution.json", doc.dump(2) + "\n");
  io::save_text(dir / "graph.json", io::graph_to_json(sol.graph).dump() + "\n");
  io::save_coo_sym(dir / "matrix.coo", sol.matrix);
  for (std::size_t k = 0; k < sol.levels.size(); ++k)
    io::save_coo_sym(dir / "levels" / level_file_name(static_cast<Eigen::Index>(k + 1)), sol.levels[k]);
}

void write_tower(const fs::path& dir, const TowerArtifact& art, const TowerOptions& opts, std::uint64_t seed) {
  fs::create_directories(dir);
  const TruncationTower& t = art.tower;
  json steps = json::array();
  for (const auto& r : t.steps) steps.push_back(step_to_json(r));
  json fp = fingerprint_to_json(art.fingerprint);
  if (art.fingerprint.delta != 2.0 * art.certificate.tail_bound) fp["delta_overridden"] = true;
  const json doc = {{"kind", "siep-tower"},
                    {"seed", seed},
                    {"options", options_to_json(opts.siep)},
                    {"sequence", t.sequence.describe()},
                    {"sequence_bound", t.sequence.bound()},
                    {"declared_limit_points", t.sequence.declared_limit_points()},
                    {"graph_header", t.graph_header},
                    {"levels", t.levels()},
                    {"terms", t.terms},
                    {"step_norm_deltas", t.step_norm_deltas},
                    {"budgets", t.budgets},
                    {"steps", steps},
                    {"certificate",
                     {{"truncation_level", art.certificate.truncation_level},
                      {"level_spectrum", art.certificate.level_spectrum},
                      {"tail_sample_size", art.certificate.tail_sample.size()},
                      {"tail_bound", art.certificate.tail_bound},
                      {"hausdorff_guarantee", art.certificate.hausdorff_guarantee()}}},
                    {"fingerprint", fp}};
  io::save_text(dir / "tower.json", doc.dump(2) + "\n");

  std::ostringstream ladj;
  ladj << t.graph_header << '\n';
  for (const auto& row : t.lower_adjacency) {
    for (std::size_t i = 0; i < row.size(); ++i) ladj << (i ? " " : "") << row[i];
    ladj << '\n';
  }
  io::save_text(dir / "graph.ladj", ladj.str());
  for (std::size_t k = 0; k < t.matrices.size(); ++k)
    io::save_coo_sym(dir / level_file_name(static_cast<Eigen::Index>(k + 1)), t.matrices[k]);
}

bool VerifyReport::ok() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

VerifyReport verify(const fs::path& dir) {
  try {
    if (fs::exists(dir / "solution.json")) return verify_solution(dir);
    if (fs::exists(dir / "tower.json")) return verify_tower(dir);
  } catch (const json::exception& e) {
    throw io::ParseError(dir.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw io::ParseError(dir.string() + ": " + e.what());
  }
  throw io::ParseError(dir.string() + " holds neither solution.json nor tower.json");
}

}  // namespace siep::artifacts
