#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "siep/artifacts.hpp"
#include "siep/errors.hpp"
#include "siep/infinite.hpp"
#include "siep/io.hpp"
#include "siep/oracle.hpp"
#include "siep/siep.hpp"
#include "siep/wsp.hpp"

namespace {

using namespace siep;

constexpr int kParseError = 2;
constexpr int kSolverError = 3;

struct Tolerances {
  double edge_floor = 1e-10;
  double spectrum_tol = 1e-8;
  double wsp_tol = 1e-9;
  double tol = 1e-12;
  double budget = std::numeric_limits<double>::infinity();
  double budget_decay = 0.5;

  void attach(CLI::App* cmd) {
    cmd->add_option("--edge-floor", edge_floor, "Smallest admissible |edge entry|")->check(CLI::PositiveNumber);
    cmd->add_option("--spectrum-tol", spectrum_tol, "Relative spectrum tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--wsp-tol", wsp_tol, "Relative singular-value threshold for the WSP kernel")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", tol, "Relative power-sum tolerance for Newton")->check(CLI::PositiveNumber);
    cmd->add_option("--budget", budget, "Cap on every step's operator-norm budget")->check(CLI::PositiveNumber);
    cmd->add_option("--budget-decay", budget_decay, "Budget for order m is min(cap, decay^(m-1))")
        ->check(CLI::Range(0.0, 1.0));
  }

  SiepOptions options() const {
    SiepOptions o;
    o.edge_floor = edge_floor;
    o.spectrum_tol = spectrum_tol;
    o.wsp_tol = wsp_tol;
    o.tol = tol;
    o.user_budget = budget;
    o.budget_decay = budget_decay;
    return o;
  }
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SIEP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw io::ParseError(std::string("SIEP_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

void print_matrix(const SymMatrixd& a) {
  std::ostringstream os;
  io::write_coo_sym(os, a);
  std::cout << os.str();
}

int cmd_solve(const std::string& graph_file, const std::string& spectrum_file, const std::string& out_dir,
              const Tolerances& tols, std::uint64_t seed) {
  const FiniteGraph g = io::load_graph_json(graph_file);
  const auto lambdas = io::load_spectrum(spectrum_file);
  if (static_cast<Vertex>(lambdas.size()) != g.n()) {
    std::cerr << "error: graph has " << g.n() << " vertices but " << lambdas.size() << " eigenvalues were given\n";
    return kParseError;
  }
  const SiepOptions opts = tols.options();
  const SiepSolution sol = solve_finite(g, lambdas, opts);
  artifacts::write_solution(out_dir, sol, opts, seed);
  double dist = 0.0;
  {
    const VectorX<double> ev = eigenvalues(sol.matrix);
    dist = hausdorff_distance<double>(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())), lambdas);
  }
  std::cout << "solved order " << g.n() << " with " << g.edges().size() << " edges; spectrum distance "
            << io::format_double(dist) << "\n";
  for (const auto& r : sol.per_step)
    std::cout << "  step " << r.step_index << ": delta " << io::format_double(r.achieved_norm_delta) << " < budget "
              << io::format_double(r.budget) << ", WSP " << (r.wsp.holds ? "holds" : "FAILS") << "\n";
  std::cout << "wrote " << out_dir << "\n";
  return 0;
}

int cmd_wsp_check(const std::string& matrix_file, bool exact, double tol) {
  const SymMatrixd a = io::load_coo_sym(matrix_file);
  if (exact) {
    const auto ker = oracle::wsp_exact(a);
    std::cout << "wsp: " << (ker.dimension == 0 ? "holds" : "fails") << " (exact)\n";
    std::cout << "kernel_dimension: " << ker.dimension << "\n";
    if (!ker.basis.empty()) {
      std::cout << "witness (exact kernel basis element):\n";
      const auto& x = ker.basis.front();
      std::cout << a.order() << "\n";
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
          if (x[i][j] != 0) std::cout << i << ' ' << j << ' ' << x[i][j] << "\n";
    }
    return ker.dimension == 0 ? 0 : 1;
  }
  const WspCertificate cert = has_wsp(a, tol);
  std::cout << "wsp: " << (cert.holds ? "holds" : "fails") << "\n";
  std::cout << "kernel_dimension: " << cert.kernel_dimension << "\n";
  std::cout << "smallest_kept_singular_value: " << io::format_double(cert.smallest_kept_singular_value) << "\n";
  std::cout << "largest_dropped_singular_value: " << io::format_double(cert.largest_dropped_singular_value) << "\n";
  if (cert.witness) {
    const auto residual = commutator(*cert.witness, a).cwiseAbs().maxCoeff();
    std::cout << "witness_commutator_residual: " << io::format_double(residual) << "\n";
    std::cout << "witness:\n";
    print_matrix(*cert.witness);
  }
  return cert.holds ? 0 : 1;
}

struct TowerArgs {
  std::string family;
  std::string ladj_file;
  double p = 0.5;
  std::string sequence;
  std::string sequence_file;
  long levels = 0;
  std::optional<std::size_t> tail;
  std::optional<double> delta;
  std::string out_dir;
};

int cmd_tower(const TowerArgs& args, const Tolerances& tols, std::uint64_t seed) {
  LowerAdjacencyStream graph = [&] {
    if (!args.ladj_file.empty()) return io::load_ladj(args.ladj_file);
    const auto fam = parse_graph_family(args.family);
    if (!fam || *fam == GraphFamily::file) throw io::ParseError("unknown graph family '" + args.family + "'");
    return LowerAdjacencyStream::family(*fam, args.p, seed);
  }();
  DenseSequence seq = args.sequence_file.empty() ? DenseSequence::parse(args.sequence)
                                                 : DenseSequence::from_list(io::load_spectrum(args.sequence_file));

  TowerOptions opts;
  opts.siep = tols.options();
  artifacts::TowerArtifact art;
  art.tower = build_tower(graph, seq, args.levels, opts);
  art.certificate = certify_spectrum(art.tower, args.tail);
  art.fingerprint = fingerprint(art.certificate, args.delta);
  artifacts::write_tower(args.out_dir, art, opts, seed);

  const auto& t = art.tower;
  std::printf("%-6s %-24s %-24s %s\n", "level", "delta", "budget", "check");
  int passed = 0;
  for (std::size_t k = 0; k < t.step_norm_deltas.size(); ++k) {
    const bool ok = t.step_norm_deltas[k] < t.budgets[k];
    passed += ok;
    std::printf("%-6zu %-24s %-24s %s\n", k + 1, io::format_double(t.step_norm_deltas[k]).c_str(),
                io::format_double(t.budgets[k]).c_str(), ok ? "pass" : "FAIL");
  }
  std::cout << passed << "/" << t.step_norm_deltas.size() << " budget checks pass\n";
  std::cout << "tail_bound: " << io::format_double(art.certificate.tail_bound) << "\n";
  std::cout << art.certificate.hausdorff_guarantee() << "\n";
  std::cout << "essential spectrum estimate:";
  for (double e : art.fingerprint.essential_spectrum_estimate) std::cout << ' ' << io::format_double(e);
  std::cout << "\nisolated points: " << art.fingerprint.isolated_points.size() << "\n";
  if (art.fingerprint.compact_perturbation_of_scalar)
    std::cout << "tail is compact perturbation of " << io::format_double(art.fingerprint.essential_spectrum_estimate[0])
              << "*I\n";
  std::cout << "wrote " << args.out_dir << "\n";
  return 0;
}

int cmd_verify(const std::vector<std::string>& paths) {
  bool all_ok = true;
  std::vector<std::pair<std::string, SpectralFingerprint>> fps;
  for (const auto& path : paths) {
    artifacts::VerifyReport rep;
    try {
      rep = artifacts::verify(path);
    } catch (const std::exception& e) {
      std::cout << path << ": unreadable artifact: " << e.what() << "\nverification FAILED\n";
      all_ok = false;
      continue;
    }
    std::cout << path << " (" << rep.kind << ")\n";
    for (const auto& c : rep.checks) {
      std::cout << "  " << (c.passed ? "ok  " : "FAIL") << "  " << c.name;
      if (!c.detail.empty()) std::cout << ": " << c.detail;
      std::cout << "\n";
    }
    std::cout << (rep.ok() ? "verified\n" : "verification FAILED\n");
    all_ok = all_ok && rep.ok();
    if (rep.fingerprint) fps.emplace_back(path, *rep.fingerprint);
  }
  for (std::size_t i = 0; i < fps.size(); ++i)
    for (std::size_t j = i + 1; j < fps.size(); ++j) {
      const auto verdict = compare_fingerprints(fps[i].second, fps[j].second);
      std::cout << fps[i].first << " vs " << fps[j].first << ": "
                << (verdict.equivalent ? "approximately unitarily equivalent" : "not approximately unitarily equivalent")
                << "\n";
      for (const auto& r : verdict.reasons) std::cout << "  " << r << "\n";
    }
  return all_ok ? 0 : 1;
}

int cmd_families() {
  std::cout << "graph families (tower --graph):\n"
               "  path      vertex k joined to k-1\n"
               "  star      vertex k > 0 joined to 0\n"
               "  complete  vertex k joined to every earlier vertex\n"
               "  empty     no edges\n"
               "  random    each earlier vertex joined with probability --p, seeded by --seed/SIEP_SEED\n"
               "sequences (tower --seq):\n"
               "  harmonic                    1, 1/2, 1/3, ...\n"
               "  harmonic0                   0, 1, 1/2, 1/3, ...\n"
               "  dyadic:a,b                  a, b, then dyadic points of [a,b] in van der Corput order\n"
               "  converging:L1,L2,...;r=R    L_j + R/t, round-robin over j, t = 1, 2, ...\n"
               "  list:v1,v2,...              explicit finite list (also --seq-file)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric matrices with prescribed graph and spectrum"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::uint64_t> seed_flag;
  app.add_option("--seed", seed_flag, "Seed recorded in outputs; overrides SIEP_SEED");

  Tolerances solve_tols, tower_tols;
  std::string graph_file, spectrum_file, out_dir = "siep-solution";
  auto* solve = app.add_subcommand("solve", "Solve a finite problem");
  solve->add_option("--graph", graph_file, "Graph JSON {\"n\":..,\"edges\":[[i,j],..]}")->required();
  solve->add_option("--spectrum", spectrum_file, "Whitespace-separated eigenvalues")->required();
  solve->add_option("--out", out_dir, "Output directory");
  solve_tols.attach(solve);

  std::string matrix_file;
  bool exact = false;
  double wsp_tol = 1e-9;
  auto* wsp = app.add_subcommand("wsp-check", "Test the weak spectral property");
  wsp->add_option("matrix", matrix_file, "COO-SYM matrix file")->required();
  wsp->add_flag("--exact", exact, "Exact rational elimination (order <= 8)");
  wsp->add_option("--wsp-tol", wsp_tol, "Relative singular-value threshold")->check(CLI::PositiveNumber);

  TowerArgs targs;
  targs.out_dir = "siep-tower";
  auto* tower = app.add_subcommand("tower", "Build a truncation tower for an infinite problem");
  auto* g_family = tower->add_option("--graph", targs.family, "Graph family (see `families`)");
  auto* g_file = tower->add_option("--ladj", targs.ladj_file, "LADJ graph file");
  g_family->excludes(g_file);
  tower->add_option("--p", targs.p, "Edge probability for the random family")->check(CLI::Range(0.0, 1.0));
  auto* s_spec = tower->add_option("--seq", targs.sequence, "Sequence spec (see `families`)");
  auto* s_file = tower->add_option("--seq-file", targs.sequence_file, "Explicit sequence file");
  s_spec->excludes(s_file);
  tower->add_option("--levels", targs.levels, "Truncation level N")->required()->check(CLI::PositiveNumber);
  tower->add_option("--tail", targs.tail, "Tail sample size M (default 10*N)");
  tower->add_option("--delta", targs.delta, "Fingerprint resolution (default 2*tail_bound)")->check(CLI::PositiveNumber);
  tower->add_option("--out", targs.out_dir, "Output directory");
  tower_tols.attach(tower);

  std::vector<std::string> verify_paths;
  auto* verify = app.add_subcommand("verify", "Re-check stored certificates");
  verify->add_option("paths", verify_paths, "Solution or tower directories")->required();

  auto* families = app.add_subcommand("families", "List built-in graph families and sequences");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParseError;
  }

  try {
    const std::uint64_t seed = resolve_seed(seed_flag);
    if (*solve) return cmd_solve(graph_file, spectrum_file, out_dir, solve_tols, seed);
    if (*wsp) return cmd_wsp_check(matrix_file, exact, wsp_tol);
    if (*tower) {
      if (targs.family.empty() == targs.ladj_file.empty()) throw io::ParseError("tower needs --graph or --ladj");
      if (targs.sequence.empty() == targs.sequence_file.empty()) throw io::ParseError("tower needs --seq or --seq-file");
      return cmd_tower(targs, tower_tols, seed);
    }
    if (*verify) return cmd_verify(verify_paths);
    if (*families) return cmd_families();
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const SiepError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return e.kind() == ErrorKind::InvalidArgument ? kParseError : kSolverError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  }
  return 0;
}
