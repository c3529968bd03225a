#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>

#include "siep/errors.hpp"
#include "siep/oracle.hpp"
#include "siep/siep.hpp"
#include "support.hpp"

using namespace siep;

namespace {

std::optional<SiepError> error_of(const auto& fn) {
  try {
    fn();
  } catch (const SiepError& e) {
    return e;
  }
  return std::nullopt;
}

SymMatrixd one_by_one(double v) { return SymMatrixd(MatrixX<double>::Constant(1, 1, v)); }

}  // namespace

TEST_SUITE("siep") {

TEST_CASE("default budget schedule") {
  SiepOptions o;
  CHECK(o.budget(1) == 1.0);
  CHECK(o.budget(12) == std::ldexp(1.0, -11));
  o.user_budget = 0.1;
  CHECK(o.budget(2) == 0.1);
  CHECK(o.budget(5) == 0.0625);
}

TEST_CASE("step_extend on [2] with lambda 5") {
  const std::vector<double> prev{2};
  const std::vector<Vertex> nbrs{0};
  const auto r = step_extend(one_by_one(2), prev, 5, nbrs, 0.5);
  const auto& a = r.matrix;
  // Border 0.5 / 4; then d0 + d1 = 7, d0 d1 - eps^2 = 10.
  const double eps = 0.125;
  CHECK(a(0, 1) == eps);
  const double d0 = (7 - std::sqrt(9 - 4 * eps * eps)) / 2;
  CHECK(std::abs(a(0, 0) - d0) < 1e-12);
  CHECK(std::abs(a(0, 0) + a(1, 1) - 7) < 1e-12);
  CHECK(std::abs(a(0, 0) * a(1, 1) - eps * eps - 10) < 1e-11);
  CHECK(r.record.wsp.holds);
  CHECK(r.record.achieved_norm_delta < 0.5);
  CHECK(r.record.new_edges == std::vector<Edge>{{0, 1}});
  CHECK(r.record.edge_values == std::vector<double>{eps});
}

TEST_CASE("step_extend without new edges is an exact direct sum") {
  const std::vector<double> prev{2};
  const auto r = step_extend(one_by_one(2), prev, 5, {}, 0.5);
  CHECK(r.matrix == append_diagonal(one_by_one(2), 5.0));
  CHECK(r.record.achieved_norm_delta == 0.0);
  CHECK(r.record.wsp.holds);
}

TEST_CASE("step_extend contract errors") {
  const std::vector<double> prev{2};
  const std::vector<Vertex> nbrs{0};
  SiepOptions o;
  CHECK(error_of([&] { step_extend(one_by_one(2), prev, 5, nbrs, 1e-11, o); })->kind() == ErrorKind::BudgetInfeasible);
  CHECK(error_of([&] { step_extend(one_by_one(2), prev, 2 + 1e-9, nbrs, 0.5, o); })->kind() ==
        ErrorKind::EigenvalueCollision);
  const auto b = siep::testing::non_wsp_example();
  const auto eb = siep::testing::reference_eigenvalues(b);
  const std::vector<Vertex> nb{1};
  CHECK(error_of([&] { step_extend(b, eb, 10, nb, 0.5, o); })->kind() == ErrorKind::WspLost);
  const auto err = error_of([&] { step_extend(one_by_one(2), prev, 5, nbrs, 0.5, o); });
  CHECK_FALSE(err);
}

TEST_CASE("solve_finite on the empty graph is diagonal") {
  const std::vector<double> l{1, 2, 3, 4};
  const auto sol = solve_finite(FiniteGraph(4, {}), l);
  VectorX<double> d(4);
  d << 1, 2, 3, 4;
  CHECK(sol.matrix == SymMatrixd::diagonal(d));
  for (const auto& r : sol.per_step) CHECK(r.achieved_norm_delta == 0.0);
}

TEST_CASE("solve_finite on the path P3") {
  const std::vector<double> l{0, 1, 2};
  const FiniteGraph g(3, {{0, 1}, {1, 2}});
  const auto sol = solve_finite(g, l);
  CHECK(validate_pattern(sol.matrix, g, 1e-10).ok);
  CHECK(sol.matrix(0, 1) != 0.0);
  CHECK(sol.matrix(1, 2) != 0.0);
  CHECK(sol.matrix(0, 2) == 0.0);
  const auto ev = siep::testing::reference_eigenvalues(sol.matrix);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(ev[k] - k) <= 1e-8);
  CHECK(oracle::charpoly_spectrum_check(sol.matrix, l, 1e-8).passed);
}

TEST_CASE("single edge {0,2} realizes the spectrum and pattern of the WSP example") {
  const double r2 = std::sqrt(2.0);
  const std::vector<double> l{3 - r2, 3, 3 + r2};
  const FiniteGraph g(3, {{0, 2}});
  const auto sol = solve_finite(g, l);
  const auto a = siep::testing::wsp_example();
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = i + 1; j < 3; ++j) CHECK((sol.matrix(i, j) != 0.0) == (a(i, j) != 0.0));
  const auto ev = siep::testing::reference_eigenvalues(sol.matrix);
  const auto ea = siep::testing::reference_eigenvalues(a);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(ev[k] - ea[k]) <= 1e-8);
  // Not the example matrix itself: the construction picks small edges.
  CHECK_FALSE(sol.matrix == a);
}

TEST_CASE("solve_finite argument errors") {
  const std::vector<double> dup{1, 2, 1};
  CHECK(error_of([&] { solve_finite(FiniteGraph(3, {{0, 1}}), dup); })->kind() == ErrorKind::DuplicateEigenvalues);
  const std::vector<double> two{1, 2};
  CHECK(error_of([&] { solve_finite(FiniteGraph(3, {}), two); })->kind() == ErrorKind::InvalidArgument);
}

TEST_CASE("step errors name the failing step") {
  // Border magnitude budget/4: 0.125 at order 2 clears the floor, 0.0625 at
  // order 3 does not.
  SiepOptions o;
  o.edge_floor = 0.1;
  const std::vector<double> l{0, 1, 2};
  const auto err = error_of([&] { solve_finite(FiniteGraph(3, {{0, 1}, {1, 2}}), l, o); });
  REQUIRE(err);
  CHECK(err->kind() == ErrorKind::BudgetInfeasible);
  CHECK(err->step() == 3);
}

TEST_CASE("random instances: pattern, spectrum, step records, old entries frozen") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const Vertex n = 2 + trial % 9;
    const auto g = siep::testing::random_connected_graph(rng, n);
    const auto l = siep::testing::random_spectrum(rng, static_cast<std::size_t>(n));
    const auto sol = solve_finite(g, l);
    const double spread = spectrum_scale(l);
    CHECK(validate_pattern(sol.matrix, g, 1e-10).ok);
    CHECK(hausdorff_distance<double>(siep::testing::reference_eigenvalues(sol.matrix), l) <= 1e-8 * spread);
    for (const auto& r : sol.per_step) {
      CHECK(r.wsp.holds);
      CHECK(r.achieved_norm_delta < r.budget);
    }
    for (std::size_t k = 1; k < sol.levels.size(); ++k) {
      const auto& prev = sol.levels[k - 1];
      for (Eigen::Index i = 0; i < prev.order(); ++i)
        for (Eigen::Index j = i + 1; j < prev.order(); ++j)
          CHECK(std::bit_cast<std::uint64_t>(prev(i, j)) == std::bit_cast<std::uint64_t>(sol.levels[k](i, j)));
    }
  }
}

TEST_CASE("power-sum Newton system solves small instances too") {
  SiepOptions o;
  o.system = NewtonSystem::power_sums;
  const std::vector<double> l{-1, 0.5, 2, 3};
  const FiniteGraph g(4, {{0, 1}, {1, 2}, {0, 3}, {2, 3}});
  const auto sol = solve_finite(g, l, o);
  CHECK(validate_pattern(sol.matrix, g, 1e-10).ok);
  CHECK(hausdorff_distance<double>(siep::testing::reference_eigenvalues(sol.matrix), l) <= 1e-8 * 4);
}

}  // TEST_SUITE
