#include <doctest.h>

#include <cmath>
#include <random>

#include "siep/newton.hpp"
#include "siep/oracle.hpp"
#include "support.hpp"

using namespace siep;
using oracle::Rational;

TEST_SUITE("oracle") {

TEST_CASE("to_rational is exact") {
  CHECK(oracle::to_rational(0.5) == Rational(1, 2));
  CHECK(oracle::to_rational(-3.0) == Rational(-3));
  CHECK(oracle::to_rational(0.1) == Rational(3602879701896397, 36028797018963968));
  CHECK(oracle::to_rational(0.0) == 0);
  CHECK_THROWS(oracle::to_rational(INFINITY));
}

TEST_CASE("rref on a small system") {
  oracle::RationalMatrix m{{Rational(2), Rational(4)}, {Rational(1), Rational(3)}};
  const auto piv = oracle::rref(m);
  CHECK(piv == std::vector<std::size_t>{0, 1});
  CHECK(m[0][0] == 1);
  CHECK(m[0][1] == 0);
  CHECK(m[1][1] == 1);
}

TEST_CASE("wsp_exact examples") {
  CHECK(oracle::wsp_exact(siep::testing::wsp_example()).dimension == 0);
  const auto kb = oracle::wsp_exact(siep::testing::non_wsp_example());
  REQUIRE(kb.dimension == 1);
  const auto& x = kb.basis.front();
  // Proportional to (x01, x02, x12) = (1, 1, -1).
  CHECK(x[0][1] == x[0][2]);
  CHECK(x[1][2] == -x[0][1]);
  CHECK(x[0][1] != 0);
  for (Eigen::Index n = 2; n <= 5; ++n)
    CHECK(oracle::wsp_exact(SymMatrixd(MatrixX<double>(2 * MatrixX<double>::Identity(n, n)))).dimension ==
          n * (n - 1) / 2);
  CHECK_THROWS(oracle::wsp_exact(SymMatrixd::identity(9)));
}

TEST_CASE("exact kernel vectors commute exactly") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = siep::testing::random_integral(rng, 3 + trial % 3, 1);
    for (const auto& x : oracle::wsp_exact(a).basis) {
      const auto n = x.size();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          Rational c = 0;
          for (std::size_t k = 0; k < n; ++k)
            c += x[i][k] * oracle::to_rational(a(k, j)) - oracle::to_rational(a(i, k)) * x[k][j];
          CHECK(c == 0);
        }
    }
  }
}

TEST_CASE("charpoly examples") {
  VectorX<double> d(3);
  d << 1, 2, 3;
  const auto diag = SymMatrixd::diagonal(d);
  CHECK(oracle::charpoly_spectrum_check(diag, {1, 2, 3}, 1e-10).passed);
  CHECK_FALSE(oracle::charpoly_spectrum_check(diag, {1, 2, 4}, 1e-10).passed);
  CHECK_FALSE(oracle::charpoly_spectrum_check(diag, {1, 2}, 1e-10).passed);

  // (t - 3)(t^2 - 6t + 7) = t^3 - 9t^2 + 25t - 21
  const auto p = oracle::faddeev_leverrier(siep::testing::wsp_example());
  CHECK(p.coefficients == std::vector<double>{-21, 25, -9, 1});
  const double r2 = std::sqrt(2.0);
  CHECK(oracle::charpoly_spectrum_check(siep::testing::wsp_example(), {3 - r2, 3, 3 + r2}, 1e-10).passed);
  CHECK_THROWS(oracle::charpoly_spectrum_check(SymMatrixd::identity(13), std::vector<double>(13, 1.0), 1e-10));
}

TEST_CASE("Faddeev-LeVerrier traces agree with g_eval") {
  // tr(A M_k) from the recursion determines the power sums through Newton's
  // identities; compare the power sums rebuilt from the coefficients.
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + trial % 8;
    const auto a = siep::testing::random_symmetric(rng, n, -3, 3);
    const auto cp = oracle::faddeev_leverrier(a);
    const auto& c = cp.coefficients;
    std::vector<double> s(static_cast<std::size_t>(n) + 1, 0.0);
    for (Eigen::Index k = 1; k <= n; ++k) {
      // s_k = -k c_{n-k} - sum_{i=1}^{k-1} c_{n-k+i} s_i
      double v = -static_cast<double>(k) * c[static_cast<std::size_t>(n - k)];
      for (Eigen::Index i = 1; i < k; ++i) v -= c[static_cast<std::size_t>(n - k + i)] * s[static_cast<std::size_t>(i)];
      s[static_cast<std::size_t>(k)] = v;
    }
    const VectorX<double> g = g_eval(a);
    const auto ev = siep::testing::reference_eigenvalues(a);
    for (Eigen::Index k = 1; k <= n; ++k) {
      double mass = 0.0;
      for (double x : ev) mass += std::pow(std::abs(x), static_cast<double>(k));
      CHECK(std::abs(s[static_cast<std::size_t>(k)] / static_cast<double>(k) - g(k - 1)) <=
            1e-9 * std::max(1.0, mass / static_cast<double>(k)));
    }
  }
}

TEST_CASE("charpoly check accepts the reference eigenvalues of random matrices") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = siep::testing::random_symmetric(rng, 1 + trial % 12);
    CHECK(oracle::charpoly_spectrum_check(a, siep::testing::reference_eigenvalues(a), 1e-8).passed);
  }
}

}  // TEST_SUITE
