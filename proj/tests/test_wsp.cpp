#include <doctest.h>

#include <random>

#include "siep/linalg.hpp"
#include "siep/oracle.hpp"
#include "siep/wsp.hpp"
#include "support.hpp"

using namespace siep;
using siep::testing::wsp_example;
using siep::testing::non_wsp_example;

namespace {

double witness_residual(const WspCertificate& c, const SymMatrixd& a) {
  return commutator(*c.witness, a).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("wsp") {

TEST_CASE("unknown indexing round-trips") {
  for (Eigen::Index n = 2; n < 9; ++n)
    for (Eigen::Index k = 0; k < wsp_unknown_count(n); ++k) {
      const auto [p, q] = wsp_unknown_pair(n, k);
      CHECK(p < q);
      CHECK(wsp_unknown_index(n, p, q) == k);
    }
}

TEST_CASE("constraint matrix examples") {
  VectorX<double> d(2);
  d << 1, 2;
  const auto c12 = wsp_constraint_matrix(SymMatrixd::diagonal(d));
  REQUIRE(c12.rows() == 1);
  CHECK(c12(0, 0) == 1.0);
  d << 1, 1;
  CHECK(wsp_constraint_matrix(SymMatrixd::diagonal(d))(0, 0) == 0.0);

  // b - a = 0, a - 2b - c = 0, b + c = 0 has kernel (1, 1, -1).
  const auto cb = wsp_constraint_matrix(non_wsp_example());
  VectorX<double> x(3);
  x << 1, 1, -1;
  CHECK((cb * x).isZero(0.0));
  CHECK(Eigen::FullPivLU<MatrixX<double>>(cb).rank() == 2);
}

TEST_CASE("constraint matrix reproduces the commutator") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 7;
    const auto a = siep::testing::random_symmetric(rng, n);
    VectorX<double> x = VectorX<double>::Random(wsp_unknown_count(n));
    const SymMatrixd xm = wsp_unknowns_to_matrix(n, x);
    const MatrixX<double> comm = commutator(xm, a);
    const VectorX<double> lhs = wsp_constraint_matrix(a) * x;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j)
        CHECK(std::abs(lhs(wsp_unknown_index(n, i, j)) - comm(i, j)) <= 1e-12 * (1 + std::abs(comm(i, j))));
  }
}

TEST_CASE("worked examples") {
  const auto ca = has_wsp(wsp_example());
  CHECK(ca.holds);
  CHECK(ca.kernel_dimension == 0);
  CHECK_FALSE(ca.witness);

  const auto cb = has_wsp(non_wsp_example());
  CHECK_FALSE(cb.holds);
  CHECK(cb.kernel_dimension == 1);
  REQUIRE(cb.witness);
  CHECK(cb.witness->diagonal().isZero(0.0));
  CHECK(cb.witness->dense().norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(witness_residual(cb, non_wsp_example()) <= 1e-8 * std::max(1.0, operator_norm(non_wsp_example())));
  // Proportional to (x01, x02, x12) = (1, 1, -1).
  const auto& w = *cb.witness;
  CHECK(std::abs(w(0, 1) - w(0, 2)) < 1e-12);
  CHECK(std::abs(w(0, 1) + w(1, 2)) < 1e-12);
}

TEST_CASE("order one and scalar matrices") {
  CHECK(has_wsp(SymMatrixd::identity(1)).holds);
  for (Eigen::Index n = 2; n < 7; ++n) {
    const auto c = has_wsp(SymMatrixd(MatrixX<double>(3.5 * MatrixX<double>::Identity(n, n))));
    CHECK(c.kernel_dimension == wsp_unknown_count(n));
  }
}

TEST_CASE("2x2: WSP iff distinct diagonal") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 300; ++trial) {
    MatrixX<double> m(2, 2);
    m(0, 0) = u(rng);
    m(1, 1) = trial % 2 ? m(0, 0) : m(0, 0) + (trial % 4 == 0 ? 1e-3 : u(rng));
    m(0, 1) = m(1, 0) = u(rng);
    CHECK(has_wsp(SymMatrixd(m)).holds == (m(0, 0) != m(1, 1)));
  }
}

TEST_CASE("shift invariance") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = siep::testing::random_symmetric(rng, 2 + trial % 5);
    const SymMatrixd b(MatrixX<double>(a.dense() + u(rng) * MatrixX<double>::Identity(a.order(), a.order())));
    CHECK(has_wsp(a).holds == has_wsp(b).holds);
  }
}

TEST_CASE("constant diagonal fails, with A - cI in the kernel") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = 3 + trial % 4;
    auto a = siep::testing::random_symmetric(rng, n);
    const double c = u(rng);
    a = a.with_diagonal(VectorX<double>::Constant(n, c));
    const auto cert = has_wsp(a);
    CHECK_FALSE(cert.holds);
    const SymMatrixd x = a.with_diagonal(VectorX<double>::Zero(n));
    CHECK(commutator(x, a).cwiseAbs().maxCoeff() <= 1e-12 * x.dense().squaredNorm());
    CHECK(witness_residual(cert, a) <= 1e-8 * std::max(1.0, operator_norm(a)));
  }
}

TEST_CASE("direct sums of WSP matrices with disjoint spectra") {
  std::mt19937_64 rng(4);
  int tested = 0;
  while (tested < 40) {
    const auto a = siep::testing::random_symmetric(rng, 1 + tested % 4);
    const auto b = siep::testing::random_symmetric(rng, 1 + tested % 3);
    if (!has_wsp(a).holds || !has_wsp(b).holds) continue;
    const auto ea = eigenvalues(a), eb = eigenvalues(b);
    double gap = 1e300;
    for (Eigen::Index i = 0; i < ea.size(); ++i)
      for (Eigen::Index j = 0; j < eb.size(); ++j) gap = std::min(gap, std::abs(ea(i) - eb(j)));
    if (gap < 1e-3) continue;
    CHECK(has_wsp(direct_sum(a, b)).holds);
    ++tested;
  }
}

TEST_CASE("openness under small perturbations") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = siep::testing::random_symmetric(rng, 2 + trial % 5);
    const auto cert = has_wsp(a);
    if (!cert.holds) continue;
    const auto e = siep::testing::random_symmetric(rng, a.order(), -1, 1);
    const double scale = cert.smallest_kept_singular_value / 10 / operator_norm(e);
    CHECK(has_wsp(SymMatrixd(MatrixX<double>(a.dense() + scale * e.dense()))).holds);
  }
}

TEST_CASE("kernel dimension agrees with exact elimination on integral matrices") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 150; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    auto a = siep::testing::random_integral(rng, n, trial % 3 == 0 ? 1 : 4);
    CHECK(has_wsp(a).kernel_dimension == oracle::wsp_exact(a).dimension);
  }
}

}  // TEST_SUITE
