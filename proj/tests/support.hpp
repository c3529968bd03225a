#ifndef SIEP_TESTS_SUPPORT_HPP
#define SIEP_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "siep/graph.hpp"
#include "siep/sym_matrix.hpp"

namespace siep::testing {

inline SymMatrixd wsp_example() {
  MatrixX<double> m(3, 3);
  m << 4, 0, 1, 0, 3, 0, 1, 0, 2;
  return SymMatrixd(m);
}

inline SymMatrixd non_wsp_example() {
  MatrixX<double> m(3, 3);
  m << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  return SymMatrixd(m);
}

inline SymMatrixd random_symmetric(std::mt19937_64& rng, Eigen::Index n, double lo = -10.0, double hi = 10.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  MatrixX<double> m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  return SymMatrixd(m);
}

inline SymMatrixd random_integral(std::mt19937_64& rng, Eigen::Index n, int range = 5) {
  std::uniform_int_distribution<int> u(-range, range);
  MatrixX<double> m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  return SymMatrixd(m);
}

/// Ascending eigenvalues from Eigen's tridiagonal QR solver, independent of
/// the library's Jacobi sweeps.
inline std::vector<double> reference_eigenvalues(const SymMatrixd& a) {
  Eigen::SelfAdjointEigenSolver<MatrixX<double>> es(a.dense(), Eigen::EigenvaluesOnly);
  const auto& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

/// Random spanning tree plus extra edges with probability p.
inline FiniteGraph random_connected_graph(std::mt19937_64& rng, Vertex n, double p = 0.3) {
  std::vector<Edge> edges;
  std::bernoulli_distribution extra(p);
  for (Vertex k = 1; k < n; ++k) {
    std::uniform_int_distribution<Vertex> parent(0, k - 1);
    const Vertex par = parent(rng);
    edges.push_back({par, k});
    for (Vertex j = 0; j < k; ++j)
      if (j != par && extra(rng)) edges.push_back({j, k});
  }
  return FiniteGraph(n, edges);
}

/// n distinct values, shuffled, with max - min equal to a spread drawn from
/// [1, 100] and consecutive gaps at least spread / (5(n-1)).
inline std::vector<double> random_spectrum(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> spread_d(1.0, 100.0), center_d(-50.0, 50.0), u(0.0, 1.0);
  const double spread = spread_d(rng);
  std::vector<double> gaps(n > 1 ? n - 1 : 0);
  double total = 0.0;
  for (auto& g : gaps) total += (g = 0.25 + u(rng));
  std::vector<double> out{center_d(rng)};
  for (double g : gaps) out.push_back(out.back() + spread * g / total);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace siep::testing

#endif  // SIEP_TESTS_SUPPORT_HPP
