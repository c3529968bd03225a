#ifndef SIEP_ORACLE_HPP
#define SIEP_ORACLE_HPP

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "siep/sym_matrix.hpp"

namespace siep::oracle {

/// Big-integer rational; always reduced with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using RationalMatrix = std::vector<std::vector<Rational>>;

/// Exact value of a finite double.
Rational to_rational(double x);

struct ExactKernel {
  Eigen::Index dimension = 0;
  /// Zero-diagonal symmetric matrices spanning {X : X∘I = O, [X, A] = O}.
  std::vector<RationalMatrix> basis;
};

/// Reduced row echelon form by fraction arithmetic; returns the pivot columns.
std::vector<std::size_t> rref(RationalMatrix& m);

/// Null space of the WSP constraint system, computed without rounding.
/// Orders above 8 are rejected.
ExactKernel wsp_exact(const SymMatrixd& a);

/// Coefficients c_0..c_n of det(tI − A), ascending, from the Faddeev–LeVerrier
/// recursion with compensated trace sums. `traces[k-1]` = tr(A·M_k).
struct CharacteristicPolynomial {
  std::vector<double> coefficients;
  std::vector<double> traces;

  double operator()(double t) const;
  /// Rounding bound for evaluating at t: n·u·Σ|c_k||t|^k scaled.
  double evaluation_bound(double t) const;
};

CharacteristicPolynomial faddeev_leverrier(const SymMatrixd& a);

struct CharpolyCheck {
  bool passed = false;
  std::vector<std::string> failures;
};

/// Checks each claimed root through |p(λ_i)| <= tol·max(1,max|λ|)·Π_{j≠i}|λ_i − λ_j|
/// (plus evaluation rounding), and that p changes sign between consecutive
/// claimed roots. Orders above 12 are rejected.
CharpolyCheck charpoly_spectrum_check(const SymMatrixd& a, const std::vector<double>& claimed, double tol);

}  // namespace siep::oracle

#endif  // SIEP_ORACLE_HPP
