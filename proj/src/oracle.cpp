#include "siep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "siep/errors.hpp"
#include "siep/wsp.hpp"

namespace siep::oracle {

using boost::multiprecision::cpp_int;

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw SiepError(ErrorKind::InvalidArgument, "non-rational (non-finite) entry");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  cpp_int num = scaled;
  if (exp >= 0) return Rational(num << exp);
  return Rational(num, cpp_int(1) << -exp);
}

std::vector<std::size_t> rref(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    const Rational inv = Rational(1) / m[r][c];
    for (auto& v : m[r]) v *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

ExactKernel wsp_exact(const SymMatrixd& a) {
  const Eigen::Index n = a.order();
  if (n > 8) throw SiepError(ErrorKind::InvalidArgument, "wsp_exact supports order <= 8");
  ExactKernel out;
  if (n < 2) return out;

  const Eigen::Index m = wsp_unknown_count(n);
  std::vector<std::vector<Rational>> entries(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = to_rational(a(i, j));
  auto at = [&](Eigen::Index i, Eigen::Index j) -> const Rational& {
    return entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  };

  // Same coefficients as wsp_coefficient, evaluated exactly.
  RationalMatrix sys(static_cast<std::size_t>(m), std::vector<Rational>(static_cast<std::size_t>(m)));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = p + 1; q < n; ++q) {
          Rational c = 0;
          if (i == p) c += at(q, j);
          if (i == q) c += at(p, j);
          if (j == q) c -= at(i, p);
          if (j == p) c -= at(i, q);
          sys[static_cast<std::size_t>(wsp_unknown_index(n, i, j))][static_cast<std::size_t>(wsp_unknown_index(n, p, q))] = c;
        }

  const auto pivots = rref(sys);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m), false);
  for (auto c : pivots) is_pivot[c] = true;

  for (std::size_t free = 0; free < static_cast<std::size_t>(m); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> x(static_cast<std::size_t>(m));
    x[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -sys[r][free];
    RationalMatrix mat(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto [p, q] = wsp_unknown_pair(n, k);
      mat[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = x[static_cast<std::size_t>(k)];
      mat[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)] = x[static_cast<std::size_t>(k)];
    }
    out.basis.push_back(std::move(mat));
  }
  out.dimension = static_cast<Eigen::Index>(out.basis.size());
  return out;
}

namespace {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

CharacteristicPolynomial faddeev_leverrier(const SymMatrixd& a) {
  const Eigen::Index n = a.order();
  CharacteristicPolynomial cp;
  cp.coefficients.assign(static_cast<std::size_t>(n + 1), 0.0);
  cp.coefficients[static_cast<std::size_t>(n)] = 1.0;
  MatrixX<double> mk = MatrixX<double>::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = a.dense() * mk;
    mk.diagonal().array() += cp.coefficients[static_cast<std::size_t>(n - k + 1)];
    const MatrixX<double> amk = a.dense() * mk;
    CompensatedSum tr;
    for (Eigen::Index i = 0; i < n; ++i) tr.add(amk(i, i));
    cp.traces.push_back(tr.value());
    cp.coefficients[static_cast<std::size_t>(n - k)] = -tr.value() / static_cast<double>(k);
  }
  return cp;
}

double CharacteristicPolynomial::operator()(double t) const {
  CompensatedSum acc;
  double power = 1.0;
  for (double c : coefficients) {
    acc.add(c * power);
    power *= t;
  }
  return acc.value();
}

double CharacteristicPolynomial::evaluation_bound(double t) const {
  const double n = static_cast<double>(coefficients.size());
  double mass = 0.0, power = 1.0;
  for (double c : coefficients) {
    mass += std::abs(c) * power;
    power *= std::abs(t);
  }
  return 64.0 * n * n * std::numeric_limits<double>::epsilon() * mass;
}

CharpolyCheck charpoly_spectrum_check(const SymMatrixd& a, const std::vector<double>& claimed, double tol) {
  if (a.order() > 12) throw SiepError(ErrorKind::InvalidArgument, "charpoly_spectrum_check supports order <= 12");
  CharpolyCheck out;
  const auto n = static_cast<std::size_t>(a.order());
  if (claimed.size() != n) {
    out.failures.push_back("claimed spectrum has " + std::to_string(claimed.size()) + " values for order " +
                           std::to_string(n));
    return out;
  }
  std::vector<double> roots = claimed;
  std::sort(roots.begin(), roots.end());
  const CharacteristicPolynomial p = faddeev_leverrier(a);
  double magnitude = 1.0;
  for (double r : roots) magnitude = std::max(magnitude, std::abs(r));

  for (std::size_t i = 0; i < n; ++i) {
    double derivative_scale = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) derivative_scale *= std::abs(roots[i] - roots[j]);
    const double value = p(roots[i]);
    const double allowed = tol * magnitude * derivative_scale + p.evaluation_bound(roots[i]);
    if (!(std::abs(value) <= allowed)) {
      std::ostringstream os;
      os.precision(17);
      os << "p(" << roots[i] << ") = " << value << " exceeds " << allowed;
      out.failures.push_back(os.str());
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double mid = 0.5 * (roots[i] + roots[i + 1]);
    const double value = p(mid);
    const bool expect_positive = (n - 1 - i) % 2 == 0;
    if (std::abs(value) > p.evaluation_bound(mid) && (value > 0.0) != expect_positive) {
      std::ostringstream os;
      os.precision(17);
      os << "no sign change of p between " << roots[i] << " and " << roots[i + 1];
      out.failures.push_back(os.str());
    }
  }
  out.passed = out.failures.empty();
  return out;
}

}  // namespace siep::oracle
