#include "mimo/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace mimo {

double f_lower(double x, const QuadratureRule& rule) {
  if (x < 0.0) throw std::invalid_argument("f_lower: x must be >= 0");
  const double root = std::sqrt(x);
  double integral = gauss_weighted_integral(
      [root](double a) { return std::tanh(root * a); }, 0.5 * root, rule);
  return 0.25 * (1.0 - integral);
}

double f_upper(double x) {
  if (x < 0.0) throw std::invalid_argument("f_upper: x must be >= 0");
  return q_function(std::sqrt(0.5 * x));
}

namespace {

void require_equiprobable(const Alphabet& a) {
  if (!a.equiprobable(1e-12)) {
    throw std::invalid_argument("lower bound derived for equiprobable inputs");
  }
}

}  // namespace

double mmse_lower_bound(const ReceivedConstellation& rc, const Alphabet& a,
                        Snr snr, const QuadratureRule& rule) {
  require_equiprobable(a);
  const std::size_t m = rc.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double d2 = rc.d2(i, j);
      if (d2 == 0.0) continue;  // degenerate pair contributes nothing
      acc += 2.0 * d2 * f_lower(snr.value * d2, rule);  // (i,j) and (j,i)
    }
  }
  return acc / (static_cast<double>(m) * static_cast<double>(m - 1));
}

double mmse_upper_bound(const ReceivedConstellation& rc, const Alphabet& a,
                        Snr snr) {
  require_equiprobable(a);
  const std::size_t m = rc.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double d2 = rc.d2(i, j);
      if (d2 == 0.0) continue;
      acc += 2.0 * d2 * f_upper(snr.value * d2);
    }
  }
  return acc / static_cast<double>(m);
}

BoundPair mmse_bounds(const ReceivedConstellation& rc, const Alphabet& a,
                      Snr snr, const QuadratureRule& rule) {
  return {mmse_lower_bound(rc, a, snr, rule), mmse_upper_bound(rc, a, snr)};
}

}  // namespace mimo
