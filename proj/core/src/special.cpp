#include "exrot/special.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <stdexcept>

#include "exrot/rng.hpp"

namespace exrot {

namespace {
const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);
constexpr double kInvSqrt2 = 0.7071067811865475244;
}  // namespace

double normal_cdf(double x) { return 0.5 * boost::math::erfc(-x * kInvSqrt2); }

double normal_sf(double x) { return 0.5 * boost::math::erfc(x * kInvSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must be in (0,1)");
  return boost::math::quantile(kStdNormal, p);
}

double normal_upper_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("normal_upper_quantile: q must be in (0,1)");
  return boost::math::quantile(boost::math::complement(kStdNormal, q));
}

double regularized_ibeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double normal_from_bits(std::uint64_t bits) { return normal_quantile(unit_open(bits)); }

}  // namespace exrot
