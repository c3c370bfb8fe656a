#pragma once

#include <cstdint>

namespace exrot {

// Standard normal CDF, accurate to double precision in both tails.
double normal_cdf(double x);

// Upper tail 1 - Phi(x) without cancellation for large x.
double normal_sf(double x);

// Quantile: normal_quantile(p) = Phi^{-1}(p), p in (0,1).
double normal_quantile(double p);

// Upper quantile: normal_upper_quantile(q) = Phi^{-1}(1-q) computed from q
// directly, so tiny q keeps full precision.
double normal_upper_quantile(double q);

// Regularized incomplete beta I_x(a, b), x in [0,1].
double regularized_ibeta(double a, double b, double x);

// log(n choose k) via lgamma; exact enough for n <= a few thousand.
double log_binomial(int n, int k);

// Standard normal variate from 64 random bits (inverse-CDF transform).
double normal_from_bits(std::uint64_t bits);

}  // namespace exrot
