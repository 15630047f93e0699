#pragma once

#include <cstdint>

namespace barrierwalk {

// Standard normal distribution function, absolute error below 1e-12.
double normal_cdf(double x);

// Limit law of T_n / sqrt(n): 2 Phi(x) - 1 for x >= 0. Throws NegativeArgument.
double erdos_kac(double x);

// Main term 1 - exp(-2yz/n) of R_n(y - z, y), evaluated through expm1.
double theorem1_approx(double n, double y, double z);

// Exact R_n(x, y) for +-1 steps by the reflection principle:
// 1 - C(n, (n+x-2y)/2) / C(n, (n-x)/2), binomials via log-gamma and taken as 0
// out of range. Needs n, x of equal parity (ParityMismatch), integer y >= 1 and
// x < y (InvalidArgument). Returns 1 when C(n, (n-x)/2) = 0.
double bernoulli_closed_form(std::int64_t n, std::int64_t x, std::int64_t y);

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

// Probability (p - q + 1) / (p + 1), in lowest terms, that the leading
// candidate never trails. Throws InvalidCounts when q > p.
Fraction ballot_probability(std::int64_t p, std::int64_t q);

// Main term 1 - exp(-2uw/n) with w = u + v - n. Throws NegativeW when w < 0.
double qnuv_approx(double n, double u, double v);

// log C(n, k); -inf when k is outside [0, n].
double log_binomial(std::int64_t n, std::int64_t k);

}  // namespace barrierwalk
