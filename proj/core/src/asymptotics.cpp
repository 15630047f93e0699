#include "barrierwalk/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "barrierwalk/error.hpp"

namespace barrierwalk {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double erdos_kac(double x) {
  if (x < 0.0) throw Error(Errc::NegativeArgument, "erdos_kac needs x >= 0");
  // 2 Phi(x) - 1 = erf(x / sqrt 2), without cancellation near 0.
  return std::erf(x / std::numbers::sqrt2);
}

double theorem1_approx(double n, double y, double z) {
  if (!(n >= 1.0) || y < 0.0 || z < 0.0) {
    throw Error(Errc::InvalidArgument, "theorem1_approx needs n >= 1, y >= 0, z >= 0");
  }
  return -std::expm1(-2.0 * y * z / n);
}

double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  const auto nn = static_cast<double>(n);
  const auto kk = static_cast<double>(k);
  return std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0);
}

double bernoulli_closed_form(std::int64_t n, std::int64_t x, std::int64_t y) {
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  if (((n - x) % 2 + 2) % 2 != 0) {
    throw Error(Errc::ParityMismatch, "n = " + std::to_string(n) + " and x = " + std::to_string(x) + " differ in parity");
  }
  if (y < 1 || x >= y) throw Error(Errc::InvalidArgument, "reflection formula needs y >= 1 and x < y");
  const double log_den = log_binomial(n, (n - x) / 2);
  if (!std::isfinite(log_den)) return 1.0;
  const double log_num = log_binomial(n, (n + x - 2 * y) / 2);
  if (!std::isfinite(log_num)) return 1.0;
  return -std::expm1(log_num - log_den);
}

Fraction ballot_probability(std::int64_t p, std::int64_t q) {
  if (p < 0 || q < 0 || q > p) throw Error(Errc::InvalidCounts, "ballot counts need p >= q >= 0");
  Fraction f{p - q + 1, p + 1};
  const auto g = std::gcd(f.num, f.den);
  f.num /= g;
  f.den /= g;
  return f;
}

double qnuv_approx(double n, double u, double v) {
  if (!(n >= 1.0) || u < 0.0) throw Error(Errc::InvalidArgument, "qnuv_approx needs n >= 1 and u >= 0");
  const double w = u + v - n;
  if (w < 0.0) throw Error(Errc::NegativeW, "w = u + v - n = " + std::to_string(w) + " < 0");
  return -std::expm1(-2.0 * u * w / n);
}

}  // namespace barrierwalk
