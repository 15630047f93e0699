#include "barrierwalk/density.hpp"

#include <cmath>
#include <numbers>

#include "barrierwalk/error.hpp"

namespace barrierwalk {

namespace {

void check_trunc_eps(double trunc_eps) {
  if (!(trunc_eps >= 0.0 && trunc_eps <= 1e-12)) {
    throw Error(Errc::InvalidArgument, "trunc_eps must lie in [0, 1e-12]");
  }
}

DensityTable single_step(const LatticeStepDistribution& dist) {
  DensityTable t;
  t.n = 1;
  t.offset = dist.gamma();
  t.lambda = dist.lambda();
  t.key_min = dist.min_key();
  t.mass.assign(static_cast<std::size_t>(dist.max_key() - dist.min_key() + 1), 0.0);
  for (const auto& a : dist.atoms()) t.mass[static_cast<std::size_t>(a.key - dist.min_key())] = a.prob;
  return t;
}

}  // namespace

DensityTable exact_density(const LatticeStepDistribution& dist, int n, double trunc_eps,
                           std::size_t max_keys) {
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  check_trunc_eps(trunc_eps);
  const double budget = trunc_eps / static_cast<double>(n);
  DensityTable t = single_step(dist);
  for (int k = 2; k <= n; ++k) {
    t = add_step(t, dist, max_keys);
    trim_tails(t, budget, true, true);
  }
  return t;
}

std::vector<DensityTable> density_family(const LatticeStepDistribution& dist, int n_max,
                                         double trunc_eps, std::size_t max_keys) {
  if (n_max < 1) throw Error(Errc::InvalidArgument, "n_max must be >= 1");
  check_trunc_eps(trunc_eps);
  const double budget = trunc_eps / static_cast<double>(n_max);
  std::vector<DensityTable> family;
  family.reserve(static_cast<std::size_t>(n_max));
  family.push_back(single_step(dist));
  for (int k = 2; k <= n_max; ++k) {
    auto next = add_step(family.back(), dist, max_keys);
    trim_tails(next, budget, true, true);
    family.push_back(std::move(next));
  }
  return family;
}

LocalLimitApprox gaussian_llt_approx(const LatticeStepDistribution& dist, int n, double x) {
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  if (!dist.key_of(n, x)) throw Error(Errc::OffLattice, "x = " + std::to_string(x) + " is not in L_n");
  const double nn = static_cast<double>(n);
  LocalLimitApprox r;
  r.approx = dist.lambda() * std::exp(-x * x / (2.0 * nn)) / std::sqrt(2.0 * std::numbers::pi * nn);
  r.err_bound_shape = std::abs(x) / (std::pow(nn, 1.5) * (1.0 + x * x / nn)) + std::pow(nn, -1.5);
  return r;
}

DensityErrorReport density_error_report(const LatticeStepDistribution& dist,
                                        const DensityTable& table, double x_max_multiple) {
  const int n = table.n;
  const double root_n = std::sqrt(static_cast<double>(n));
  const double x_max = x_max_multiple * root_n;
  DensityErrorReport rep;
  rep.n = n;
  rep.defect = table.defect;
  const auto lo = dist.first_key_at_or_above(n, -x_max);
  const auto hi = dist.last_key_at_or_below(n, x_max);
  for (auto key = lo; key <= hi; ++key) {
    const double x = dist.value(n, key);
    const double f = table.at(key);
    const auto llt = gaussian_llt_approx(dist, n, x);
    const double err = std::abs(f - llt.approx);
    rep.sup_error = std::max(rep.sup_error, err);
    rep.sup_normalized = std::max(rep.sup_normalized, f * root_n / dist.lambda());
    rep.sup_shape_ratio = std::max(rep.sup_shape_ratio, err / llt.err_bound_shape);
    ++rep.points;
  }
  return rep;
}

DensityErrorReport density_error_report(const LatticeStepDistribution& dist, int n,
                                        double x_max_multiple, double trunc_eps) {
  return density_error_report(dist, exact_density(dist, n, trunc_eps), x_max_multiple);
}

}  // namespace barrierwalk
