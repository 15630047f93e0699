#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "barrierwalk/distributions.hpp"

namespace barrierwalk {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;  // trials entering the estimate
  std::uint64_t seed = 0;

  // {"mean": ..., "stderr": ..., "trials": ..., "accepted": ..., "seed": ...}
  std::string to_json() const;
};

struct McOptions {
  unsigned threads = 0;                    // 0: BARRIERWALK_THREADS or hardware concurrency
  std::uint64_t step_cap = 10'000'000;     // overshoot walks stop here and count as censored
  double max_censored_fraction = 1e-3;
  bool strict = false;                     // mc_tn_cdf: count T_n < h instead of T_n <= h
};

// Worker count after applying the BARRIERWALK_THREADS cap.
unsigned worker_count(unsigned requested = 0);

// Fraction of walks with T_n <= h (T_n < h when opts.strict).
McEstimate mc_tn_cdf(const LatticeStepDistribution& dist, int n, double h, std::uint64_t trials,
                     std::uint64_t seed, const McOptions& opts = {});

// mc_tn_cdf for several levels from one set of walks; element i equals
// mc_tn_cdf(dist, n, levels[i], trials, seed, opts).
std::vector<McEstimate> mc_tn_cdf_levels(const LatticeStepDistribution& dist, int n,
                                         const std::vector<double>& levels, std::uint64_t trials,
                                         std::uint64_t seed, const McOptions& opts = {});

// E[S_n^2 | T_n <= h]. Throws NoAcceptedSamples.
McEstimate mc_tn_second_moment(const LatticeStepDistribution& dist, int n, double h,
                               std::uint64_t trials, std::uint64_t seed, const McOptions& opts = {});

// Among walks with S_n = x (compared in integer key space), the fraction with
// T_{n-1} < y. Throws OffLattice or NoAcceptedSamples.
McEstimate mc_conditional(const LatticeStepDistribution& dist, int n, double x, double y,
                          std::uint64_t trials, std::uint64_t seed, const McOptions& opts = {});

// Q_n(u, v) = P[xi_i >= (i - u)/v for all i] over sorted uniforms.
McEstimate mc_qnuv(int n, double u, double v, std::uint64_t trials, std::uint64_t seed,
                   const McOptions& opts = {});

// P(sup_t |F_n(t) - t| <= u/n) for the empirical distribution of n uniforms.
McEstimate mc_kolmogorov_stat(int n, int u, std::uint64_t trials, std::uint64_t seed,
                              const McOptions& opts = {});

// E (S_tau - y)^power at the first n >= 1 with S_n >= y. Walks reaching
// opts.step_cap are censored and left out; throws ExcessCensoring when more
// than opts.max_censored_fraction of trials are censored.
McEstimate mc_overshoot(const LatticeStepDistribution& dist, double y, double power,
                        std::uint64_t trials, std::uint64_t seed, const McOptions& opts = {});

}  // namespace barrierwalk
