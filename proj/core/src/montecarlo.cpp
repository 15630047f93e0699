#include "barrierwalk/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "barrierwalk/error.hpp"
#include "barrierwalk/format.hpp"
#include "barrierwalk/rng.hpp"

namespace barrierwalk {

namespace {

// Trials are grouped in fixed chunks; chunk tallies are combined in chunk
// order, so results are identical for any worker count.
constexpr std::uint64_t kChunk = 4096;

struct Tally {
  std::uint64_t accepted = 0;
  std::uint64_t hits = 0;
  std::uint64_t censored = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add_value(double v) {
    ++accepted;
    sum += v;
    sum_sq += v * v;
  }
  void merge(const Tally& o) {
    accepted += o.accepted;
    hits += o.hits;
    censored += o.censored;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
};

// Hit counts for several levels over the same walks.
struct LevelTally {
  std::vector<std::uint64_t> hits;

  void merge(const LevelTally& o) {
    if (hits.empty()) hits.assign(o.hits.size(), 0);
    for (std::size_t i = 0; i < o.hits.size(); ++i) hits[i] += o.hits[i];
  }
};

template <typename TallyT = Tally, typename TrialFn>
TallyT run_trials(std::uint64_t trials, std::uint64_t seed, const McOptions& opts, TrialFn trial,
                  const TallyT& empty = {}) {
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<TallyT> tallies(chunks, empty);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      TallyT t = empty;
      const std::uint64_t end = std::min(trials, (c + 1) * kChunk);
      for (std::uint64_t i = c * kChunk; i < end; ++i) {
        CounterRng rng(seed, i);
        trial(rng, t);
      }
      tallies[c] = t;
    }
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(worker_count(opts.threads), chunks));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  TallyT total = empty;
  for (const auto& t : tallies) total.merge(t);
  return total;
}

McEstimate proportion(const Tally& t, std::uint64_t trials, std::uint64_t seed) {
  McEstimate e;
  e.trials = trials;
  e.accepted = t.accepted;
  e.seed = seed;
  if (t.accepted > 0) {
    const double p = static_cast<double>(t.hits) / static_cast<double>(t.accepted);
    e.mean = p;
    e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(t.accepted));
  }
  return e;
}

McEstimate sample_mean(const Tally& t, std::uint64_t trials, std::uint64_t seed) {
  McEstimate e;
  e.trials = trials;
  e.accepted = t.accepted;
  e.seed = seed;
  if (t.accepted > 0) {
    const double m = static_cast<double>(t.accepted);
    e.mean = t.sum / m;
    const double var = t.accepted > 1 ? std::max(0.0, (t.sum_sq - m * e.mean * e.mean) / (m - 1.0)) : 0.0;
    e.std_error = std::sqrt(var / m);
  }
  return e;
}

// Inverse-CDF sampler over the atoms in decreasing probability order.
class StepSampler {
 public:
  explicit StepSampler(const LatticeStepDistribution& dist) {
    std::vector<Atom> atoms(dist.atoms().begin(), dist.atoms().end());
    std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.prob > b.prob; });
    double c = 0.0;
    for (const auto& a : atoms) {
      c += a.prob;
      cumulative_.push_back(c);
      keys_.push_back(a.key);
    }
  }

  std::int64_t operator()(CounterRng& rng) const noexcept {
    const double u = rng.uniform();
    const std::size_t last = keys_.size() - 1;
    for (std::size_t i = 0; i < last; ++i) {
      if (u < cumulative_[i]) return keys_[i];
    }
    return keys_[last];
  }

 private:
  std::vector<double> cumulative_;
  std::vector<std::int64_t> keys_;
};

void require_trials(std::uint64_t trials) {
  if (trials < 1) throw Error(Errc::InvalidArgument, "trials must be >= 1");
}

// Largest key allowed at each layer j = 1..n for S_j <= h (or S_j < h).
std::vector<std::int64_t> upper_keys(const LatticeStepDistribution& dist, int n, double h, bool strict) {
  std::vector<std::int64_t> keys(static_cast<std::size_t>(n) + 1);
  for (int j = 1; j <= n; ++j) {
    keys[static_cast<std::size_t>(j)] =
        strict ? dist.first_key_at_or_above(j, h) - 1 : dist.last_key_at_or_below(j, h);
  }
  return keys;
}

}  // namespace

std::string McEstimate::to_json() const {
  return "{\"mean\": " + format_double(mean) + ", \"stderr\": " + format_double(std_error) +
         ", \"trials\": " + std::to_string(trials) + ", \"accepted\": " + std::to_string(accepted) +
         ", \"seed\": " + std::to_string(seed) + "}";
}

unsigned worker_count(unsigned requested) {
  unsigned n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BARRIERWALK_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

McEstimate mc_tn_cdf(const LatticeStepDistribution& dist, int n, double h, std::uint64_t trials,
                     std::uint64_t seed, const McOptions& opts) {
  require_trials(trials);
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  // T_n >= T_0 = 0.
  if (opts.strict ? !(h > 0.0) : h < 0.0) return proportion({trials, 0, 0, 0.0, 0.0}, trials, seed);
  const auto limit = upper_keys(dist, n, h, opts.strict);
  const StepSampler step(dist);
  const Tally t = run_trials(trials, seed, opts, [&](CounterRng& rng, Tally& tally) {
    ++tally.accepted;
    std::int64_t key = 0;
    for (int j = 1; j <= n; ++j) {
      key += step(rng);
      if (key > limit[static_cast<std::size_t>(j)]) return;
    }
    ++tally.hits;
  });
  return proportion(t, trials, seed);
}

std::vector<McEstimate> mc_tn_cdf_levels(const LatticeStepDistribution& dist, int n,
                                         const std::vector<double>& levels, std::uint64_t trials,
                                         std::uint64_t seed, const McOptions& opts) {
  require_trials(trials);
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  std::vector<std::size_t> order(levels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return levels[a] < levels[b]; });

  // Sorted levels that can hold at all; the rest never count a hit.
  std::vector<std::vector<std::int64_t>> limits;
  std::vector<std::size_t> slot;
  for (std::size_t i : order) {
    const double h = levels[i];
    if (opts.strict ? !(h > 0.0) : h < 0.0) continue;
    limits.push_back(upper_keys(dist, n, h, opts.strict));
    slot.push_back(i);
  }
  const std::size_t live_levels = limits.size();
  const StepSampler step(dist);
  LevelTally empty;
  empty.hits.assign(live_levels, 0);
  const LevelTally t = run_trials(
      trials, seed, opts,
      [&](CounterRng& rng, LevelTally& tally) {
        // Levels below `lowest` have already been exceeded; limits grow with the level.
        std::size_t lowest = 0;
        std::int64_t key = 0;
        for (int j = 1; j <= n && lowest < live_levels; ++j) {
          key += step(rng);
          while (lowest < live_levels && key > limits[lowest][static_cast<std::size_t>(j)]) ++lowest;
        }
        for (std::size_t i = lowest; i < live_levels; ++i) ++tally.hits[i];
      },
      empty);

  std::vector<McEstimate> out(levels.size(), proportion({trials, 0, 0, 0.0, 0.0}, trials, seed));
  for (std::size_t i = 0; i < live_levels; ++i) {
    out[slot[i]] = proportion({trials, t.hits[i], 0, 0.0, 0.0}, trials, seed);
  }
  return out;
}

McEstimate mc_tn_second_moment(const LatticeStepDistribution& dist, int n, double h,
                               std::uint64_t trials, std::uint64_t seed, const McOptions& opts) {
  require_trials(trials);
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  if (h < 0.0) throw Error(Errc::NoAcceptedSamples, "T_n <= h is impossible for h < 0");
  const auto limit = upper_keys(dist, n, h, false);
  const StepSampler step(dist);
  const Tally t = run_trials(trials, seed, opts, [&](CounterRng& rng, Tally& tally) {
    std::int64_t key = 0;
    for (int j = 1; j <= n; ++j) {
      key += step(rng);
      if (key > limit[static_cast<std::size_t>(j)]) return;
    }
    const double s = dist.value(n, key);
    tally.add_value(s * s);
  });
  if (t.accepted == 0) throw Error(Errc::NoAcceptedSamples, "no walk satisfied T_n <= h");
  return sample_mean(t, trials, seed);
}

McEstimate mc_conditional(const LatticeStepDistribution& dist, int n, double x, double y,
                          std::uint64_t trials, std::uint64_t seed, const McOptions& opts) {
  require_trials(trials);
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  const auto end_key = dist.key_of(n, x);
  if (!end_key) throw Error(Errc::OffLattice, "x is not in L_n");
  const bool start_below = 0.0 < y;
  std::vector<std::int64_t> below(static_cast<std::size_t>(n));
  for (int j = 1; j < n; ++j) below[static_cast<std::size_t>(j)] = dist.first_key_at_or_above(j, y);
  const StepSampler step(dist);
  const Tally t = run_trials(trials, seed, opts, [&](CounterRng& rng, Tally& tally) {
    std::int64_t key = 0;
    bool stayed_below = start_below;
    for (int j = 1; j < n; ++j) {
      key += step(rng);
      if (key >= below[static_cast<std::size_t>(j)]) stayed_below = false;
    }
    key += step(rng);
    if (key != *end_key) return;
    ++tally.accepted;
    if (stayed_below) ++tally.hits;
  });
  if (t.accepted == 0) throw Error(Errc::NoAcceptedSamples, "no simulated walk ended at x");
  return proportion(t, trials, seed);
}

McEstimate mc_qnuv(int n, double u, double v, std::uint64_t trials, std::uint64_t seed,
                   const McOptions& opts) {
  require_trials(trials);
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  if (u < 0.0 || !(v > 0.0)) throw Error(Errc::InvalidArgument, "Q_n(u, v) needs u >= 0, v > 0");
  const Tally t = run_trials(trials, seed, opts, [&](CounterRng& rng, Tally& tally) {
    thread_local std::vector<double> xi;
    xi.resize(static_cast<std::size_t>(n));
    for (auto& s : xi) s = rng.uniform();
    std::sort(xi.begin(), xi.end());
    ++tally.accepted;
    for (int i = 1; i <= n; ++i) {
      if (xi[static_cast<std::size_t>(i - 1)] < (static_cast<double>(i) - u) / v) return;
    }
    ++tally.hits;
  });
  return proportion(t, trials, seed);
}

McEstimate mc_kolmogorov_stat(int n, int u, std::uint64_t trials, std::uint64_t seed,
                              const McOptions& opts) {
  require_trials(trials);
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  if (u < 1) throw Error(Errc::InvalidArgument, "u must be a positive integer");
  const double nn = static_cast<double>(n);
  const double bound = static_cast<double>(u);
  const Tally t = run_trials(trials, seed, opts, [&](CounterRng& rng, Tally& tally) {
    thread_local std::vector<double> xi;
    xi.resize(static_cast<std::size_t>(n));
    for (auto& s : xi) s = rng.uniform();
    std::sort(xi.begin(), xi.end());
    ++tally.accepted;
    // n * sup_t |F_n(t) - t| = max_i max(i - n xi_i, n xi_i - (i - 1)).
    double d = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double scaled = nn * xi[static_cast<std::size_t>(i - 1)];
      d = std::max({d, static_cast<double>(i) - scaled, scaled - static_cast<double>(i - 1)});
    }
    if (d <= bound) ++tally.hits;
  });
  return proportion(t, trials, seed);
}

McEstimate mc_overshoot(const LatticeStepDistribution& dist, double y, double power,
                        std::uint64_t trials, std::uint64_t seed, const McOptions& opts) {
  require_trials(trials);
  if (y < 0.0 || power < 0.0 || power > 2.0) {
    throw Error(Errc::PreconditionViolated, "overshoot needs y >= 0 and power in [0, 2]");
  }
  const bool fixed_threshold = dist.gamma() == 0.0;
  const std::int64_t threshold0 = dist.first_key_at_or_above(1, y);
  const StepSampler step(dist);
  const std::uint64_t cap = opts.step_cap;
  const Tally t = run_trials(trials, seed, opts, [&](CounterRng& rng, Tally& tally) {
    std::int64_t key = 0;
    for (std::uint64_t k = 1; k <= cap; ++k) {
      key += step(rng);
      const std::int64_t threshold =
          fixed_threshold ? threshold0 : dist.first_key_at_or_above(static_cast<int>(k), y);
      if (key >= threshold) {
        const double xi = std::max(0.0, dist.value(static_cast<int>(k), key) - y);
        tally.add_value(std::pow(xi, power));
        return;
      }
    }
    ++tally.censored;
  });
  if (static_cast<double>(t.censored) > opts.max_censored_fraction * static_cast<double>(trials)) {
    throw Error(Errc::ExcessCensoring, std::to_string(t.censored) + " of " + std::to_string(trials) +
                                           " walks hit the step cap of " + std::to_string(cap));
  }
  if (t.accepted == 0) throw Error(Errc::NoAcceptedSamples, "every walk was censored");
  return sample_mean(t, trials, seed);
}

}  // namespace barrierwalk
