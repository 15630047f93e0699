#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace barrierwalk {

// Exact rational p/q with q > 0, used for the base step of a custom lattice.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  // Accepts "p/q", "p" or a plain decimal integer; throws Error(InvalidArgument).
  static Rational parse(std::string_view text);
};

struct Atom {
  double value = 0.0;
  double prob = 0.0;
  std::int64_t key = 0;  // value == gamma + key * lambda
};

struct Moments {
  double alpha = 0.0;  // E X^u
  double beta = 0.0;   // E |X|^u
};

// Law of a single step X_1: finitely many atoms on the lattice
// gamma + m * lambda, with lambda the maximal span (gcd of key differences is 1).
// Immutable once built; safe to share between threads.
class LatticeStepDistribution {
 public:
  const std::string& name() const noexcept { return name_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::vector<std::int64_t> grid_keys() const;

  double gamma() const noexcept { return gamma_; }
  double lambda() const noexcept { return lambda_; }
  double truncation_defect() const noexcept { return truncation_defect_; }

  std::int64_t min_key() const noexcept { return atoms_.front().key; }
  std::int64_t max_key() const noexcept { return atoms_.back().key; }
  double min_value() const noexcept { return atoms_.front().value; }
  double max_value() const noexcept { return atoms_.back().value; }

  // P(X_1 = gamma + key * lambda); zero off the support.
  double prob_at_key(std::int64_t key) const noexcept;

  // alpha_u for integer u >= 1; throws NonIntegerPowerForAlpha otherwise.
  double alpha(double u) const;
  // beta_u for real u >= 1.
  double beta(double u) const;
  Moments moments(double u) const;

  // Points of L_n = {n*gamma + m*lambda}.
  double value(int n, std::int64_t key) const noexcept {
    return static_cast<double>(n) * gamma_ + static_cast<double>(key) * lambda_;
  }
  // Key of x in L_n, or nullopt when x is not a lattice point (relative snap 1e-9).
  std::optional<std::int64_t> key_of(int n, double x) const noexcept;
  // Smallest key m with value(n, m) >= v; S_n < v  <=>  key < first_key_at_or_above(n, v).
  std::int64_t first_key_at_or_above(int n, double v) const noexcept;
  // Largest key m with value(n, m) <= v.
  std::int64_t last_key_at_or_below(int n, double v) const noexcept;

 private:
  friend LatticeStepDistribution build_lattice_distribution(
      std::string name, double origin, double step,
      std::vector<std::pair<std::int64_t, double>> keyed_probs, double truncation_defect,
      bool standardize);

  LatticeStepDistribution() = default;

  std::string name_;
  std::vector<Atom> atoms_;
  double gamma_ = 0.0;
  double lambda_ = 1.0;
  double truncation_defect_ = 0.0;
  std::map<double, Moments> moment_cache_;
};

// Validates and normalizes atoms given as (grid key, prob) with value
// origin + key * step. Computes the maximal span, checks mean 0 / variance 1
// (or standardizes when asked). Throws NegativeProb, InvalidMass,
// NonStandardized or InvalidArgument.
LatticeStepDistribution build_lattice_distribution(
    std::string name, double origin, double step,
    std::vector<std::pair<std::int64_t, double>> keyed_probs, double truncation_defect = 0.0,
    bool standardize = false);

// P[X = 1] = P[X = -1] = 1/2.
LatticeStepDistribution make_bernoulli();

// X = r - 1 with probability e^{-1}/r!, truncated once the remaining tail
// mass drops below tail_eps, then renormalized.
LatticeStepDistribution make_centered_poisson(double tail_eps = 1e-14);

struct DistributionSpec {
  struct KeyedProb {
    std::int64_t key = 0;
    double prob = 0.0;
  };
  Rational base_step{1, 1};
  double gamma = 0.0;
  std::vector<KeyedProb> atoms;
  bool standardize = false;
  std::string name = "custom";

  // {"base_step": "1/1", "gamma": 0, "atoms": [{"key": -1, "prob": 0.5}, ...],
  //  "standardize": false}
  static DistributionSpec from_json(std::string_view json_text);
  static DistributionSpec from_file(const std::filesystem::path& path);
};

LatticeStepDistribution make_custom_lattice(const DistributionSpec& spec);

// "bernoulli", "poisson1", or a path to a DistributionSpec JSON file.
LatticeStepDistribution make_distribution(std::string_view selector);

}  // namespace barrierwalk
