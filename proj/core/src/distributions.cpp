#include "barrierwalk/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "barrierwalk/error.hpp"
#include "json.hpp"

namespace barrierwalk {

namespace {

constexpr double kMassTolerance = 1e-12;
constexpr double kStandardTolerance = 1e-9;
constexpr double kSnapTolerance = 1e-9;

// Nearest integer to t if t is within the snap tolerance of it.
std::optional<double> snap(double t) noexcept {
  const double r = std::nearbyint(t);
  if (std::abs(t - r) <= kSnapTolerance * std::max(1.0, std::abs(t))) return r;
  return std::nullopt;
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(Errc::InvalidArgument, "not an integer: '" + std::string(s) + "'");
  }
  return v;
}

double rational_or_number(const nlohmann::json& j, const char* field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return Rational::parse(j.get<std::string>()).to_double();
  throw Error(Errc::InvalidArgument, std::string("field '") + field + "' must be a number or rational string");
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  Rational r;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    r.num = parse_int(text.substr(0, slash));
    r.den = parse_int(text.substr(slash + 1));
  } else {
    r.num = parse_int(text);
    r.den = 1;
  }
  if (r.den == 0) throw Error(Errc::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
  if (r.den < 0) {
    r.num = -r.num;
    r.den = -r.den;
  }
  const auto g = std::gcd(r.num, r.den);
  if (g > 1) {
    r.num /= g;
    r.den /= g;
  }
  return r;
}

std::vector<std::int64_t> LatticeStepDistribution::grid_keys() const {
  std::vector<std::int64_t> keys;
  keys.reserve(atoms_.size());
  for (const auto& a : atoms_) keys.push_back(a.key);
  return keys;
}

double LatticeStepDistribution::prob_at_key(std::int64_t key) const noexcept {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), key,
                             [](const Atom& a, std::int64_t k) { return a.key < k; });
  return (it != atoms_.end() && it->key == key) ? it->prob : 0.0;
}

double LatticeStepDistribution::alpha(double u) const {
  if (u < 1.0 || std::floor(u) != u) {
    throw Error(Errc::NonIntegerPowerForAlpha, "alpha_u needs an integer u >= 1, got " + std::to_string(u));
  }
  if (auto it = moment_cache_.find(u); it != moment_cache_.end()) return it->second.alpha;
  double s = 0.0;
  for (const auto& a : atoms_) s += a.prob * std::pow(a.value, u);
  return s;
}

double LatticeStepDistribution::beta(double u) const {
  if (!(u >= 1.0)) throw Error(Errc::InvalidArgument, "beta_u needs u >= 1");
  if (auto it = moment_cache_.find(u); it != moment_cache_.end()) return it->second.beta;
  double s = 0.0;
  for (const auto& a : atoms_) s += a.prob * std::pow(std::abs(a.value), u);
  return s;
}

Moments LatticeStepDistribution::moments(double u) const { return {alpha(u), beta(u)}; }

std::optional<std::int64_t> LatticeStepDistribution::key_of(int n, double x) const noexcept {
  const double t = (x - static_cast<double>(n) * gamma_) / lambda_;
  if (!std::isfinite(t)) return std::nullopt;
  if (auto r = snap(t)) return static_cast<std::int64_t>(*r);
  return std::nullopt;
}

std::int64_t LatticeStepDistribution::first_key_at_or_above(int n, double v) const noexcept {
  const double t = (v - static_cast<double>(n) * gamma_) / lambda_;
  if (auto r = snap(t)) return static_cast<std::int64_t>(*r);
  return static_cast<std::int64_t>(std::ceil(t));
}

std::int64_t LatticeStepDistribution::last_key_at_or_below(int n, double v) const noexcept {
  const double t = (v - static_cast<double>(n) * gamma_) / lambda_;
  if (auto r = snap(t)) return static_cast<std::int64_t>(*r);
  return static_cast<std::int64_t>(std::floor(t));
}

LatticeStepDistribution build_lattice_distribution(
    std::string name, double origin, double step,
    std::vector<std::pair<std::int64_t, double>> keyed_probs, double truncation_defect,
    bool standardize) {
  if (!(step > 0.0) || !std::isfinite(step)) throw Error(Errc::InvalidArgument, "base step must be positive");
  if (!std::isfinite(origin)) throw Error(Errc::InvalidArgument, "gamma must be finite");

  double total = 0.0;
  for (const auto& [key, p] : keyed_probs) {
    if (p < 0.0 || std::isnan(p)) throw Error(Errc::NegativeProb, "atom at key " + std::to_string(key) + " has prob " + std::to_string(p));
    total += p;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probabilities sum to " << total;
    throw Error(Errc::InvalidMass, msg.str());
  }

  std::erase_if(keyed_probs, [](const auto& kp) { return kp.second == 0.0; });
  std::sort(keyed_probs.begin(), keyed_probs.end());
  for (std::size_t i = 1; i < keyed_probs.size(); ++i) {
    if (keyed_probs[i].first == keyed_probs[i - 1].first) {
      throw Error(Errc::InvalidArgument, "duplicate key " + std::to_string(keyed_probs[i].first));
    }
  }
  if (keyed_probs.size() < 2) throw Error(Errc::NonStandardized, "a single-atom law has variance 0");

  std::int64_t span = 0;
  for (const auto& [key, p] : keyed_probs) span = std::gcd(span, key - keyed_probs.front().first);
  const std::int64_t residue = ((keyed_probs.front().first % span) + span) % span;

  LatticeStepDistribution d;
  d.name_ = std::move(name);
  d.truncation_defect_ = truncation_defect;
  d.gamma_ = origin + static_cast<double>(residue) * step;
  d.lambda_ = static_cast<double>(span) * step;
  for (const auto& [key, p] : keyed_probs) {
    Atom a;
    a.key = (key - residue) / span;
    a.prob = p / total;
    a.value = d.gamma_ + static_cast<double>(a.key) * d.lambda_;
    d.atoms_.push_back(a);
  }

  double mean = 0.0;
  for (const auto& a : d.atoms_) mean += a.prob * a.value;
  double var = 0.0;
  for (const auto& a : d.atoms_) var += a.prob * (a.value - mean) * (a.value - mean);

  if (standardize) {
    if (!(var > 0.0)) throw Error(Errc::NonStandardized, "cannot standardize a degenerate law");
    const double sigma = std::sqrt(var);
    d.gamma_ = (d.gamma_ - mean) / sigma;
    d.lambda_ /= sigma;
    for (auto& a : d.atoms_) a.value = d.gamma_ + static_cast<double>(a.key) * d.lambda_;
  } else if (std::abs(mean) > kStandardTolerance || std::abs(var + mean * mean - 1.0) > kStandardTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "mean " << mean << ", variance " << var << " (set standardize to rescale)";
    throw Error(Errc::NonStandardized, msg.str());
  }

  for (int u = 1; u <= 4; ++u) {
    Moments m;
    for (const auto& a : d.atoms_) {
      m.alpha += a.prob * std::pow(a.value, u);
      m.beta += a.prob * std::pow(std::abs(a.value), u);
    }
    d.moment_cache_.emplace(static_cast<double>(u), m);
  }
  return d;
}

LatticeStepDistribution make_bernoulli() {
  return build_lattice_distribution("bernoulli", 0.0, 1.0, {{-1, 0.5}, {1, 0.5}});
}

LatticeStepDistribution make_centered_poisson(double tail_eps) {
  if (!(tail_eps > 0.0 && tail_eps <= 1e-14)) {
    throw Error(Errc::InvalidArgument, "tail_eps must lie in (0, 1e-14]");
  }
  // e^{-1}/r! for r = 0..; the tail beyond r = 40 is far below any admissible eps.
  std::vector<double> terms;
  double t = std::exp(-1.0);
  for (int r = 0; r <= 60; ++r) {
    terms.push_back(t);
    t /= static_cast<double>(r + 1);
  }
  std::size_t last = 0;
  double tail = 0.0;
  for (;; ++last) {
    tail = 0.0;
    for (std::size_t r = terms.size(); r-- > last + 1;) tail += terms[r];
    if (tail < tail_eps) break;
  }
  std::vector<std::pair<std::int64_t, double>> keyed;
  double kept = 0.0;
  for (std::size_t r = 0; r <= last; ++r) kept += terms[r];
  for (std::size_t r = 0; r <= last; ++r) {
    keyed.emplace_back(static_cast<std::int64_t>(r) - 1, terms[r] / kept);
  }
  return build_lattice_distribution("poisson1", 0.0, 1.0, std::move(keyed), tail);
}

DistributionSpec DistributionSpec::from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("distribution spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::InvalidArgument, "distribution spec must be a JSON object");

  DistributionSpec spec;
  try {
    if (j.contains("base_step")) {
      const auto& b = j.at("base_step");
      if (b.is_string()) {
        spec.base_step = Rational::parse(b.get<std::string>());
      } else if (b.is_number_integer()) {
        spec.base_step = Rational{b.get<std::int64_t>(), 1};
      } else {
        throw Error(Errc::InvalidArgument, "base_step must be a rational string such as \"1/2\"");
      }
    }
    if (j.contains("gamma")) spec.gamma = rational_or_number(j.at("gamma"), "gamma");
    if (j.contains("standardize")) spec.standardize = j.at("standardize").get<bool>();
    if (j.contains("name")) spec.name = j.at("name").get<std::string>();
    if (!j.contains("atoms") || !j.at("atoms").is_array()) {
      throw Error(Errc::InvalidArgument, "distribution spec needs an 'atoms' array");
    }
    for (const auto& a : j.at("atoms")) {
      if (!a.at("key").is_number_integer()) throw Error(Errc::InvalidArgument, "atom keys must be integers");
      spec.atoms.push_back({a.at("key").get<std::int64_t>(), a.at("prob").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("malformed distribution spec: ") + e.what());
  }
  return spec;
}

DistributionSpec DistributionSpec::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open distribution spec '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  auto spec = from_json(buf.str());
  if (spec.name == "custom") spec.name = path.stem().string();
  return spec;
}

LatticeStepDistribution make_custom_lattice(const DistributionSpec& spec) {
  if (spec.base_step.num <= 0) throw Error(Errc::InvalidArgument, "base_step must be positive");
  std::vector<std::pair<std::int64_t, double>> keyed;
  keyed.reserve(spec.atoms.size());
  for (const auto& a : spec.atoms) keyed.emplace_back(a.key, a.prob);
  return build_lattice_distribution(spec.name, spec.gamma, spec.base_step.to_double(), std::move(keyed), 0.0,
                                    spec.standardize);
}

LatticeStepDistribution make_distribution(std::string_view selector) {
  if (selector == "bernoulli") return make_bernoulli();
  if (selector == "poisson1") return make_centered_poisson();
  return make_custom_lattice(DistributionSpec::from_file(std::filesystem::path(selector)));
}

}  // namespace barrierwalk
