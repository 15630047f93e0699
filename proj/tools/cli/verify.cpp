#include "cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "barrierwalk/asymptotics.hpp"
#include "barrierwalk/barrier.hpp"
#include "barrierwalk/error.hpp"
#include "barrierwalk/format.hpp"

namespace barrierwalk::cli {

namespace {

struct Suite {
  VerifyConfig config;
  BarrierCache bernoulli;
  BarrierCache poisson;

  explicit Suite(const VerifyConfig& c)
      : config(c),
        bernoulli(make_bernoulli(), options(c)),
        poisson(make_centered_poisson(), options(c)) {}

  static BarrierOptions options(const VerifyConfig& c) {
    BarrierOptions o;
    o.trunc_eps = c.trunc_eps;
    o.perturb = c.perturb;
    return o;
  }
};

// Keeps the worst value seen and the first failing case.
class Tracker {
 public:
  Tracker(std::string name, std::string tolerance) {
    result_.name = std::move(name);
    result_.tolerance = std::move(tolerance);
    result_.passed = true;
  }

  void observe(double value, bool ok, const std::string& where) {
    if (!(value <= result_.worst)) result_.worst = value;
    if (!ok && result_.passed) {
      result_.passed = false;
      result_.detail = where + " value=" + format_double(value);
    }
  }

  CheckResult result() const { return result_; }

 private:
  CheckResult result_;
};

std::string at(std::initializer_list<std::pair<const char*, double>> fields) {
  std::ostringstream s;
  for (const auto& [k, v] : fields) s << k << '=' << format_double(v) << ' ';
  std::string out = s.str();
  if (!out.empty()) out.pop_back();
  return out;
}

CheckResult check_reflection(Suite& s) {
  Tracker t("reflection", "|R_n - closed form| <= 1e-12, bernoulli n <= 64, 1 <= y <= 8");
  for (int n = 1; n <= 64; ++n) {
    for (int y = 1; y <= 8; ++y) {
      for (int x = -n; x < y; x += 1) {
        if (((n - x) % 2 + 2) % 2 != 0) continue;
        const double dp = r_conditional(s.bernoulli, n, x, y);
        const double closed = bernoulli_closed_form(n, x, y);
        const double r = std::abs(dp - closed);
        t.observe(r, r <= 1e-12, at({{"n", n}, {"x", x}, {"y", y}}));
      }
    }
  }
  return t.result();
}

CheckResult check_ballot(Suite& s) {
  Tracker t("ballot", "|R_{p+q}(q-p, 1) - (p-q+1)/(p+1)| <= 1e-12, p+q <= 24");
  for (int total = 1; total <= 24; ++total) {
    for (int q = 0; 2 * q <= total; ++q) {
      const int p = total - q;
      const double dp = r_conditional(s.bernoulli, total, q - p, 1.0);
      const double r = std::abs(dp - ballot_probability(p, q).value());
      t.observe(r, r <= 1e-12, at({{"p", p}, {"q", q}}));
    }
  }
  return t.result();
}

struct Recur1Case {
  bool poisson;
  int n;
  double y;
  double s;
};

CheckResult check_recur1_grid(Suite& s) {
  static const Recur1Case cases[] = {
      {false, 2, 1, 1},  {false, 4, 2, 0},  {false, 6, 2, 0},  {false, 8, 3, 1},  {false, 10, 1, 1},
      {false, 16, 4, 2}, {false, 32, 5, 1}, {false, 33, 2, 1}, {false, 63, 3, 0}, {false, 64, 8, 0},
      {true, 2, 1, 0},   {true, 5, 2, 3},   {true, 10, 1, 0},  {true, 12, 3, 1},  {true, 20, 4, 2},
      {true, 32, 5, 7},  {true, 40, 2, 1},  {true, 50, 6, 0},  {true, 64, 8, 4},  {true, 64, 3, 15},
  };
  Tracker t("recur1", "residual <= 1e-12 + defect on 20 cases");
  for (const auto& c : cases) {
    auto& cache = c.poisson ? s.poisson : s.bernoulli;
    const auto r = check_recur1(cache, c.n, c.y, c.s);
    t.observe(r.residual, r.residual <= 1e-12 + r.defect,
              std::string(c.poisson ? "poisson1 " : "bernoulli ") + at({{"n", c.n}, {"y", c.y}, {"s", c.s}}));
  }
  return t.result();
}

struct Recur2Case {
  bool poisson;
  int n;
  double x;
  double y;
  double a;
};

CheckResult check_recur2_grid(Suite& s) {
  static const Recur2Case cases[] = {
      {false, 4, 0, 1, 1},  {false, 6, 0, 2, 2},   {false, 16, -2, 3, 1}, {false, 32, 4, 2, 0},
      {false, 64, 0, 4, 4}, {true, 10, -1, 2, 3},  {true, 12, 0, 3, 3},   {true, 24, 2, 2, 0},
      {true, 40, -5, 4, 6}, {true, 64, 0, 6, 6},
  };
  Tracker t("recur2", "residual <= 1e-10 + defect on 10 cases");
  for (const auto& c : cases) {
    auto& cache = c.poisson ? s.poisson : s.bernoulli;
    const auto r = check_recur2(cache, c.n, c.x, c.y, c.a);
    t.observe(r.residual, r.residual <= 1e-10 + r.defect,
              std::string(c.poisson ? "poisson1 " : "bernoulli ") +
                  at({{"n", c.n}, {"x", c.x}, {"y", c.y}, {"a", c.a}}));
  }
  return t.result();
}

CheckResult check_rough_bounds(Suite& s) {
  Tracker t("rough_bounds", "bound ratios in (0, 10); R_n n/(yz) in [0.1, 10] for poisson1 n = 400");
  for (auto* cache : {&s.bernoulli, &s.poisson}) {
    const std::string law = cache->dist().name() + " ";
    for (int n : {16, 64, 256}) {
      for (int y : {1, 2, 4, 8, 16}) {
        for (int z : {1, 2, 4, 8, 16}) {
          if (!cache->dist().key_of(n, y - z)) continue;
          const double r = rough_bound_ratio(*cache, n, y, z, RoughBound::a);
          t.observe(r, r > 0.0 && r < 10.0, law + "a " + at({{"n", n}, {"y", y}, {"z", z}}));
        }
      }
      const double root = std::sqrt(static_cast<double>(n));
      for (double ym : {1.0, 1.5, 2.0}) {
        const double y = std::ceil(ym * root);
        for (double zm : {0.0, 0.25, 0.5}) {
          const double z = std::floor(zm * y);
          if (!cache->dist().key_of(n, y - z)) continue;
          const double r = rough_bound_ratio(*cache, n, y, z, RoughBound::b);
          t.observe(r, r > 0.0 && r < 10.0, law + "b " + at({{"n", n}, {"y", y}, {"z", z}}));
        }
      }
    }
  }
  for (int y = 1; y <= 20; ++y) {
    for (int z = 1; z <= 20; ++z) {
      const double r = abr_ratio(s.poisson, 400, y, z);
      t.observe(r, r >= 0.1 && r <= 10.0, "poisson1 abr " + at({{"y", y}, {"z", z}}));
    }
  }
  return t.result();
}

CheckResult check_overshoot(Suite& s) {
  Tracker t("overshoot", "poisson1 y=2 u=4 N=2048: increasing, last increment < 1e-3; bernoulli y=3 sum = 0");
  BarrierOptions opts;
  opts.trunc_eps = s.config.trunc_eps;
  opts.perturb = s.config.perturb;
  const auto sums = overshoot_moment_sum(s.poisson.dist(), 2.0, 4.0, 2048, opts);
  for (std::size_t i = 1; i < sums.partial_sums.size(); ++i) {
    if (!(sums.partial_sums[i] > sums.partial_sums[i - 1])) {
      t.observe(sums.partial_sums[i], false, "poisson1 partial sums not increasing at n=" + std::to_string(i + 1));
      break;
    }
  }
  t.observe(sums.tail_increment, sums.tail_increment < 1e-3, "poisson1 final increment");
  const auto bern = overshoot_moment_sum(s.bernoulli.dist(), 3.0, 4.0, 256, opts);
  const double total = bern.partial_sums.back();
  t.observe(total, total == 0.0, "bernoulli integer barrier sum");
  return t.result();
}

using CheckFn = std::function<CheckResult(Suite&)>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"reflection", check_reflection}, {"ballot", check_ballot},
      {"recur1", check_recur1_grid},    {"recur2", check_recur2_grid},
      {"rough_bounds", check_rough_bounds}, {"overshoot", check_overshoot},
  };
  return checks;
}

}  // namespace

const std::vector<std::string>& verify_check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

std::vector<CheckResult> run_verification(const VerifyConfig& config, std::ostream& out) {
  const auto& names = verify_check_names();
  for (const auto& want : config.only) {
    if (std::find(names.begin(), names.end(), want) == names.end()) {
      throw Error(Errc::InvalidArgument, "unknown check '" + want + "'");
    }
  }
  Suite suite(config);
  std::vector<CheckResult> results;
  for (const auto& [name, fn] : registry()) {
    if (!config.only.empty() && std::find(config.only.begin(), config.only.end(), name) == config.only.end()) {
      continue;
    }
    auto r = fn(suite);
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " worst=" << format_double(r.worst) << " (" << r.tolerance
        << ")";
    if (!r.passed) out << " first failure: " << r.detail;
    out << '\n';
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace barrierwalk::cli
