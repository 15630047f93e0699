#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <thread>

#include "barrierwalk/barrierwalk.hpp"
#include "cli/grid_rule.hpp"
#include "cli/verify.hpp"

namespace barrierwalk::cli {

namespace {

struct ComputeArgs {
  std::string dist = "bernoulli";
  int n = 0;
  double y = 0.0;
  std::optional<double> z;
  std::optional<double> x;
  double trunc_eps = 1e-14;
  std::string format = "csv";
  std::string out;
};

struct SweepArgs {
  std::string dist = "poisson1";
  std::vector<int> ns;
  std::string y_rule = "sqrt(n)";
  std::string z_rule = "sqrt(n)";
  double trunc_eps = 1e-14;
  std::string out;
};

struct VerifyArgs {
  std::vector<std::string> only;
  double perturb = 0.0;
  double trunc_eps = 1e-14;
};

struct McArgs {
  std::string op;
  std::string dist = "bernoulli";
  int n = 0;
  std::optional<double> x;
  std::optional<double> y;
  std::optional<double> h;
  double u = 0.0;
  double v = 0.0;
  double power = 2.0;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  std::string out;
};

void check_trunc_eps(double eps) {
  if (!(eps >= 0.0) || eps > 1e-12) throw Error(Errc::InvalidArgument, "--trunc-eps must lie in [0, 1e-12]");
}

// Writes to --out when given, otherwise to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(Errc::InvalidArgument, "cannot open '" + path + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

int cmd_compute(const ComputeArgs& a, std::ostream& out) {
  check_trunc_eps(a.trunc_eps);
  if (a.n < 1) throw Error(Errc::InvalidArgument, "--n must be >= 1");
  if (a.z.has_value() == a.x.has_value()) throw Error(Errc::InvalidArgument, "give exactly one of --z and --x");
  if (a.format != "csv" && a.format != "json") throw Error(Errc::InvalidArgument, "--format must be csv or json");
  const double z = a.z ? *a.z : a.y - *a.x;
  BarrierOptions opts;
  opts.trunc_eps = a.trunc_eps;
  BarrierCache cache(make_distribution(a.dist), opts);
  const SweepRow row = make_sweep_row(cache, a.n, a.y, z);
  Sink sink(a.out, out);
  if (a.format == "json") {
    sink.get() << to_json(row) << '\n';
  } else {
    sink.get() << kSweepCsvHeader << '\n' << to_csv(row) << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  check_trunc_eps(a.trunc_eps);
  if (a.ns.empty()) throw Error(Errc::InvalidArgument, "--n needs at least one value");
  for (int n : a.ns) {
    if (n < 1) throw Error(Errc::InvalidArgument, "every n must be >= 1");
  }
  const GridRule y_rule = GridRule::parse(a.y_rule);
  const GridRule z_rule = GridRule::parse(a.z_rule);
  BarrierOptions opts;
  opts.trunc_eps = a.trunc_eps;
  BarrierCache cache(make_distribution(a.dist), opts);

  std::vector<std::pair<double, double>> points;
  for (int n : a.ns) points.push_back(snap_sweep_point(cache.dist(), n, y_rule(n), z_rule(n)));

  std::vector<SweepRow> rows(a.ns.size());
  std::vector<std::exception_ptr> failures(a.ns.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        rows[i] = make_sweep_row(cache, a.ns[i], points[i].first, points[i].second);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(rows.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  Sink sink(a.out, out);
  sink.get() << kSweepCsvHeader << '\n';
  double max_norm = 0.0;
  for (const auto& row : rows) {
    sink.get() << to_csv(row) << '\n';
    max_norm = std::max(max_norm, row.norm_err);
  }
  std::ostream& summary = a.out.empty() ? err : out;
  summary << "rows=" << rows.size() << " max_norm_err=" << format_double(max_norm) << '\n';
  return kExitOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  check_trunc_eps(a.trunc_eps);
  VerifyConfig config;
  config.only = a.only;
  config.perturb = a.perturb;
  config.trunc_eps = a.trunc_eps;
  const auto results = run_verification(config, out);
  const bool ok = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
  out << (ok ? "all checks passed" : "verification failed") << '\n';
  return ok ? kExitOk : kExitVerifyFailed;
}

double require(const std::optional<double>& v, const char* flag, const std::string& op) {
  if (!v) throw Error(Errc::InvalidArgument, "mc " + op + " needs " + flag);
  return *v;
}

int cmd_mc(const McArgs& a, std::ostream& out, std::ostream& err) {
  McEstimate est;
  if (a.op == "tn_cdf") {
    const double h = a.h ? *a.h : require(a.y, "--level", a.op);
    est = mc_tn_cdf(make_distribution(a.dist), a.n, h, a.trials, a.seed);
  } else if (a.op == "conditional") {
    est = mc_conditional(make_distribution(a.dist), a.n, require(a.x, "--x", a.op), require(a.y, "--y", a.op),
                         a.trials, a.seed);
  } else if (a.op == "qnuv") {
    est = mc_qnuv(a.n, a.u, a.v, a.trials, a.seed);
  } else if (a.op == "kstat") {
    if (a.u != std::floor(a.u)) throw Error(Errc::InvalidArgument, "mc kstat needs an integer --u");
    est = mc_kolmogorov_stat(a.n, static_cast<int>(a.u), a.trials, a.seed);
  } else if (a.op == "overshoot") {
    est = mc_overshoot(make_distribution(a.dist), require(a.y, "--y", a.op), a.power, a.trials, a.seed);
  } else {
    throw Error(Errc::InvalidArgument, "unknown mc op '" + a.op + "'");
  }
  if (est.trials > 0 && static_cast<double>(est.accepted) < 1e-4 * static_cast<double>(est.trials)) {
    err << "warning: only " << est.accepted << " of " << est.trials << " trials accepted\n";
  }
  Sink sink(a.out, out);
  sink.get() << est.to_json() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Barrier-avoidance probabilities for lattice random walks", "barrierwalk"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "Exact R_n(y - z, y) with its Gaussian approximation");
  c->add_option("--dist", compute.dist, "bernoulli, poisson1 or a JSON spec file")->capture_default_str();
  c->add_option("--n", compute.n, "Number of steps")->required();
  c->add_option("--y", compute.y, "Barrier")->required();
  auto* zo = c->add_option("--z", compute.z, "Distance below the barrier, x = y - z");
  auto* xo = c->add_option("--x", compute.x, "Endpoint");
  zo->excludes(xo);
  c->add_option("--trunc-eps", compute.trunc_eps, "Truncation budget")->capture_default_str();
  c->add_option("--format", compute.format, "csv or json")->capture_default_str();
  c->add_option("--out", compute.out, "Output file");

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Grid of compute rows as CSV");
  s->add_option("--dist", sweep.dist, "bernoulli, poisson1 or a JSON spec file")->capture_default_str();
  s->add_option("--n", sweep.ns, "Comma-separated step counts")->delimiter(',')->required();
  s->add_option("--y", sweep.y_rule, "Barrier rule, e.g. 5, sqrt(n), 0.5*sqrt(n), 2*n^0.4")->capture_default_str();
  s->add_option("--z", sweep.z_rule, "Distance rule")->capture_default_str();
  s->add_option("--trunc-eps", sweep.trunc_eps, "Truncation budget")->capture_default_str();
  s->add_option("--out", sweep.out, "Output CSV file");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Identity and bound checks on the builtin laws");
  v->add_option("--only", verify.only, "Run only the named checks")->delimiter(',');
  v->add_option("--perturb", verify.perturb, "Add this mass to one DP entry")->capture_default_str();
  v->add_option("--trunc-eps", verify.trunc_eps, "Truncation budget")->capture_default_str();

  McArgs mc;
  auto* m = app.add_subcommand("mc", "Monte Carlo estimate as JSON");
  m->add_option("op", mc.op, "tn_cdf, conditional, qnuv, kstat or overshoot")
      ->required()
      ->check(CLI::IsMember({"tn_cdf", "conditional", "qnuv", "kstat", "overshoot"}));
  m->add_option("--dist", mc.dist, "bernoulli, poisson1 or a JSON spec file")->capture_default_str();
  m->add_option("--n", mc.n, "Number of steps or sample size");
  m->add_option("--x", mc.x, "Endpoint (conditional)");
  m->add_option("--y", mc.y, "Barrier (conditional, overshoot; tn_cdf level if --level is absent)");
  m->add_option("--level", mc.h, "Level h for tn_cdf");
  m->add_option("--u", mc.u, "u parameter (qnuv, kstat)");
  m->add_option("--v", mc.v, "v parameter (qnuv)");
  m->add_option("--power", mc.power, "Overshoot moment u - 2, in [0, 2]")->capture_default_str();
  m->add_option("--trials", mc.trials, "Number of trials")->capture_default_str();
  m->add_option("--seed", mc.seed, "Seed")->capture_default_str();
  m->add_option("--out", mc.out, "Output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadArguments;
  }

  try {
    if (c->parsed()) return cmd_compute(compute, out);
    if (s->parsed()) return cmd_sweep(sweep, out, err);
    if (v->parsed()) return cmd_verify(verify, out);
    return cmd_mc(mc, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::InvalidArgument ? kExitBadArguments : kExitComputation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
}

}  // namespace barrierwalk::cli
