#include "barrierwalk/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "barrierwalk/asymptotics.hpp"
#include "barrierwalk/density.hpp"
#include "barrierwalk/error.hpp"
#include "barrierwalk/format.hpp"

namespace barrierwalk {

namespace {

// Per-step truncation budget for the cache's density family, which grows on
// demand and so cannot divide trunc_eps by a known final n.
constexpr double kFamilyHorizon = 65536.0;

// Splits table at key b: keys < b stay in table, keys >= b are returned.
LatticeTable split_upper(LatticeTable& table, std::int64_t b) {
  LatticeTable upper;
  upper.n = table.n;
  upper.offset = table.offset;
  upper.lambda = table.lambda;
  upper.key_min = std::max(b, table.key_min);
  if (table.empty() || b > table.key_max()) return upper;
  const auto cut = static_cast<std::size_t>(std::max<std::int64_t>(b - table.key_min, 0));
  upper.mass.assign(table.mass.begin() + static_cast<std::ptrdiff_t>(cut), table.mass.end());
  table.mass.resize(cut);
  return upper;
}

std::int64_t require_key(const LatticeStepDistribution& dist, int n, double x, const char* what) {
  auto key = dist.key_of(n, x);
  if (!key) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " = " << x << " is not in L_" << n;
    throw Error(Errc::OffLattice, msg.str());
  }
  return *key;
}

double density_eps(const BarrierOptions& opts, int n) { return n > opts.exact_up_to ? opts.trunc_eps : 0.0; }

}  // namespace

double BarrierSolution::rtilde(double x) const noexcept {
  const double t = (x - final.offset) / final.lambda;
  const double r = std::nearbyint(t);
  if (std::abs(t - r) > 1e-9 * std::max(1.0, std::abs(t))) return 0.0;
  return final.at(static_cast<std::int64_t>(r));
}

double BarrierSolution::below_barrier_mass() const noexcept {
  if (crossings.empty()) return final.total();
  return final.total() - crossings.back().total();
}

BarrierSolution rtilde_exact(const LatticeStepDistribution& dist, int n, double y,
                             const BarrierOptions& opts) {
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  if (!(opts.trunc_eps >= 0.0 && opts.trunc_eps <= 1e-12)) {
    throw Error(Errc::InvalidArgument, "trunc_eps must lie in [0, 1e-12]");
  }
  // Every step keeps its crossing table, at most one step width wide, plus
  // the table header; the whole store shares the per-table key cap.
  const auto width = static_cast<double>(dist.max_key() - dist.min_key() + 1);
  const double header = static_cast<double>(sizeof(LatticeTable)) / sizeof(double);
  if (static_cast<double>(n) * (width + header) > static_cast<double>(opts.max_keys)) {
    throw Error(Errc::SizeOverflow, "crossing tables for n = " + std::to_string(n) +
                                        " exceed cap of " + std::to_string(opts.max_keys) + " keys");
  }
  BarrierSolution sol;
  sol.n = n;
  sol.y = y;
  sol.crossings.reserve(static_cast<std::size_t>(n));
  sol.layer_mass.reserve(static_cast<std::size_t>(n));
  const double budget = n > opts.exact_up_to ? opts.trunc_eps / static_cast<double>(n) : 0.0;

  LatticeTable g = point_mass_at_origin(dist);
  if (!(0.0 < y)) {
    g.mass.clear();
    sol.absorbed = 1.0;
  }
  sol.layer_mass.push_back(g.total());
  if (opts.keep_layers) sol.layers.push_back(g);

  for (int k = 1; k <= n; ++k) {
    LatticeTable next = add_step(g, dist, opts.max_keys);
    const std::int64_t barrier_key = dist.first_key_at_or_above(k, y);
    if (k == n) {
      LatticeTable below = next;
      sol.crossings.push_back(split_upper(below, barrier_key));
      sol.final = std::move(next);
      break;
    }
    LatticeTable upper = split_upper(next, barrier_key);
    sol.absorbed += upper.total();
    sol.crossings.push_back(std::move(upper));
    trim_tails(next, budget, true, false);
    g = std::move(next);
    sol.layer_mass.push_back(g.total());
    if (opts.keep_layers) sol.layers.push_back(g);
  }
  sol.defect = sol.final.defect;
  if (opts.perturb != 0.0 && !sol.final.empty()) {
    sol.final.mass[static_cast<std::size_t>(sol.final.argmax_key() - sol.final.key_min)] += opts.perturb;
  }
  return sol;
}

BarrierCache::BarrierCache(LatticeStepDistribution dist, BarrierOptions opts)
    : dist_(std::move(dist)), opts_(opts) {}

std::shared_ptr<const BarrierSolution> BarrierCache::solution(int n, double y) {
  const auto key = std::make_pair(n, y);
  {
    std::lock_guard lock(mutex_);
    if (auto it = solutions_.find(key); it != solutions_.end()) return it->second;
  }
  auto sol = std::make_shared<const BarrierSolution>(rtilde_exact(dist_, n, y, opts_));
  std::lock_guard lock(mutex_);
  return solutions_.try_emplace(key, std::move(sol)).first->second;
}

std::shared_ptr<const DensityTable> BarrierCache::density(int n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  std::lock_guard lock(mutex_);
  if (densities_.empty()) densities_.push_back(std::make_shared<const DensityTable>(exact_density(dist_, 1)));
  while (static_cast<int>(densities_.size()) < n) {
    auto next = add_step(*densities_.back(), dist_, opts_.max_keys);
    // Steps up to exact_up_to keep every nonzero key.
    const bool trims = static_cast<int>(densities_.size()) + 1 > opts_.exact_up_to;
    trim_tails(next, trims ? opts_.trunc_eps / kFamilyHorizon : 0.0, true, true);
    density_cells_ += next.mass.size() + sizeof(DensityTable) / sizeof(double);
    if (density_cells_ > opts_.max_family_keys) {
      throw Error(Errc::SizeOverflow, "density family up to n = " + std::to_string(n) +
                                          " exceeds cap of " + std::to_string(opts_.max_family_keys) + " keys");
    }
    densities_.push_back(std::make_shared<const DensityTable>(std::move(next)));
  }
  return densities_[static_cast<std::size_t>(n - 1)];
}

double r_conditional(BarrierCache& cache, int n, double x, double y) {
  const auto key = require_key(cache.dist(), n, x, "x");
  const auto sol = cache.solution(n, y);
  const double f = cache.density(n)->at(key);
  if (f == 0.0) return 1.0;
  return sol->final.at(key) / f;
}

double r_conditional(const LatticeStepDistribution& dist, int n, double x, double y,
                     const BarrierOptions& opts) {
  const auto key = require_key(dist, n, x, "x");
  const double f = exact_density(dist, n, density_eps(opts, n), opts.max_keys).at(key);
  if (f == 0.0) return 1.0;
  return rtilde_exact(dist, n, y, opts).final.at(key) / f;
}

double barrier_cdf_exact(const LatticeStepDistribution& dist, int n, double y,
                         const BarrierOptions& opts) {
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  if (!(y > 0.0)) return 0.0;
  return rtilde_exact(dist, n, y, opts).below_barrier_mass();
}

double two_sided_exact(const LatticeStepDistribution& dist, int n, double u,
                       const BarrierOptions& opts) {
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  if (!(u > 0.0)) throw Error(Errc::InvalidArgument, "u must be > 0");
  const auto end_key = dist.key_of(n, 0.0);
  if (!end_key) return 1.0;
  const double f0 = exact_density(dist, n, density_eps(opts, n), opts.max_keys).at(*end_key);
  if (f0 == 0.0) return 1.0;

  LatticeTable g = point_mass_at_origin(dist);
  for (int k = 1; k < n; ++k) {
    g = add_step(g, dist, opts.max_keys);
    clip_keys(g, dist.last_key_at_or_below(k, -u) + 1, dist.first_key_at_or_above(k, u) - 1);
  }
  double num = 0.0;
  for (std::size_t i = 0; i < g.mass.size(); ++i) {
    const auto key = g.key_min + static_cast<std::int64_t>(i);
    num += g.mass[i] * dist.prob_at_key(*end_key - key);
  }
  return num / f0;
}

IdentityResidual check_recur1(BarrierCache& cache, int n, double y, double s) {
  if (n < 2 || !(y > 0.0) || s < 0.0) {
    throw Error(Errc::PreconditionViolated, "recur1 needs n >= 2, y > 0, s >= 0");
  }
  const auto& dist = cache.dist();
  const auto top = require_key(dist, n, y + s, "y + s");
  const auto sol_n = cache.solution(n, y);
  const auto sol_prev = cache.solution(n - 1, y);
  const auto& prev = sol_prev->final;
  const auto below = dist.first_key_at_or_above(n - 1, y);

  IdentityResidual r;
  r.lhs = sol_n->final.at(top);
  for (std::size_t i = 0; i < prev.mass.size(); ++i) {
    const auto key = prev.key_min + static_cast<std::int64_t>(i);
    if (key >= below) break;
    r.rhs += dist.prob_at_key(top - key) * prev.mass[i];
  }
  r.residual = std::abs(r.lhs - r.rhs);
  r.defect = sol_n->defect + sol_prev->defect;
  return r;
}

IdentityResidual check_recur1(const LatticeStepDistribution& dist, int n, double y, double s,
                              const BarrierOptions& opts) {
  BarrierCache cache(dist, opts);
  return check_recur1(cache, n, y, s);
}

IdentityResidual check_recur2(BarrierCache& cache, int n, double x, double y, double a) {
  if (n < 2 || !(y > 0.0) || a < 0.0) {
    throw Error(Errc::PreconditionViolated, "recur2 needs n >= 2, y > 0, a >= 0");
  }
  const auto& dist = cache.dist();
  const auto x_key = require_key(dist, n, x, "x");
  const auto ya_key = require_key(dist, n, y + a, "y + a");
  const auto sol = cache.solution(n, y);
  const auto f_n = cache.density(n);

  IdentityResidual r;
  r.lhs = sol->final.at(x_key);
  r.defect = sol->defect + f_n->defect;
  double sum = 0.0;
  for (int k = 1; k <= n - 1; ++k) {
    const auto& cross = sol->crossing(k);
    const auto f_rest = cache.density(n - k);
    r.defect += f_rest->defect;
    for (std::size_t i = 0; i < cross.mass.size(); ++i) {
      const auto key = cross.key_min + static_cast<std::int64_t>(i);
      sum += cross.mass[i] * (f_rest->at(ya_key - key) - f_rest->at(x_key - key));
    }
  }
  r.rhs = f_n->at(x_key) - f_n->at(ya_key) + sol->final.at(ya_key) + sum;
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

IdentityResidual check_recur2(const LatticeStepDistribution& dist, int n, double x, double y,
                              double a, const BarrierOptions& opts) {
  BarrierCache cache(dist, opts);
  return check_recur2(cache, n, x, y, a);
}

OvershootSums overshoot_moment_sum(const LatticeStepDistribution& dist, double y, double u, int N,
                                   const BarrierOptions& opts) {
  if (y < 0.0 || u < 2.0 || u > 4.0 || N < 1) {
    throw Error(Errc::PreconditionViolated, "overshoot sums need y >= 0, 2 <= u <= 4, N >= 1");
  }
  const double power = u - 2.0;
  // At y = 0 the walk starts on the barrier, so T_0 < y fails and every term
  // vanishes; the sum is taken over first crossings strictly after time 0.
  const auto sol = rtilde_exact(dist, N, y, opts);
  OvershootSums out;
  out.partial_sums.reserve(static_cast<std::size_t>(N));
  double running = 0.0;
  double increment = 0.0;
  for (int k = 1; k <= N; ++k) {
    const auto& cross = sol.crossing(k);
    increment = 0.0;
    for (std::size_t i = 0; i < cross.mass.size(); ++i) {
      const double xi = std::max(0.0, cross.value(cross.key_min + static_cast<std::int64_t>(i)) - y);
      increment += std::pow(xi, power) * cross.mass[i];
    }
    running += increment;
    out.partial_sums.push_back(running);
  }
  const double n_last = static_cast<double>(N);
  out.tail_increment = increment;
  // Increments decay like n^{-3/2}; sum_{n>N} (N/n)^{3/2} ~ N^{3/2} * 2 / sqrt(N + 1/2).
  out.tail_limit = running + increment * std::pow(n_last, 1.5) * 2.0 / std::sqrt(n_last + 0.5);
  out.defect = sol.defect;
  return out;
}

double rough_bound_ratio(BarrierCache& cache, int n, double y, double z, RoughBound kind) {
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  const double root_n = std::sqrt(static_cast<double>(n));
  double envelope = 0.0;
  if (kind == RoughBound::a) {
    if (y < 0.0 || z < 0.0) throw Error(Errc::PreconditionViolated, "bound (a) needs y >= 0, z >= 0");
    envelope = std::min(y + 1.0, root_n) * std::min(z + 1.0, root_n) / std::pow(static_cast<double>(n), 1.5);
  } else {
    if (n < 3 || y < root_n || z < 0.0 || z > y / 2.0) {
      throw Error(Errc::PreconditionViolated, "bound (b) needs n >= 3, y >= sqrt(n), 0 <= z <= y/2");
    }
    envelope = std::min(z + 1.0, root_n) / (y * y);
  }
  const auto key = require_key(cache.dist(), n, y - z, "y - z");
  return cache.solution(n, y)->final.at(key) / envelope;
}

double rough_bound_ratio(const LatticeStepDistribution& dist, int n, double y, double z,
                         RoughBound kind, const BarrierOptions& opts) {
  BarrierCache cache(dist, opts);
  return rough_bound_ratio(cache, n, y, z, kind);
}

double abr_ratio(BarrierCache& cache, int n, double y, double z) {
  if (!(y > 0.0) || !(z > 0.0)) throw Error(Errc::PreconditionViolated, "abr ratio needs y, z > 0");
  return r_conditional(cache, n, y - z, y) * static_cast<double>(n) / (y * z);
}

namespace {

double nearest_on_lattice(const LatticeStepDistribution& dist, int n, double v) {
  const auto lo = dist.last_key_at_or_below(n, v);
  const double below = dist.value(n, lo);
  const double above = dist.value(n, lo + 1);
  return (v - below < above - v) ? below : above;
}

}  // namespace

std::pair<double, double> snap_sweep_point(const LatticeStepDistribution& dist, int n, double y, double z) {
  if (n < 1) throw Error(Errc::PreconditionViolated, "snap needs n >= 1");
  double ys = nearest_on_lattice(dist, n, y);
  if (n >= 2) {
    const double alt = nearest_on_lattice(dist, n - 1, y);
    const double d0 = std::abs(ys - y);
    const double d1 = std::abs(alt - y);
    if (d1 < d0 || (d1 == d0 && alt > ys)) ys = alt;
  }
  const double x = nearest_on_lattice(dist, n, ys - z);
  return {ys, ys - x};
}

SweepRow make_sweep_row(BarrierCache& cache, int n, double y, double z) {
  SweepRow row;
  row.n = n;
  row.y = y;
  row.z = z;
  row.x = y - z;
  const auto key = require_key(cache.dist(), n, row.x, "x = y - z");
  const auto sol = cache.solution(n, y);
  const auto f = cache.density(n);
  row.exact = f->at(key) == 0.0 ? 1.0 : sol->final.at(key) / f->at(key);
  row.approx = theorem1_approx(n, std::max(y, 0.0), std::max(z, 0.0));
  row.abs_err = std::abs(row.exact - row.approx);
  row.norm_err = row.abs_err * static_cast<double>(n) / (y + z + 1.0);
  row.defect = sol->defect + f->defect;
  return row;
}

std::string to_csv(const SweepRow& row) {
  std::string s = std::to_string(row.n);
  for (double v : {row.y, row.z, row.x, row.exact, row.approx, row.abs_err, row.norm_err, row.defect}) {
    s += ',';
    s += format_double(v);
  }
  return s;
}

std::string to_json(const SweepRow& row) {
  std::string s = "{\"n\": " + std::to_string(row.n);
  const std::pair<const char*, double> fields[] = {
      {"y", row.y},          {"z", row.z},           {"x", row.x},
      {"exact", row.exact},  {"approx", row.approx}, {"abs_err", row.abs_err},
      {"norm_err", row.norm_err}, {"defect", row.defect}};
  for (const auto& [name, v] : fields) {
    s += ", \"";
    s += name;
    s += "\": ";
    s += format_double(v);
  }
  s += '}';
  return s;
}

SweepRow parse_sweep_row_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  if (cells.size() != 9) throw Error(Errc::InvalidArgument, "sweep row needs 9 fields: '" + line + "'");
  SweepRow row;
  try {
    row.n = std::stoi(cells[0]);
    double* dst[] = {&row.y, &row.z, &row.x, &row.exact, &row.approx, &row.abs_err, &row.norm_err, &row.defect};
    for (std::size_t i = 0; i < 8; ++i) *dst[i] = std::stod(cells[i + 1]);
  } catch (const std::exception&) {
    throw Error(Errc::InvalidArgument, "malformed sweep row: '" + line + "'");
  }
  return row;
}

}  // namespace barrierwalk
