#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "barrierwalk/distributions.hpp"
#include "barrierwalk/lattice_table.hpp"

namespace barrierwalk {

struct BarrierOptions {
  // Total mass the lower-tail truncation may drop per solution. Only runs
  // with more than exact_up_to steps truncate; shorter ones keep every
  // nonzero key.
  double trunc_eps = 1e-14;
  int exact_up_to = 2048;
  // Retain every confined layer g_0..g_{n-1} (memory O(n^2) for wide laws).
  bool keep_layers = false;
  // Fault injection: added to the largest entry of the final table.
  double perturb = 0.0;
  std::size_t max_keys = kDefaultMaxKeys;
  // Cap on the cells BarrierCache keeps for f_1..f_n together.
  std::size_t max_family_keys = 8 * kDefaultMaxKeys;
};

// Confined-walk solution for barrier y after n steps.
//   g_k(s)   = P[S_1 < y, ..., S_k < y, S_k = s]           (layers, k < n)
//   final(x) = P[T_{n-1} < y, S_n = x]                     (all x in L_n)
//   crossings[k-1](x) = P[T_{k-1} < y, S_k = x], x >= y    (k = 1..n)
struct BarrierSolution {
  int n = 0;
  double y = 0.0;
  LatticeTable final;
  std::vector<LatticeTable> crossings;
  std::vector<LatticeTable> layers;
  std::vector<double> layer_mass;  // sum_s g_k(s), k = 0..n-1
  double absorbed = 0.0;           // P[T_{n-1} >= y]
  double defect = 0.0;

  // rtilde_n(x, y); zero for x off L_n.
  double rtilde(double x) const noexcept;
  const LatticeTable& crossing(int k) const { return crossings.at(static_cast<std::size_t>(k - 1)); }
  // P[T_n < y].
  double below_barrier_mass() const noexcept;
};

// Builds the solution by dynamic programming over the confined walk.
// y <= 0 gives the all-zero solution (T_{n-1} >= 0). Throws SizeOverflow when
// n * (step key width + table header) exceeds opts.max_keys.
BarrierSolution rtilde_exact(const LatticeStepDistribution& dist, int n, double y,
                             const BarrierOptions& opts = {});

// Thread-safe memo of barrier solutions keyed by (n, y) and of f_1..f_n for
// one step law. Entries are immutable once published.
class BarrierCache {
 public:
  explicit BarrierCache(LatticeStepDistribution dist, BarrierOptions opts = {});

  const LatticeStepDistribution& dist() const noexcept { return dist_; }
  const BarrierOptions& options() const noexcept { return opts_; }

  std::shared_ptr<const BarrierSolution> solution(int n, double y);
  // Throws SizeOverflow once f_1..f_n would hold more than opts.max_family_keys cells.
  std::shared_ptr<const DensityTable> density(int n);

 private:
  LatticeStepDistribution dist_;
  BarrierOptions opts_;
  std::mutex mutex_;
  std::map<std::pair<int, double>, std::shared_ptr<const BarrierSolution>> solutions_;
  std::vector<std::shared_ptr<const DensityTable>> densities_;
  std::size_t density_cells_ = 0;
};

// R_n(x, y) = rtilde_n(x, y) / f_n(x), or 1 when f_n(x) = 0. Throws OffLattice.
double r_conditional(const LatticeStepDistribution& dist, int n, double x, double y,
                     const BarrierOptions& opts = {});
double r_conditional(BarrierCache& cache, int n, double x, double y);

// P[T_n < y]; 0 for y <= 0.
double barrier_cdf_exact(const LatticeStepDistribution& dist, int n, double y,
                         const BarrierOptions& opts = {});

// P[max_{0<=j<=n-1} |S_j| < u | S_n = 0], or 1 when f_n(0) = 0.
double two_sided_exact(const LatticeStepDistribution& dist, int n, double u,
                       const BarrierOptions& opts = {});

struct IdentityResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs|
  double defect = 0.0;    // truncation mass behind both sides
};

// rtilde_n(y+s, y) = sum_{t>0} f(s+t) rtilde_{n-1}(y-t, y), both sides from
// separate DP runs. Needs n >= 2, y > 0, s >= 0 (PreconditionViolated) and
// y + s in L_n (OffLattice).
IdentityResidual check_recur1(BarrierCache& cache, int n, double y, double s);
IdentityResidual check_recur1(const LatticeStepDistribution& dist, int n, double y, double s,
                              const BarrierOptions& opts = {});

// rtilde_n(x, y) = f_n(x) - f_n(y+a) + rtilde_n(y+a, y)
//   + sum_{k=1}^{n-1} sum_{xi>=0} rtilde_k(y+xi, y) (f_{n-k}(a-xi) - f_{n-k}(x-y-xi)).
// Needs n >= 2, y > 0, a >= 0 and x, y + a in L_n.
IdentityResidual check_recur2(BarrierCache& cache, int n, double x, double y, double a);
IdentityResidual check_recur2(const LatticeStepDistribution& dist, int n, double x, double y,
                              double a, const BarrierOptions& opts = {});

struct OvershootSums {
  std::vector<double> partial_sums;  // element n-1: sum over steps 1..n
  double tail_increment = 0.0;       // contribution of step N alone
  double tail_limit = 0.0;           // partial sum plus an n^{-3/2} tail estimate
  double defect = 0.0;
};

// sum_{n<=N} sum_{xi>=0} xi^{u-2} rtilde_n(y+xi, y) from one N-step DP.
// Needs y >= 0, 2 <= u <= 4, N >= 1.
OvershootSums overshoot_moment_sum(const LatticeStepDistribution& dist, double y, double u, int N,
                                   const BarrierOptions& opts = {});

enum class RoughBound { a, b };

// rtilde_n(y-z, y) divided by the constant-free envelope
//   a: min(y+1, sqrt n) min(z+1, sqrt n) / n^{3/2}
//   b: min(z+1, sqrt n) / y^2, needing n >= 3, y >= sqrt n, 0 <= z <= y/2.
double rough_bound_ratio(BarrierCache& cache, int n, double y, double z, RoughBound kind);
double rough_bound_ratio(const LatticeStepDistribution& dist, int n, double y, double z,
                         RoughBound kind, const BarrierOptions& opts = {});

// R_n(y-z, y) * n / (y z), the two-sided order-of-magnitude diagnostic.
double abr_ratio(BarrierCache& cache, int n, double y, double z);

struct SweepRow {
  int n = 0;
  double y = 0.0;
  double z = 0.0;
  double x = 0.0;
  double exact = 0.0;
  double approx = 0.0;
  double abs_err = 0.0;
  double norm_err = 0.0;  // abs_err * n / (y + z + 1)
  double defect = 0.0;
};

// Moves a requested (y, z) onto the lattice: y to the nearest point of
// L_n or L_{n-1}, x = y - z to the nearest point of L_n (ties go up), then
// z = y - x. Returns {y, z}.
std::pair<double, double> snap_sweep_point(const LatticeStepDistribution& dist, int n, double y, double z);

// Exact R_n(y-z, y) against 1 - exp(-2yz/n). Throws OffLattice if y - z is not in L_n.
SweepRow make_sweep_row(BarrierCache& cache, int n, double y, double z);

inline constexpr const char* kSweepCsvHeader = "n,y,z,x,exact,approx,abs_err,norm_err,defect";
std::string to_csv(const SweepRow& row);
std::string to_json(const SweepRow& row);
// Parses a line produced by to_csv; throws InvalidArgument.
SweepRow parse_sweep_row_csv(const std::string& line);

}  // namespace barrierwalk
