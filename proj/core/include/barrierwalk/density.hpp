#pragma once

#include <cstddef>
#include <vector>

#include "barrierwalk/distributions.hpp"
#include "barrierwalk/lattice_table.hpp"

namespace barrierwalk {

// f_n on L_n by iterated convolution. Tail keys are dropped only while the
// total dropped mass stays within trunc_eps (tracked in defect); trunc_eps = 0
// keeps every nonzero key. Throws InvalidArgument or SizeOverflow.
DensityTable exact_density(const LatticeStepDistribution& dist, int n, double trunc_eps = 0.0,
                           std::size_t max_keys = kDefaultMaxKeys);

// f_1, ..., f_{n_max} from a single convolution sweep; element k-1 holds f_k.
// Each table's defect is at most trunc_eps.
std::vector<DensityTable> density_family(const LatticeStepDistribution& dist, int n_max,
                                         double trunc_eps = 0.0,
                                         std::size_t max_keys = kDefaultMaxKeys);

struct LocalLimitApprox {
  double approx = 0.0;          // lambda * exp(-x^2 / 2n) / sqrt(2 pi n)
  double err_bound_shape = 0.0; // |x| / (n^{3/2} (1 + x^2/n)) + n^{-3/2}, constant-free
};

// Gaussian local-limit value at x in L_n, including the span factor lambda.
// Throws OffLattice.
LocalLimitApprox gaussian_llt_approx(const LatticeStepDistribution& dist, int n, double x);

struct DensityErrorReport {
  int n = 0;
  std::size_t points = 0;
  double sup_error = 0.0;       // sup |f_n(x) - approx(x)|
  double sup_normalized = 0.0;  // sup f_n(x) * sqrt(n) / lambda
  double sup_shape_ratio = 0.0; // sup |f_n(x) - approx(x)| / err_bound_shape(x)
  double defect = 0.0;
};

// Scans every lattice x with |x| <= x_max_multiple * sqrt(n).
DensityErrorReport density_error_report(const LatticeStepDistribution& dist, int n,
                                        double x_max_multiple, double trunc_eps = 1e-14);
DensityErrorReport density_error_report(const LatticeStepDistribution& dist,
                                        const DensityTable& table, double x_max_multiple);

}  // namespace barrierwalk
