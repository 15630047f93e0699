#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "barrierwalk/density.hpp"
#include "barrierwalk/error.hpp"
#include "oracles.hpp"

namespace bw = barrierwalk;
using bw::testing::binomial;

namespace {

double f_at(const bw::LatticeStepDistribution& d, const bw::DensityTable& t, double x) {
  const auto key = d.key_of(t.n, x);
  return key ? t.at(*key) : 0.0;
}

bw::LatticeStepDistribution three_atom() {
  bw::DistributionSpec spec;
  spec.atoms = {{-2, 0.125}, {0, 0.75}, {2, 0.125}};
  return bw::make_custom_lattice(spec);
}

}  // namespace

TEST(ExactDensity, TwoCoinFlips) {
  const auto d = bw::make_bernoulli();
  const auto t = bw::exact_density(d, 2);
  EXPECT_EQ(f_at(d, t, 0), 0.5);
  EXPECT_EQ(f_at(d, t, 2), 0.25);
  EXPECT_EQ(f_at(d, t, -2), 0.25);
  EXPECT_EQ(t.defect, 0.0);
}

TEST(ExactDensity, BinomialCentre) {
  const auto d = bw::make_bernoulli();
  const auto t = bw::exact_density(d, 100);
  // Log-gamma oracle; its own rounding is about 1e-14 relative at this size.
  const double oracle = std::exp(std::lgamma(101.0) - 2.0 * std::lgamma(51.0) - 100.0 * std::log(2.0));
  EXPECT_NEAR(f_at(d, t, 0), oracle, 1e-14);
  // C(100, 50) / 2^100 in exact integer arithmetic, rounded.
  EXPECT_NEAR(f_at(d, t, 0), 0.07958923738717877, 1e-16);
}

TEST(ExactDensity, MatchesBinomialEverywhere) {
  const auto d = bw::make_bernoulli();
  for (int n : {1, 7, 32, 64}) {
    const auto t = bw::exact_density(d, n);
    for (int up = 0; up <= n; ++up) {
      const double oracle = static_cast<double>(binomial(n, up)) * std::ldexp(1.0, -n);
      EXPECT_NEAR(f_at(d, t, 2 * up - n), oracle, 1e-15 * std::max(1.0, oracle)) << "n=" << n;
    }
  }
}

TEST(ExactDensity, FirstStepIsAtomList) {
  for (const auto& d : {bw::make_bernoulli(), bw::make_centered_poisson(), three_atom()}) {
    const auto t = bw::exact_density(d, 1);
    EXPECT_LE(t.defect, 1e-14);
    for (const auto& a : d.atoms()) EXPECT_EQ(t.at(a.key), a.prob);
    EXPECT_EQ(t.key_min, d.min_key());
    EXPECT_EQ(t.key_max(), d.max_key());
  }
}

TEST(ExactDensity, AgreesWithEnumeration) {
  const auto d = three_atom();
  for (int n = 1; n <= 8; ++n) {
    const auto t = bw::exact_density(d, n);
    const auto walks = bw::testing::enumerate_walks(d, n, 1.0);
    for (const auto& [key, p] : walks.density) EXPECT_NEAR(t.at(key), p, 1e-15);
  }
}

TEST(ExactDensity, MassConservation) {
  for (const auto& d : {bw::make_bernoulli(), bw::make_centered_poisson()}) {
    const auto family = bw::density_family(d, 256, 1e-13);
    for (const auto& t : family) {
      EXPECT_NEAR(t.total() + t.defect, 1.0, 1e-12) << d.name() << " n=" << t.n;
      EXPECT_LE(t.defect, 1e-13);
      EXPECT_GE(*std::min_element(t.mass.begin(), t.mass.end()), 0.0);
      EXPECT_GE(t.value(t.key_min), t.n * d.min_value() - 1e-9);
      EXPECT_LE(t.value(t.key_max()), t.n * d.max_value() + 1e-9);
    }
  }
}

TEST(ExactDensity, SemigroupProperty) {
  for (const auto& d : {bw::make_bernoulli(), bw::make_centered_poisson(), three_atom()}) {
    const auto f8 = bw::exact_density(d, 8);
    const auto f16 = bw::exact_density(d, 16);
    const auto conv = bw::convolve(f8, f8);
    for (auto key = std::min(conv.key_min, f16.key_min); key <= std::max(conv.key_max(), f16.key_max()); ++key) {
      EXPECT_NEAR(conv.at(key), f16.at(key), 1e-12);
    }
  }
}

TEST(ExactDensity, SymmetricLawGivesSymmetricTable) {
  const auto d = bw::make_bernoulli();
  const auto t = bw::exact_density(d, 101);
  for (int x = 1; x <= 101; x += 2) EXPECT_EQ(f_at(d, t, x), f_at(d, t, -x));
}

TEST(ExactDensity, PeakScalesAsInverseRoot) {
  for (const auto& d : {bw::make_bernoulli(), bw::make_centered_poisson()}) {
    double lo = 1e300;
    double hi = 0.0;
    for (int n : {16, 64, 256, 1024}) {
      const auto t = bw::exact_density(d, n, 1e-13);
      const double peak = *std::max_element(t.mass.begin(), t.mass.end()) * std::sqrt(n);
      lo = std::min(lo, peak);
      hi = std::max(hi, peak);
    }
    EXPECT_LT(hi / lo, 2.0) << d.name();
  }
}

TEST(ExactDensity, Errors) {
  const auto d = bw::make_bernoulli();
  EXPECT_THROW(bw::exact_density(d, 0), bw::Error);
  EXPECT_THROW(bw::exact_density(d, 4, 1e-6), bw::Error);
  try {
    bw::exact_density(bw::make_centered_poisson(), 100, 0.0, 50);
    FAIL() << "expected SizeOverflow";
  } catch (const bw::Error& e) {
    EXPECT_EQ(e.code(), bw::Errc::SizeOverflow);
  }
}

TEST(ExactDensity, CsvDump) {
  const auto t = bw::exact_density(bw::make_bernoulli(), 2);
  std::ostringstream out;
  bw::write_csv(t, out);
  EXPECT_EQ(out.str(), "x,mass\n-2,0.25\n0,0.5\n2,0.25\n");
}

TEST(LocalLimit, CentreValues) {
  const auto bern = bw::make_bernoulli();
  const auto a = bw::gaussian_llt_approx(bern, 100, 0);
  EXPECT_NEAR(a.approx, 2.0 / std::sqrt(200.0 * std::numbers::pi), 1e-16);
  EXPECT_NEAR(a.approx, 0.0797885, 1e-7);
  const double exact = f_at(bern, bw::exact_density(bern, 100), 0);
  EXPECT_NEAR(std::abs(exact - a.approx), 2.0e-4, 1e-5);
  EXPECT_LT(std::abs(exact - a.approx), 1.0 / 100);

  const auto pois = bw::make_centered_poisson();
  const auto b = bw::gaussian_llt_approx(pois, 400, 0);
  EXPECT_NEAR(b.approx, 0.019947114020071634, 1e-16);
  EXPECT_LE(std::abs(f_at(pois, bw::exact_density(pois, 400, 1e-13), 0) - b.approx), 5.0 / 400);
}

TEST(LocalLimit, ErrorShape) {
  const auto d = bw::make_centered_poisson();
  const auto a = bw::gaussian_llt_approx(d, 100, 10);
  EXPECT_NEAR(a.err_bound_shape, 10.0 / (1000.0 * 2.0) + 1e-3, 1e-15);
}

TEST(LocalLimit, OffLattice) {
  try {
    bw::gaussian_llt_approx(bw::make_bernoulli(), 100, 1);
    FAIL() << "expected OffLattice";
  } catch (const bw::Error& e) {
    EXPECT_EQ(e.code(), bw::Errc::OffLattice);
  }
}

TEST(DensityReport, PeakWindow) {
  const auto r = bw::density_error_report(bw::make_bernoulli(), 100, 2.0);
  EXPECT_LE(r.sup_normalized, 0.5);
  EXPECT_GE(r.sup_normalized, 0.3);
  EXPECT_EQ(r.points, 21u);
}

TEST(DensityReport, SymmetricLawErrorDecaysFasterThanInverseN) {
  const auto d = bw::make_bernoulli();
  const auto r100 = bw::density_error_report(d, 100, 2.0);
  const auto r400 = bw::density_error_report(d, 400, 2.0);
  EXPECT_GE(r100.sup_error / r400.sup_error, 2.0);
}

TEST(DensityReport, SingleStepSmoke) {
  for (const auto& d : {bw::make_bernoulli(), bw::make_centered_poisson()}) {
    const auto r = bw::density_error_report(d, 1, 2.0);
    EXPECT_TRUE(std::isfinite(r.sup_error));
    EXPECT_GT(r.points, 0u);
  }
}
