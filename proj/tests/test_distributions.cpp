#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "barrierwalk/distributions.hpp"
#include "barrierwalk/error.hpp"

namespace bw = barrierwalk;

namespace {

bw::Errc error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const bw::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no barrierwalk::Error thrown";
  return bw::Errc::InvalidArgument;
}

double total_prob(const bw::LatticeStepDistribution& d) {
  double s = 0.0;
  for (const auto& a : d.atoms()) s += a.prob;
  return s;
}

void expect_standard_lattice(const bw::LatticeStepDistribution& d) {
  EXPECT_NEAR(total_prob(d), 1.0, 1e-12);
  EXPECT_NEAR(d.alpha(1), 0.0, 1e-9);
  EXPECT_NEAR(d.alpha(2), 1.0, 1e-9);
  std::int64_t g = 0;
  for (const auto& a : d.atoms()) {
    g = std::gcd(g, a.key - d.atoms().front().key);
    EXPECT_NEAR(a.value, d.gamma() + static_cast<double>(a.key) * d.lambda(), 1e-12);
  }
  EXPECT_EQ(g, 1);
  EXPECT_GT(d.lambda(), 0.0);
}

}  // namespace

TEST(Bernoulli, AtomsAndSpan) {
  const auto d = bw::make_bernoulli();
  ASSERT_EQ(d.atoms().size(), 2u);
  EXPECT_EQ(d.atoms()[0].value, -1.0);
  EXPECT_EQ(d.atoms()[1].value, 1.0);
  EXPECT_EQ(d.atoms()[0].prob, 0.5);
  EXPECT_EQ(d.lambda(), 2.0);
  EXPECT_EQ(d.truncation_defect(), 0.0);
  EXPECT_EQ(d.alpha(3), 0.0);
  EXPECT_EQ(d.beta(4), 1.0);
  expect_standard_lattice(d);
}

TEST(Bernoulli, Moments) {
  const auto d = bw::make_bernoulli();
  const auto m = d.moments(2);
  EXPECT_EQ(m.alpha, 1.0);
  EXPECT_EQ(m.beta, 1.0);
  EXPECT_EQ(d.beta(3.5), 1.0);
  EXPECT_EQ(error_code([&] { d.alpha(3.5); }), bw::Errc::NonIntegerPowerForAlpha);
}

TEST(CenteredPoisson, AtomsMomentsAndDefect) {
  const auto d = bw::make_centered_poisson();
  EXPECT_EQ(d.lambda(), 1.0);
  EXPECT_NEAR(d.atoms().front().value, -1.0, 0.0);
  EXPECT_NEAR(d.atoms().front().prob, std::exp(-1.0), 1e-15);
  EXPECT_NEAR(d.atoms().front().prob, 0.3678794, 1e-7);
  EXPECT_LE(d.truncation_defect(), 1e-14);

  // Independent series over the retained atoms: sum (r-1)^k e^{-1} / r!.
  double a3 = 0.0;
  double b4 = 0.0;
  double m2 = 0.0;
  double term = std::exp(-1.0);
  for (std::size_t r = 0; r < d.atoms().size(); ++r) {
    if (r > 0) term /= static_cast<double>(r);
    const double x = static_cast<double>(r) - 1.0;
    a3 += x * x * x * term;
    b4 += x * x * x * x * term;
    m2 += x * x * term;
  }
  EXPECT_NEAR(d.alpha(3), a3, 1e-12);
  EXPECT_NEAR(d.beta(4), b4, 1e-12);
  // Dropping the tail beyond r = 16 costs about 4.5e-12 in alpha_3 and 7.3e-11 in beta_4.
  EXPECT_NEAR(d.alpha(3), 1.0, 1e-11);
  EXPECT_NEAR(d.beta(4), 4.0, 1e-10);
  const auto m = d.moments(2);
  EXPECT_NEAR(m.alpha, 1.0, 1e-12);
  EXPECT_NEAR(m.beta, m2, 1e-12);
  expect_standard_lattice(d);
}

TEST(CenteredPoisson, HigherMomentsWithFinerTail) {
  const auto d = bw::make_centered_poisson(1e-17);
  EXPECT_NEAR(d.alpha(3), 1.0, 1e-12);
  EXPECT_NEAR(d.beta(4), 4.0, 1e-12);
}

TEST(CenteredPoisson, DefectShrinksWithTolerance) {
  double prev = 1.0;
  std::size_t prev_atoms = 0;
  for (double eps : {1e-14, 1e-15, 1e-16, 1e-17}) {
    const auto d = bw::make_centered_poisson(eps);
    EXPECT_LT(d.truncation_defect(), eps);
    EXPECT_LE(d.truncation_defect(), prev);
    EXPECT_GE(d.atoms().size(), prev_atoms);
    prev = d.truncation_defect();
    prev_atoms = d.atoms().size();
  }
}

TEST(CenteredPoisson, RejectsLooseTolerance) {
  EXPECT_EQ(error_code([] { bw::make_centered_poisson(1e-10); }), bw::Errc::InvalidArgument);
  EXPECT_EQ(error_code([] { bw::make_centered_poisson(0.0); }), bw::Errc::InvalidArgument);
}

TEST(CustomLattice, TwoPointSymmetric) {
  bw::DistributionSpec spec;
  spec.atoms = {{-1, 0.5}, {1, 0.5}};
  const auto d = bw::make_custom_lattice(spec);
  EXPECT_EQ(d.lambda(), 2.0);
  EXPECT_TRUE(d.gamma() == 1.0 || d.gamma() == -1.0);
  expect_standard_lattice(d);
}

TEST(CustomLattice, ThreeAtomLaw) {
  bw::DistributionSpec spec;
  spec.atoms = {{-2, 0.125}, {0, 0.75}, {2, 0.125}};
  const auto d = bw::make_custom_lattice(spec);
  EXPECT_EQ(d.lambda(), 2.0);
  EXPECT_NEAR(d.alpha(1), 0.0, 1e-15);
  EXPECT_NEAR(d.alpha(2), 1.0, 1e-15);
  expect_standard_lattice(d);
}

TEST(CustomLattice, RationalBaseStep) {
  // Values -1/2 * 2 and 1/2 * 2 on a grid of step 1/2.
  bw::DistributionSpec spec;
  spec.base_step = bw::Rational::parse("1/2");
  spec.atoms = {{-2, 0.5}, {2, 0.5}};
  const auto d = bw::make_custom_lattice(spec);
  EXPECT_EQ(d.lambda(), 2.0);
  EXPECT_EQ(d.min_value(), -1.0);
}

TEST(CustomLattice, Errors) {
  bw::DistributionSpec shifted;
  shifted.atoms = {{0, 0.5}, {1, 0.5}};
  EXPECT_EQ(error_code([&] { bw::make_custom_lattice(shifted); }), bw::Errc::NonStandardized);

  bw::DistributionSpec light;
  light.atoms = {{-1, 0.5}, {1, 0.49}};
  EXPECT_EQ(error_code([&] { bw::make_custom_lattice(light); }), bw::Errc::InvalidMass);

  bw::DistributionSpec negative;
  negative.atoms = {{-1, 1.5}, {1, -0.5}};
  EXPECT_EQ(error_code([&] { bw::make_custom_lattice(negative); }), bw::Errc::NegativeProb);
}

TEST(CustomLattice, StandardizeIsAffine) {
  bw::DistributionSpec spec;
  spec.atoms = {{0, 0.5}, {1, 0.5}};
  spec.standardize = true;
  const auto d = bw::make_custom_lattice(spec);
  EXPECT_NEAR(d.min_value(), -1.0, 1e-15);
  EXPECT_NEAR(d.max_value(), 1.0, 1e-15);
  EXPECT_NEAR(d.lambda(), 2.0, 1e-15);
  expect_standard_lattice(d);
}

TEST(CustomLattice, SkewedLawSpanIsMaximal) {
  // keys -2 (p = 1/3), 1 (p = 2/3): mean 0, variance 2; standardized span 3/sqrt(2).
  bw::DistributionSpec spec;
  spec.atoms = {{-2, 1.0 / 3.0}, {1, 2.0 / 3.0}};
  spec.standardize = true;
  const auto d = bw::make_custom_lattice(spec);
  EXPECT_NEAR(d.lambda(), 3.0 / std::sqrt(2.0), 1e-14);
  expect_standard_lattice(d);
}

TEST(DistributionSpec, JsonRoundTrip) {
  const auto spec = bw::DistributionSpec::from_json(
      R"({"base_step": "1/1", "gamma": 0, "atoms": [{"key": -1, "prob": 0.5}, {"key": 1, "prob": 0.5}], "standardize": false})");
  EXPECT_EQ(spec.base_step.num, 1);
  EXPECT_EQ(spec.base_step.den, 1);
  ASSERT_EQ(spec.atoms.size(), 2u);
  EXPECT_EQ(spec.atoms[0].key, -1);
  const auto d = bw::make_custom_lattice(spec);
  EXPECT_EQ(d.lambda(), 2.0);
}

TEST(DistributionSpec, FileSelector) {
  const auto path = std::filesystem::temp_directory_path() / "barrierwalk_three_atom.json";
  {
    std::ofstream f(path);
    f << R"({"base_step": "1", "atoms": [{"key": -2, "prob": 0.125}, {"key": 0, "prob": 0.75}, {"key": 2, "prob": 0.125}]})";
  }
  const auto d = bw::make_distribution(path.string());
  EXPECT_EQ(d.atoms().size(), 3u);
  EXPECT_EQ(d.lambda(), 2.0);
  std::filesystem::remove(path);
}

TEST(DistributionSpec, BadJson) {
  EXPECT_EQ(error_code([] { bw::DistributionSpec::from_json("{not json"); }), bw::Errc::InvalidArgument);
  EXPECT_EQ(error_code([] { bw::Rational::parse("1/0"); }), bw::Errc::InvalidArgument);
  EXPECT_THROW(bw::make_distribution("/nonexistent/law.json"), bw::Error);
}

TEST(Lattice, KeyLookup) {
  const auto d = bw::make_bernoulli();
  // L_4 = {4 + 2m}: even integers.
  EXPECT_TRUE(d.key_of(4, 0).has_value());
  EXPECT_FALSE(d.key_of(4, 1).has_value());
  EXPECT_FALSE(d.key_of(4, 0.5).has_value());
  EXPECT_EQ(d.value(4, *d.key_of(4, 2)), 2.0);
  EXPECT_EQ(d.value(3, d.first_key_at_or_above(3, 0)), 1.0);
  EXPECT_EQ(d.value(3, d.last_key_at_or_below(3, 0)), -1.0);
  EXPECT_EQ(d.value(3, d.first_key_at_or_above(3, 1)), 1.0);
}
