#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "gdt/dist/moments.hpp"
#include "gdt/dist/rng.hpp"
#include "gdt/dist/sampler.hpp"
#include "gdt/error.hpp"

using namespace gdt;
using namespace gdt::dist;
using flexscript::DistributionExpr;
using flexscript::Family;

namespace {

std::vector<double> draw(const DistributionExpr& e, std::uint64_t seed, std::size_t n) {
  Sampler s(e, seed);
  std::vector<double> out(n);
  for (auto& x : out) x = s.next();
  return out;
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

const std::vector<DistributionExpr>& table_examples() {
  static const std::vector<DistributionExpr> v = {
      {Family::constant, {7}},          {Family::exponential, {10}},
      {Family::normal, {10, 2}},        {Family::triangular, {2, 4, 9}},
      {Family::uniform, {2, 6}},        {Family::lognormal, {0, 0.5}},
      {Family::weibull, {1.5, 4.0}},    {Family::gamma, {3, 2}},
      {Family::poisson, {4}},
  };
  return v;
}

}  // namespace

TEST(Rng, DeriveSeedIsInjectiveInIndex) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 100000; ++i) seen.insert(derive_seed(42, i));
  EXPECT_EQ(seen.size(), 100000u);
}

TEST(Rng, KnownStreamIsStable) {
  // Pinned so any change to the generator is noticed.
  Xoshiro256 a(1), b(1);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
  Xoshiro256 c(0);
  const auto first = c();
  Xoshiro256 d(0);
  EXPECT_EQ(d(), first);
  EXPECT_NE(Xoshiro256(1)(), Xoshiro256(2)());
}

TEST(Rng, BelowIsInRange) {
  Xoshiro256 r(5);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[r.below(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Sampler, ConstantIsConstant) {
  for (double x : draw({Family::constant, {7}}, 3, 1000)) EXPECT_EQ(x, 7.0);
}

TEST(Sampler, DeterministicStreams) {
  for (const auto& e : table_examples()) {
    EXPECT_EQ(draw(e, 2024, 10000), draw(e, 2024, 10000)) << flexscript::to_string(e);
    if (e.family != Family::constant) {
      EXPECT_NE(draw(e, 2024, 100), draw(e, 2025, 100)) << flexscript::to_string(e);
    }
  }
}

TEST(Sampler, NonNegativeAfterClamp) {
  const std::vector<DistributionExpr> wide = {
      {Family::normal, {1, 3}}, {Family::uniform, {-5, 1}}, {Family::triangular, {-2, 0, 1}}};
  for (const auto& e : table_examples()) {
    for (double x : draw(e, 11, 100000)) ASSERT_GE(x, 0.0);
  }
  for (const auto& e : wide) {
    bool saw_zero = false;
    for (double x : draw(e, 11, 100000)) {
      ASSERT_GE(x, 0.0);
      saw_zero |= x == 0.0;
    }
    EXPECT_TRUE(saw_zero);
  }
}

TEST(Sampler, PoissonIsIntegerValued) {
  for (double nu : {0.5, 4.0, 9.99, 10.0, 37.5}) {
    for (double x : draw({Family::poisson, {nu}}, 8, 20000)) ASSERT_EQ(x, std::floor(x));
  }
}

TEST(Sampler, ExponentialMeanWindow) {
  const double m = mean_of(draw({Family::exponential, {10}}, 77, 1000000));
  EXPECT_GE(m, 9.9);
  EXPECT_LE(m, 10.1);
}

TEST(Sampler, TriangularMean) {
  EXPECT_NEAR(mean_of(draw({Family::triangular, {2, 4, 9}}, 78, 1000000)), 5.0, 0.05);
}

// Poisson switches algorithm at 10; both sides must match their moments.
TEST(Sampler, PoissonBothRegimes) {
  for (double nu : {3.0, 9.5, 10.0, 55.0}) {
    const auto v = draw({Family::poisson, {nu}}, 9, 200000);
    const auto r = fit_validate(v, {Family::poisson, {nu}}, 0.03);
    EXPECT_TRUE(r.pass) << nu << " mean " << r.empirical_mean << " var " << r.empirical_variance;
  }
}

TEST(Moments, ClosedForms) {
  EXPECT_DOUBLE_EQ(analytic_mean({Family::uniform, {2, 6}}), 4.0);
  EXPECT_DOUBLE_EQ(analytic_mean({Family::gamma, {3, 2}}), 6.0);
  // exp(0.125), evaluated independently.
  EXPECT_NEAR(analytic_mean({Family::lognormal, {0, 0.5}}), 1.1331484530668263, 1e-15);
  EXPECT_DOUBLE_EQ(analytic_mean({Family::exponential, {10}}), 10.0);
  EXPECT_DOUBLE_EQ(analytic_variance({Family::exponential, {10}}), 100.0);
  EXPECT_DOUBLE_EQ(analytic_variance({Family::uniform, {2, 6}}), 16.0 / 12.0);
  EXPECT_DOUBLE_EQ(analytic_mean({Family::weibull, {1, 3}}), 3.0);
  EXPECT_DOUBLE_EQ(analytic_variance({Family::constant, {4}}), 0.0);
  EXPECT_NEAR(analytic_variance({Family::triangular, {0, 0, 1}}), 1.0 / 18.0, 1e-15);
}

TEST(Moments, EmpiricalAgreementAllFamilies) {
  for (const auto& e : table_examples()) {
    const auto v = draw(e, 31337, 200000);
    const auto r = fit_validate(v, e, 0.05);
    EXPECT_TRUE(r.pass) << flexscript::to_string(e) << " mean " << r.empirical_mean << " vs "
                        << r.analytic_mean << ", var " << r.empirical_variance << " vs "
                        << r.analytic_variance;
  }
}

TEST(FitValidate, SelfConsistentExponential) {
  const auto v = draw({Family::exponential, {10}}, 5, 100000);
  const auto r = fit_validate(v, {Family::exponential, {10}});
  EXPECT_TRUE(r.pass);
  EXPECT_LT(std::abs(r.z_mean), 4.0);
}

TEST(FitValidate, ConstantCandidateFailsOnVariance) {
  const auto v = draw({Family::exponential, {10}}, 5, 100000);
  const auto r = fit_validate(v, {Family::constant, {10}});
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(r.mean_ok);
  EXPECT_FALSE(r.variance_ok);
  EXPECT_NEAR(r.empirical_variance, 100.0, 5.0);
}

TEST(FitValidate, RejectsSmallOrInvalidSamples) {
  const std::vector<double> fifty(50, 1.0);
  try {
    fit_validate(fifty, {Family::constant, {1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientSamples);
  }
  std::vector<double> bad(200, 1.0);
  bad[3] = -1.0;
  EXPECT_THROW(fit_validate(bad, {Family::constant, {1}}), Error);
  const std::vector<double> exact(100, 4.0);
  EXPECT_TRUE(fit_validate(exact, {Family::constant, {4}}).pass);
}
