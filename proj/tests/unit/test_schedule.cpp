#include "dcsplit/schedule.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace dcsplit {
namespace {

StepSchedule counterexample_constants() {
  StepSchedule s;
  s.alpha = 1.0;
  s.gamma = 3.0;
  s.r_exp = 1.0;
  s.mu = 0.5;
  s.lip_phi = 1.0;
  s.sigma_a = 1.0;
  return s;
}

TEST(AlphaAt, ClosedForm) {
  StepSchedule s;
  s.alpha = 0.2;
  s.gamma = 0.9;
  s.r_exp = 1.0;
  EXPECT_DOUBLE_EQ(s.alpha_at(0), 0.2 + 0.9);
  EXPECT_DOUBLE_EQ(s.alpha_at(2), 0.2 + 0.9 / 3.0);
  s.r_exp = 0.5;
  EXPECT_DOUBLE_EQ(s.alpha_at(3), 0.2 + 0.9 / 2.0);
  EXPECT_THROW(s.alpha_at(-1), InvalidArgument);
}

TEST(RhoOf, CounterexampleSequence) {
  const StepSchedule s = counterexample_constants();
  for (long k = 0; k < 50; ++k) {
    const double kp1 = static_cast<double>(k + 1);
    EXPECT_NEAR(s.rho_of(s.alpha_at(k)), 1.0 + kp1 * kp1 / 2.0, 1e-9 * kp1 * kp1) << k;
  }
}

TEST(RhoOf, SpecialCases) {
  StepSchedule s;
  s.lip_phi = 9.0;
  s.sigma_a = 0.0;
  EXPECT_DOUBLE_EQ(s.rho_of(s.alpha + 0.3), 4.5 + s.mu);
  s.sigma_a = 4.0;
  EXPECT_DOUBLE_EQ(s.rho_of(s.alpha + s.gamma), 4.5 + 3.0 * 4.0 / (2.0 * s.gamma) + s.mu);
  EXPECT_THROW(s.rho_of(s.alpha), InvalidArgument);
}

TEST(DeltaOf, Values) {
  StepSchedule s;
  s.alpha = 1.0;
  EXPECT_DOUBLE_EQ(s.delta_of(1.0), 1.0);
  EXPECT_DOUBLE_EQ(s.delta_of(2.0), 0.5);
  EXPECT_DOUBLE_EQ(s.delta_of(4.0), 0.25);
}

TEST(ShouldDecrease, Cases) {
  StepSchedule s;
  s.alpha = 1.0;
  s.eps = 0.05;
  EXPECT_FALSE(s.should_decrease(1.0, Eigen::Vector2d(1e6, 1e6)));
  EXPECT_FALSE(s.should_decrease(1.5, Eigen::Vector2d::Zero()));
  EXPECT_TRUE(s.should_decrease(1.1, Eigen::Vector2d(1.0, 0.0)));
  EXPECT_NEAR(s.certificate(1.1, Eigen::Vector2d(0.0, 1.0)), 0.1, 1e-15);
}

TEST(Validate, NamesViolatedInequality) {
  StepSchedule s;
  EXPECT_NO_THROW(s.validate());
  s.alpha = s.gamma;
  try {
    s.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("alpha < gamma/2"), std::string::npos);
  }
  s = StepSchedule{};
  s.r_exp = 1.5;
  EXPECT_THROW(s.validate(), ConfigError);
  s = StepSchedule{};
  s.mu = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = StepSchedule{};
  s.beta0 = -1.0;
  EXPECT_THROW(s.validate(), ConfigError);
}

class SequenceProperties : public ::testing::TestWithParam<double> {};

TEST_P(SequenceProperties, MonotoneScalarAndLogConvex) {
  StepSchedule s;
  s.r_exp = GetParam();
  s.lip_phi = 9.0;
  s.sigma_a = 4.04;
  double prev_rho = 0.0;
  for (long j = 0; j < 10000; ++j) {
    const double a0 = s.alpha_at(j) - s.alpha;
    const double a1 = s.alpha_at(j + 1) - s.alpha;
    const double a2 = s.alpha_at(j + 2) - s.alpha;
    ASSERT_GT(a1, 0.0);
    ASSERT_LT(a1, a0);
    ASSERT_LE((a0 - a1) / (a1 * a0), 1.0 / s.gamma * (1.0 + 1e-8)) << j;
    ASSERT_GE(a0 * a2, a1 * a1 * (1.0 - 1e-12)) << j;
    const double rho = s.rho_of(s.alpha_at(j));
    ASSERT_GT(rho, s.lip_phi / 2.0);
    ASSERT_GT(rho, prev_rho);
    prev_rho = rho;
  }
}

INSTANTIATE_TEST_SUITE_P(Exponents, SequenceProperties, ::testing::Values(0.5, 1.0));

}  // namespace
}  // namespace dcsplit
