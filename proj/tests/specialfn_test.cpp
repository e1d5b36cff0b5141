// Copyright 2026 The dpm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpm/specialfn.hpp"

#include <cmath>

#include <boost/math/special_functions/expint.hpp>
#include <gtest/gtest.h>

#include "dpm/error.hpp"

namespace dpm {
namespace {

// Reference values computed at 30 digits with mpmath.
struct E1Case {
  double x;
  double value;
};
constexpr E1Case kE1Cases[] = {
    {1e-12, 27.053805451028015348}, {1e-6, 13.238295893062491244},
    {0.5, 0.55977359477616081175},  {1.0, 0.21938393439552027368},
    {5.0, 0.0011482955912753257973}, {30.0, 3.0215520106888125448e-15},
};

TEST(ExpIntegralTest, MatchesHighPrecisionValues) {
  for (const auto& c : kE1Cases) {
    EXPECT_NEAR(exp_integral_e1(c.x) / c.value, 1.0, 1e-12) << "x=" << c.x;
  }
}

TEST(ExpIntegralTest, AgreesWithBoostAcrossRange) {
  for (double lx = -12.0; lx <= std::log10(50.0); lx += 0.05) {
    const double x = std::pow(10.0, lx);
    const double want = boost::math::expint(1, x);
    EXPECT_NEAR(exp_integral_e1(x) / want, 1.0, 1e-10) << "x=" << x;
  }
}

TEST(ExpIntegralTest, NearOneBothBranchesAgree) {
  const double below = exp_integral_e1(std::nextafter(1.0, 0.0));
  const double above = exp_integral_e1(std::nextafter(1.0, 2.0));
  EXPECT_NEAR(below, above, 1e-14);
}

TEST(ExpIntegralTest, RejectsNonPositive) {
  EXPECT_THROW(exp_integral_e1(0.0), DomainError);
  EXPECT_THROW(exp_integral_e1(-1.0), DomainError);
}

TEST(InverseE1Test, RoundTrip) {
  for (double lx = -12.0; lx <= std::log10(40.0); lx += 0.01) {
    const double x = std::pow(10.0, lx);
    const double y = exp_integral_e1(x);
    const double back = inverse_e1(y);
    EXPECT_NEAR(back / x, 1.0, 1e-9) << "x=" << x;
  }
}

TEST(InverseE1Test, ResidualWithinTolerance) {
  for (double y : {1e-12, 1e-6, 0.01, 0.2, 1.0, 5.0, 17.0, 27.0}) {
    const double x = inverse_e1(y);
    EXPECT_LE(std::fabs(exp_integral_e1(x) - y) / y, 1e-10) << "y=" << y;
  }
}

TEST(InverseE1Test, RejectsBadInput) {
  EXPECT_THROW(inverse_e1(0.0), DomainError);
  EXPECT_THROW(inverse_e1(-2.0), DomainError);
  EXPECT_THROW(inverse_e1(INFINITY), DomainError);
}

TEST(LogGammaTest, KnownValues) {
  EXPECT_NEAR(log_gamma(0.5), 0.57236494292470008707, 1e-14);
  EXPECT_NEAR(log_gamma(1e-3), 6.9071788853838536825, 1e-12);
  EXPECT_NEAR(log_gamma(100.5), 361.43554046777762156, 1e-10);
  EXPECT_NEAR(log_gamma(3.7), 1.4280723266653879219, 1e-13);
  EXPECT_DOUBLE_EQ(log_gamma(1.0), 0.0);
  EXPECT_DOUBLE_EQ(log_gamma(2.0), 0.0);
}

TEST(LogGammaTest, RejectsNonPositive) {
  EXPECT_THROW(log_gamma(0.0), DomainError);
  EXPECT_THROW(log_gamma(-0.5), DomainError);
}

TEST(BetaTest, Values) {
  EXPECT_NEAR(beta_fn(0.3, 2.7), 2.310517136083305227, 1e-12);
  EXPECT_NEAR(beta_fn(1.0, 3.0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(beta_fn(2.0, 5.0), beta_fn(5.0, 2.0), 1e-16);
  EXPECT_NEAR(log_beta(0.3, 2.7), std::log(2.310517136083305227), 1e-13);
}

// Gamma(a + k + 1) / k! = a sum_{r=0}^k Gamma(a + r) / r!
TEST(InductionIdentityTest, HoldsForSmallOrders) {
  for (double a : {0.1, 0.5, 1.0, 2.5, 7.0}) {
    for (int k = 0; k <= 20; ++k) {
      const double lhs = std::exp(log_gamma(a + k + 1) - log_gamma(k + 1.0));
      double sum = 0.0;
      for (int r = 0; r <= k; ++r) sum += std::exp(log_gamma(a + r) - log_gamma(r + 1.0));
      EXPECT_NEAR(a * sum / lhs, 1.0, 1e-9) << "a=" << a << " k=" << k;
    }
  }
}

TEST(LogRealTest, ProductsAndQuotients) {
  LogReal x = LogReal::from_value(-3.0);
  x *= LogReal::from_value(2.0);
  EXPECT_NEAR(x.value(), -6.0, 1e-14);
  x /= LogReal::from_value(-4.0);
  EXPECT_NEAR(x.value(), 1.5, 1e-15);
  EXPECT_EQ((x * LogReal::zero()).value(), 0.0);
  EXPECT_THROW(x /= LogReal::zero(), DomainError);
  // Factors that overflow on their own still combine.
  LogReal big = LogReal::from_log(800.0);
  big /= LogReal::from_log(799.0);
  EXPECT_NEAR(big.value(), std::exp(1.0), 1e-12);
}

}  // namespace
}  // namespace dpm
