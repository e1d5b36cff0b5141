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

#include "dpm/moments.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dpm/error.hpp"

namespace dpm {
namespace {

TEST(BetaMomentTest, Examples) {
  EXPECT_DOUBLE_EQ(beta_moment(1.0, 3.0, 1), 0.25);
  EXPECT_DOUBLE_EQ(beta_moment(0.7, 1.9, 0), 1.0);
  EXPECT_NEAR(beta_moment(1.0, 2.0, 2), 1.0 / 6.0, 1e-16);
  EXPECT_THROW(beta_moment(0.0, 1.0, 1), DomainError);
}

TEST(DirichletMomentTest, Examples) {
  const double ones[] = {1.0, 1.0};
  const int k10[] = {1, 0};
  const int k20[] = {2, 0};
  EXPECT_NEAR(dirichlet_mixed_moment(ones, k10), 0.5, 1e-15);
  EXPECT_NEAR(dirichlet_mixed_moment(ones, k20), 1.0 / 3.0, 1e-15);
  const double a23[] = {2.0, 3.0};
  const int k11[] = {1, 1};
  EXPECT_NEAR(dirichlet_mixed_moment(a23, k11), 0.2, 1e-15);
}

TEST(DirichletMomentTest, ZeroParameterConvention) {
  const double a[] = {0.0, 2.0};
  const int k01[] = {0, 1};
  const int k11[] = {1, 1};
  EXPECT_NEAR(dirichlet_mixed_moment(a, k01), 1.0, 1e-15);
  EXPECT_EQ(dirichlet_mixed_moment(a, k11), 0.0);
  const double neg[] = {-1.0, 2.0};
  EXPECT_THROW(dirichlet_mixed_moment(neg, k01), DomainError);
  const double none[] = {0.0, 0.0};
  EXPECT_THROW(dirichlet_mixed_moment(none, k01), DomainError);
}

TEST(MultiIndexTest, OrderAndCount) {
  const auto idx = multi_indices(3, 4);
  EXPECT_EQ(idx.size(), 35u);  // C(4 + 3, 3)
  EXPECT_EQ(idx.front(), MultiIndex({0, 0, 0}));
  EXPECT_EQ(idx[1], MultiIndex({0, 0, 1}));
  EXPECT_EQ(format_multi_index(idx[3]), "(1,0,0)");
}

TEST(RecursionTest, FirstMomentsAreBaseProbabilities) {
  const double alphas[] = {0.6, 1.4};
  MomentTable t(2);
  for (std::size_t j = 0; j < 2; ++j) {
    const int zero[] = {0, 0};
    EXPECT_NEAR(moment_recursion_step(t, alphas, j, zero), alphas[j] / 2.0, 1e-15);
  }
}

TEST(RecursionTest, SecondMomentByHand) {
  const double alphas[] = {1.0, 1.0};
  MomentTable t(2);
  t.set({1, 0}, {0.5});
  const int k[] = {1, 0};
  EXPECT_NEAR(moment_recursion_step(t, alphas, 0, k), 1.0 / 3.0, 1e-15);
}

TEST(RecursionTest, MissingEntryNamed) {
  const double alphas[] = {1.0, 1.0};
  MomentTable t(2);
  const int k[] = {2, 0};
  try {
    moment_recursion_step(t, alphas, 0, k);
    FAIL() << "expected DependencyError";
  } catch (const DependencyError& e) {
    EXPECT_NE(std::string(e.what()).find("(1,0)"), std::string::npos);
  }
}

TEST(RecursionTest, ModelOverload) {
  const BaseModel m(2.0, {0.3, 0.7});
  MomentTable t(2);
  const int zero[] = {0, 0};
  EXPECT_NEAR(moment_recursion_step(t, m, Partition::by_atoms(2), 1, zero), 0.7, 1e-15);
}

TEST(RecursionTest, MatchesClosedFormRandomized) {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (std::size_t n : {2u, 3u, 4u}) {
    for (double alpha : {0.5, 1.0, 2.5}) {
      for (int rep = 0; rep < 3; ++rep) {
        std::vector<double> probs(n);
        double s = 0.0;
        for (double& p : probs) s += (p = unit(gen));
        std::vector<double> alphas(n);
        for (std::size_t i = 0; i < n; ++i) alphas[i] = alpha * probs[i] / s;
        const MomentTable rec = recursion_table(alphas, 8);
        const MomentTable exact = exact_table(alphas, 8);
        ASSERT_EQ(rec.entries().size(), exact.entries().size());
        for (const auto& [k, e] : exact.entries()) {
          EXPECT_NEAR(rec.value(k) / e.value, 1.0, 1e-9) << format_multi_index(k);
        }
        EXPECT_TRUE(rec.satisfies_invariants());
      }
    }
  }
}

TEST(RecursionTest, ThreeBlocksFixed) {
  const double alphas[] = {1.0, 1.0, 2.0};
  const MomentTable rec = recursion_table(alphas, 4);
  for (const auto& k : multi_indices(3, 4)) {
    EXPECT_NEAR(rec.value(k), dirichlet_mixed_moment(alphas, k), 1e-12);
  }
}

TEST(MomentTableTest, Invariants) {
  MomentTable t(1);
  t.set({1}, {0.5});
  t.set({2}, {0.3});
  EXPECT_TRUE(t.satisfies_invariants());
  t.set({3}, {0.4});
  EXPECT_FALSE(t.satisfies_invariants());
  EXPECT_EQ(t.value(std::vector<int>{0}), 1.0);
}

ScalarMomentSeq beta_seq(double a, double b, int n, ScalarMomentSeq::Label label) {
  ScalarMomentSeq s{{}, label};
  for (int k = 1; k <= n; ++k) s.values.push_back(beta_moment(a, b, k));
  return s;
}

TEST(SolveBNextTest, RoundTripOnExactInputs) {
  const std::pair<double, double> cases[] = {{0.3, 2.0}, {0.7, 0.5}, {0.1, 5.0}};
  for (auto [p, alpha] : cases) {
    const auto a = beta_seq(p * alpha, (1 - p) * alpha, 9, ScalarMomentSeq::Label::kZ);
    const auto b = recover_b_sequence(a, beta_moment(1.0, alpha, 1), p, 9);
    for (int k = 1; k <= 9; ++k) {
      EXPECT_NEAR(b.moment(k) / beta_moment(1.0, alpha, k), 1.0, 1e-6)
          << "p=" << p << " alpha=" << alpha << " k=" << k;
    }
  }
}

TEST(SolveBNextTest, SingleStep) {
  const double p = 0.3, alpha = 2.0;
  const auto a = beta_seq(p * alpha, (1 - p) * alpha, 3, ScalarMomentSeq::Label::kZ);
  const auto b = beta_seq(1.0, alpha, 2, ScalarMomentSeq::Label::kW);
  const BNextSolution s = solve_b_next(a, b, p);
  EXPECT_NEAR(s.value, beta_moment(1.0, alpha, 3), 1e-12);
  EXPECT_NE(s.coefficient, 0.0);
}

TEST(SolveBNextTest, FirstStepIsSingular) {
  const auto a = beta_seq(0.6, 1.4, 1, ScalarMomentSeq::Label::kZ);
  const ScalarMomentSeq empty{{}, ScalarMomentSeq::Label::kW};
  EXPECT_THROW(solve_b_next(a, empty, 0.3), SingularSystemError);
}

TEST(SolveBNextTest, SymmetricEvenOrderIsSingular) {
  // p = 1/2 with n + 1 odd: the coefficient cancels.
  const auto a = beta_seq(1.0, 1.0, 3, ScalarMomentSeq::Label::kZ);
  const auto b = beta_seq(1.0, 2.0, 2, ScalarMomentSeq::Label::kW);
  try {
    solve_b_next(a, b, 0.5);
    FAIL() << "expected SingularSystemError";
  } catch (const SingularSystemError& e) {
    EXPECT_LT(std::fabs(e.coefficient()), 1e-13);
  }
}

TEST(SolvabilityTest, Examples) {
  EXPECT_EQ(check_solvability(0.5, 1.0, 2), 0.0);
  EXPECT_EQ(check_solvability(0.5, 3.0, 4), 0.0);
  EXPECT_NE(check_solvability(0.3, 2.0, 2), 0.0);
  EXPECT_GT(check_solvability(0.3, 1.0, 1), 0.0);
  for (auto [p, alpha] : {std::pair{0.3, 2.0}, {0.7, 0.5}, {0.1, 5.0}}) {
    for (int n = 0; n <= 8; ++n) EXPECT_NE(check_solvability(p, alpha, n), 0.0);
  }
}

TEST(Tbeta2Test, Constant) {
  EXPECT_DOUBLE_EQ(tbeta2_c(0.5, 2.0), 1.0);
  EXPECT_NEAR(tbeta2_c(0.5, 1e-12), 0.5, 1e-12);
  const double p = 0.3, alpha = 2.0;
  EXPECT_NEAR(beta_moment(p * alpha, (1 - p) * alpha, 2), tbeta2_c(p, alpha) / (alpha + 1),
              1e-15);
}

}  // namespace
}  // namespace dpm
