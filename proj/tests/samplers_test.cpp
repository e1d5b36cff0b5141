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

#include "dpm/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "dpm/error.hpp"
#include "dpm/moments.hpp"
#include "dpm/rng.hpp"
#include "dpm/specialfn.hpp"
#include "dpm/stats.hpp"

namespace dpm {
namespace {

// Known-answer vectors published with the Random123 library.
TEST(PhiloxTest, KnownAnswers) {
  using B = RngStream::Block;
  using K = RngStream::Key;
  EXPECT_EQ(RngStream::philox4x32_10(B{0, 0, 0, 0}, K{0, 0}),
            (B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(RngStream::philox4x32_10(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                     K{0xffffffff, 0xffffffff}),
            (B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(RngStream::philox4x32_10(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                     K{0xa4093822, 0x299f31d0}),
            (B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStreamTest, ReproducibleAndDistinct) {
  RngStream a(7, 1), b(7, 1), c(7, 2), d(8, 1);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
  }
  RngStream u(1, 0);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform_open();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
  EXPECT_NE(stream_tag("mecke"), stream_tag("sethuraman"));
}

// Draws n values and returns the KS p-value against cdf.
template <class Draw, class Cdf>
double ks_p(std::size_t n, std::uint64_t stream, Draw draw, Cdf cdf) {
  RngStream rng(99, stream);
  std::vector<double> xs(n);
  for (auto& x : xs) x = draw(rng);
  return ks_test(std::move(xs), cdf).p_value;
}

TEST(GammaSamplerTest, ShapeOneIsExponential) {
  RngStream rng(1, 1);
  CoMoments m(1);
  for (int i = 0; i < 200000; ++i) m.add({sample_gamma(1.0, rng)});
  const Estimate e = mean_estimate(m, 0);
  EXPECT_LT(std::fabs(e.value - 1.0), 4 * e.std_error);
}

TEST(GammaSamplerTest, VarianceEqualsShape) {
  RngStream rng(1, 2);
  CoMoments m(2);
  for (int i = 0; i < 1000000; ++i) {
    const double x = sample_gamma(2.5, rng);
    m.add({x, (x - 2.5) * (x - 2.5)});
  }
  const Estimate v = mean_estimate(m, 1);
  EXPECT_LT(std::fabs(v.value - 2.5), 4 * v.std_error);
}

TEST(GammaSamplerTest, SmallShapeMatchesCdf) {
  const double p = ks_p(100000, 3, [](RngStream& r) { return sample_gamma(0.3, r); },
                        [](double x) { return x <= 0 ? 0.0 : boost::math::gamma_p(0.3, x); });
  EXPECT_GT(p, 1e-3);
  RngStream rng(1, 4);
  CoMoments m(1);
  for (int i = 0; i < 200000; ++i) m.add({sample_gamma(0.3, rng)});
  EXPECT_LT(std::fabs(m.mean(0) - 0.3), 4 * mean_estimate(m, 0).std_error);
  EXPECT_THROW(sample_gamma(0.0, rng), DomainError);
}

TEST(GammaSamplerTest, LogGammaStaysFiniteForTinyShapes) {
  RngStream rng(1, 5);
  for (int i = 0; i < 1000; ++i) {
    const double l = sample_log_gamma(1e-3, rng);
    ASSERT_TRUE(std::isfinite(l));
  }
}

TEST(BetaSamplerTest, MatchesCdf) {
  const double p = ks_p(100000, 6, [](RngStream& r) { return sample_beta(0.6, 1.4, r); },
                        [](double x) {
                          return x <= 0 ? 0.0 : x >= 1 ? 1.0 : boost::math::ibeta(0.6, 1.4, x);
                        });
  EXPECT_GT(p, 1e-3);
}

TEST(DirichletSamplerTest, Examples) {
  const double ones[] = {1.0, 1.0};
  const double p = ks_p(100000, 7, [&](RngStream& r) { return sample_dirichlet(ones, r)[0]; },
                        [](double x) { return std::clamp(x, 0.0, 1.0); });
  EXPECT_GT(p, 1e-3);

  const double a23[] = {2.0, 3.0};
  RngStream rng(1, 8);
  CoMoments m(2);
  for (int i = 0; i < 200000; ++i) {
    const auto z = sample_dirichlet(a23, rng);
    ASSERT_NEAR(z[0] + z[1], 1.0, 1e-12);
    m.add({z[0], z[0] * z[1]});
  }
  EXPECT_LT(std::fabs(m.mean(0) - 0.4), 4 * mean_estimate(m, 0).std_error);
  EXPECT_LT(std::fabs(m.mean(1) - 0.2), 4 * mean_estimate(m, 1).std_error);
}

TEST(StickBreakingTest, TotalMassIsOne) {
  const BaseModel model = BaseModel::diffuse(2.0);
  const StickConfig cfg = StickConfig::for_alpha(2.0);
  RngStream rng(1, 9);
  for (int i = 0; i < 2000; ++i) {
    const DiscreteMeasure mu = sample_stick_breaking(model, cfg, rng);
    ASSERT_NEAR(mu.total(), 1.0, 1e-12);
  }
}

TEST(StickBreakingTest, MarginalIsBeta) {
  const BaseModel model(2.0, {0.3, 0.7});
  const StickConfig cfg = StickConfig::for_alpha(2.0);
  const double p = ks_p(
      100000, 10,
      [&](RngStream& r) { return sample_stick_breaking(model, cfg, r).mass_at(GroundPoint::atom(0)); },
      [](double x) { return x <= 0 ? 0.0 : x >= 1 ? 1.0 : boost::math::ibeta(0.6, 1.4, x); });
  EXPECT_GT(p, 1e-3);
}

TEST(StickBreakingTest, SmallAlphaConcentrates) {
  const BaseModel model = BaseModel::diffuse(0.01);
  const StickConfig cfg = StickConfig::for_alpha(0.01);
  RngStream rng(1, 11);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const DiscreteMeasure mu = sample_stick_breaking(model, cfg, rng);
    double top = 0.0;
    for (const auto& a : mu.atoms()) top = std::max(top, a.weight);
    sum += top;
  }
  EXPECT_GE(sum / n, 0.99);
}

TEST(StickBreakingTest, TruncationErrorWhenBudgetTooSmall) {
  StickConfig cfg;
  cfg.alpha = 50.0;
  cfg.trunc_eps = 1e-12;
  cfg.max_sticks = 3;
  EXPECT_THROW(cfg.validate(), DomainError);
  RngStream rng(1, 12);
  EXPECT_THROW(sample_gem_weights(cfg, rng), TruncationError);
}

TEST(PoissonGammaTest, JumpCountAndTotal) {
  const double alpha = 2.0, eps = 1e-4;
  RngStream rng(1, 13);
  CoMoments m(2);
  for (int i = 0; i < 20000; ++i) {
    const JumpSet js = sample_poisson_gamma(alpha, eps, rng);
    for (std::size_t k = 1; k < js.jumps.size(); ++k) ASSERT_LT(js.jumps[k], js.jumps[k - 1]);
    if (!js.jumps.empty()) {
      ASSERT_GE(js.jumps.back(), eps);
    }
    m.add({static_cast<double>(js.jumps.size()), js.total()});
  }
  const double want_count = alpha * exp_integral_e1(eps);
  EXPECT_LT(std::fabs(m.mean(0) - want_count), 4 * mean_estimate(m, 0).std_error);
  EXPECT_LT(std::fabs(m.mean(1) - alpha), 4 * mean_estimate(m, 1).std_error + alpha * eps);
  EXPECT_THROW(sample_poisson_gamma(alpha, 0.5, rng), DomainError);
  EXPECT_THROW(sample_poisson_gamma(0.0, 1e-3, rng), DomainError);
}

TEST(PoissonGammaTest, NormalizedMarksGiveBetaBlock) {
  const BaseModel model(2.0, {0.3, 0.7});
  const double p = ks_p(
      100000, 14,
      [&](RngStream& r) {
        const JumpSet js = sample_poisson_gamma(2.0, 1e-8, r);
        return normalize_marked_jumps(js, model, r).mass_at(GroundPoint::atom(0));
      },
      [](double x) { return x <= 0 ? 0.0 : x >= 1 ? 1.0 : boost::math::ibeta(0.6, 1.4, x); });
  EXPECT_GT(p, 1e-3);
  RngStream rng(1, 15);
  EXPECT_TRUE(normalize_marked_jumps(JumpSet{}, model, rng).empty());
}

TEST(SizeBiasTest, Examples) {
  RngStream rng(1, 16);
  const GroundPoint a = GroundPoint::atom(0), b = GroundPoint::atom(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(size_biased_pick(DiscreteMeasure::dirac(a), rng).point, a);
  const DiscreteMeasure mu({{a, 0.25}, {b, 0.75}});
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += size_biased_pick(mu, rng).point == b;
  const double se = std::sqrt(0.75 * 0.25 / n);
  EXPECT_LT(std::fabs(hits / double(n) - 0.75), 4 * se);
  EXPECT_THROW(size_biased_pick(DiscreteMeasure{}, rng), DomainError);
  EXPECT_THROW(size_biased_pick(DiscreteMeasure({{a, 0.5}}), rng), PreconditionError);
}

TEST(SizeBiasTest, PickedLocationFollowsBase) {
  const BaseModel model = BaseModel::diffuse(2.0);
  const StickConfig cfg = StickConfig::for_alpha(2.0);
  RngStream rng(1, 17);
  const int n = 50000;
  int below = 0;
  for (int i = 0; i < n; ++i) {
    below += size_biased_pick(sample_stick_breaking(model, cfg, rng), rng).point.u() < 0.3;
  }
  EXPECT_LT(std::fabs(below / double(n) - 0.3), 4 * std::sqrt(0.21 / n));
}

TEST(DropTest, Examples) {
  const double x[] = {0.5, 0.3, 0.2};
  EXPECT_EQ(drop_index(x, 2), (std::vector<double>{0.5, 0.2}));
  const SequenceDrop r = renormalize_drop(x, 1);
  EXPECT_NEAR(r.seq[0], 0.6, 1e-15);
  EXPECT_NEAR(r.seq[1], 0.4, 1e-15);
  EXPECT_NEAR(r.seq[0] + r.seq[1], 1.0, 1e-15);
  const double one[] = {1.0, 0.0};
  EXPECT_TRUE(renormalize_drop(one, 1).degenerate);
  EXPECT_THROW(drop_index(x, 0), DomainError);
  EXPECT_THROW(drop_index(x, 4), DomainError);
}

TEST(PoissonDirichletTest, LargestWeightMean) {
  RngStream rng(1, 18);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto w = sample_poisson_dirichlet(1.0, 1e-8, rng);
    ASSERT_FALSE(w.empty());
    for (std::size_t k = 1; k < w.size(); ++k) ASSERT_LT(w[k], w[k - 1]);
    ASSERT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
    sum += w.front();
  }
  EXPECT_NEAR(sum / n, 0.62432998854355087, 0.01);
}

TEST(PoissonDirichletTest, PathsAgree) {
  const StickConfig cfg = StickConfig::for_alpha(1.0);
  RngStream r1(2, 1), r2(2, 2);
  std::vector<double> a, b;
  for (int i = 0; i < 50000; ++i) {
    a.push_back(sample_poisson_dirichlet(1.0, 1e-8, r1).front());
    b.push_back(sample_poisson_dirichlet_by_sticks(cfg, r2).front());
  }
  EXPECT_GT(ks_test_two_sample(a, b).p_value, 1e-3);
}

TEST(ConstructionTest, Parse) {
  EXPECT_EQ(parse_construction("stick"), Construction::kStick);
  EXPECT_EQ(parse_construction("gamma"), Construction::kGamma);
  EXPECT_THROW(parse_construction("urn"), DomainError);
  EXPECT_EQ(to_string(Construction::kGamma), "gamma");
}

}  // namespace
}  // namespace dpm
