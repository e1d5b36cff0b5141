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

#ifndef DPM_VERIFY_HPP
#define DPM_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpm/campaign.hpp"
#include "dpm/measures.hpp"
#include "dpm/moments.hpp"
#include "dpm/report.hpp"
#include "dpm/samplers.hpp"
#include "dpm/stats.hpp"

namespace dpm {

inline constexpr std::uint64_t kDefaultSeed = 20260417;

struct VerifyOptions {
  std::uint64_t n = 100000;
  std::uint64_t seed = kDefaultSeed;
  unsigned jobs = 1;
  Thresholds thresholds;

  CampaignOptions campaign() const { return {n, seed, jobs, 4096}; }
};

/// coefficient * prod m_i^{exponents_i}
struct PolynomialTerm {
  double coefficient = 1.0;
  MultiIndex exponents;
};

/// f(zeta, x) = g(zeta(B_1), ..., zeta(B_n)) h(block of x), g a polynomial.
struct TestFunctionSpec {
  std::string name;
  std::vector<PolynomialTerm> g;
  std::vector<double> h_block_weights;

  /// Total degree of g.
  int degree() const;
  double g_value(std::span<const double> masses) const;
  /// int f(zeta, x) zeta(dx) from unnormalized block masses.
  double integral(std::span<const double> masses) const;
};

/// f = prod zeta(B_i)^{k_i} 1{x in B_j} for every |k| <= max_degree and
/// every block j, preceded by f = 1 and f = zeta(X).
std::vector<TestFunctionSpec> mecke_family(std::size_t blocks, int max_degree);

/// g = prod zeta(B_i)^{k_i} for 1 <= |k| <= max_degree (h = 1).
std::vector<TestFunctionSpec> sethuraman_family(std::size_t blocks,
                                                int max_degree);

/// E int f(zeta, x) zeta(dx) under DP with the given block parameters.
double exact_mecke_value(const TestFunctionSpec& f,
                         std::span<const double> block_alphas);

/// E g(zeta) under DP with the given block parameters.
double exact_g_value(const TestFunctionSpec& f,
                     std::span<const double> block_alphas);

/// Law of the mixing variable u on [0, 1].
struct MixingLaw {
  std::string name;
  std::function<double(RngStream&)> draw;

  static MixingLaw beta_one(double alpha);
  static MixingLaw beta(double a, double b);
  static MixingLaw point_mass(double u);
  static MixingLaw uniform(double lo, double hi);
  /// Resamples uniformly from the given values.
  static MixingLaw empirical(std::vector<double> values);
};

/// Singleton atom blocks, then [0, 0.5) and [0.5, 1] when the model has a
/// diffuse part.
Partition default_partition(const BaseModel& model);

/// Estimate of E int f(zeta, x) zeta(dx). Throws PreconditionError for
/// n < 1000.
Estimate mecke_lhs(const TestFunctionSpec& f, const Partition& partition,
                   const MeasureSampler& sampler, const CampaignOptions& opts);

/// Estimate of E int int f((1 - u) zeta + u delta_x, x) G(du) nu(dx), with
/// x ~ nu and u ~ G drawn independently of zeta.
Estimate mecke_rhs(const TestFunctionSpec& f, const Partition& partition,
                   const MeasureSampler& sampler, const MixingLaw& mixing,
                   const BaseModel& model, const CampaignOptions& opts);

/// Paired lhs/rhs campaign over the family with G = Be(1, alpha), common
/// random numbers on both sides, plus a negative control with G = a point
/// mass at 1 / (alpha + 1), expected to differ on the first degree-2 test.
std::vector<TestReport> verify_mecke(const BaseModel& model,
                                     const Partition& partition,
                                     Construction construction,
                                     std::span<const TestFunctionSpec> family,
                                     const VerifyOptions& opts);

/// E g(zeta) against E g((1 - u) zeta + u delta_x) with u ~ Be(1, alpha),
/// x ~ nu; negative control mixes with Be(1, 2 alpha).
std::vector<TestReport> verify_sethuraman(const BaseModel& model,
                                          const Partition& partition,
                                          const VerifyOptions& opts);

/// Z ~ Be(p alpha, (1-p) alpha), W ~ Be(1, alpha):
///   E Z^k Z = p E((1-W)Z + W)^k,  E Z^k (1-Z) = (1-p) E((1-W)Z)^k,
/// k = 0..6; negative control with W at a point mass.
std::vector<TestReport> verify_tbeta_eqs(double p, double alpha,
                                         const VerifyOptions& opts);

/// E Z^k Z^2 = c E((1-W)Z + W)^k W for k = 0..4, the closed form of E Z^2,
/// and zero covariance between h1(W / S) and h2(S), S = Z + W - WZ, for
/// h in {id, square}; negative control with c + 0.1.
std::vector<TestReport> verify_tbeta2(double p, double alpha,
                                      const VerifyOptions& opts);

/// Size-biased deletion from stick-breaking DP(alpha Lebesgue): zeta^(tau)
/// against zeta on projection moments, zeta{tau} against Be(1, alpha), and
/// pairwise covariances. Throws PreconditionError unless the base is
/// purely diffuse.
std::vector<TestReport> verify_sizebias_invariance(const BaseModel& model,
                                                   const VerifyOptions& opts);

/// GEM(alpha) weights with iid marks from atom probabilities: block moments
/// against the closed form, and the largest weight against the
/// Poisson-Gamma path by two-sample KS.
std::vector<TestReport> verify_theorem52(double alpha,
                                         std::span<const double> atom_probs,
                                         const VerifyOptions& opts);

/// Marginal law of zeta(B_1) (KS against the Beta cdf), stick against
/// normalized Poisson-Gamma projection moments, E xi(X) = alpha, and
/// zero covariance between zeta(B_1) and xi(X).
std::vector<TestReport> verify_constructions(const BaseModel& model,
                                             const Partition& partition,
                                             double jump_eps,
                                             const VerifyOptions& opts);

}  // namespace dpm

#endif  // DPM_VERIFY_HPP
