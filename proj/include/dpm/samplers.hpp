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

#ifndef DPM_SAMPLERS_HPP
#define DPM_SAMPLERS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dpm/measures.hpp"
#include "dpm/rng.hpp"

namespace dpm {

double sample_standard_normal(RngStream& rng);
double sample_exponential(RngStream& rng);

/// Gamma(shape, 1) variate. Shapes below 1 are boosted from shape + 1.
/// Throws DomainError for shape <= 0.
double sample_gamma(double shape, RngStream& rng);

/// log of a Gamma(shape, 1) variate; stays finite for very small shapes
/// where the variate itself underflows.
double sample_log_gamma(double shape, RngStream& rng);

/// Be(a, b) via a ratio of Gamma variates, computed in log space.
double sample_beta(double a, double b, RngStream& rng);

/// Di(alphas) via normalized Gamma variates. Components sum to 1.
std::vector<double> sample_dirichlet(std::span<const double> alphas,
                                     RngStream& rng);

/// One draw from the base measure nu: an atom with probability p_i, or a
/// Cont point Uniform[0, 1] with probability diffuse_weight.
GroundPoint sample_from_base(const BaseModel& model, RngStream& rng);

/// Stick-breaking parameters for G = Be(1, alpha).
struct StickConfig {
  double alpha = 1.0;
  double trunc_eps = 1e-12;
  std::size_t max_sticks = 0;

  /// Stick budget large enough that the tail target is met with
  /// overwhelming probability: twice the count at which the expected tail
  /// (alpha / (alpha + 1))^N reaches eps, plus 64.
  static StickConfig for_alpha(double alpha, double trunc_eps = 1e-12);

  /// Throws DomainError unless alpha > 0, eps in (0, 1) and the expected
  /// tail mass at max_sticks is at most eps.
  void validate() const;
};

struct GemWeights {
  // W_n prod_{i<n} (1 - W_i) in stick order.
  std::vector<double> sticks;
  // prod (1 - W_i) left after the last stick; below trunc_eps.
  double residual = 0.0;
};

/// GEM(alpha) weights. Throws TruncationError if the residual is still at
/// least trunc_eps after max_sticks sticks.
GemWeights sample_gem_weights(const StickConfig& cfg, RngStream& rng);

/// Same, with a caller-supplied stick law in place of Be(1, alpha).
GemWeights sample_gem_weights(const StickConfig& cfg,
                              const std::function<double(RngStream&)>& stick,
                              RngStream& rng);

/// sum_n W_n prod_{i<n}(1 - W_i) delta_{X_n} with X_n iid nu; the residual
/// stick goes to one more fresh draw so the result has total mass 1.
DiscreteMeasure sample_stick_breaking(const BaseModel& model,
                                      const StickConfig& cfg, RngStream& rng);

/// Jumps of a Poisson process on (0, inf) with intensity
/// alpha r^{-1} e^{-r} dr, restricted to [eps, inf).
struct JumpSet {
  std::vector<double> jumps;  // strictly decreasing
  double truncation_eps = 0.0;
  double alpha = 0.0;

  double total() const;
};

/// Ferguson-Klass: T_n = E1^{-1}(Gamma_n / alpha) for unit-rate arrivals
/// Gamma_n, stopping once T_n < eps. Throws DomainError unless alpha > 0 and
/// eps in (0, 0.1].
JumpSet sample_poisson_gamma(double alpha, double eps, RngStream& rng);

/// zeta = xi / xi(X) with each jump marked by an iid draw from nu.
/// An empty jump set yields the zero measure (0/0 := 0).
DiscreteMeasure normalize_marked_jumps(const JumpSet& jumps,
                                       const BaseModel& model, RngStream& rng);

struct SizeBiasedPick {
  std::size_t index = 0;  // position in zeta.atoms()
  GroundPoint point = GroundPoint::atom(0);
  double weight = 0.0;
};

/// kappa with P(kappa = i) = weight_i. Throws DomainError on the zero
/// measure and PreconditionError if the total mass is not 1 within 1e-9.
SizeBiasedPick size_biased_pick(const DiscreteMeasure& zeta, RngStream& rng);

/// Index i with probability weights[i] / sum(weights).
std::size_t size_biased_index(std::span<const double> weights, RngStream& rng);

/// x^i: the sequence with its i-th member (1-based) removed.
std::vector<double> drop_index(std::span<const double> seq, std::size_t i);

struct SequenceDrop {
  std::vector<double> seq;
  // x_i = 1: the a/0 := 0 convention gives the zero sequence.
  bool degenerate = false;
};

/// x^{(i)} = (1 - x_i)^{-1} x^i (1-based i).
SequenceDrop renormalize_drop(std::span<const double> seq, std::size_t i);

/// PD(alpha): normalized Poisson-Gamma jumps in decreasing order.
std::vector<double> sample_poisson_dirichlet(double alpha, double eps,
                                             RngStream& rng);

/// PD(alpha) through the other route: GEM weights sorted decreasingly.
std::vector<double> sample_poisson_dirichlet_by_sticks(const StickConfig& cfg,
                                                       RngStream& rng);

enum class Construction { kStick, kGamma };

Construction parse_construction(const std::string& name);
std::string to_string(Construction c);

using MeasureSampler = std::function<DiscreteMeasure(RngStream&)>;

/// DP(alpha nu) sampler. eps is the stick tail target for kStick and the
/// jump truncation for kGamma.
MeasureSampler make_dp_sampler(const BaseModel& model, Construction construction,
                               double eps);

inline constexpr double kDefaultStickEps = 1e-12;
inline constexpr double kDefaultJumpEps = 1e-8;

}  // namespace dpm

#endif  // DPM_SAMPLERS_HPP
