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

#ifndef DPM_CHARACTERIZE_HPP
#define DPM_CHARACTERIZE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dpm/report.hpp"

namespace dpm {

/// Inference of the mixing law from samples of a block projection Z and of
/// the mixing variable W.
struct Characterization {
  double p_hat = 0.0;
  double b1_hat = 0.0;
  double alpha_hat = 0.0;
  // Index k - 1 holds order k, k = 1..depth.
  std::vector<double> predicted;   // b_k from the moment chain on empirical a_k
  std::vector<double> empirical;   // sample means of W^k
  std::vector<double> beta_fit;    // E W^k under Be(1, alpha_hat)
  double max_dev_empirical = 0.0;  // in jackknife standard errors
  double max_dev_beta = 0.0;
  bool ill_conditioned = false;
  std::string warning;
  std::vector<TestReport> reports;
};

/// Estimates b_1 and alpha = (1 - b_1) / b_1, predicts b_2..b_depth by
/// solve_b_next on the empirical moments of Z, and compares the prediction
/// with the empirical W-moments and with Be(1, alpha_hat). Standard errors
/// come from a delete-one-group jackknife over `groups` contiguous groups.
///
/// Throws DomainError unless depth is in [2, 8], both sample sets have the
/// same size of at least 1000, and the values lie in [0, 1].
Characterization characterize_from_samples(std::span<const double> z_samples,
                                           std::span<const double> w_samples,
                                           int depth, const Thresholds& thresholds,
                                           std::uint64_t seed, int groups = 20);

/// Moments implied by the symmetric-case equation
/// E(1-Z)^n Z = 1/2 E(1-Z)^n E V^n for one symmetric law of Z.
struct SymmetricProbe {
  std::string law;
  std::vector<double> implied;   // E V^n, n = 1..depth
  // Be(a, 1) with a = v_1 / (1 - v_1), the law of 1 - W when W ~ Be(1, a).
  std::vector<double> beta_fit;
  // Smallest pivot of the Hausdorff Hankel forms; negative means the
  // implied numbers are not the moments of any law on [0, 1].
  double hankel_min_pivot = 0.0;
};

/// Exact probe over a few symmetric laws: Be(alpha/2, alpha/2), an equal
/// mixture of Be(alpha, alpha/3) and its mirror, and (delta_{1/4} +
/// delta_{3/4}) / 2. Records data only.
std::vector<SymmetricProbe> probe_symmetric(double alpha, int depth);

}  // namespace dpm

#endif  // DPM_CHARACTERIZE_HPP
