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

#ifndef DPM_STATS_HPP
#define DPM_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace dpm {

/// Streaming mean vector and co-moment matrix (multivariate Welford), with
/// an exact pairwise merge so shards can be combined in a fixed order.
class CoMoments {
 public:
  explicit CoMoments(std::size_t dim = 1);

  void add(std::span<const double> x);
  void add(std::initializer_list<double> x) {
    add(std::span<const double>(x.begin(), x.size()));
  }
  void merge(const CoMoments& other);

  std::size_t dim() const { return dim_; }
  std::uint64_t count() const { return n_; }
  double mean(std::size_t i) const { return mean_[i]; }
  /// Sample covariance (divisor n - 1).
  double covariance(std::size_t i, std::size_t j) const;

 private:
  std::size_t dim_;
  std::uint64_t n_ = 0;
  std::vector<double> mean_;
  std::vector<double> comoment_;  // row-major dim x dim
  std::vector<double> delta_;     // scratch
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// E X_i.
Estimate mean_estimate(const CoMoments& m, std::size_t i);

/// E X_i - E X_j from paired observations.
Estimate difference_estimate(const CoMoments& m, std::size_t i, std::size_t j);

/// Cov(X, Y) = E XY - E X E Y from coordinates holding X, Y and XY, with a
/// delta-method standard error.
Estimate covariance_estimate(const CoMoments& m, std::size_t x, std::size_t y,
                             std::size_t xy);

/// Two-sided normal tail probability P(|N(0,1)| > |z|).
double normal_two_sided_p(double z);

/// Limiting Kolmogorov survival function P(K > lambda).
double kolmogorov_survival(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

/// One-sample Kolmogorov-Smirnov test against a continuous cdf, asymptotic
/// p-value at lambda = sqrt(n) D. Throws DomainError for fewer than 100
/// samples or a cdf that leaves [0, 1] or decreases.
KsResult ks_test(std::vector<double> samples,
                 const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov test, lambda = sqrt(nm / (n + m)) D.
KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace dpm

#endif  // DPM_STATS_HPP
