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

#include "dpm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dpm/error.hpp"

namespace dpm {

CoMoments::CoMoments(std::size_t dim)
    : dim_(dim), mean_(dim, 0.0), comoment_(dim * dim, 0.0), delta_(dim, 0.0) {}

void CoMoments::add(std::span<const double> x) {
  ++n_;
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < dim_; ++i) {
    delta_[i] = x[i] - mean_[i];
    mean_[i] += delta_[i] * inv_n;
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      comoment_[i * dim_ + j] += delta_[i] * (x[j] - mean_[j]);
    }
  }
}

void CoMoments::merge(const CoMoments& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  for (std::size_t i = 0; i < dim_; ++i) delta_[i] = other.mean_[i] - mean_[i];
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      comoment_[i * dim_ + j] +=
          other.comoment_[i * dim_ + j] + delta_[i] * delta_[j] * na * nb / n;
    }
  }
  for (std::size_t i = 0; i < dim_; ++i) mean_[i] += delta_[i] * nb / n;
  n_ += other.n_;
}

double CoMoments::covariance(std::size_t i, std::size_t j) const {
  if (n_ < 2) return 0.0;
  return comoment_[i * dim_ + j] / static_cast<double>(n_ - 1);
}

Estimate mean_estimate(const CoMoments& m, std::size_t i) {
  const double n = static_cast<double>(m.count());
  return {m.mean(i), std::sqrt(std::max(m.covariance(i, i), 0.0) / n)};
}

Estimate difference_estimate(const CoMoments& m, std::size_t i, std::size_t j) {
  const double n = static_cast<double>(m.count());
  const double var =
      m.covariance(i, i) + m.covariance(j, j) - 2.0 * m.covariance(i, j);
  return {m.mean(i) - m.mean(j), std::sqrt(std::max(var, 0.0) / n)};
}

Estimate covariance_estimate(const CoMoments& m, std::size_t x, std::size_t y,
                             std::size_t xy) {
  const double n = static_cast<double>(m.count());
  const double mx = m.mean(x);
  const double my = m.mean(y);
  // gradient of (mx, my, mxy) -> mxy - mx my
  const std::size_t idx[3] = {x, y, xy};
  const double grad[3] = {-my, -mx, 1.0};
  double var = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) var += grad[a] * grad[b] * m.covariance(idx[a], idx[b]);
  }
  return {m.mean(xy) - mx * my, std::sqrt(std::max(var, 0.0) / n)};
}

double normal_two_sided_p(double z) {
  if (std::isnan(z)) return 1.0;
  return std::erfc(std::fabs(z) / std::numbers::sqrt2);
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // P(K <= l) = sqrt(2 pi) / l * sum_k exp(-(2k-1)^2 pi^2 / (8 l^2))
    const double c = -std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double term = std::exp(c * (2 * k - 1) * (2 * k - 1));
      sum += term;
      if (term < 1e-16 * sum) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
  }
  // P(K > l) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 l^2)
  double sum = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-12 * sum || term == 0.0) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> samples,
                 const std::function<double(double)>& cdf) {
  if (samples.size() < 100) {
    throw DomainError("ks_test needs at least 100 samples");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    if (!(f >= 0.0 && f <= 1.0)) throw DomainError("ks_test: cdf left [0, 1]");
    if (f < prev) throw DomainError("ks_test: cdf is not monotone");
    prev = f;
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f,
                  f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_survival(std::sqrt(n) * d), samples.size()};
}

KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 100 || b.size() < 100) {
    throw DomainError("ks_test_two_sample needs at least 100 samples per side");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  return {d, kolmogorov_survival(std::sqrt(ne) * d), a.size() + b.size()};
}

}  // namespace dpm
