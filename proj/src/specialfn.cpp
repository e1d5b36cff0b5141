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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "dpm/error.hpp"

namespace dpm {

LogReal& LogReal::operator/=(const LogReal& o) {
  if (o.sign_ == 0) throw DomainError("LogReal: division by zero");
  sign_ *= o.sign_;
  log_abs_ = sign_ == 0 ? 0.0 : log_abs_ - o.log_abs_;
  return *this;
}

double log_gamma(double a) {
  if (!(a > 0.0)) {
    throw DomainError("log_gamma: argument must be positive, got " +
                      std::to_string(a));
  }
  if (std::isinf(a)) return a;
  return boost::math::lgamma(a);
}

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("beta_fn: arguments must be positive");
  }
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double beta_fn(double a, double b) { return std::exp(log_beta(a, b)); }

namespace {

double e1_series(double x) {
  // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
  double sum = 0.0;
  double term = 1.0;  // (-1)^{k+1} x^k / k!
  for (int k = 1; k < 200; ++k) {
    term *= (k == 1 ? x : -x / k);
    const double contrib = term / k;
    sum += contrib;
    if (std::fabs(contrib) < 1e-17 * std::fabs(sum)) break;
  }
  return -kEulerGamma - std::log(x) + sum;
}

double e1_continued_fraction(double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h * std::exp(-x);
}

}  // namespace

double exp_integral_e1(double x) {
  if (!(x > 0.0)) {
    throw DomainError("exp_integral_e1: argument must be positive, got " +
                      std::to_string(x));
  }
  if (std::isinf(x)) return 0.0;
  return x <= 1.0 ? e1_series(x) : e1_continued_fraction(x);
}

double inverse_e1(double y) {
  if (!(y > 0.0) || std::isinf(y)) {
    throw DomainError("inverse_e1: argument must be positive and finite");
  }
  // Work in t = ln x; E1(e^t) is strictly decreasing in t.
  double t;
  if (y > 0.2) {
    t = -kEulerGamma - y;
  } else {
    double x = -std::log(y);
    for (int i = 0; i < 3; ++i) x = std::max(-std::log(y * (x + 1.0)), 1e-3);
    t = std::log(x);
  }

  auto residual = [y](double tt) { return exp_integral_e1(std::exp(tt)) - y; };

  double lo = t - 1.0;  // residual(lo) >= 0
  double hi = t + 1.0;  // residual(hi) <= 0
  while (residual(lo) < 0.0) lo -= 2.0 * (t - lo + 1.0);
  while (residual(hi) > 0.0) hi += 2.0 * (hi - t + 1.0);
  t = std::clamp(t, lo, hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double x = std::exp(t);
    const double g = exp_integral_e1(x) - y;
    if (std::fabs(g) <= 1e-15 * y) break;
    if (g > 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    // d/dt E1(e^t) = -exp(-x)
    double next = t + g * std::exp(x);
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::fabs(next - t) <= 4 * std::numeric_limits<double>::epsilon() *
                                     std::max(1.0, std::fabs(t))) {
      t = next;
      break;
    }
    t = next;
  }
  return std::exp(t);
}

}  // namespace dpm
