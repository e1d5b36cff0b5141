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

#ifndef DPM_SPECIALFN_HPP
#define DPM_SPECIALFN_HPP

#include <cmath>

namespace dpm {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// A real number stored as sign * exp(log_abs).
///
/// Products of many Gamma ratios are accumulated here and exponentiated
/// once, so intermediate factors never overflow.
class LogReal {
 public:
  constexpr LogReal() = default;
  static LogReal from_log(double log_abs, int sign = 1) {
    LogReal r;
    r.log_abs_ = log_abs;
    r.sign_ = sign == 0 ? 0 : (sign > 0 ? 1 : -1);
    return r;
  }
  static LogReal from_value(double x) {
    if (x == 0.0) return LogReal{};
    return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
  }
  static LogReal zero() { return LogReal{}; }
  static LogReal one() { return from_log(0.0, 1); }

  double log_abs() const { return log_abs_; }
  int sign() const { return sign_; }
  double value() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_abs_); }

  LogReal& operator*=(const LogReal& o) {
    sign_ *= o.sign_;
    log_abs_ = sign_ == 0 ? 0.0 : log_abs_ + o.log_abs_;
    return *this;
  }
  LogReal& operator/=(const LogReal& o);

  friend LogReal operator*(LogReal a, const LogReal& b) { return a *= b; }
  friend LogReal operator/(LogReal a, const LogReal& b) { return a /= b; }

 private:
  double log_abs_ = 0.0;
  int sign_ = 0;
};

/// ln Gamma(a) for a > 0. Throws DomainError otherwise.
double log_gamma(double a);

/// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).
double log_beta(double a, double b);

/// Beta function B(a, b), evaluated through log_beta.
double beta_fn(double a, double b);

/// Exponential integral E1(x) = int_x^inf exp(-r) / r dr for x > 0.
///
/// Power series for x <= 1, modified Lentz continued fraction above.
/// Relative error below 1e-10 on [1e-12, 50].
double exp_integral_e1(double x);

/// Solves E1(x) = y for x > 0.
///
/// Newton iteration in log x, safeguarded by a bisection bracket.
/// The result satisfies |E1(x) - y| / y <= 1e-10.
double inverse_e1(double y);

}  // namespace dpm

#endif  // DPM_SPECIALFN_HPP
