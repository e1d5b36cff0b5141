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

#ifndef DPM_REPORT_HPP
#define DPM_REPORT_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "dpm/stats.hpp"

namespace dpm {

enum class Verdict { kPass, kFail, kDegenerate };

/// Whether the two sides should agree (identity checks) or disagree
/// (negative controls, which pass when the discrepancy is detected).
enum class Expectation { kEqual, kDiffer };

struct Thresholds {
  double z = 4.0;          // two-sided, in combined standard errors
  double p_floor = 1e-3;   // KS p-values below this reject
};

/// Outcome of one statistical check.
///
/// JSON schema (one object per test):
///   name, kind ("z" | "ks"), expect ("equal" | "differ"),
///   lhs_estimate, rhs_estimate, reference (number or null),
///   combined_stderr, z_score (null when infinite), p_value,
///   n_samples, seed, verdict ("pass" | "fail" | "degenerate"), note
struct TestReport {
  std::string name;
  std::string kind = "z";
  Expectation expect = Expectation::kEqual;
  double lhs_estimate = 0.0;
  double rhs_estimate = 0.0;
  std::optional<double> reference;
  double combined_stderr = 0.0;
  double z_score = 0.0;
  double p_value = 1.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  Verdict verdict = Verdict::kPass;
  std::string note;
};

/// z-test of lhs == rhs. A standard error at or below 1e-12 is treated as
/// zero variance: the sides must then agree to 1e-9.
TestReport z_report(std::string name, double lhs, double rhs, double std_error,
                    std::uint64_t n, std::uint64_t seed, const Thresholds& t,
                    Expectation expect = Expectation::kEqual);

/// KS verdict from a p-value; lhs_estimate carries the statistic.
TestReport ks_report(std::string name, const KsResult& ks, std::uint64_t seed,
                     const Thresholds& t, Expectation expect = Expectation::kEqual);

bool is_failure(const TestReport& r);
bool any_failure(std::span<const TestReport> reports);

std::string to_string(Verdict v);

void to_json(nlohmann::json& j, const TestReport& r);

/// Lossy CSV view: header then one row per report.
void write_csv(std::ostream& out, std::span<const TestReport> reports);

}  // namespace dpm

#endif  // DPM_REPORT_HPP
