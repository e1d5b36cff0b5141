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

#include "dpm/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dpm {

namespace {

Verdict decide(bool agrees, Expectation expect) {
  const bool ok = (expect == Expectation::kEqual) ? agrees : !agrees;
  return ok ? Verdict::kPass : Verdict::kFail;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TestReport z_report(std::string name, double lhs, double rhs, double std_error,
                    std::uint64_t n, std::uint64_t seed, const Thresholds& t,
                    Expectation expect) {
  TestReport r;
  r.name = std::move(name);
  r.kind = "z";
  r.expect = expect;
  r.lhs_estimate = lhs;
  r.rhs_estimate = rhs;
  r.combined_stderr = std_error;
  r.n_samples = n;
  r.seed = seed;
  const double diff = lhs - rhs;
  if (std_error <= 1e-12) {
    const bool equal = std::fabs(diff) <= 1e-9;
    r.z_score = equal ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    r.p_value = equal ? 1.0 : 0.0;
    r.note = "zero variance";
  } else {
    r.z_score = diff / std_error;
    r.p_value = normal_two_sided_p(r.z_score);
  }
  r.verdict = decide(std::fabs(r.z_score) <= t.z, expect);
  return r;
}

TestReport ks_report(std::string name, const KsResult& ks, std::uint64_t seed,
                     const Thresholds& t, Expectation expect) {
  TestReport r;
  r.name = std::move(name);
  r.kind = "ks";
  r.expect = expect;
  r.lhs_estimate = ks.statistic;
  r.rhs_estimate = 0.0;
  r.p_value = ks.p_value;
  r.n_samples = ks.n;
  r.seed = seed;
  r.verdict = decide(ks.p_value >= t.p_floor, expect);
  return r;
}

bool is_failure(const TestReport& r) { return r.verdict == Verdict::kFail; }

bool any_failure(std::span<const TestReport> reports) {
  return std::any_of(reports.begin(), reports.end(), is_failure);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kDegenerate: return "degenerate";
  }
  return "fail";
}

void to_json(nlohmann::json& j, const TestReport& r) {
  j = nlohmann::json{
      {"name", r.name},
      {"kind", r.kind},
      {"expect", r.expect == Expectation::kEqual ? "equal" : "differ"},
      {"lhs_estimate", r.lhs_estimate},
      {"rhs_estimate", r.rhs_estimate},
      {"reference", r.reference ? nlohmann::json(*r.reference) : nlohmann::json()},
      {"combined_stderr", r.combined_stderr},
      {"z_score", std::isfinite(r.z_score) ? nlohmann::json(r.z_score) : nlohmann::json()},
      {"p_value", r.p_value},
      {"n_samples", r.n_samples},
      {"seed", r.seed},
      {"verdict", to_string(r.verdict)},
      {"note", r.note}};
}

void write_csv(std::ostream& out, std::span<const TestReport> reports) {
  out << "name,kind,expect,lhs_estimate,rhs_estimate,reference,combined_stderr,"
         "z_score,p_value,n_samples,seed,verdict\n";
  for (const auto& r : reports) {
    out << '"' << r.name << "\"," << r.kind << ','
        << (r.expect == Expectation::kEqual ? "equal" : "differ") << ','
        << fmt_double(r.lhs_estimate) << ',' << fmt_double(r.rhs_estimate) << ','
        << (r.reference ? fmt_double(*r.reference) : "") << ','
        << fmt_double(r.combined_stderr) << ',' << fmt_double(r.z_score) << ','
        << fmt_double(r.p_value) << ',' << r.n_samples << ',' << r.seed << ','
        << to_string(r.verdict) << '\n';
  }
}

}  // namespace dpm
