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

#include "dpm/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "dpm/error.hpp"
#include "dpm/moments.hpp"

namespace dpm {

namespace {

struct PowerSums {
  std::vector<double> z;  // z[k] = sum Z^k, k = 0..depth
  std::vector<double> w;

  explicit PowerSums(int depth) : z(depth + 1, 0.0), w(depth + 1, 0.0) {}

  void add(double zv, double wv) {
    double pz = 1.0, pw = 1.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      z[k] += pz;
      w[k] += pw;
      pz *= zv;
      pw *= wv;
    }
  }
  PowerSums minus(const PowerSums& o) const {
    PowerSums r = *this;
    for (std::size_t k = 0; k < z.size(); ++k) {
      r.z[k] -= o.z[k];
      r.w[k] -= o.w[k];
    }
    return r;
  }
};

// (predicted - empirical, predicted - beta fit) for orders 2..depth, plus the
// point estimates.
struct ChainOutput {
  double p = 0.0, b1 = 0.0, alpha = 0.0;
  std::vector<double> predicted, empirical, beta_fit;
};

ChainOutput run_chain(const PowerSums& s, int depth) {
  ChainOutput out;
  const double n = s.z[0];
  ScalarMomentSeq a{{}, ScalarMomentSeq::Label::kZ};
  for (int k = 1; k <= depth; ++k) {
    a.values.push_back(s.z[k] / n);
    out.empirical.push_back(s.w[k] / n);
  }
  out.p = a.values[0];
  out.b1 = out.empirical[0];
  out.alpha = (1.0 - out.b1) / out.b1;
  out.predicted = recover_b_sequence(a, out.b1, out.p, depth).values;
  for (int k = 1; k <= depth; ++k) out.beta_fit.push_back(beta_moment(1.0, out.alpha, k));
  return out;
}

void check_unit(std::span<const double> xs) {
  for (double x : xs) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("samples must lie in [0, 1]");
  }
}

// Smallest elimination pivot of the Hankel matrix [m_{i+j}], or of
// [m_{i+j} - m_{i+j+1}] when `reflect` is set.
double min_pivot(const std::vector<double>& m, bool reflect) {
  // m[0..N]; use the largest square that fits.
  const int top = static_cast<int>(m.size()) - 1 - (reflect ? 1 : 0);
  const int size = top / 2 + 1;
  std::vector<double> h(size * size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      h[i * size + j] = reflect ? m[i + j] - m[i + j + 1] : m[i + j];
    }
  }
  double smallest = INFINITY;
  for (int k = 0; k < size; ++k) {
    const double piv = h[k * size + k];
    smallest = std::min(smallest, piv);
    if (!(piv > 0.0)) return smallest;
    for (int i = k + 1; i < size; ++i) {
      const double f = h[i * size + k] / piv;
      for (int j = k; j < size; ++j) h[i * size + j] -= f * h[k * size + j];
    }
  }
  return smallest;
}

}  // namespace

Characterization characterize_from_samples(std::span<const double> z_samples,
                                           std::span<const double> w_samples,
                                           int depth, const Thresholds& thresholds,
                                           std::uint64_t seed, int groups) {
  if (depth < 2 || depth > 8) throw DomainError("characterize depth must be in [2, 8]");
  if (z_samples.size() != w_samples.size()) {
    throw DomainError("Z and W sample sets must have the same size");
  }
  if (z_samples.size() < 1000) throw DomainError("characterize needs at least 1000 samples");
  if (groups < 2) throw DomainError("jackknife needs at least 2 groups");
  check_unit(z_samples);
  check_unit(w_samples);

  const std::size_t n = z_samples.size();
  const auto G = static_cast<std::size_t>(groups);
  PowerSums total(depth);
  std::vector<PowerSums> parts(G, PowerSums(depth));
  for (std::size_t i = 0; i < n; ++i) {
    parts[i * G / n].add(z_samples[i], w_samples[i]);
  }
  for (const auto& p : parts) {
    for (int k = 0; k <= depth; ++k) {
      total.z[k] += p.z[k];
      total.w[k] += p.w[k];
    }
  }

  Characterization out;
  const double p_mean = total.z[1] / total.z[0];
  out.p_hat = p_mean;
  out.b1_hat = total.w[1] / total.w[0];
  out.alpha_hat = (1.0 - out.b1_hat) / out.b1_hat;
  if (std::fabs(p_mean - 0.5) < 0.02) {
    out.ill_conditioned = true;
    out.warning = "p estimate within 0.02 of 1/2: the moment chain is ill-conditioned "
                  "at even orders";
  }

  ChainOutput full;
  std::vector<ChainOutput> leave_out;
  try {
    full = run_chain(total, depth);
    for (const auto& p : parts) leave_out.push_back(run_chain(total.minus(p), depth));
  } catch (const SingularSystemError& e) {
    out.ill_conditioned = true;
    out.warning = std::string("moment chain is singular: ") + e.what();
    TestReport r;
    r.name = "characterize moment chain";
    r.kind = "z";
    r.n_samples = n;
    r.seed = seed;
    r.verdict = Verdict::kDegenerate;
    r.note = out.warning;
    out.reports.push_back(std::move(r));
    return out;
  }
  out.predicted = full.predicted;
  out.empirical = full.empirical;
  out.beta_fit = full.beta_fit;

  auto jackknife_se = [&](const std::function<double(const ChainOutput&)>& stat) {
    double mean = 0.0;
    for (const auto& c : leave_out) mean += stat(c);
    mean /= static_cast<double>(G);
    double ss = 0.0;
    for (const auto& c : leave_out) ss += (stat(c) - mean) * (stat(c) - mean);
    return std::sqrt(ss * static_cast<double>(G - 1) / static_cast<double>(G));
  };

  for (int k = 2; k <= depth; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - 1);
    const double se_emp = jackknife_se(
        [i](const ChainOutput& c) { return c.predicted[i] - c.empirical[i]; });
    TestReport r = z_report("characterize predicted vs empirical b" + std::to_string(k),
                            full.predicted[i], full.empirical[i], se_emp, n, seed,
                            thresholds);
    r.note = "jackknife standard error";
    if (out.ill_conditioned) r.note += "; " + out.warning;
    out.max_dev_empirical = std::max(out.max_dev_empirical, std::fabs(r.z_score));
    out.reports.push_back(std::move(r));

    const double se_beta = jackknife_se(
        [i](const ChainOutput& c) { return c.predicted[i] - c.beta_fit[i]; });
    TestReport q = z_report("characterize predicted vs Be(1, alpha_hat) b" +
                                std::to_string(k),
                            full.predicted[i], full.beta_fit[i], se_beta, n, seed,
                            thresholds);
    q.reference = full.beta_fit[i];
    q.note = "jackknife standard error";
    if (out.ill_conditioned) q.note += "; " + out.warning;
    out.max_dev_beta = std::max(out.max_dev_beta, std::fabs(q.z_score));
    out.reports.push_back(std::move(q));
  }
  return out;
}

std::vector<SymmetricProbe> probe_symmetric(double alpha, int depth) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (depth < 1 || depth > 16) throw DomainError("probe depth must be in [1, 16]");

  // E(1-Z)^n Z and E(1-Z)^n for n = 0..depth.
  struct Law {
    std::string name;
    std::function<double(int)> tail_z;
    std::function<double(int)> tail;
  };
  auto beta_law = [](double a, double b) {
    // (1-Z) ~ Be(b, a); E(1-Z)^n Z = E(1-Z)^n - E(1-Z)^{n+1}.
    return std::pair<std::function<double(int)>, std::function<double(int)>>{
        [a, b](int n) { return beta_moment(b, a, n) - beta_moment(b, a, n + 1); },
        [a, b](int n) { return beta_moment(b, a, n); }};
  };
  std::vector<Law> laws;
  {
    auto [tz, t] = beta_law(alpha / 2.0, alpha / 2.0);
    char buf[64];
    std::snprintf(buf, sizeof buf, "Be(%g,%g)", alpha / 2.0, alpha / 2.0);
    laws.push_back({buf, tz, t});
  }
  {
    auto [tz1, t1] = beta_law(alpha, alpha / 3.0);
    auto [tz2, t2] = beta_law(alpha / 3.0, alpha);
    char buf[96];
    std::snprintf(buf, sizeof buf, "mixture Be(%g,%g) and Be(%g,%g)", alpha, alpha / 3.0,
                  alpha / 3.0, alpha);
    laws.push_back({buf, [=](int n) { return 0.5 * (tz1(n) + tz2(n)); },
                    [=](int n) { return 0.5 * (t1(n) + t2(n)); }});
  }
  laws.push_back({"two-point 1/4, 3/4",
                  [](int n) {
                    return 0.5 * (std::pow(0.75, n) * 0.25 + std::pow(0.25, n) * 0.75);
                  },
                  [](int n) { return 0.5 * (std::pow(0.75, n) + std::pow(0.25, n)); }});

  std::vector<SymmetricProbe> out;
  for (const auto& law : laws) {
    SymmetricProbe probe;
    probe.law = law.name;
    std::vector<double> m{1.0};
    for (int n = 1; n <= depth; ++n) {
      const double v = 2.0 * law.tail_z(n) / law.tail(n);
      probe.implied.push_back(v);
      m.push_back(v);
    }
    const double v1 = probe.implied[0];
    const double a = v1 / (1.0 - v1);
    for (int n = 1; n <= depth; ++n) {
      probe.beta_fit.push_back(a > 0.0 ? beta_moment(a, 1.0, n) : NAN);
    }
    probe.hankel_min_pivot = std::min(min_pivot(m, false), min_pivot(m, true));
    out.push_back(std::move(probe));
  }
  return out;
}

}  // namespace dpm
