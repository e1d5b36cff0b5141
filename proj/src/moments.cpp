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

#include "dpm/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpm/error.hpp"
#include "dpm/specialfn.hpp"

namespace dpm {

std::string format_multi_index(std::span<const int> ks) {
  std::string s = "(";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(ks[i]);
  }
  return s + ")";
}

std::vector<MultiIndex> multi_indices(std::size_t n, int max_degree) {
  std::vector<MultiIndex> out;
  if (n == 0) return out;
  for (int degree = 0; degree <= max_degree; ++degree) {
    // Lexicographically descending compositions of `degree` into n parts,
    // then reversed to ascending.
    std::vector<MultiIndex> level;
    MultiIndex k(n, 0);
    auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
      if (pos + 1 == n) {
        k[pos] = left;
        level.push_back(k);
        return;
      }
      for (int v = 0; v <= left; ++v) {
        k[pos] = v;
        self(self, pos + 1, left - v);
      }
    };
    rec(rec, 0, degree);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

// ---------------------------------------------------------------------------
// MomentTable

MomentTable::MomentTable(std::size_t partition_size) : n_(partition_size) {
  entries_[MultiIndex(n_, 0)] = MomentEntry{1.0, 0.0, MomentKind::kExact};
}

bool MomentTable::contains(std::span<const int> ks) const {
  return entries_.count(MultiIndex(ks.begin(), ks.end())) > 0;
}

const MomentEntry& MomentTable::at(std::span<const int> ks) const {
  auto it = entries_.find(MultiIndex(ks.begin(), ks.end()));
  if (it == entries_.end()) {
    throw DependencyError("moment table has no entry " + format_multi_index(ks));
  }
  return it->second;
}

void MomentTable::set(const MultiIndex& ks, MomentEntry entry) {
  if (ks.size() != n_) throw DomainError("multi-index has the wrong length");
  if (std::all_of(ks.begin(), ks.end(), [](int k) { return k == 0; })) return;
  entries_[ks] = entry;
}

bool MomentTable::satisfies_invariants(double tol) const {
  for (const auto& [ks, e] : entries_) {
    if (e.value < -tol || e.value > 1.0 + tol) return false;
    MultiIndex up = ks;
    for (std::size_t j = 0; j < n_; ++j) {
      ++up[j];
      auto it = entries_.find(up);
      if (it != entries_.end() && it->second.value > e.value + tol) return false;
      --up[j];
    }
  }
  return entries_.at(MultiIndex(n_, 0)).value == 1.0;
}

// ---------------------------------------------------------------------------
// Closed forms

double beta_moment(double a, double b, int n) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("beta_moment: parameters must be positive");
  }
  if (n < 0) throw DomainError("beta_moment: order must be nonnegative");
  double m = 1.0;
  for (int j = 0; j < n; ++j) m *= (a + j) / (a + b + j);
  return m;
}

double dirichlet_mixed_moment(std::span<const double> alphas,
                              std::span<const int> ks) {
  if (alphas.size() != ks.size()) {
    throw DomainError("dirichlet_mixed_moment: size mismatch");
  }
  double alpha = 0.0;
  int degree = 0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] >= 0.0) || !std::isfinite(alphas[i])) {
      throw DomainError("Dirichlet parameters must be nonnegative");
    }
    if (ks[i] < 0) throw DomainError("moment orders must be nonnegative");
    alpha += alphas[i];
    degree += ks[i];
  }
  if (!(alpha > 0.0)) throw DomainError("Dirichlet parameters must not all vanish");

  LogReal m = LogReal::from_log(log_gamma(alpha) - log_gamma(alpha + degree));
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (ks[i] == 0) continue;
    if (alphas[i] == 0.0) return 0.0;
    m *= LogReal::from_log(log_gamma(alphas[i] + ks[i]) - log_gamma(alphas[i]));
  }
  return m.value();
}

// ---------------------------------------------------------------------------
// Recursion

double moment_recursion_step(const MomentTable& table,
                             std::span<const double> block_alphas,
                             std::size_t j, std::span<const int> ks) {
  const std::size_t n = block_alphas.size();
  if (ks.size() != n || table.partition_size() != n) {
    throw DomainError("moment_recursion_step: size mismatch");
  }
  if (j >= n) throw DomainError("moment_recursion_step: block index out of range");
  const double alpha = std::accumulate(block_alphas.begin(), block_alphas.end(), 0.0);
  if (!(alpha > 0.0)) throw DomainError("total mass must be positive");

  int others = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != j) others += ks[i];
  }
  const int kj = ks[j];
  MultiIndex lower(ks.begin(), ks.end());
  double sum = 0.0;
  for (int r = 0; r <= kj; ++r) {
    lower[j] = r;
    const double b = table.value(lower);
    sum += binomial(kj, r) * b * beta_fn(kj + 1 - r, others + alpha + r);
  }
  return block_alphas[j] * sum;
}

double moment_recursion_step(const MomentTable& table, const BaseModel& model,
                             const Partition& partition, std::size_t j,
                             std::span<const int> ks) {
  std::vector<double> alphas = nu_of(model, partition);
  for (double& a : alphas) a *= model.alpha();
  return moment_recursion_step(table, alphas, j, ks);
}

MomentTable recursion_table(std::span<const double> block_alphas, int max_degree) {
  MomentTable table(block_alphas.size());
  for (const auto& ks : multi_indices(block_alphas.size(), max_degree)) {
    auto j = static_cast<std::size_t>(
        std::find_if(ks.begin(), ks.end(), [](int k) { return k > 0; }) - ks.begin());
    if (j == ks.size()) continue;
    MultiIndex lower = ks;
    --lower[j];
    table.set(ks, {moment_recursion_step(table, block_alphas, j, lower), 0.0,
                   MomentKind::kExact});
  }
  return table;
}

MomentTable exact_table(std::span<const double> block_alphas, int max_degree) {
  MomentTable table(block_alphas.size());
  for (const auto& ks : multi_indices(block_alphas.size(), max_degree)) {
    table.set(ks, {dirichlet_mixed_moment(block_alphas, ks), 0.0, MomentKind::kExact});
  }
  return table;
}

// ---------------------------------------------------------------------------
// Beta characterization

namespace {

// E Z^k (1-Z)^m = sum_i C(m, i) (-1)^i a_{k+i}
double mixed_beta_term(const ScalarMomentSeq& a, int k, int m) {
  double s = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    s += sign * binomial(m, i) * a.moment(static_cast<std::size_t>(k + i));
  }
  return s;
}

}  // namespace

BNextSolution solve_b_next(const ScalarMomentSeq& a, const ScalarMomentSeq& b,
                           double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("solve_b_next: p must lie in (0, 1)");
  const int n = static_cast<int>(b.size());
  const int N = n + 1;
  if (a.size() < static_cast<std::size_t>(N)) {
    throw DomainError("solve_b_next: need a_1..a_{n+1}");
  }
  const double aN = a.moment(N);

  double rest = aN;
  double coefficient = 0.0;
  double largest = std::fabs(aN);
  for (int k = 0; k <= N; ++k) {
    const double t = p * binomial(N, k) * mixed_beta_term(a, k, N - k);
    if (k == 0) {
      coefficient -= t;
    } else {
      const double s = t * b.moment(N - k);
      rest -= s;
      largest = std::max(largest, std::fabs(s));
    }
  }
  for (int j = 0; j <= N; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const double t = (1.0 - p) * aN * binomial(N, j) * sign;
    if (j == N) {
      coefficient -= t;
    } else {
      const double s = t * b.moment(j);
      rest -= s;
      largest = std::max(largest, std::fabs(s));
    }
  }
  if (std::fabs(coefficient) < 1e-13) {
    throw SingularSystemError(
        "solve_b_next: vanishing coefficient for b_" + std::to_string(N),
        coefficient);
  }
  return BNextSolution{-rest / coefficient, coefficient,
                       largest / std::fabs(coefficient)};
}

ScalarMomentSeq recover_b_sequence(const ScalarMomentSeq& a, double b1, double p,
                                   int depth) {
  ScalarMomentSeq b{{b1}, ScalarMomentSeq::Label::kW};
  while (static_cast<int>(b.size()) < depth) {
    b.values.push_back(solve_b_next(a, b, p).value);
  }
  return b;
}

double check_solvability(double p, double alpha, int n) {
  double first = p;
  double second = 1.0 - p;
  for (int j = 0; j <= n; ++j) {
    first *= p * alpha + j;
    second *= (1.0 - p) * alpha + j;
  }
  return ((n + 1) % 2 == 0) ? first + second : first - second;
}

double tbeta2_c(double p, double alpha) { return p * (alpha * p + 1.0); }

}  // namespace dpm
