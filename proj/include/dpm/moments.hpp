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

#ifndef DPM_MOMENTS_HPP
#define DPM_MOMENTS_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dpm/measures.hpp"

namespace dpm {

using MultiIndex = std::vector<int>;

std::string format_multi_index(std::span<const int> ks);

/// All multi-indices in N_0^n with total degree <= max_degree, ordered by
/// total degree and then lexicographically.
std::vector<MultiIndex> multi_indices(std::size_t n, int max_degree);

/// Binomial coefficient as a double (exact for the small arguments used here).
double binomial(int n, int k);

enum class MomentKind { kExact, kEstimated };

struct MomentEntry {
  double value = 0.0;
  double std_error = 0.0;
  MomentKind kind = MomentKind::kExact;
};

/// Sparse table of mixed moments b(k_1, ..., k_n) of a random probability
/// vector. The entry at (0, ..., 0) is always 1.
class MomentTable {
 public:
  explicit MomentTable(std::size_t partition_size);

  std::size_t partition_size() const { return n_; }
  bool contains(std::span<const int> ks) const;
  /// Throws DependencyError naming the absent index.
  const MomentEntry& at(std::span<const int> ks) const;
  double value(std::span<const int> ks) const { return at(ks).value; }
  void set(const MultiIndex& ks, MomentEntry entry);

  const std::map<MultiIndex, MomentEntry>& entries() const { return entries_; }

  /// Values in [0, 1] (within tol) and non-increasing along each coordinate
  /// wherever both neighbours are present.
  bool satisfies_invariants(double tol = 1e-12) const;

 private:
  std::size_t n_;
  std::map<MultiIndex, MomentEntry> entries_;
};

/// a_1, ..., a_N (moments of Z) or b_1, ..., b_N (moments of W).
struct ScalarMomentSeq {
  enum class Label { kZ, kW };
  std::vector<double> values;
  Label label = Label::kZ;

  std::size_t size() const { return values.size(); }
  /// 1-based moment; order 0 is 1.
  double moment(std::size_t k) const { return k == 0 ? 1.0 : values.at(k - 1); }
};

/// E W^n for W ~ Be(a, b): prod_{j<n} (a + j) / (a + b + j).
double beta_moment(double a, double b, int n);

/// E prod Z_i^{k_i} for Z ~ Di(alphas).
///
/// Gamma(alpha) / Gamma(alpha + |k|) * prod Gamma(alpha_i + k_i) / Gamma(alpha_i),
/// summed in log space. Zero parameters follow the delta_0 convention: such a
/// component is identically 0, so any k_i >= 1 there gives 0 and k_i = 0
/// drops the component. Throws DomainError on negative parameters or when
/// all parameters vanish.
double dirichlet_mixed_moment(std::span<const double> alphas,
                              std::span<const int> ks);

/// b(k + e_j) from lower-order entries, for a process with
/// G = Be(1, alpha) and block parameters alpha_i = alpha nu(B_i):
///
///   alpha_j sum_{r=0}^{k_j} C(k_j, r) b(.., r, ..) B(k_j + 1 - r, |k| + alpha + r - k_j)
///
/// Throws DependencyError when a needed entry is missing.
double moment_recursion_step(const MomentTable& table,
                             std::span<const double> block_alphas,
                             std::size_t j, std::span<const int> ks);

/// Same step with block parameters alpha * nu(B_i) taken from the model.
double moment_recursion_step(const MomentTable& table, const BaseModel& model,
                             const Partition& partition, std::size_t j,
                             std::span<const int> ks);

/// All moments of total degree <= max_degree by the recursion alone.
MomentTable recursion_table(std::span<const double> block_alphas, int max_degree);

/// All moments of total degree <= max_degree from the closed form.
MomentTable exact_table(std::span<const double> block_alphas, int max_degree);

struct BNextSolution {
  double value = 0.0;
  // Coefficient of b_{n+1} in the linear equation.
  double coefficient = 0.0;
  // Largest absolute summand divided by |coefficient|.
  double condition = 0.0;
};

/// Solves for b_{n+1} given a_1..a_{n+1} and b_1..b_n (n = b.size()), from
///
///   a_{n+1} - p E(Z + W(1-Z))^{n+1} - (1-p) a_{n+1} E(1-W)^{n+1} = 0,
///
/// where E Z^k (1-Z)^m is expanded binomially over the a's.
/// Throws SingularSystemError when |coefficient| < 1e-13.
BNextSolution solve_b_next(const ScalarMomentSeq& a, const ScalarMomentSeq& b,
                           double p);

/// Runs solve_b_next from b_1 up to b_depth. Result holds b_1..b_depth.
ScalarMomentSeq recover_b_sequence(const ScalarMomentSeq& a, double b1, double p,
                                   int depth);

/// p prod_{j=0}^{n} (p alpha + j) + (-1)^{n+1} (1-p) prod_{j=0}^{n} ((1-p) alpha + j)
double check_solvability(double p, double alpha, int n);

/// c = p (alpha p + 1).
double tbeta2_c(double p, double alpha);

}  // namespace dpm

#endif  // DPM_MOMENTS_HPP
