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

#ifndef DPM_MEASURES_HPP
#define DPM_MEASURES_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dpm {

/// A point of the ground space: one of finitely many atoms, or a
/// coordinate u in [0, 1] carried by the diffuse (Lebesgue) component.
class GroundPoint {
 public:
  enum class Kind : std::uint8_t { kAtom, kCont };

  static GroundPoint atom(std::size_t index);
  /// Throws DomainError unless u is in [0, 1].
  static GroundPoint cont(double u);

  Kind kind() const { return kind_; }
  bool is_atom() const { return kind_ == Kind::kAtom; }
  std::size_t index() const { return index_; }
  double u() const { return u_; }

  // Cont coordinates compare bitwise (-0.0 is normalized away on
  // construction, so bit order equals numeric order on [0, 1]).
  friend bool operator==(const GroundPoint& a, const GroundPoint& b);
  friend std::strong_ordering operator<=>(const GroundPoint& a,
                                          const GroundPoint& b);

 private:
  GroundPoint() = default;
  Kind kind_ = Kind::kAtom;
  std::size_t index_ = 0;
  double u_ = 0.0;
};

struct WeightedPoint {
  GroundPoint point;
  double weight;
};

/// Finite weighted atom list. Atoms are kept sorted by point, equal points
/// are merged by summing weights and zero weights are dropped.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  /// Throws DomainError on negative or non-finite weights.
  explicit DiscreteMeasure(std::vector<WeightedPoint> atoms);

  static DiscreteMeasure dirac(const GroundPoint& x, double weight = 1.0);

  std::span<const WeightedPoint> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  double total() const { return total_; }
  /// mu{x}; zero when x is not an atom.
  double mass_at(const GroundPoint& x) const;

 private:
  std::vector<WeightedPoint> atoms_;
  double total_ = 0.0;
};

/// Total mass alpha together with the base probability measure nu,
/// given by atom probabilities plus a weight on Lebesgue measure on [0, 1].
class BaseModel {
 public:
  /// Throws DomainError unless alpha > 0, all p_i >= 0, diffuse_weight is
  /// in [0, 1] and sum p_i + diffuse_weight = 1 within 1e-12.
  BaseModel(double alpha, std::vector<double> atom_probs,
            double diffuse_weight = 0.0);

  static BaseModel diffuse(double alpha) { return BaseModel(alpha, {}, 1.0); }

  double alpha() const { return alpha_; }
  std::span<const double> atom_probs() const { return atom_probs_; }
  std::size_t num_atoms() const { return atom_probs_.size(); }
  double diffuse_weight() const { return diffuse_weight_; }

  BaseModel with_alpha(double alpha) const {
    return BaseModel(alpha, atom_probs_, diffuse_weight_);
  }

 private:
  double alpha_;
  std::vector<double> atom_probs_;
  double diffuse_weight_;
};

/// [lo, hi) inside [0, 1]; an interval ending at 1 also contains 1.
struct Interval {
  double lo;
  double hi;
  bool contains(double u) const {
    return (u >= lo && u < hi) || (hi == 1.0 && u == 1.0);
  }
  double length() const { return hi - lo; }
};

struct Block {
  std::vector<std::size_t> atoms;
  std::vector<Interval> intervals;
};

/// Finite measurable partition of the ground space.
class Partition {
 public:
  /// Throws DomainError when blocks overlap or an interval is malformed.
  explicit Partition(std::vector<Block> blocks);

  /// Singleton blocks {0}, {1}, ..., {n-1}.
  static Partition by_atoms(std::size_t n);
  /// Blocks [c0, c1), [c1, c2), ..., [c_{m-1}, 1] from interior cut points.
  static Partition by_cuts(std::span<const double> cuts);

  std::size_t size() const { return blocks_.size(); }
  const Block& block(std::size_t i) const { return blocks_.at(i); }
  std::span<const Block> blocks() const { return blocks_; }

  /// Index of the block containing x. Throws DomainError if uncovered.
  std::size_t block_of(const GroundPoint& x) const;

  /// Throws DomainError unless every atom of the model is covered and,
  /// when the model has a diffuse part, the intervals tile [0, 1].
  void validate_for(const BaseModel& model) const;

 private:
  struct Segment {
    double lo;
    double hi;
    std::size_t block;
  };
  std::vector<Block> blocks_;
  std::vector<std::size_t> atom_block_;  // SIZE_MAX when uncovered
  std::vector<Segment> segments_;        // sorted by lo
};

/// nu(B). Throws DomainError if the block's intervals overlap.
double nu_of(const BaseModel& model, const Block& block);

/// nu(B_i) for every block of the partition.
std::vector<double> nu_of(const BaseModel& model, const Partition& partition);

/// Whether some B has nu(B) in (0, 1) and nu(B) != 1/2.
///
/// Any diffuse weight qualifies. Otherwise all atom subsets are enumerated
/// for up to 20 atoms; larger models fall back to a partial-sum scan.
bool is_good(const BaseModel& model);

/// (1 - u) mu + u delta_x. Throws DomainError if u is outside [0, 1] or
/// mu has no mass.
DiscreteMeasure mix_with_dirac(const DiscreteMeasure& mu, double u,
                               const GroundPoint& x);

struct AtomRemoval {
  DiscreteMeasure measure;
  // mu{x} = 1: the a/0 := 0 convention leaves the zero measure.
  bool degenerate = false;
};

/// mu^{(x)} = (1 - mu{x})^{-1} (mu - mu{x} delta_x) for a probability
/// measure mu. Weights below 1e-15 are pruned after renormalization.
AtomRemoval remove_atom(const DiscreteMeasure& mu, const GroundPoint& x);

/// (mu(B_1), ..., mu(B_n)) / mu(X).
std::vector<double> project(const DiscreteMeasure& mu,
                            const Partition& partition);

/// Unnormalized block masses (mu(B_1), ..., mu(B_n)) into a buffer of size n.
void block_masses_into(const DiscreteMeasure& mu, const Partition& partition,
                       std::span<double> out);

/// Same as project, writing into a caller-provided buffer of size n.
void project_into(const DiscreteMeasure& mu, const Partition& partition,
                  std::span<double> out);

}  // namespace dpm

#endif  // DPM_MEASURES_HPP
