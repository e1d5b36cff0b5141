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

#include "dpm/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dpm/error.hpp"
#include "dpm/measures_json.hpp"

namespace dpm {

namespace {

constexpr std::size_t kUncovered = std::numeric_limits<std::size_t>::max();
constexpr double kPruneBelow = 1e-15;

void check_interval(const Interval& iv) {
  if (!(iv.lo >= 0.0) || !(iv.hi <= 1.0) || !(iv.lo < iv.hi)) {
    throw DomainError("malformed interval [" + std::to_string(iv.lo) + ", " +
                      std::to_string(iv.hi) + ")");
  }
}

// Sorted copy; throws if any two intervals overlap.
std::vector<Interval> sorted_disjoint(std::vector<Interval> ivs) {
  for (const auto& iv : ivs) check_interval(iv);
  std::sort(ivs.begin(), ivs.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < ivs.size(); ++i) {
    if (ivs[i].lo < ivs[i - 1].hi) {
      throw DomainError("overlapping intervals in block");
    }
  }
  return ivs;
}

}  // namespace

// ---------------------------------------------------------------------------
// GroundPoint

GroundPoint GroundPoint::atom(std::size_t index) {
  GroundPoint p;
  p.kind_ = Kind::kAtom;
  p.index_ = index;
  return p;
}

GroundPoint GroundPoint::cont(double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError("continuous ground point must lie in [0, 1], got " +
                      std::to_string(u));
  }
  GroundPoint p;
  p.kind_ = Kind::kCont;
  p.u_ = u + 0.0;  // -0.0 -> +0.0
  return p;
}

bool operator==(const GroundPoint& a, const GroundPoint& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == GroundPoint::Kind::kAtom) return a.index_ == b.index_;
  return std::bit_cast<std::uint64_t>(a.u_) == std::bit_cast<std::uint64_t>(b.u_);
}

std::strong_ordering operator<=>(const GroundPoint& a, const GroundPoint& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  if (a.kind_ == GroundPoint::Kind::kAtom) return a.index_ <=> b.index_;
  return std::bit_cast<std::uint64_t>(a.u_) <=> std::bit_cast<std::uint64_t>(b.u_);
}

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure::DiscreteMeasure(std::vector<WeightedPoint> atoms) {
  for (const auto& a : atoms) {
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
      throw DomainError("measure weights must be finite and nonnegative");
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const WeightedPoint& a, const WeightedPoint& b) {
              return a.point < b.point;
            });
  atoms_.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!atoms_.empty() && atoms_.back().point == a.point) {
      atoms_.back().weight += a.weight;
    } else {
      atoms_.push_back(a);
    }
  }
  std::erase_if(atoms_, [](const WeightedPoint& a) { return a.weight == 0.0; });
  total_ = 0.0;
  for (const auto& a : atoms_) total_ += a.weight;
}

DiscreteMeasure DiscreteMeasure::dirac(const GroundPoint& x, double weight) {
  return DiscreteMeasure({WeightedPoint{x, weight}});
}

double DiscreteMeasure::mass_at(const GroundPoint& x) const {
  auto it = std::lower_bound(
      atoms_.begin(), atoms_.end(), x,
      [](const WeightedPoint& a, const GroundPoint& p) { return a.point < p; });
  return (it != atoms_.end() && it->point == x) ? it->weight : 0.0;
}

// ---------------------------------------------------------------------------
// BaseModel

BaseModel::BaseModel(double alpha, std::vector<double> atom_probs,
                     double diffuse_weight)
    : alpha_(alpha),
      atom_probs_(std::move(atom_probs)),
      diffuse_weight_(diffuse_weight) {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
    throw DomainError("total mass alpha must be positive and finite");
  }
  if (!(diffuse_weight_ >= 0.0 && diffuse_weight_ <= 1.0)) {
    throw DomainError("diffuse weight must lie in [0, 1]");
  }
  double sum = diffuse_weight_;
  for (double p : atom_probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw DomainError("atom probabilities must be nonnegative");
    }
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw DomainError("base measure must have total mass 1, got " +
                      std::to_string(sum));
  }
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  std::size_t max_atom = 0;
  bool any_atom = false;
  for (const auto& b : blocks_) {
    for (std::size_t a : b.atoms) {
      max_atom = std::max(max_atom, a);
      any_atom = true;
    }
  }
  atom_block_.assign(any_atom ? max_atom + 1 : 0, kUncovered);
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    for (std::size_t a : blocks_[bi].atoms) {
      if (atom_block_[a] != kUncovered) {
        throw DomainError("partition blocks share atom " + std::to_string(a));
      }
      atom_block_[a] = bi;
    }
    for (const auto& iv : blocks_[bi].intervals) {
      check_interval(iv);
      segments_.push_back({iv.lo, iv.hi, bi});
    }
  }
  std::sort(segments_.begin(), segments_.end(),
            [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    if (segments_[i].lo < segments_[i - 1].hi) {
      throw DomainError("partition intervals overlap");
    }
  }
}

Partition Partition::by_atoms(std::size_t n) {
  std::vector<Block> blocks(n);
  for (std::size_t i = 0; i < n; ++i) blocks[i].atoms = {i};
  return Partition(std::move(blocks));
}

Partition Partition::by_cuts(std::span<const double> cuts) {
  std::vector<Block> blocks;
  double lo = 0.0;
  for (double c : cuts) {
    blocks.push_back(Block{{}, {Interval{lo, c}}});
    lo = c;
  }
  blocks.push_back(Block{{}, {Interval{lo, 1.0}}});
  return Partition(std::move(blocks));
}

std::size_t Partition::block_of(const GroundPoint& x) const {
  if (x.is_atom()) {
    if (x.index() < atom_block_.size() && atom_block_[x.index()] != kUncovered) {
      return atom_block_[x.index()];
    }
    throw DomainError("atom " + std::to_string(x.index()) +
                      " is not covered by the partition");
  }
  const double u = x.u();
  auto it = std::upper_bound(
      segments_.begin(), segments_.end(), u,
      [](double v, const Segment& s) { return v < s.lo; });
  if (it != segments_.begin()) {
    const auto& s = *std::prev(it);
    if (Interval{s.lo, s.hi}.contains(u)) return s.block;
  }
  throw DomainError("point u=" + std::to_string(u) +
                    " is not covered by the partition");
}

void Partition::validate_for(const BaseModel& model) const {
  for (std::size_t a = 0; a < model.num_atoms(); ++a) {
    if (a >= atom_block_.size() || atom_block_[a] == kUncovered) {
      throw DomainError("partition does not cover atom " + std::to_string(a));
    }
  }
  if (model.diffuse_weight() > 0.0) {
    double at = 0.0;
    for (const auto& s : segments_) {
      if (s.lo != at) throw DomainError("partition intervals do not tile [0, 1]");
      at = s.hi;
    }
    if (at != 1.0) throw DomainError("partition intervals do not tile [0, 1]");
  }
}

// ---------------------------------------------------------------------------
// Operations

double nu_of(const BaseModel& model, const Block& block) {
  double mass = 0.0;
  for (std::size_t a : block.atoms) {
    if (a < model.num_atoms()) mass += model.atom_probs()[a];
  }
  double length = 0.0;
  for (const auto& iv : sorted_disjoint(block.intervals)) length += iv.length();
  return mass + model.diffuse_weight() * length;
}

std::vector<double> nu_of(const BaseModel& model, const Partition& partition) {
  std::vector<double> out;
  out.reserve(partition.size());
  for (const auto& b : partition.blocks()) out.push_back(nu_of(model, b));
  return out;
}

bool is_good(const BaseModel& model) {
  if (model.diffuse_weight() > 0.0) return true;
  constexpr double kTol = 1e-12;
  auto qualifies = [](double s) {
    return s > kTol && s < 1.0 - kTol && std::fabs(s - 0.5) > kTol;
  };
  std::vector<double> probs;
  for (double p : model.atom_probs()) {
    if (p > 0.0) probs.push_back(p);
  }
  if (probs.size() <= 20) {
    const std::uint32_t subsets = 1u << probs.size();
    for (std::uint32_t mask = 1; mask < subsets; ++mask) {
      double s = 0.0;
      for (std::size_t i = 0; i < probs.size(); ++i) {
        if (mask & (1u << i)) s += probs[i];
      }
      if (qualifies(s)) return true;
    }
    return false;
  }
  std::sort(probs.begin(), probs.end(), std::greater<>());
  double prefix = 0.0;
  for (double p : probs) {
    prefix += p;
    if (qualifies(p) || qualifies(prefix)) return true;
  }
  return false;
}

DiscreteMeasure mix_with_dirac(const DiscreteMeasure& mu, double u,
                               const GroundPoint& x) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError("mixing weight must lie in [0, 1], got " +
                      std::to_string(u));
  }
  if (!(mu.total() > 0.0)) {
    throw DomainError("mix_with_dirac needs a measure with positive mass");
  }
  std::vector<WeightedPoint> atoms;
  atoms.reserve(mu.size() + 1);
  for (const auto& a : mu.atoms()) atoms.push_back({a.point, (1.0 - u) * a.weight});
  atoms.push_back({x, u});
  return DiscreteMeasure(std::move(atoms));
}

AtomRemoval remove_atom(const DiscreteMeasure& mu, const GroundPoint& x) {
  if (std::fabs(mu.total() - 1.0) > 1e-9) {
    throw PreconditionError("remove_atom needs a probability measure");
  }
  double rest = 0.0;
  for (const auto& a : mu.atoms()) {
    if (!(a.point == x)) rest += a.weight;
  }
  if (rest == 0.0) return AtomRemoval{DiscreteMeasure{}, true};
  std::vector<WeightedPoint> atoms;
  atoms.reserve(mu.size());
  for (const auto& a : mu.atoms()) {
    if (a.point == x) continue;
    const double w = a.weight / rest;
    if (w >= kPruneBelow) atoms.push_back({a.point, w});
  }
  return AtomRemoval{DiscreteMeasure(std::move(atoms)), false};
}

void block_masses_into(const DiscreteMeasure& mu, const Partition& partition,
                       std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& a : mu.atoms()) out[partition.block_of(a.point)] += a.weight;
}

void project_into(const DiscreteMeasure& mu, const Partition& partition,
                  std::span<double> out) {
  if (!(mu.total() > 0.0)) throw DomainError("cannot project the zero measure");
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& a : mu.atoms()) out[partition.block_of(a.point)] += a.weight;
  for (double& v : out) v /= mu.total();
}

std::vector<double> project(const DiscreteMeasure& mu,
                            const Partition& partition) {
  std::vector<double> out(partition.size());
  project_into(mu, partition, out);
  return out;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const GroundPoint& x) {
  if (x.is_atom()) {
    j = nlohmann::json{{"atom", x.index()}};
  } else {
    j = nlohmann::json{{"cont", x.u()}};
  }
}

GroundPoint ground_point_from_json(const nlohmann::json& j) {
  if (j.contains("atom")) return GroundPoint::atom(j.at("atom").get<std::size_t>());
  if (j.contains("cont")) return GroundPoint::cont(j.at("cont").get<double>());
  throw DomainError("ground point must have an \"atom\" or \"cont\" key");
}

void to_json(nlohmann::json& j, const DiscreteMeasure& mu) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : mu.atoms()) {
    atoms.push_back(nlohmann::json{{"point", a.point}, {"w", a.weight}});
  }
  j = nlohmann::json{{"atoms", std::move(atoms)}};
}

DiscreteMeasure discrete_measure_from_json(const nlohmann::json& j) {
  std::vector<WeightedPoint> atoms;
  for (const auto& a : j.at("atoms")) {
    atoms.push_back({ground_point_from_json(a.at("point")), a.at("w").get<double>()});
  }
  return DiscreteMeasure(std::move(atoms));
}

void to_json(nlohmann::json& j, const BaseModel& model) {
  j = nlohmann::json{
      {"alpha", model.alpha()},
      {"atom_probs", std::vector<double>(model.atom_probs().begin(),
                                         model.atom_probs().end())},
      {"diffuse_weight", model.diffuse_weight()}};
}

BaseModel base_model_from_json(const nlohmann::json& j, double fallback_alpha) {
  const double alpha = j.value("alpha", fallback_alpha);
  auto probs = j.value("atom_probs", std::vector<double>{});
  const double diffuse = j.value("diffuse_weight", 0.0);
  return BaseModel(alpha, std::move(probs), diffuse);
}

}  // namespace dpm
