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

#include "dpm/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpm/error.hpp"
#include "dpm/specialfn.hpp"

namespace dpm {

double sample_standard_normal(RngStream& rng) {
  // Marsaglia polar method, one output per accepted pair.
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s < 1.0 && s > 0.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double sample_exponential(RngStream& rng) { return -std::log(rng.uniform_open()); }

namespace {

void check_shape(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("Gamma shape must be positive and finite, got " +
                      std::to_string(shape));
  }
}

// Marsaglia-Tsang for shape >= 1; returns d and v with variate d * v.
void marsaglia_tsang(double shape, RngStream& rng, double& d, double& v) {
  d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = sample_standard_normal(rng);
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    v = t * t * t;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return;
  }
}

}  // namespace

double sample_gamma(double shape, RngStream& rng) {
  check_shape(shape);
  double d, v;
  if (shape >= 1.0) {
    marsaglia_tsang(shape, rng, d, v);
    return d * v;
  }
  marsaglia_tsang(shape + 1.0, rng, d, v);
  return d * v * std::pow(rng.uniform_open(), 1.0 / shape);
}

double sample_log_gamma(double shape, RngStream& rng) {
  check_shape(shape);
  double d, v;
  if (shape >= 1.0) {
    marsaglia_tsang(shape, rng, d, v);
    return std::log(d * v);
  }
  marsaglia_tsang(shape + 1.0, rng, d, v);
  return std::log(d * v) + std::log(rng.uniform_open()) / shape;
}

double sample_beta(double a, double b, RngStream& rng) {
  const double la = sample_log_gamma(a, rng);
  const double lb = sample_log_gamma(b, rng);
  return 1.0 / (1.0 + std::exp(lb - la));
}

std::vector<double> sample_dirichlet(std::span<const double> alphas,
                                     RngStream& rng) {
  if (alphas.empty()) throw DomainError("Dirichlet needs at least one parameter");
  std::vector<double> logs(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    logs[i] = sample_log_gamma(alphas[i], rng);
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (double& l : logs) {
    l = std::exp(l - top);
    sum += l;
  }
  for (double& l : logs) l /= sum;
  return logs;
}

GroundPoint sample_from_base(const BaseModel& model, RngStream& rng) {
  double r = rng.uniform();
  const auto probs = model.atom_probs();
  std::size_t last_positive = probs.size();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    if (r < probs[i]) return GroundPoint::atom(i);
    r -= probs[i];
    last_positive = i;
  }
  if (model.diffuse_weight() > 0.0) return GroundPoint::cont(rng.uniform());
  // Rounding left r just above the atom total.
  return GroundPoint::atom(last_positive);
}

// ---------------------------------------------------------------------------
// Stick-breaking

StickConfig StickConfig::for_alpha(double alpha, double trunc_eps) {
  StickConfig cfg;
  cfg.alpha = alpha;
  cfg.trunc_eps = trunc_eps;
  if (alpha > 0.0 && trunc_eps > 0.0 && trunc_eps < 1.0) {
    const double per_stick = std::log1p(-1.0 / (alpha + 1.0));
    cfg.max_sticks =
        static_cast<std::size_t>(std::ceil(2.0 * std::log(trunc_eps) / per_stick)) +
        64;
  }
  cfg.validate();
  return cfg;
}

void StickConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("stick-breaking alpha must be positive");
  }
  if (!(trunc_eps > 0.0 && trunc_eps < 1.0)) {
    throw DomainError("stick-breaking trunc_eps must lie in (0, 1)");
  }
  const double log_tail =
      static_cast<double>(max_sticks) * std::log1p(-1.0 / (alpha + 1.0));
  if (log_tail > std::log(trunc_eps)) {
    throw DomainError("max_sticks too small: expected tail mass exceeds trunc_eps");
  }
}

namespace {

template <class NextRemainderFactor, class Emit>
double break_sticks(const StickConfig& cfg, NextRemainderFactor&& factor,
                    Emit&& emit) {
  double remaining = 1.0;
  for (std::size_t n = 0; n < cfg.max_sticks; ++n) {
    const double next = remaining * factor();
    emit(remaining - next);
    remaining = next;
    if (remaining < cfg.trunc_eps) return remaining;
  }
  throw TruncationError("stick-breaking did not reach its tail target", remaining);
}

}  // namespace

GemWeights sample_gem_weights(const StickConfig& cfg, RngStream& rng) {
  GemWeights out;
  const double inv_alpha = 1.0 / cfg.alpha;
  // 1 - W = U^{1/alpha} for W ~ Be(1, alpha).
  out.residual = break_sticks(
      cfg, [&] { return std::pow(rng.uniform_open(), inv_alpha); },
      [&](double w) { out.sticks.push_back(w); });
  return out;
}

GemWeights sample_gem_weights(const StickConfig& cfg,
                              const std::function<double(RngStream&)>& stick,
                              RngStream& rng) {
  GemWeights out;
  out.residual = break_sticks(
      cfg, [&] { return 1.0 - stick(rng); },
      [&](double w) { out.sticks.push_back(w); });
  return out;
}

DiscreteMeasure sample_stick_breaking(const BaseModel& model,
                                      const StickConfig& cfg, RngStream& rng) {
  const double inv_alpha = 1.0 / cfg.alpha;
  auto factor = [&] { return std::pow(rng.uniform_open(), inv_alpha); };

  if (model.diffuse_weight() == 0.0) {
    std::vector<double> mass(model.num_atoms(), 0.0);
    auto emit = [&](double w) { mass[sample_from_base(model, rng).index()] += w; };
    emit(break_sticks(cfg, factor, emit));
    std::vector<WeightedPoint> atoms;
    atoms.reserve(mass.size());
    for (std::size_t i = 0; i < mass.size(); ++i) {
      atoms.push_back({GroundPoint::atom(i), mass[i]});
    }
    return DiscreteMeasure(std::move(atoms));
  }

  std::vector<WeightedPoint> atoms;
  auto emit = [&](double w) { atoms.push_back({sample_from_base(model, rng), w}); };
  emit(break_sticks(cfg, factor, emit));
  return DiscreteMeasure(std::move(atoms));
}

// ---------------------------------------------------------------------------
// Poisson-Gamma

double JumpSet::total() const {
  return std::accumulate(jumps.begin(), jumps.end(), 0.0);
}

JumpSet sample_poisson_gamma(double alpha, double eps, RngStream& rng) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("Poisson-Gamma alpha must be positive");
  }
  if (!(eps > 0.0 && eps <= 0.1)) {
    throw DomainError("jump truncation eps must lie in (0, 0.1]");
  }
  JumpSet out;
  out.truncation_eps = eps;
  out.alpha = alpha;
  const double last_level = exp_integral_e1(eps);  // T_n >= eps iff Gamma_n / alpha <= E1(eps)
  double arrival = 0.0;
  for (;;) {
    arrival += sample_exponential(rng);
    const double level = arrival / alpha;
    if (level > last_level) break;
    double t = inverse_e1(level);
    // Arrivals that coincide in floating point must still give distinct jumps.
    if (!out.jumps.empty() && t >= out.jumps.back()) {
      t = std::nextafter(out.jumps.back(), 0.0);
    }
    out.jumps.push_back(t);
  }
  return out;
}

DiscreteMeasure normalize_marked_jumps(const JumpSet& jumps,
                                       const BaseModel& model, RngStream& rng) {
  const double total = jumps.total();
  if (!(total > 0.0)) return DiscreteMeasure{};
  std::vector<WeightedPoint> atoms;
  atoms.reserve(jumps.jumps.size());
  for (double t : jumps.jumps) {
    atoms.push_back({sample_from_base(model, rng), t / total});
  }
  return DiscreteMeasure(std::move(atoms));
}

// ---------------------------------------------------------------------------
// Size-biased sampling

std::size_t size_biased_index(std::span<const double> weights, RngStream& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw DomainError("size-biased pick from zero mass");
  double r = rng.uniform() * total;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    if (r < weights[i]) return i;
    r -= weights[i];
    last_positive = i;
  }
  return last_positive;
}

SizeBiasedPick size_biased_pick(const DiscreteMeasure& zeta, RngStream& rng) {
  if (zeta.empty() || !(zeta.total() > 0.0)) {
    throw DomainError("size-biased pick from the zero measure");
  }
  if (std::fabs(zeta.total() - 1.0) > 1e-9) {
    throw PreconditionError("size-biased pick needs a probability measure");
  }
  const auto atoms = zeta.atoms();
  double r = rng.uniform() * zeta.total();
  std::size_t i = 0;
  for (; i + 1 < atoms.size(); ++i) {
    if (r < atoms[i].weight) break;
    r -= atoms[i].weight;
  }
  return SizeBiasedPick{i, atoms[i].point, atoms[i].weight};
}

std::vector<double> drop_index(std::span<const double> seq, std::size_t i) {
  if (i < 1 || i > seq.size()) {
    throw DomainError("drop_index: index " + std::to_string(i) + " out of range");
  }
  std::vector<double> out;
  out.reserve(seq.size() - 1);
  out.insert(out.end(), seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(i - 1));
  out.insert(out.end(), seq.begin() + static_cast<std::ptrdiff_t>(i), seq.end());
  return out;
}

SequenceDrop renormalize_drop(std::span<const double> seq, std::size_t i) {
  std::vector<double> rest = drop_index(seq, i);
  const double scale = 1.0 - seq[i - 1];
  if (scale == 0.0) {
    std::fill(rest.begin(), rest.end(), 0.0);
    return SequenceDrop{std::move(rest), true};
  }
  for (double& x : rest) x /= scale;
  return SequenceDrop{std::move(rest), false};
}

std::vector<double> sample_poisson_dirichlet(double alpha, double eps,
                                             RngStream& rng) {
  JumpSet js = sample_poisson_gamma(alpha, eps, rng);
  const double total = js.total();
  if (total > 0.0) {
    for (double& t : js.jumps) t /= total;
  }
  return std::move(js.jumps);
}

std::vector<double> sample_poisson_dirichlet_by_sticks(const StickConfig& cfg,
                                                       RngStream& rng) {
  GemWeights gem = sample_gem_weights(cfg, rng);
  std::vector<double> w = std::move(gem.sticks);
  w.push_back(gem.residual);
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

// ---------------------------------------------------------------------------

Construction parse_construction(const std::string& name) {
  if (name == "stick") return Construction::kStick;
  if (name == "gamma") return Construction::kGamma;
  throw DomainError("unknown construction '" + name + "' (expected stick|gamma)");
}

std::string to_string(Construction c) {
  return c == Construction::kStick ? "stick" : "gamma";
}

MeasureSampler make_dp_sampler(const BaseModel& model, Construction construction,
                               double eps) {
  if (construction == Construction::kStick) {
    const StickConfig cfg = StickConfig::for_alpha(model.alpha(), eps);
    return [model, cfg](RngStream& rng) {
      return sample_stick_breaking(model, cfg, rng);
    };
  }
  return [model, eps](RngStream& rng) {
    return normalize_marked_jumps(sample_poisson_gamma(model.alpha(), eps, rng),
                                  model, rng);
  };
}

}  // namespace dpm
