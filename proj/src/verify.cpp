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

#include "dpm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <boost/math/special_functions/beta.hpp>

#include "dpm/error.hpp"

namespace dpm {

namespace {

void require_samples(std::uint64_t n) {
  if (n < 1000) {
    throw PreconditionError("Monte Carlo checks need at least 1000 samples, got " +
                            std::to_string(n));
  }
}

double monomial(std::span<const double> m, std::span<const int> ks) {
  double v = 1.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (int e = 0; e < ks[i]; ++e) v *= m[i];
  }
  return v;
}

double ipow(double x, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v *= x;
  return v;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<double> block_alphas(const BaseModel& model, const Partition& partition) {
  std::vector<double> a = nu_of(model, partition);
  for (double& v : a) v *= model.alpha();
  return a;
}

// Paired test on a dim-2 group holding (lhs, rhs).
TestReport paired_report(std::string name, const CoMoments& g,
                         const VerifyOptions& opts,
                         Expectation expect = Expectation::kEqual) {
  const Estimate d = difference_estimate(g, 0, 1);
  TestReport r = z_report(std::move(name), g.mean(0), g.mean(1), d.std_error,
                          g.count(), opts.seed, opts.thresholds, expect);
  if (r.note.empty()) r.note = "paired, common random numbers";
  return r;
}

// Mean of coordinate i against a known value.
TestReport reference_report(std::string name, const CoMoments& g, std::size_t i,
                            double reference, const VerifyOptions& opts) {
  const Estimate e = mean_estimate(g, i);
  TestReport r = z_report(std::move(name), e.value, reference, e.std_error,
                          g.count(), opts.seed, opts.thresholds);
  r.reference = reference;
  return r;
}

// Covariance of (X, Y) from a dim-3 group holding (X, Y, XY), against 0.
TestReport covariance_report(std::string name, const CoMoments& g,
                             const VerifyOptions& opts) {
  const Estimate c = covariance_estimate(g, 0, 1, 2);
  TestReport r = z_report(std::move(name), c.value, 0.0, c.std_error, g.count(),
                          opts.seed, opts.thresholds);
  r.reference = 0.0;
  return r;
}

// Index of the family member g = m_0^2, h = 1{x in B_0}, else the first
// member of degree 2.
std::size_t negative_control_index(std::span<const TestFunctionSpec> family) {
  std::optional<std::size_t> first_deg2;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& f = family[i];
    if (f.degree() != 2) continue;
    if (!first_deg2) first_deg2 = i;
    if (f.g.size() != 1 || f.g[0].exponents.empty()) continue;
    MultiIndex want(f.g[0].exponents.size(), 0);
    want[0] = 2;
    bool h_first = !f.h_block_weights.empty() && f.h_block_weights[0] == 1.0;
    for (std::size_t j = 1; j < f.h_block_weights.size(); ++j) {
      h_first = h_first && f.h_block_weights[j] == 0.0;
    }
    if (f.g[0].exponents == want && h_first) return i;
  }
  if (!first_deg2) throw PreconditionError("test family has no degree-2 member");
  return *first_deg2;
}

}  // namespace

// ---------------------------------------------------------------------------
// Test functions

int TestFunctionSpec::degree() const {
  int d = 0;
  for (const auto& t : g) {
    int s = 0;
    for (int k : t.exponents) s += k;
    d = std::max(d, s);
  }
  return d;
}

double TestFunctionSpec::g_value(std::span<const double> masses) const {
  double v = 0.0;
  for (const auto& t : g) v += t.coefficient * monomial(masses, t.exponents);
  return v;
}

double TestFunctionSpec::integral(std::span<const double> masses) const {
  double hm = 0.0;
  for (std::size_t j = 0; j < h_block_weights.size(); ++j) {
    hm += h_block_weights[j] * masses[j];
  }
  return g_value(masses) * hm;
}

std::vector<TestFunctionSpec> mecke_family(std::size_t blocks, int max_degree) {
  if (blocks == 0 || blocks > 4) {
    throw DomainError("test families are defined for 1 to 4 blocks");
  }
  std::vector<TestFunctionSpec> out;
  const std::vector<double> ones(blocks, 1.0);
  out.push_back({"f=1", {{1.0, MultiIndex(blocks, 0)}}, ones});
  TestFunctionSpec total{"f=zeta(X)", {}, ones};
  for (std::size_t i = 0; i < blocks; ++i) {
    MultiIndex e(blocks, 0);
    e[i] = 1;
    total.g.push_back({1.0, e});
  }
  out.push_back(std::move(total));
  for (const auto& k : multi_indices(blocks, max_degree)) {
    for (std::size_t j = 0; j < blocks; ++j) {
      std::vector<double> h(blocks, 0.0);
      h[j] = 1.0;
      out.push_back({"k=" + format_multi_index(k) + " x in B" + std::to_string(j + 1),
                     {{1.0, k}}, std::move(h)});
    }
  }
  return out;
}

std::vector<TestFunctionSpec> sethuraman_family(std::size_t blocks,
                                                int max_degree) {
  if (blocks == 0 || blocks > 4) {
    throw DomainError("test families are defined for 1 to 4 blocks");
  }
  std::vector<TestFunctionSpec> out;
  for (const auto& k : multi_indices(blocks, max_degree)) {
    int d = 0;
    for (int v : k) d += v;
    if (d == 0) continue;
    out.push_back({"k=" + format_multi_index(k), {{1.0, k}},
                   std::vector<double>(blocks, 1.0)});
  }
  return out;
}

double exact_mecke_value(const TestFunctionSpec& f,
                         std::span<const double> block_alphas) {
  double v = 0.0;
  for (const auto& t : f.g) {
    for (std::size_t j = 0; j < f.h_block_weights.size(); ++j) {
      if (f.h_block_weights[j] == 0.0) continue;
      MultiIndex k = t.exponents;
      ++k[j];
      v += t.coefficient * f.h_block_weights[j] *
           dirichlet_mixed_moment(block_alphas, k);
    }
  }
  return v;
}

double exact_g_value(const TestFunctionSpec& f,
                     std::span<const double> block_alphas) {
  double v = 0.0;
  for (const auto& t : f.g) {
    v += t.coefficient * dirichlet_mixed_moment(block_alphas, t.exponents);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Mixing laws

MixingLaw MixingLaw::beta_one(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("Be(1, alpha) needs alpha > 0");
  const double inv = 1.0 / alpha;
  return {"Be(1," + fmt("%g", alpha) + ")",
          [inv](RngStream& rng) { return 1.0 - std::pow(rng.uniform_open(), inv); }};
}

MixingLaw MixingLaw::beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("Beta parameters must be positive");
  return {"Be(" + fmt("%g", a) + "," + fmt("%g", b) + ")",
          [a, b](RngStream& rng) { return sample_beta(a, b, rng); }};
}

MixingLaw MixingLaw::point_mass(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("point mass must lie in [0, 1]");
  return {"point(" + fmt("%.6g", u) + ")", [u](RngStream&) { return u; }};
}

MixingLaw MixingLaw::uniform(double lo, double hi) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) {
    throw DomainError("uniform mixing law needs 0 <= lo < hi <= 1");
  }
  return {"U(" + fmt("%g", lo) + "," + fmt("%g", hi) + ")",
          [lo, hi](RngStream& rng) { return lo + (hi - lo) * rng.uniform(); }};
}

MixingLaw MixingLaw::empirical(std::vector<double> values) {
  if (values.empty()) throw DomainError("empirical mixing law needs values");
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("mixing values must lie in [0, 1]");
  }
  auto shared = std::make_shared<const std::vector<double>>(std::move(values));
  return {"empirical",
          [shared](RngStream& rng) {
            const auto i = static_cast<std::size_t>(rng.uniform() *
                                                    static_cast<double>(shared->size()));
            return (*shared)[std::min(i, shared->size() - 1)];
          }};
}

Partition default_partition(const BaseModel& model) {
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < model.num_atoms(); ++i) blocks.push_back({{i}, {}});
  if (model.diffuse_weight() > 0.0) {
    blocks.push_back({{}, {{0.0, 0.5}}});
    blocks.push_back({{}, {{0.5, 1.0}}});
  }
  return Partition(std::move(blocks));
}

// ---------------------------------------------------------------------------
// Mecke

Estimate mecke_lhs(const TestFunctionSpec& f, const Partition& partition,
                   const MeasureSampler& sampler, const CampaignOptions& opts) {
  require_samples(opts.n);
  const CoMoments acc = run_campaign(
      opts, stream_tag("mecke-lhs"), CoMoments(1),
      [&](RngStream& rng, CoMoments& a) {
        std::vector<double> m(partition.size());
        block_masses_into(sampler(rng), partition, m);
        a.add({f.integral(m)});
      });
  return mean_estimate(acc, 0);
}

Estimate mecke_rhs(const TestFunctionSpec& f, const Partition& partition,
                   const MeasureSampler& sampler, const MixingLaw& mixing,
                   const BaseModel& model, const CampaignOptions& opts) {
  require_samples(opts.n);
  const CoMoments acc = run_campaign(
      opts, stream_tag("mecke-rhs"), CoMoments(1),
      [&](RngStream& rng, CoMoments& a) {
        std::vector<double> m(partition.size());
        const DiscreteMeasure zeta = sampler(rng);
        const GroundPoint x = sample_from_base(model, rng);
        const double u = mixing.draw(rng);
        block_masses_into(mix_with_dirac(zeta, u, x), partition, m);
        a.add({f.g_value(m) * f.h_block_weights[partition.block_of(x)]});
      });
  return mean_estimate(acc, 0);
}

std::vector<TestReport> verify_mecke(const BaseModel& model,
                                     const Partition& partition,
                                     Construction construction,
                                     std::span<const TestFunctionSpec> family,
                                     const VerifyOptions& opts) {
  require_samples(opts.n);
  partition.validate_for(model);
  const std::size_t nb = partition.size();
  const std::size_t neg = negative_control_index(family);
  const double eps =
      construction == Construction::kStick ? kDefaultStickEps : kDefaultJumpEps;
  const MeasureSampler sampler = make_dp_sampler(model, construction, eps);
  const MixingLaw g = MixingLaw::beta_one(model.alpha());
  const MixingLaw wrong = MixingLaw::point_mass(1.0 / (model.alpha() + 1.0));

  StatBank proto(std::vector<std::size_t>(family.size() + 1, 2), 0);
  const StatBank bank = run_campaign(
      opts.campaign(), stream_tag("mecke"), proto,
      [&](RngStream& rng, StatBank& acc) {
        struct {
          std::vector<double> m, mixed, wrong_mixed;
        } scratch{std::vector<double>(nb), std::vector<double>(nb),
                  std::vector<double>(nb)};
        block_masses_into(sampler(rng), partition, scratch.m);
        const std::size_t b = partition.block_of(sample_from_base(model, rng));
        const double u = g.draw(rng);
        const double v = wrong.draw(rng);
        for (std::size_t i = 0; i < nb; ++i) {
          scratch.mixed[i] = (1.0 - u) * scratch.m[i] + (i == b ? u : 0.0);
          scratch.wrong_mixed[i] = (1.0 - v) * scratch.m[i] + (i == b ? v : 0.0);
        }
        for (std::size_t t = 0; t < family.size(); ++t) {
          const auto& f = family[t];
          acc.groups[t].add({f.integral(scratch.m),
                             f.g_value(scratch.mixed) * f.h_block_weights[b]});
        }
        const auto& f = family[neg];
        acc.groups[family.size()].add(
            {f.integral(scratch.m), f.g_value(scratch.wrong_mixed) * f.h_block_weights[b]});
      });

  const std::vector<double> alphas = block_alphas(model, partition);
  const std::string tag = "mecke[" + to_string(construction) + "] ";
  std::vector<TestReport> out;
  for (std::size_t t = 0; t < family.size(); ++t) {
    TestReport r = paired_report(tag + family[t].name, bank.groups[t], opts);
    r.reference = exact_mecke_value(family[t], alphas);
    if (!is_good(model)) r.note += "; base measure is not good";
    out.push_back(std::move(r));
  }
  TestReport r = paired_report(tag + "negative control G=" + wrong.name + " " +
                                   family[neg].name,
                               bank.groups[family.size()], opts, Expectation::kDiffer);
  r.reference = exact_mecke_value(family[neg], alphas);
  out.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------------------
// Fixed point

std::vector<TestReport> verify_sethuraman(const BaseModel& model,
                                          const Partition& partition,
                                          const VerifyOptions& opts) {
  require_samples(opts.n);
  partition.validate_for(model);
  const std::size_t nb = partition.size();
  const auto family = sethuraman_family(nb, 3);
  std::size_t neg = 0;
  {
    MultiIndex want(nb, 0);
    want[0] = 2;
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (family[i].g[0].exponents == want) neg = i;
    }
  }
  const MeasureSampler sampler = make_dp_sampler(model, Construction::kStick,
                                                 kDefaultStickEps);
  const MixingLaw g = MixingLaw::beta_one(model.alpha());
  const MixingLaw wrong = MixingLaw::beta_one(2.0 * model.alpha());

  StatBank proto(std::vector<std::size_t>(family.size() + 1, 2), 0);
  const StatBank bank = run_campaign(
      opts.campaign(), stream_tag("sethuraman"), proto,
      [&](RngStream& rng, StatBank& acc) {
        std::vector<double> m(nb), mixed(nb), wrong_mixed(nb);
        block_masses_into(sampler(rng), partition, m);
        const std::size_t b = partition.block_of(sample_from_base(model, rng));
        const double u = g.draw(rng);
        const double v = wrong.draw(rng);
        for (std::size_t i = 0; i < nb; ++i) {
          mixed[i] = (1.0 - u) * m[i] + (i == b ? u : 0.0);
          wrong_mixed[i] = (1.0 - v) * m[i] + (i == b ? v : 0.0);
        }
        for (std::size_t t = 0; t < family.size(); ++t) {
          acc.groups[t].add({family[t].g_value(m), family[t].g_value(mixed)});
        }
        acc.groups[family.size()].add(
            {family[neg].g_value(m), family[neg].g_value(wrong_mixed)});
      });

  const std::vector<double> alphas = block_alphas(model, partition);
  std::vector<TestReport> out;
  for (std::size_t t = 0; t < family.size(); ++t) {
    TestReport r = paired_report("sethuraman " + family[t].name, bank.groups[t], opts);
    r.reference = exact_g_value(family[t], alphas);
    out.push_back(std::move(r));
  }
  TestReport r = paired_report("sethuraman negative control G=" + wrong.name + " " +
                                   family[neg].name,
                               bank.groups[family.size()], opts, Expectation::kDiffer);
  r.reference = exact_g_value(family[neg], alphas);
  out.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------------------
// Beta moment equations

namespace {

void check_p_alpha(double p, double alpha) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
}

}  // namespace

std::vector<TestReport> verify_tbeta_eqs(double p, double alpha,
                                         const VerifyOptions& opts) {
  check_p_alpha(p, alpha);
  require_samples(opts.n);
  constexpr int kMax = 6;
  const double a = p * alpha;
  const double b = (1.0 - p) * alpha;
  const double inv_alpha = 1.0 / alpha;
  const double w_wrong = 1.0 / (alpha + 1.0);

  // groups: [0, kMax] first equation, [kMax+1, 2kMax+1] second, then control
  StatBank proto(std::vector<std::size_t>(2 * (kMax + 1) + 1, 2), 0);
  const StatBank bank = run_campaign(
      opts.campaign(), stream_tag("tbeta"), proto,
      [&](RngStream& rng, StatBank& acc) {
        const double z = sample_beta(a, b, rng);
        const double w = 1.0 - std::pow(rng.uniform_open(), inv_alpha);
        const double mixed = (1.0 - w) * z + w;
        const double shrunk = (1.0 - w) * z;
        for (int k = 0; k <= kMax; ++k) {
          acc.groups[k].add({ipow(z, k) * z, p * ipow(mixed, k)});
          acc.groups[kMax + 1 + k].add(
              {ipow(z, k) * (1.0 - z), (1.0 - p) * ipow(shrunk, k)});
        }
        const double wrong_mixed = (1.0 - w_wrong) * z + w_wrong;
        acc.groups[2 * (kMax + 1)].add({z * z * z, p * wrong_mixed * wrong_mixed});
      });

  std::vector<TestReport> out;
  for (int k = 0; k <= kMax; ++k) {
    TestReport r = paired_report("tbeta first equation k=" + std::to_string(k),
                                 bank.groups[k], opts);
    r.reference = beta_moment(a, b, k + 1);
    out.push_back(std::move(r));
  }
  for (int k = 0; k <= kMax; ++k) {
    TestReport r = paired_report("tbeta second equation k=" + std::to_string(k),
                                 bank.groups[kMax + 1 + k], opts);
    r.reference = beta_moment(a, b, k) - beta_moment(a, b, k + 1);
    out.push_back(std::move(r));
  }
  TestReport r = paired_report("tbeta negative control W=point(" +
                                   fmt("%.6g", w_wrong) + ") first equation k=2",
                               bank.groups[2 * (kMax + 1)], opts, Expectation::kDiffer);
  r.reference = beta_moment(a, b, 3);
  out.push_back(std::move(r));
  return out;
}

std::vector<TestReport> verify_tbeta2(double p, double alpha,
                                      const VerifyOptions& opts) {
  check_p_alpha(p, alpha);
  require_samples(opts.n);
  constexpr int kMax = 4;
  const double a = p * alpha;
  const double b = (1.0 - p) * alpha;
  const double c = tbeta2_c(p, alpha);
  const double c_wrong = c + 0.1;
  const double inv_alpha = 1.0 / alpha;

  // groups: [0, kMax] moment equation, then E Z^2, the four covariance
  // triples, and the control.
  std::vector<std::size_t> dims(kMax + 1, 2);
  dims.push_back(1);
  for (int i = 0; i < 4; ++i) dims.push_back(3);
  dims.push_back(2);
  const std::size_t g_ez2 = kMax + 1;
  const std::size_t g_cov = kMax + 2;
  const std::size_t g_neg = kMax + 6;

  const StatBank bank = run_campaign(
      opts.campaign(), stream_tag("tbeta2"), StatBank(dims, 0),
      [&](RngStream& rng, StatBank& acc) {
        const double z = sample_beta(a, b, rng);
        const double w = 1.0 - std::pow(rng.uniform_open(), inv_alpha);
        const double mixed = (1.0 - w) * z + w;
        for (int k = 0; k <= kMax; ++k) {
          acc.groups[k].add({ipow(z, k) * z * z, c * ipow(mixed, k) * w});
        }
        acc.groups[g_ez2].add({z * z});
        const double ratio = w / mixed;
        const double h1[2] = {ratio, ratio * ratio};
        const double h2[2] = {mixed, mixed * mixed};
        for (int i = 0; i < 2; ++i) {
          for (int j = 0; j < 2; ++j) {
            acc.groups[g_cov + 2 * i + j].add({h1[i], h2[j], h1[i] * h2[j]});
          }
        }
        acc.groups[g_neg].add({z * z * z, c_wrong * mixed * w});
      });

  std::vector<TestReport> out;
  for (int k = 0; k <= kMax; ++k) {
    TestReport r = paired_report("tbeta2 moment equation k=" + std::to_string(k),
                                 bank.groups[k], opts);
    r.reference = beta_moment(a, b, k + 2);
    out.push_back(std::move(r));
  }
  out.push_back(reference_report("tbeta2 E Z^2 closed form", bank.groups[g_ez2], 0,
                                 c / (alpha + 1.0), opts));
  const char* names[2] = {"id", "square"};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.push_back(covariance_report(std::string("tbeta2 independence cov(") +
                                          names[i] + "(ratio), " + names[j] + "(sum))",
                                      bank.groups[g_cov + 2 * i + j], opts));
    }
  }
  TestReport r = paired_report("tbeta2 negative control c+0.1 k=1", bank.groups[g_neg],
                               opts, Expectation::kDiffer);
  r.reference = beta_moment(a, b, 3);
  out.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------------------
// Size-biased deletion

std::vector<TestReport> verify_sizebias_invariance(const BaseModel& model,
                                                   const VerifyOptions& opts) {
  if (model.diffuse_weight() != 1.0) {
    throw PreconditionError(
        "size-biased invariance needs a purely diffuse base measure");
  }
  require_samples(opts.n);
  const double alpha = model.alpha();
  const std::vector<double> cuts = {0.25, 0.6};
  const Partition partition = Partition::by_cuts(cuts);
  const std::size_t nb = partition.size();
  std::vector<MultiIndex> indices;
  for (auto& k : multi_indices(nb, 3)) {
    if (std::any_of(k.begin(), k.end(), [](int v) { return v > 0; })) {
      indices.push_back(std::move(k));
    }
  }
  // Covariance pairs: (rest block i, picked weight), (rest block i, tau in
  // block j), (picked weight, tau in block j).
  const std::size_t n_cov = nb + nb * nb + nb;
  std::vector<std::size_t> dims(indices.size(), 2);
  dims.insert(dims.end(), n_cov, 3);
  const StickConfig cfg = StickConfig::for_alpha(alpha, kDefaultStickEps);

  std::uint64_t degenerate = 0;
  struct Acc {
    StatBank bank;
    std::uint64_t degenerate = 0;
    void merge(const Acc& o) {
      bank.merge(o.bank);
      degenerate += o.degenerate;
    }
  };
  const Acc acc = run_campaign(
      opts.campaign(), stream_tag("sizebias"), Acc{StatBank(dims, 1), 0},
      [&](RngStream& rng, Acc& a) {
        std::vector<double> whole(nb), rest(nb);
        const DiscreteMeasure zeta = sample_stick_breaking(model, cfg, rng);
        const SizeBiasedPick pick = size_biased_pick(zeta, rng);
        const AtomRemoval removed = remove_atom(zeta, pick.point);
        project_into(zeta, partition, whole);
        if (removed.degenerate) {
          ++a.degenerate;
          std::fill(rest.begin(), rest.end(), 0.0);
        } else {
          project_into(removed.measure, partition, rest);
        }
        for (std::size_t t = 0; t < indices.size(); ++t) {
          a.bank.groups[t].add({monomial(rest, indices[t]), monomial(whole, indices[t])});
        }
        const std::size_t tau_block = partition.block_of(pick.point);
        std::size_t g = indices.size();
        for (std::size_t i = 0; i < nb; ++i) {
          a.bank.groups[g++].add({rest[i], pick.weight, rest[i] * pick.weight});
        }
        for (std::size_t i = 0; i < nb; ++i) {
          for (std::size_t j = 0; j < nb; ++j) {
            const double ind = tau_block == j ? 1.0 : 0.0;
            a.bank.groups[g++].add({rest[i], ind, rest[i] * ind});
          }
        }
        for (std::size_t j = 0; j < nb; ++j) {
          const double ind = tau_block == j ? 1.0 : 0.0;
          a.bank.groups[g++].add({pick.weight, ind, pick.weight * ind});
        }
        a.bank.series[0].push_back(pick.weight);
      });
  degenerate = acc.degenerate;

  const std::vector<double> alphas = block_alphas(model, partition);
  const std::string tag = "sizebias[alpha=" + fmt("%g", alpha) + "] ";
  std::vector<TestReport> out;
  for (std::size_t t = 0; t < indices.size(); ++t) {
    TestReport r = paired_report(tag + "rest vs whole k=" + format_multi_index(indices[t]),
                                 acc.bank.groups[t], opts);
    r.reference = dirichlet_mixed_moment(alphas, indices[t]);
    if (degenerate) r.note += "; degenerate deletions: " + std::to_string(degenerate);
    out.push_back(std::move(r));
  }
  const KsResult ks = ks_test(acc.bank.series[0], [alpha](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return -std::expm1(alpha * std::log1p(-x));
  });
  out.push_back(ks_report(tag + "picked weight ~ Be(1," + fmt("%g", alpha) + ")", ks,
                          opts.seed, opts.thresholds));
  std::size_t g = indices.size();
  for (std::size_t i = 0; i < nb; ++i) {
    out.push_back(covariance_report(
        tag + "cov(rest B" + std::to_string(i + 1) + ", picked weight)",
        acc.bank.groups[g++], opts));
  }
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      out.push_back(covariance_report(tag + "cov(rest B" + std::to_string(i + 1) +
                                          ", 1{tau in B" + std::to_string(j + 1) + "})",
                                      acc.bank.groups[g++], opts));
    }
  }
  for (std::size_t j = 0; j < nb; ++j) {
    out.push_back(covariance_report(
        tag + "cov(picked weight, 1{tau in B" + std::to_string(j + 1) + "})",
        acc.bank.groups[g++], opts));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weights with iid marks

std::vector<TestReport> verify_theorem52(double alpha,
                                         std::span<const double> atom_probs,
                                         const VerifyOptions& opts) {
  require_samples(opts.n);
  const BaseModel model(alpha, std::vector<double>(atom_probs.begin(), atom_probs.end()),
                        0.0);
  const std::size_t nb = model.num_atoms();
  std::vector<MultiIndex> indices;
  for (auto& k : multi_indices(nb, 3)) {
    if (std::any_of(k.begin(), k.end(), [](int v) { return v > 0; })) {
      indices.push_back(std::move(k));
    }
  }
  MultiIndex neg_index(nb, 0);
  neg_index[0] = 2;
  const StickConfig cfg = StickConfig::for_alpha(alpha, kDefaultStickEps);
  const double wrong_a = 2.0;
  const double wrong_b = 2.0 * alpha;
  const std::function<double(RngStream&)> wrong_stick = [=](RngStream& rng) {
    return sample_beta(wrong_a, wrong_b, rng);
  };
  StickConfig wrong_cfg = cfg;
  wrong_cfg.max_sticks *= 4;

  std::vector<std::size_t> dims(indices.size() + 1, 1);
  const StatBank gem = run_campaign(
      opts.campaign(), stream_tag("thm52-gem"), StatBank(dims, 1),
      [&](RngStream& rng, StatBank& acc) {
        std::vector<double> m(nb);
        auto mark = [&](std::span<double> out, const GemWeights& w) {
          std::fill(out.begin(), out.end(), 0.0);
          for (double s : w.sticks) out[sample_from_base(model, rng).index()] += s;
          out[sample_from_base(model, rng).index()] += w.residual;
        };
        const GemWeights w = sample_gem_weights(cfg, rng);
        mark(m, w);
        for (std::size_t t = 0; t < indices.size(); ++t) {
          acc.groups[t].add({monomial(m, indices[t])});
        }
        double largest = w.residual;
        for (double s : w.sticks) largest = std::max(largest, s);
        acc.series[0].push_back(largest);

        mark(m, sample_gem_weights(wrong_cfg, wrong_stick, rng));
        acc.groups[indices.size()].add({monomial(m, neg_index)});
      });

  const StatBank pd = run_campaign(
      opts.campaign(), stream_tag("thm52-pd"), StatBank({}, 1),
      [&](RngStream& rng, StatBank& acc) {
        const std::vector<double> w = sample_poisson_dirichlet(alpha, kDefaultJumpEps, rng);
        acc.series[0].push_back(w.empty() ? 0.0 : w.front());
      });

  std::vector<double> alphas(atom_probs.begin(), atom_probs.end());
  for (double& v : alphas) v *= alpha;
  const std::string tag = "thm52[alpha=" + fmt("%g", alpha) + "] ";
  std::vector<TestReport> out;
  for (std::size_t t = 0; t < indices.size(); ++t) {
    out.push_back(reference_report(tag + "block moment k=" + format_multi_index(indices[t]),
                                   gem.groups[t], 0,
                                   dirichlet_mixed_moment(alphas, indices[t]), opts));
  }
  out.push_back(ks_report(tag + "largest weight, sticks vs jumps",
                          ks_test_two_sample(gem.series[0], pd.series[0]), opts.seed,
                          opts.thresholds));
  TestReport r = reference_report(
      tag + "negative control sticks Be(" + fmt("%g", wrong_a) + "," + fmt("%g", wrong_b) +
          ") k=" + format_multi_index(neg_index),
      gem.groups[indices.size()], 0, dirichlet_mixed_moment(alphas, neg_index), opts);
  r.expect = Expectation::kDiffer;
  r.verdict = std::fabs(r.z_score) > opts.thresholds.z ? Verdict::kPass : Verdict::kFail;
  out.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------------------
// Constructions

std::vector<TestReport> verify_constructions(const BaseModel& model,
                                             const Partition& partition,
                                             double jump_eps,
                                             const VerifyOptions& opts) {
  require_samples(opts.n);
  partition.validate_for(model);
  const std::size_t nb = partition.size();
  std::vector<MultiIndex> indices;
  for (auto& k : multi_indices(nb, 3)) {
    if (std::any_of(k.begin(), k.end(), [](int v) { return v > 0; })) {
      indices.push_back(std::move(k));
    }
  }
  const double alpha = model.alpha();
  const StickConfig cfg = StickConfig::for_alpha(alpha, kDefaultStickEps);

  const StatBank stick = run_campaign(
      opts.campaign(), stream_tag("constructions-stick"),
      StatBank(std::vector<std::size_t>(indices.size(), 1), 1),
      [&](RngStream& rng, StatBank& acc) {
        std::vector<double> m(nb);
        block_masses_into(sample_stick_breaking(model, cfg, rng), partition, m);
        for (std::size_t t = 0; t < indices.size(); ++t) {
          acc.groups[t].add({monomial(m, indices[t])});
        }
        acc.series[0].push_back(m[0]);
      });

  std::vector<std::size_t> dims(indices.size(), 1);
  dims.push_back(3);
  struct GammaAcc {
    StatBank bank;
    std::uint64_t empty = 0;
    void merge(const GammaAcc& o) {
      bank.merge(o.bank);
      empty += o.empty;
    }
  };
  const GammaAcc gamma = run_campaign(
      opts.campaign(), stream_tag("constructions-gamma"), GammaAcc{StatBank(dims, 0), 0},
      [&](RngStream& rng, GammaAcc& acc) {
        std::vector<double> m(nb);
        const JumpSet jumps = sample_poisson_gamma(alpha, jump_eps, rng);
        const DiscreteMeasure zeta = normalize_marked_jumps(jumps, model, rng);
        if (zeta.empty()) ++acc.empty;
        block_masses_into(zeta, partition, m);
        for (std::size_t t = 0; t < indices.size(); ++t) {
          acc.bank.groups[t].add({monomial(m, indices[t])});
        }
        const double total = jumps.total();
        acc.bank.groups[indices.size()].add({m[0], total, m[0] * total});
      });

  const std::vector<double> alphas = block_alphas(model, partition);
  std::vector<TestReport> out;

  const double a0 = alphas[0];
  const double b0 = alpha - a0;
  if (a0 > 0.0 && b0 > 0.0) {
    const KsResult ks = ks_test(stick.series[0], [a0, b0](double x) {
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return boost::math::ibeta(a0, b0, x);
    });
    out.push_back(ks_report("constructions marginal zeta(B1) ~ Be(" + fmt("%g", a0) +
                                "," + fmt("%g", b0) + ")",
                            ks, opts.seed, opts.thresholds));
  }

  std::string empty_note;
  if (gamma.empty) {
    empty_note = "empty jump sets: " + std::to_string(gamma.empty);
  }
  for (std::size_t t = 0; t < indices.size(); ++t) {
    const Estimate s = mean_estimate(stick.groups[t], 0);
    const Estimate g = mean_estimate(gamma.bank.groups[t], 0);
    TestReport r = z_report("constructions stick vs gamma k=" + format_multi_index(indices[t]),
                            s.value, g.value, std::hypot(s.std_error, g.std_error),
                            stick.groups[t].count() + gamma.bank.groups[t].count(),
                            opts.seed, opts.thresholds);
    r.reference = dirichlet_mixed_moment(alphas, indices[t]);
    r.note = "independent ensembles";
    if (!empty_note.empty()) r.note += "; " + empty_note;
    out.push_back(std::move(r));
  }
  const CoMoments& joint = gamma.bank.groups[indices.size()];
  TestReport total = reference_report("constructions E xi(X) = alpha", joint, 1, alpha, opts);
  total.note = "truncated mean is alpha exp(-eps)";
  out.push_back(std::move(total));
  out.push_back(covariance_report("constructions cov(zeta(B1), xi(X))", joint, opts));
  return out;
}

}  // namespace dpm
