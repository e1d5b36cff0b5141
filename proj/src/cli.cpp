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

#include "dpm/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpm/campaign.hpp"
#include "dpm/characterize.hpp"
#include "dpm/error.hpp"
#include "dpm/measures_json.hpp"
#include "dpm/moments.hpp"
#include "dpm/report.hpp"
#include "dpm/samplers.hpp"
#include "dpm/verify.hpp"

#ifndef DPM_VERSION
#define DPM_VERSION "0.1.0"
#endif

namespace dpm {

const char* version_string() { return DPM_VERSION; }

namespace {

using nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Settings {
  double alpha = 2.0;
  double p = 0.3;
  std::uint64_t n = 100000;
  std::string seed;
  double threshold = 4.0;
  double ks_floor = 1e-3;
  std::string format = "json";
  std::string out;
  unsigned jobs = 0;
  std::string config;
  std::string construction = "stick";
  double eps = 0.0;  // 0: per-construction default
  std::string base;
  int depth = 6;
  std::string w_law = "beta";
  bool probe_symmetric = false;
  bool embed_timing = false;
  std::vector<double> alphas;
  int max_degree = 4;
  std::string method = "exact";
  std::string target;
};

// Options of one subcommand that can also come from the config file.
class Registry {
 public:
  explicit Registry(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* option(const std::string& key, T& field, const std::string& desc) {
    CLI::Option* o = app_->add_option("--" + dashed(key), field, desc);
    entries_[key] = {o, [&field, key](const json& j) {
                       try {
                         field = j.get<T>();
                       } catch (const json::exception&) {
                         throw ConfigError("config key '" + key + "' has the wrong type");
                       }
                     }};
    return o;
  }

  CLI::Option* flag(const std::string& key, bool& field, const std::string& desc) {
    CLI::Option* o = app_->add_flag("--" + dashed(key), field, desc);
    entries_[key] = {o, [&field, key](const json& j) {
                       if (!j.is_boolean()) {
                         throw ConfigError("config key '" + key + "' must be a boolean");
                       }
                       field = j.get<bool>();
                     }};
    return o;
  }

  // A string option whose config value may be any JSON (kept as its dump)
  // or, for seeds, a number.
  CLI::Option* raw(const std::string& key, std::string& field, const std::string& desc) {
    CLI::Option* o = app_->add_option("--" + dashed(key), field, desc);
    entries_[key] = {o, [&field](const json& j) {
                       field = j.is_string() ? j.get<std::string>() : j.dump();
                     }};
    return o;
  }

  CLI::App* app() const { return app_; }

  bool given(const std::string& key) const {
    auto it = entries_.find(key);
    return it != entries_.end() && it->second.opt->count() > 0;
  }

  // Fills every option not given on the command line from the config
  // object. Unknown keys are rejected.
  void apply(const json& cfg) {
    if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");
    for (const auto& [key, value] : cfg.items()) {
      auto it = entries_.find(key);
      if (it == entries_.end() || key == "config") {
        throw ConfigError("unknown config key '" + key + "'");
      }
      if (it->second.opt->count() == 0) it->second.assign(value);
    }
  }

 private:
  static std::string dashed(std::string key) {
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    return key;
  }

  struct Entry {
    CLI::Option* opt;
    std::function<void(const json&)> assign;
  };
  CLI::App* app_;
  std::map<std::string, Entry> entries_;
};

std::uint64_t resolve_seed(const std::string& s) {
  if (s.empty()) return kDefaultSeed;
  if (s == "random") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.front() == '-') {
    throw ConfigError("--seed must be a non-negative integer or 'random', got '" + s + "'");
  }
  return v;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
}

// Writes to --out when given, else to the run's output stream.
void emit(const Settings& s, std::ostream& out, const std::string& text) {
  if (s.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(s.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + s.out + "'");
  f << text;
}

BaseModel resolve_model(const Settings& s, const Registry& reg) {
  if (s.base.empty()) return BaseModel(s.alpha, {s.p, 1.0 - s.p}, 0.0);
  json j;
  try {
    j = json::parse(s.base);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON in --base: ") + e.what());
  }
  BaseModel m = base_model_from_json(j, s.alpha);
  if (reg.given("alpha")) m = m.with_alpha(s.alpha);
  return m;
}

double resolve_eps(const Settings& s, Construction c) {
  if (s.eps > 0.0) return s.eps;
  return c == Construction::kStick ? kDefaultStickEps : kDefaultJumpEps;
}

unsigned resolve_jobs(const Settings& s) { return s.jobs > 0 ? s.jobs : default_jobs(); }

void check_format(const Settings& s) {
  if (s.format != "json" && s.format != "csv") {
    throw ConfigError("--format must be json or csv");
  }
}

json envelope(const std::string& command, json config) {
  return json{{"tool", "dpm"},
              {"version", version_string()},
              {"command", command},
              {"config", std::move(config)}};
}

std::string render_reports(const Settings& s, json env,
                           const std::vector<TestReport>& reports) {
  if (s.format == "csv") {
    std::ostringstream os;
    write_csv(os, reports);
    return os.str();
  }
  env["reports"] = reports;
  std::size_t failed = 0;
  for (const auto& r : reports) failed += is_failure(r) ? 1 : 0;
  env["summary"] = {{"tests", reports.size()}, {"failed", failed}};
  return env.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

int cmd_sample(const Settings& s, const Registry& reg, std::ostream& out) {
  const Construction c = parse_construction(s.construction);
  const BaseModel model = s.base.empty() ? BaseModel::diffuse(s.alpha) : resolve_model(s, reg);
  const double eps = resolve_eps(s, c);
  const std::uint64_t seed = resolve_seed(s.seed);
  const std::uint64_t tag = stream_tag("sample");
  std::ostringstream os;
  for (std::uint64_t i = 0; i < s.n; ++i) {
    RngStream rng(seed, shard_stream(tag, i));
    json line{{"index", i}, {"seed", seed}, {"construction", to_string(c)}};
    if (c == Construction::kStick) {
      line["measure"] = sample_stick_breaking(model, StickConfig::for_alpha(model.alpha(), eps), rng);
    } else {
      const JumpSet jumps = sample_poisson_gamma(model.alpha(), eps, rng);
      line["jump_total"] = jumps.total();
      line["measure"] = normalize_marked_jumps(jumps, model, rng);
    }
    os << line.dump() << '\n';
  }
  emit(s, out, os.str());
  return 0;
}

int cmd_moments(const Settings& s, std::ostream& out) {
  if (s.alphas.empty()) throw ConfigError("--alphas is required");
  if (s.max_degree < 0 || s.max_degree > 64) throw ConfigError("--max-degree must be in [0, 64]");
  MomentTable table = s.method == "exact"       ? exact_table(s.alphas, s.max_degree)
                      : s.method == "recursion" ? recursion_table(s.alphas, s.max_degree)
                      : throw ConfigError("--method must be exact or recursion");
  std::ostringstream os;
  for (std::size_t i = 0; i < s.alphas.size(); ++i) os << 'k' << (i + 1) << ',';
  os << "value,method\n";
  char buf[64];
  for (const auto& k : multi_indices(s.alphas.size(), s.max_degree)) {
    for (int v : k) os << v << ',';
    std::snprintf(buf, sizeof buf, "%.17g", table.value(k));
    os << buf << ',' << s.method << '\n';
  }
  emit(s, out, os.str());
  return 0;
}

int cmd_verify(const Settings& s, const Registry& reg, std::ostream& out,
               std::ostream& err) {
  check_format(s);
  const Construction c = parse_construction(s.construction);
  const std::uint64_t seed = resolve_seed(s.seed);
  VerifyOptions vo;
  vo.n = s.n;
  vo.seed = seed;
  vo.jobs = resolve_jobs(s);
  vo.thresholds = {s.threshold, s.ks_floor};

  const BaseModel model = resolve_model(s, reg);
  const Partition partition = default_partition(model);
  std::vector<double> mark_probs = {0.25, 0.75};
  if (!s.base.empty() && model.diffuse_weight() == 0.0) {
    mark_probs.assign(model.atom_probs().begin(), model.atom_probs().end());
  }

  const std::vector<std::string> all = {"mecke", "sethuraman", "tbeta",        "tbeta2",
                                        "sizebias", "thm52",     "constructions"};
  const std::vector<std::string> targets =
      s.target == "all" ? all : std::vector<std::string>{s.target};

  const auto start = std::chrono::steady_clock::now();
  std::vector<TestReport> reports;
  auto append = [&](std::vector<TestReport> more) {
    reports.insert(reports.end(), std::make_move_iterator(more.begin()),
                   std::make_move_iterator(more.end()));
  };
  for (const auto& t : targets) {
    if (t == "mecke") {
      const auto family = mecke_family(partition.size(), 3);
      append(verify_mecke(model, partition, c, family, vo));
    } else if (t == "sethuraman") {
      append(verify_sethuraman(model, partition, vo));
    } else if (t == "tbeta") {
      append(verify_tbeta_eqs(s.p, s.alpha, vo));
    } else if (t == "tbeta2") {
      append(verify_tbeta2(s.p, s.alpha, vo));
    } else if (t == "sizebias") {
      const BaseModel diffuse =
          (s.target == "all" || s.base.empty()) ? BaseModel::diffuse(model.alpha()) : model;
      append(verify_sizebias_invariance(diffuse, vo));
    } else if (t == "thm52") {
      append(verify_theorem52(model.alpha(), mark_probs, vo));
    } else if (t == "constructions") {
      append(verify_constructions(model, partition, resolve_eps(s, Construction::kGamma), vo));
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[96];
  std::snprintf(buf, sizeof buf, "dpm: verify %s finished in %.3f s\n", s.target.c_str(),
                seconds);
  err << buf;

  json config{{"target", s.target},
              {"model", model},
              {"p", s.p},
              {"n", s.n},
              {"seed", seed},
              {"threshold", s.threshold},
              {"ks_floor", s.ks_floor},
              {"construction", to_string(c)},
              {"jump_eps", resolve_eps(s, Construction::kGamma)},
              {"mark_probs", mark_probs}};
  json env = envelope("verify", std::move(config));
  if (s.embed_timing) env["duration_seconds"] = seconds;
  emit(s, out, render_reports(s, std::move(env), reports));
  return any_failure(reports) ? 1 : 0;
}

int cmd_characterize(const Settings& s, std::ostream& out, std::ostream& err) {
  check_format(s);
  if (s.probe_symmetric) {
    json probes = json::array();
    for (const auto& pr : probe_symmetric(s.alpha, s.depth)) {
      probes.push_back({{"law", pr.law},
                        {"implied_moments", pr.implied},
                        {"beta_fit", pr.beta_fit},
                        {"hankel_min_pivot", pr.hankel_min_pivot}});
    }
    json env = envelope("characterize", {{"alpha", s.alpha}, {"depth", s.depth},
                                         {"probe_symmetric", true}});
    env["probe"] = std::move(probes);
    env["reports"] = json::array();
    emit(s, out, env.dump(2) + "\n");
    return 0;
  }
  if (s.w_law != "beta" && s.w_law != "uniform") {
    throw ConfigError("--w-law must be beta or uniform");
  }
  const std::uint64_t seed = resolve_seed(s.seed);
  const BaseModel model(s.alpha, {s.p, 1.0 - s.p}, 0.0);
  const Partition partition = Partition::by_atoms(2);
  const StickConfig cfg = StickConfig::for_alpha(s.alpha, kDefaultStickEps);
  const double inv_alpha = 1.0 / s.alpha;
  const double w_top = 2.0 / (s.alpha + 1.0);
  const bool uniform = s.w_law == "uniform";
  CampaignOptions co{s.n, seed, resolve_jobs(s), 4096};

  const StatBank bank = run_campaign(
      co, stream_tag("characterize"), StatBank({}, 2), [&](RngStream& rng, StatBank& acc) {
        double m[2];
        block_masses_into(sample_stick_breaking(model, cfg, rng), partition, m);
        const double w = uniform ? w_top * rng.uniform()
                                 : 1.0 - std::pow(rng.uniform_open(), inv_alpha);
        acc.series[0].push_back(m[0]);
        acc.series[1].push_back(w);
      });
  const Characterization ch = characterize_from_samples(
      bank.series[0], bank.series[1], s.depth, {s.threshold, s.ks_floor}, seed);
  if (!ch.warning.empty()) err << "dpm: warning: " << ch.warning << '\n';

  json env = envelope("characterize", {{"alpha", s.alpha},
                                       {"p", s.p},
                                       {"n", s.n},
                                       {"seed", seed},
                                       {"depth", s.depth},
                                       {"w_law", s.w_law},
                                       {"threshold", s.threshold}});
  env["characterization"] = {{"p_hat", ch.p_hat},
                             {"b1_hat", ch.b1_hat},
                             {"alpha_hat", ch.alpha_hat},
                             {"predicted", ch.predicted},
                             {"empirical", ch.empirical},
                             {"beta_fit", ch.beta_fit},
                             {"max_dev_empirical", ch.max_dev_empirical},
                             {"max_dev_beta", ch.max_dev_beta},
                             {"ill_conditioned", ch.ill_conditioned},
                             {"warning", ch.warning}};
  emit(s, out, render_reports(s, std::move(env), ch.reports));
  return any_failure(ch.reports) ? 1 : 0;
}

void add_common(Registry& reg, Settings& s) {
  reg.option("alpha", s.alpha, "total mass alpha");
  reg.option("n", s.n, "number of samples");
  reg.raw("seed", s.seed, "seed (integer or 'random')");
  reg.option("out", s.out, "output path (default stdout)");
  reg.option("jobs", s.jobs, "worker threads (default DPM_JOBS or all cores)");
  reg.app()->add_option("--config", s.config, "JSON config file; flags override it");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Dirichlet process samplers, exact moments and Monte Carlo checks", "dpm"};
  app.set_version_flag("--version", std::string(version_string()));
  app.require_subcommand(1, 1);

  CLI::App* sample = app.add_subcommand("sample", "draw random measures as JSON lines");
  Registry sample_reg(sample);
  add_common(sample_reg, s);
  sample_reg.option("construction", s.construction, "stick | gamma")
      ->check(CLI::IsMember({"stick", "gamma"}));
  sample_reg.raw("base", s.base, "base model JSON (default: Lebesgue on [0,1])");
  sample_reg.option("eps", s.eps, "stick tail target or jump truncation");

  CLI::App* moments = app.add_subcommand("moments", "exact mixed Dirichlet moments as CSV");
  Registry moments_reg(moments);
  moments_reg.option("alphas", s.alphas, "block parameters, comma separated")
      ->delimiter(',');
  moments_reg.option("max_degree", s.max_degree, "largest total degree");
  moments_reg.option("method", s.method, "exact | recursion")
      ->check(CLI::IsMember({"exact", "recursion"}));
  moments_reg.option("out", s.out, "output path (default stdout)");
  moments->add_option("--config", s.config, "JSON config file; flags override it");

  CLI::App* verify = app.add_subcommand("verify", "Monte Carlo identity checks");
  Registry verify_reg(verify);
  verify->add_option("target", s.target, "which check")
      ->required()
      ->check(CLI::IsMember({"mecke", "sethuraman", "tbeta", "tbeta2", "sizebias", "thm52",
                             "constructions", "all"}));
  add_common(verify_reg, s);
  verify_reg.option("p", s.p, "block probability p");
  verify_reg.option("threshold", s.threshold, "z threshold in standard errors");
  verify_reg.option("ks_floor", s.ks_floor, "smallest passing KS p-value");
  verify_reg.option("format", s.format, "json | csv");
  verify_reg.option("construction", s.construction, "stick | gamma")
      ->check(CLI::IsMember({"stick", "gamma"}));
  verify_reg.raw("base", s.base, "base model JSON (default: atoms p, 1-p)");
  verify_reg.option("eps", s.eps, "jump truncation for the gamma construction");
  verify_reg.flag("embed_timing", s.embed_timing, "write the wall-clock duration into the report");

  CLI::App* characterize = app.add_subcommand(
      "characterize", "infer the mixing law from projection and mixing samples");
  Registry char_reg(characterize);
  add_common(char_reg, s);
  char_reg.option("p", s.p, "block probability p");
  char_reg.option("depth", s.depth, "highest moment order (2..8)");
  char_reg.option("w_law", s.w_law, "beta | uniform (mean-matched negative control)");
  char_reg.option("threshold", s.threshold, "z threshold in standard errors");
  char_reg.option("format", s.format, "json | csv");
  char_reg.flag("probe_symmetric", s.probe_symmetric,
                "exact data for the symmetric case; asserts nothing");

  std::vector<const char*> argv{"dpm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForVersion&) {
    out << version_string() << '\n';
    return 0;
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "dpm: " << e.what() << '\n';
    return 2;
  }

  try {
    Registry* reg = sample->parsed()         ? &sample_reg
                    : moments->parsed()      ? &moments_reg
                    : verify->parsed()       ? &verify_reg
                                             : &char_reg;
    if (!s.config.empty()) reg->apply(read_json_file(s.config));
    if (sample->parsed()) return cmd_sample(s, sample_reg, out);
    if (moments->parsed()) return cmd_moments(s, out);
    if (verify->parsed()) return cmd_verify(s, verify_reg, out, err);
    return cmd_characterize(s, out, err);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& ch : msg) {
      if (ch == '\n') ch = ' ';
    }
    err << "dpm: error: " << msg << '\n';
    return 2;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace dpm
