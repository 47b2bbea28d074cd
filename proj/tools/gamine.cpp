// Copyright 2026 The Gamine Authors.
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

// gamine: generate synthetic graphs, rewire them, evaluate exposure and
// benchmark the optimizers.
//
// Every subcommand accepts --config <file.json>; its keys are the long flag
// names with dashes replaced by underscores. Flags given on the command line
// win over config values.
//
// Exit codes: 0 ok, 2 usage, 3 validation, 4 runtime.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gamine/bench.hpp"
#include "gamine/datagen.hpp"
#include "gamine/exposure.hpp"
#include "gamine/io.hpp"
#include "gamine/optimizers.hpp"
#include "gamine/relevance.hpp"

namespace {

using nlohmann::json;
using namespace gamine;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitRuntime = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binds options to variables and merges them with a JSON config: values
// from the config apply only where the flag was not given.
class Options {
 public:
  explicit Options(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_, "JSON config file");
  }

  template <typename T>
  CLI::Option* add(const std::string& flag, T& var, const std::string& help) {
    auto* opt = app_->add_option(flag, var, help)->capture_default_str();
    bind(opt, flag, var);
    return opt;
  }

  CLI::Option* flag(const std::string& flag, bool& var, const std::string& help) {
    auto* opt = app_->add_flag(flag, var, help);
    bind(opt, flag, var);
    return opt;
  }

  void merge_config() {
    if (config_path_.empty()) return;
    std::ifstream in(config_path_);
    if (!in) throw UsageError("cannot open config " + config_path_);
    json config;
    try {
      config = json::parse(in);
    } catch (const json::parse_error& e) {
      throw UsageError("malformed config " + config_path_ + ": " + e.what());
    }
    if (!config.is_object()) throw UsageError("config must be a JSON object");
    for (const auto& [key, value] : config.items()) {
      if (key == "command" || key == "config_hash") continue;
      auto it = std::find_if(bindings_.begin(), bindings_.end(),
                             [&](const Binding& b) { return b.key == key; });
      if (it == bindings_.end()) {
        throw UsageError("unknown config key '" + key + "'");
      }
      if (it->option->count() > 0) continue;
      try {
        it->load(value);
      } catch (const json::exception& e) {
        throw UsageError("bad value for config key '" + key + "': " + e.what());
      }
    }
  }

  // The effective configuration, including the subcommand name.
  json effective() const {
    json out;
    out["command"] = app_->get_name();
    for (const auto& b : bindings_) b.save(out);
    return out;
  }

  // Hash of the effective configuration. Output paths do not change what
  // is computed, so they are left out.
  std::string hash() const {
    json config = effective();
    for (const auto& b : bindings_) {
      if (b.key.starts_with("out")) config.erase(b.key);
    }
    return config_hash(config);
  }

 private:
  struct Binding {
    CLI::Option* option;
    std::string key;
    std::function<void(const json&)> load;
    std::function<void(json&)> save;
  };

  template <typename T>
  void bind(CLI::Option* opt, const std::string& flag, T& var) {
    std::string key = flag.substr(flag.find_first_not_of('-'));
    std::replace(key.begin(), key.end(), '-', '_');
    bindings_.push_back({opt, key, [&var](const json& j) { var = j.get<T>(); },
                         [&var, key](json& out) { out[key] = var; }});
  }

  CLI::App* app_;
  std::string config_path_;
  std::vector<Binding> bindings_;
};

template <typename T>
T parse_enum(const std::string& value, std::optional<T> parsed,
             const char* what) {
  if (!parsed) throw UsageError(std::string("unknown ") + what + " '" + value + "'");
  return *parsed;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string("missing required ") + flag);
}

std::optional<SegregationSummary> json_free_segregation(const RecGraph& g,
                                                        const CostVector& c,
                                                        double threshold,
                                                        std::size_t step_cap) {
  auto harmful = binarize(c, threshold);
  if (std::all_of(harmful.begin(), harmful.end(), [](bool h) { return h; })) {
    return std::nullopt;
  }
  auto seg = segregation(g, harmful, step_cap);
  return SegregationSummary{seg.max, seg.total};
}

json to_json(const std::optional<SegregationSummary>& s) {
  if (!s) return nullptr;
  return {{"max", s->max}, {"total", s->total}};
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string model = "SU";
  std::size_t n = 100;
  std::size_t d = 5;
  double alpha = 0.05;
  std::string chi = "U";
  double beta = 0.5;
  std::string costs_kind = "binary";
  std::uint64_t seed = 0;
  std::size_t kcand = kDefaultCandidateCount;
  std::string out_graph;
  std::string out_costs;
  std::string out_relevance;
  std::string out_config;
};

void add_generate(Options& o, GenerateArgs& a) {
  o.add("--model", a.model, "edge model: SU or SH");
  o.add("--n", a.n, "number of nodes");
  o.add("--d", a.d, "out-degree");
  o.add("--alpha", a.alpha, "absorption probability");
  o.add("--chi", a.chi, "probability shape: U or S");
  o.add("--beta", a.beta, "fraction of latently harmful nodes");
  o.add("--costs-kind", a.costs_kind, "binary or real");
  o.add("--seed", a.seed, "random seed");
  o.add("--kcand", a.kcand, "relevance list length per node");
  o.add("--out-graph", a.out_graph, "graph TSV to write");
  o.add("--out-costs", a.out_costs, "cost TSV to write");
  o.add("--out-relevance", a.out_relevance, "relevance TSV to write (optional)");
  o.add("--out-config", a.out_config, "write the effective config here too");
}

int cmd_generate(const Options& o, const GenerateArgs& a) {
  require(a.out_graph, "--out-graph");
  require(a.out_costs, "--out-costs");
  SyntheticConfig cfg;
  cfg.model = parse_enum(a.model, parse_edge_model(a.model), "model");
  cfg.chi = parse_enum(a.chi, parse_shape(a.chi), "probability shape");
  cfg.cost_kind = parse_enum(a.costs_kind, parse_cost_kind(a.costs_kind), "cost kind");
  cfg.n = a.n;
  cfg.d = a.d;
  cfg.alpha = a.alpha;
  cfg.beta = a.beta;
  cfg.seed = a.seed;
  try {
    cfg.validate();
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }

  json config = o.effective();
  const std::string hash = o.hash();
  const CostVector costs = gen_costs(cfg);
  const RecGraph g = gen_graph(cfg, costs);
  save_graph(g, a.out_graph, hash);
  save_costs(g, costs, a.out_costs, hash);
  if (!a.out_relevance.empty()) {
    save_relevance(g, gen_relevance(g, a.kcand, a.seed), a.out_relevance, hash);
  }
  config["config_hash"] = hash;
  if (!a.out_config.empty()) {
    std::ofstream out(a.out_config);
    if (!out) throw std::runtime_error("cannot write " + a.out_config);
    out << config.dump(2) << '\n';
  }
  std::cout << config.dump(2) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------ rewire

struct RewireArgs {
  std::string algo = "gamine";
  std::size_t budget = 10;
  double quality = 0.0;
  double alpha_override = 0.0;
  long long kappa = -1;
  double eps = 0.01;
  std::uint64_t seed = 0;
  std::string graph;
  std::string costs;
  std::string relevance;
  std::string out_trace;
  std::string out_graph;
  std::size_t kcand = kDefaultCandidateCount;
  std::size_t recheck_top = 100;
  bool full_targets = false;
  double harm_threshold = 0.5;
};

void add_rewire(Options& o, RewireArgs& a) {
  o.add("--algo", a.algo, "gamine|exact|naive|bl1|bl2|bl3|bl4");
  o.add("--budget", a.budget, "number of rewirings r");
  o.add("--quality", a.quality, "nDCG threshold q in [0, 1]");
  o.add("--alpha-override", a.alpha_override,
        "rescale edge probabilities to this absorption probability");
  o.add("--kappa", a.kappa, "power-series terms (default: from --eps)");
  o.add("--eps", a.eps, "truncation error bound used to pick kappa");
  o.add("--seed", a.seed, "random seed (bl1)");
  o.add("--graph", a.graph, "input graph TSV");
  o.add("--costs", a.costs, "input cost TSV");
  o.add("--relevance", a.relevance, "relevance TSV (required when q > 0)");
  o.add("--out-trace", a.out_trace, "trace TSV to write");
  o.add("--out-graph", a.out_graph, "rewired graph TSV to write");
  o.add("--kcand", a.kcand, "candidate targets per node");
  o.add("--recheck-top", a.recheck_top, "candidates rechecked exactly per round");
  o.flag("--full-targets", a.full_targets,
         "score every node as a target instead of the least exposed few");
  o.add("--harm-threshold", a.harm_threshold,
        "cost at or above which a node counts as harmful for segregation");
}

RecGraph with_alpha(const RecGraph& g, double alpha) {
  RecGraph out(g.size(), alpha);
  const double scale = (1.0 - alpha) / (1.0 - g.alpha());
  for (NodeId i = 0; i < g.size(); ++i) {
    for (const auto& e : g.out_edges(i)) out.add_edge(i, e.target, e.prob * scale);
  }
  out.set_names(g.names());
  out.validate();
  return out;
}

int cmd_rewire(const Options& o, const RewireArgs& a) {
  require(a.graph, "--graph");
  require(a.costs, "--costs");
  RunConfig cfg;
  cfg.algorithm = parse_enum(a.algo, parse_algorithm(a.algo), "algorithm");
  if (!(a.quality >= 0.0 && a.quality <= 1.0)) {
    throw UsageError("--quality must lie in [0, 1]");
  }
  if (a.quality > 0.0 && a.relevance.empty()) {
    throw UsageError("--quality > 0 needs --relevance");
  }
  if (a.alpha_override != 0.0 && !(a.alpha_override > 0.0 && a.alpha_override < 1.0)) {
    throw UsageError("--alpha-override must lie in (0, 1)");
  }
  if (!(a.eps > 0.0)) throw UsageError("--eps must be positive");
  if (a.recheck_top < 1) throw UsageError("--recheck-top must be >= 1");
  cfg.budget = a.budget;
  cfg.quality = a.quality;
  if (a.kappa >= 0) cfg.kappa = static_cast<std::size_t>(a.kappa);
  cfg.eps = a.eps;
  cfg.seed = a.seed;
  cfg.k_cand = a.kcand;
  cfg.recheck_top = a.recheck_top;
  cfg.prune_targets = !a.full_targets;
  cfg.harm_threshold = a.harm_threshold;

  RecGraph g = load_graph(a.graph);
  if (a.alpha_override != 0.0) g = with_alpha(g, a.alpha_override);
  const CostVector costs = load_costs(a.costs, g);
  std::optional<RelevanceIndex> index;
  if (!a.relevance.empty()) index = load_relevance(a.relevance, g, a.kcand);

  json config = o.effective();
  const std::string hash = o.hash();
  const RunTrace trace = run(g, costs, index ? &*index : nullptr, cfg);

  if (!a.out_trace.empty()) save_trace(g, trace, a.out_trace, hash);
  if (!a.out_graph.empty()) save_graph(g, a.out_graph, hash);

  json report = {
      {"config_hash", hash},
      {"algorithm", std::string(to_string(trace.algorithm))},
      {"kappa", trace.kappa},
      {"f_initial", trace.f_initial},
      {"f_final", trace.f_final},
      {"rounds", trace.rounds.size()},
      {"stop_reason", trace.stop_reason},
      {"initial_segregation", to_json(trace.initial_segregation)},
      {"final_segregation", to_json(trace.final_segregation)},
  };
  if (trace.dense_drift) report["dense_drift"] = *trace.dense_drift;
  if (index) report["min_ndcg"] = min_ndcg(*index, g);
  std::cout << report.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string graph;
  std::string costs;
  std::string relevance;
  long long kappa = -1;
  double eps = 0.01;
  double harm_threshold = 0.5;
  std::size_t step_cap = kDefaultStepCap;
  std::string out_exposure;
};

void add_evaluate(Options& o, EvaluateArgs& a) {
  o.add("--graph", a.graph, "graph TSV");
  o.add("--costs", a.costs, "cost TSV");
  o.add("--relevance", a.relevance, "relevance TSV (reports min nDCG)");
  o.add("--kappa", a.kappa, "power-series terms (default: from --eps)");
  o.add("--eps", a.eps, "truncation error bound used to pick kappa");
  o.add("--harm-threshold", a.harm_threshold, "binarization threshold");
  o.add("--step-cap", a.step_cap, "segregation walk length cap");
  o.add("--out-exposure", a.out_exposure, "per-node exposure TSV to write");
}

int cmd_evaluate(const Options& o, const EvaluateArgs& a) {
  require(a.graph, "--graph");
  require(a.costs, "--costs");
  if (!(a.eps > 0.0)) throw UsageError("--eps must be positive");
  const RecGraph g = load_graph(a.graph);
  const CostVector costs = load_costs(a.costs, g);
  const std::size_t kappa =
      a.kappa >= 0 ? static_cast<std::size_t>(a.kappa) : kappa_for(g.alpha(), a.eps);

  json config = o.effective();
  const std::string hash = o.hash();
  const ExposureState st = exposure_total(g, costs, kappa);
  const SafePartition part = safe_partition(g, costs);
  const auto seg = json_free_segregation(g, costs, a.harm_threshold, a.step_cap);
  const auto stats = degree_stats(g);

  json report = {
      {"config_hash", hash},
      {"n", g.size()},
      {"m", stats.edge_count},
      {"alpha", g.alpha()},
      {"kappa", kappa},
      {"eps_bound", st.eps_bound},
      {"f_total", st.f_total},
      {"per_node_exposure_path", a.out_exposure.empty() ? json(nullptr)
                                                        : json(a.out_exposure)},
      {"max_segregation", seg ? json(seg->max) : json(nullptr)},
      {"total_segregation", seg ? json(seg->total) : json(nullptr)},
      {"safe_count", part.safe.size()},
      {"lambda_plus", part.lambda_plus},
      {"precondition_holds", part.precondition_holds()},
  };
  if (!a.relevance.empty()) {
    report["min_ndcg"] = min_ndcg(load_relevance(a.relevance, g), g);
  }
  if (!a.out_exposure.empty()) save_exposures(g, st.row_cost, a.out_exposure, hash);
  std::cout << report.dump(2) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<std::size_t> sizes = {1000, 10000, 100000};
  std::size_t d = 5;
  double alpha = 0.05;
  double beta = 0.5;
  std::size_t rounds = 10;
  std::uint64_t seed = 0;
  std::vector<std::string> algos = {"gamine"};
  std::string out;
};

void add_bench(Options& o, BenchArgs& a) {
  o.add("--sizes", a.sizes, "node counts")->delimiter(',');
  o.add("--d", a.d, "out-degree");
  o.add("--alpha", a.alpha, "absorption probability");
  o.add("--beta", a.beta, "fraction of harmful nodes");
  o.add("--rounds", a.rounds, "rewirings timed per size");
  o.add("--seed", a.seed, "random seed");
  o.add("--algos", a.algos, "algorithms to time")->delimiter(',');
  o.add("--out", a.out, "report JSON to write");
}

int cmd_bench(const Options& o, const BenchArgs& a) {
  if (a.sizes.empty()) throw UsageError("--sizes must not be empty");
  BenchConfig cfg;
  cfg.sizes = a.sizes;
  cfg.d = a.d;
  cfg.alpha = a.alpha;
  cfg.beta = a.beta;
  cfg.rounds = a.rounds;
  cfg.seed = a.seed;
  cfg.algorithms.clear();
  for (const auto& name : a.algos) {
    cfg.algorithms.push_back(parse_enum(name, parse_algorithm(name), "algorithm"));
  }
  json config = o.effective();
  const std::string hash = o.hash();
  const BenchReport report = run_bench(cfg);

  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"n", r.n},
                    {"m", r.m},
                    {"algo", std::string(to_string(r.algorithm))},
                    {"rounds", r.rounds},
                    {"seconds_per_rewiring", r.seconds_per_rewiring},
                    {"precompute_seconds", r.precompute_seconds}});
  }
  json slopes = json::object();
  for (Algorithm algo : cfg.algorithms) {
    auto s = report.slope(algo);
    slopes[std::string(to_string(algo))] = s ? json(*s) : json(nullptr);
  }
  json out = {{"config_hash", hash}, {"rows", rows}, {"loglog_slope", slopes}};
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!f) throw std::runtime_error("cannot write " + a.out);
    f << out.dump(2) << '\n';
  }
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exposure-minimizing rewiring of recommendation graphs"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  RewireArgs rewire_args;
  EvaluateArgs eval_args;
  BenchArgs bench_args;

  auto* gen = app.add_subcommand("generate", "Generate a synthetic SU/SH graph");
  auto* rewire = app.add_subcommand("rewire", "Rewire edges to reduce exposure");
  auto* evaluate = app.add_subcommand("evaluate", "Report exposure and segregation");
  auto* bench = app.add_subcommand("bench", "Time rewirings on growing graphs");
  Options gen_opts(gen), rewire_opts(rewire), eval_opts(evaluate), bench_opts(bench);
  add_generate(gen_opts, gen_args);
  add_rewire(rewire_opts, rewire_args);
  add_evaluate(eval_opts, eval_args);
  add_bench(bench_opts, bench_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      gen_opts.merge_config();
      return cmd_generate(gen_opts, gen_args);
    }
    if (rewire->parsed()) {
      rewire_opts.merge_config();
      return cmd_rewire(rewire_opts, rewire_args);
    }
    if (evaluate->parsed()) {
      eval_opts.merge_config();
      return cmd_evaluate(eval_opts, eval_args);
    }
    bench_opts.merge_config();
    return cmd_bench(bench_opts, bench_args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const PreconditionError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
