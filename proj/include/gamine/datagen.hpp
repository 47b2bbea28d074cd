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

// Synthetic d-out-regular recommendation graphs.
//
// SU places each node's d edges uniformly at random; SH samples targets with
// weight 1 - |c_i - c_j| (cost homophily), without replacement. A fraction
// beta of the nodes is latently harmful: cost 1 under binary costs, a
// Beta(7, 1) draw under real costs (benign nodes: 0 resp. Beta(1, 10)).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "gamine/errors.hpp"
#include "gamine/graph.hpp"
#include "gamine/relevance.hpp"

namespace gamine {

enum class EdgeModel { kUniform, kHomophilous };        // SU, SH
enum class ProbabilityShape { kUniform, kSkewed };      // U, S
enum class CostKind { kBinary, kReal };

inline constexpr std::array<double, 5> kSkewedSlotWeights = {0.35, 0.25, 0.20,
                                                             0.15, 0.05};

struct SyntheticConfig {
  EdgeModel model = EdgeModel::kUniform;
  std::size_t n = 100;
  std::size_t d = 5;
  double alpha = 0.05;
  ProbabilityShape chi = ProbabilityShape::kUniform;
  double beta = 0.5;
  CostKind cost_kind = CostKind::kBinary;
  std::uint64_t seed = 0;

  void validate() const {
    if (n == 0 || d >= n) throw PreconditionError("need 0 < d < n");
    if (!(beta > 0.0 && beta < 1.0)) throw PreconditionError("beta must lie in (0, 1)");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("alpha must lie in (0, 1]");
    if (chi == ProbabilityShape::kSkewed && d != kSkewedSlotWeights.size()) {
      throw PreconditionError("skewed probability shape is only defined for d = 5");
    }
  }
};

inline std::string_view to_string(EdgeModel m) {
  return m == EdgeModel::kUniform ? "SU" : "SH";
}
inline std::string_view to_string(ProbabilityShape s) {
  return s == ProbabilityShape::kUniform ? "U" : "S";
}
inline std::string_view to_string(CostKind k) {
  return k == CostKind::kBinary ? "binary" : "real";
}

inline std::optional<EdgeModel> parse_edge_model(std::string_view s) {
  if (s == "SU") return EdgeModel::kUniform;
  if (s == "SH") return EdgeModel::kHomophilous;
  return std::nullopt;
}
inline std::optional<ProbabilityShape> parse_shape(std::string_view s) {
  if (s == "U") return ProbabilityShape::kUniform;
  if (s == "S") return ProbabilityShape::kSkewed;
  return std::nullopt;
}
inline std::optional<CostKind> parse_cost_kind(std::string_view s) {
  if (s == "binary") return CostKind::kBinary;
  if (s == "real") return CostKind::kReal;
  return std::nullopt;
}

namespace detail {

// Independent streams for costs, edges and relevance from one seed.
inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return std::mt19937_64(seq);
}

inline double sample_beta(std::mt19937_64& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

}  // namespace detail

// Exactly floor(beta * n) latently harmful nodes, chosen uniformly.
inline CostVector gen_costs(const SyntheticConfig& cfg) {
  cfg.validate();
  auto rng = detail::stream(cfg.seed, 1);
  std::vector<NodeId> order(cfg.n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::shuffle(order.begin(), order.end(), rng);
  const auto harmful_count =
      static_cast<std::size_t>(std::floor(cfg.beta * static_cast<double>(cfg.n)));
  std::vector<bool> harmful(cfg.n, false);
  for (std::size_t a = 0; a < harmful_count; ++a) harmful[order[a]] = true;

  std::vector<double> costs(cfg.n, 0.0);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    if (cfg.cost_kind == CostKind::kBinary) {
      costs[i] = harmful[i] ? 1.0 : 0.0;
    } else {
      costs[i] = harmful[i] ? detail::sample_beta(rng, 7.0, 1.0)
                            : detail::sample_beta(rng, 1.0, 10.0);
    }
  }
  return CostVector(std::move(costs));
}

inline std::vector<double> slot_probabilities(const SyntheticConfig& cfg) {
  std::vector<double> p(cfg.d);
  for (std::size_t s = 0; s < cfg.d; ++s) {
    p[s] = cfg.chi == ProbabilityShape::kUniform
               ? (1.0 - cfg.alpha) / static_cast<double>(cfg.d)
               : (1.0 - cfg.alpha) * kSkewedSlotWeights[s];
  }
  return p;
}

inline RecGraph gen_graph(const SyntheticConfig& cfg, const CostVector& costs) {
  cfg.validate();
  if (costs.size() != cfg.n) throw PreconditionError("cost vector size mismatch");
  auto rng = detail::stream(cfg.seed, 2);
  const auto probs = slot_probabilities(cfg);
  RecGraph g(cfg.n, cfg.alpha);
  std::uniform_int_distribution<NodeId> any(0, static_cast<NodeId>(cfg.n - 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<NodeId> picked;
  std::vector<double> weights(cfg.n);

  for (NodeId i = 0; i < cfg.n; ++i) {
    picked.clear();
    auto taken = [&](NodeId j) {
      return j == i || std::find(picked.begin(), picked.end(), j) != picked.end();
    };
    auto weight = [&](NodeId j) {
      return cfg.model == EdgeModel::kUniform ? 1.0
                                              : 1.0 - std::abs(costs[i] - costs[j]);
    };
    // Rejection sampling: propose uniformly, accept with probability w_j.
    // Accepted draws follow the renormalized weights over the untaken nodes.
    std::size_t attempts = 0;
    const std::size_t max_attempts = 64 * cfg.d + 1024;
    while (picked.size() < cfg.d && attempts < max_attempts) {
      ++attempts;
      const NodeId j = any(rng);
      if (taken(j)) continue;
      if (cfg.model == EdgeModel::kHomophilous && unit(rng) >= weight(j)) continue;
      picked.push_back(j);
    }
    // Fallback for skewed weight landscapes: exact sequential draws.
    while (picked.size() < cfg.d) {
      double total = 0.0;
      for (NodeId j = 0; j < cfg.n; ++j) {
        weights[j] = taken(j) ? 0.0 : weight(j);
        total += weights[j];
      }
      if (!(total > 0.0)) {
        throw PreconditionError("node " + std::to_string(i) +
                                " has fewer than d admissible targets");
      }
      std::discrete_distribution<NodeId> draw(weights.begin(), weights.end());
      picked.push_back(draw(rng));
    }
    for (std::size_t s = 0; s < cfg.d; ++s) g.add_edge(i, picked[s], probs[s]);
  }
  return g;
}

// Relevance scores 1/rank where each node's current out-neighbours take
// ranks 1..deg (in slot order) followed by random other nodes, up to k_cand
// entries per node.
inline RelevanceIndex gen_relevance(const RecGraph& g, std::size_t k_cand,
                                    std::uint64_t seed) {
  auto rng = detail::stream(seed, 3);
  const std::size_t n = g.size();
  RelevanceIndex index(n, k_cand);
  std::uniform_int_distribution<NodeId> any(0, static_cast<NodeId>(n - 1));
  std::vector<NodeId> seen(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    const std::size_t len =
        std::min(n - 1, std::max(k_cand, g.out_degree(i)));
    std::vector<NodeId> order;
    auto take = [&](NodeId j) {
      order.push_back(j);
      seen[j] = i + 1;
    };
    seen[i] = i + 1;
    for (const auto& e : g.out_edges(i)) take(e.target);
    auto taken = [&](NodeId j) { return seen[j] == i + 1; };
    if (2 * len < n) {
      while (order.size() < len) {
        const NodeId j = any(rng);
        if (!taken(j)) take(j);
      }
    } else {
      std::vector<NodeId> rest;
      for (NodeId j = 0; j < n; ++j) {
        if (!taken(j)) rest.push_back(j);
      }
      std::shuffle(rest.begin(), rest.end(), rng);
      for (std::size_t a = 0; order.size() < len; ++a) order.push_back(rest[a]);
    }
    std::vector<RankedTarget> ranked(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
      ranked[r] = {order[r], 1.0 / static_cast<double>(r + 1),
                   static_cast<std::uint32_t>(r + 1)};
    }
    index.set_ranking(i, std::move(ranked));
  }
  return index;
}

}  // namespace gamine
