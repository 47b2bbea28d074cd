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

// Greedy rewiring optimizers for total exposure, with and without nDCG
// quality constraints, plus the exact references and four baselines.
//
// All optimizers edit the graph in place, one rewiring per round, and return
// a RunTrace. A rewiring is only applied when its exact gain delta is
// positive, so f never increases.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "gamine/dense.hpp"
#include "gamine/errors.hpp"
#include "gamine/exposure.hpp"
#include "gamine/graph.hpp"
#include "gamine/relevance.hpp"
#include "gamine/rewiring.hpp"

namespace gamine {

enum class Algorithm { kGamine, kExact, kNaive, kBL1, kBL2, kBL3, kBL4 };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kGamine: return "gamine";
    case Algorithm::kExact: return "exact";
    case Algorithm::kNaive: return "naive";
    case Algorithm::kBL1: return "bl1";
    case Algorithm::kBL2: return "bl2";
    case Algorithm::kBL3: return "bl3";
    case Algorithm::kBL4: return "bl4";
  }
  return "unknown";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (auto a : {Algorithm::kGamine, Algorithm::kExact, Algorithm::kNaive,
                 Algorithm::kBL1, Algorithm::kBL2, Algorithm::kBL3,
                 Algorithm::kBL4}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

struct RunConfig {
  std::size_t budget = 10;
  double quality = 0.0;
  std::optional<std::size_t> kappa;  // unset: kappa_for(alpha, eps)
  double eps = 0.01;
  std::size_t k_cand = kDefaultCandidateCount;
  std::size_t recheck_top = 100;     // kUnlimited: recheck every candidate
  bool prune_targets = true;         // REM: only the deg+2 least exposed
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kGamine;
  std::size_t oracle_limit = kDefaultOracleLimit;
  std::size_t bl1_max_draws = 100000;
  bool track_segregation = true;
  double harm_threshold = 0.5;
  std::size_t step_cap = kDefaultStepCap;

  void validate() const {
    if (!(quality >= 0.0 && quality <= 1.0)) {
      throw PreconditionError("quality threshold must lie in [0, 1]");
    }
    if (recheck_top < 1) throw PreconditionError("recheck_top must be >= 1");
    if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  }

  std::size_t kappa_for_graph(const RecGraph& g) const {
    return kappa ? *kappa : kappa_for(g.alpha(), eps);
  }
};

struct RoundRecord {
  EditRecord edit;
  double f_before = 0.0;
  double f_after = 0.0;
  double delta_pred = 0.0;  // exact delta of the chosen rewiring
  double delta_hat = 0.0;
  double ms = 0.0;
};

struct SegregationSummary {
  double max = 0.0;
  double total = 0.0;
};

struct RunTrace {
  Algorithm algorithm = Algorithm::kGamine;
  std::size_t kappa = 0;
  double f_initial = 0.0;
  double f_final = 0.0;
  std::vector<RoundRecord> rounds;
  std::string stop_reason = "budget exhausted";
  std::optional<SegregationSummary> initial_segregation;
  std::optional<SegregationSummary> final_segregation;
  std::optional<double> dense_drift;  // naive greedy: |F_updated - F_exact|
};

// Tie-breaking helpers. Values within a relative 1e-9 are treated as equal
// so that implementations computing delta along different numerical paths
// order candidates identically.
inline bool approx_equal(double a, double b) {
  return std::abs(a - b) <=
         1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool lexicographically_before(const RewiringCandidate& a,
                                     const RewiringCandidate& b) {
  return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
}

// Larger delta, then larger delta_hat, then smaller (i, j, k).
inline bool better_exact(const RewiringCandidate& a,
                         const RewiringCandidate& b) {
  if (!approx_equal(a.delta, b.delta)) return a.delta > b.delta;
  if (!approx_equal(a.delta_hat, b.delta_hat)) return a.delta_hat > b.delta_hat;
  return lexicographically_before(a, b);
}

// Strict ordering used to pick the top candidates by delta_hat.
inline bool better_heuristic(const RewiringCandidate& a,
                             const RewiringCandidate& b) {
  if (a.delta_hat != b.delta_hat) return a.delta_hat > b.delta_hat;
  return lexicographically_before(a, b);
}

inline constexpr double kGainTolerance = 1e-12;

inline bool is_gain(double delta, double f) {
  return delta > kGainTolerance * std::max(1.0, std::abs(f));
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

// O(1) "is k a neighbour of i (or i itself)" test reused across sources.
class NeighbourMarks {
 public:
  explicit NeighbourMarks(std::size_t n) : stamp_(n, 0) {}

  void mark(const RecGraph& g, NodeId i) {
    ++current_;
    stamp_[i] = current_;
    for (const auto& e : g.out_edges(i)) stamp_[e.target] = current_;
  }
  bool excluded(NodeId k) const { return stamp_[k] == current_; }

 private:
  std::vector<std::uint64_t> stamp_;
  std::uint64_t current_ = 0;
};

// Keeps the `limit` best candidates by delta_hat.
class TopCandidates {
 public:
  explicit TopCandidates(std::size_t limit) : limit_(limit) {}

  void offer(const RewiringCandidate& c) {
    if (items_.size() < limit_) {
      items_.push_back(c);
      std::push_heap(items_.begin(), items_.end(), better_heuristic);
      return;
    }
    if (better_heuristic(c, items_.front())) {
      std::pop_heap(items_.begin(), items_.end(), better_heuristic);
      items_.back() = c;
      std::push_heap(items_.begin(), items_.end(), better_heuristic);
    }
  }

  bool empty() const { return items_.empty(); }

  std::vector<RewiringCandidate> take_sorted() {
    std::sort(items_.begin(), items_.end(), better_heuristic);
    return std::move(items_);
  }

 private:
  std::size_t limit_;
  std::vector<RewiringCandidate> items_;
};

// Exact delta for each candidate, one F e_i column per distinct source.
inline std::optional<RewiringCandidate> recheck_exact(
    const TransitionMatrix& P, std::size_t kappa,
    std::vector<RewiringCandidate> candidates) {
  std::map<NodeId, std::vector<double>> columns;
  std::optional<RewiringCandidate> best;
  for (auto& c : candidates) {
    auto it = columns.find(c.i);
    if (it == columns.end()) {
      it = columns.emplace(c.i, power_column(P, c.i, kappa)).first;
    }
    complete_exact(c, it->second);
    if (!best || better_exact(c, *best)) best = c;
  }
  return best;
}

// The deg+2 least exposed nodes (ties to lower ids), or all nodes.
inline std::vector<NodeId> target_pool(std::span<const double> row_cost,
                                       std::size_t max_out_degree,
                                       bool prune) {
  std::vector<NodeId> ids(row_cost.size());
  std::iota(ids.begin(), ids.end(), NodeId{0});
  const std::size_t size = std::min(ids.size(), max_out_degree + 2);
  if (!prune || size == ids.size()) return ids;
  auto by_exposure = [&](NodeId a, NodeId b) {
    return row_cost[a] != row_cost[b] ? row_cost[a] < row_cost[b] : a < b;
  };
  std::nth_element(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(size),
                   ids.end(), by_exposure);
  ids.resize(size);
  return ids;
}

// Smaller exposure, then higher relevance, then lower id.
inline bool better_target(std::span<const double> row_cost,
                          const RankedTarget& a, const RankedTarget& b) {
  if (row_cost[a.target] != row_cost[b.target]) {
    return row_cost[a.target] < row_cost[b.target];
  }
  if (a.score != b.score) return a.score > b.score;
  return a.target < b.target;
}

// Quality-constrained per-edge target k_ij (see best_permissible_target),
// with the neighbour test taken from `marks` (already set for i).
inline std::optional<NodeId> permissible_target(
    const RelevanceIndex& index, const PermissibilityScanner& scan,
    const NeighbourMarks& marks, std::span<const double> row_cost, NodeId i,
    NodeId j) {
  const RankedTarget* best = nullptr;
  for (const auto& t : index.candidates(i)) {
    if (marks.excluded(t.target)) continue;
    if (best != nullptr && !better_target(row_cost, t, *best)) continue;
    if (!scan.permits(j, t)) continue;
    best = &t;
  }
  if (best == nullptr) return std::nullopt;
  return best->target;
}

inline std::optional<SegregationSummary> segregation_summary(
    const RecGraph& g, const CostVector& c, const RunConfig& cfg) {
  if (!cfg.track_segregation) return std::nullopt;
  auto harmful = binarize(c, cfg.harm_threshold);
  if (std::all_of(harmful.begin(), harmful.end(), [](bool h) { return h; })) {
    return std::nullopt;
  }
  auto seg = segregation(g, harmful, cfg.step_cap);
  return SegregationSummary{seg.max, seg.total};
}

inline void check_quality(const RecGraph& g, const RelevanceIndex* index,
                          double q) {
  if (index == nullptr) return;
  index->validate_against(g);
  for (NodeId i = 0; i < g.size(); ++i) {
    if (ndcg(*index, g, i) < q) {
      throw PreconditionError("initial graph violates the quality threshold at node " +
                              g.name(i));
    }
  }
}

inline RoundRecord make_round(const RewiringCandidate& c, std::size_t round,
                              double f_before) {
  RoundRecord r;
  r.edit = {EditKind::kRewiring, c.i, c.j, c.k, c.prob, round};
  r.f_before = f_before;
  r.delta_pred = c.exact ? c.delta : c.delta_hat;
  r.delta_hat = c.delta_hat;
  return r;
}

// Shared driver for algorithms that recompute the exposure vectors every
// round. `choose` returns the rewiring to apply (already gain-checked) or
// nullopt with a stop reason.
template <typename Choose>
RunTrace power_driver(Algorithm algo, RecGraph& g, const CostVector& c,
                      const RunConfig& cfg, Choose choose) {
  cfg.validate();
  RunTrace trace;
  trace.algorithm = algo;
  trace.kappa = cfg.kappa_for_graph(g);
  trace.initial_segregation = segregation_summary(g, c, cfg);
  bool first = true;
  for (std::size_t round = 0;; ++round) {
    const auto start = Clock::now();
    TransitionMatrix P(g);
    ExposureState st = exposure_total(P, g.alpha(), c, trace.kappa);
    if (first) {
      trace.f_initial = st.f_total;
      first = false;
    }
    if (!trace.rounds.empty()) trace.rounds.back().f_after = st.f_total;
    trace.f_final = st.f_total;
    if (round >= cfg.budget) break;
    std::string reason;
    std::optional<RewiringCandidate> pick = choose(P, st, round, reason);
    if (!pick) {
      trace.stop_reason = reason;
      break;
    }
    RoundRecord rec = make_round(*pick, round, st.f_total);
    apply_rewiring(g, pick->i, pick->j, pick->k, round);
    rec.ms = elapsed_ms(start);
    trace.rounds.push_back(rec);
  }
  trace.final_segregation = segregation_summary(g, c, cfg);
  return trace;
}

inline std::optional<RewiringCandidate> gain_checked(
    std::optional<RewiringCandidate> best, double f, std::string& reason) {
  if (!best) {
    reason = "no candidate with positive heuristic gain";
    return std::nullopt;
  }
  if (!is_gain(best->delta, f)) {
    reason = "no candidate with positive exact gain";
    return std::nullopt;
  }
  return best;
}

}  // namespace detail

// Greedy exposure minimization without quality constraints. Each round
// scores delta_hat for every edge against the deg+2 least exposed targets,
// rechecks the best `recheck_top` exactly and applies the best one.
inline RunTrace gamine_rem(RecGraph& g, const CostVector& c,
                           const RunConfig& cfg) {
  detail::NeighbourMarks marks(g.size());
  return detail::power_driver(
      Algorithm::kGamine, g, c, cfg,
      [&](const TransitionMatrix& P, const ExposureState& st, std::size_t,
          std::string& reason) -> std::optional<RewiringCandidate> {
        const auto stats = degree_stats(g);
        const auto pool =
            detail::target_pool(st.row_cost, stats.max_out_degree,
                                cfg.prune_targets);
        detail::TopCandidates top(cfg.recheck_top);
        for (NodeId i = 0; i < g.size(); ++i) {
          if (g.out_degree(i) == 0) continue;
          marks.mark(g, i);
          for (const auto& e : g.out_edges(i)) {
            for (NodeId k : pool) {
              if (marks.excluded(k)) continue;
              auto cand = score_heuristic(st.col_sums, st.row_cost, e.prob, i,
                                          e.target, k);
              if (cand.delta_hat > 0.0) top.offer(cand);
            }
          }
        }
        if (top.empty()) {
          reason = "no candidate with positive heuristic gain";
          return std::nullopt;
        }
        return detail::gain_checked(
            detail::recheck_exact(P, st.kappa, top.take_sorted()), st.f_total,
            reason);
      });
}

// Greedy exposure minimization keeping nDCG(i) >= q for every node. Each
// edge is paired with its least exposed q-permissible target only.
inline RunTrace gamine_qrem(RecGraph& g, const CostVector& c,
                            const RelevanceIndex& index, const RunConfig& cfg) {
  detail::check_quality(g, &index, cfg.quality);
  detail::NeighbourMarks marks(g.size());
  return detail::power_driver(
      Algorithm::kGamine, g, c, cfg,
      [&](const TransitionMatrix& P, const ExposureState& st, std::size_t,
          std::string& reason) -> std::optional<RewiringCandidate> {
        detail::TopCandidates top(cfg.recheck_top);
        for (NodeId i = 0; i < g.size(); ++i) {
          if (g.out_degree(i) == 0) continue;
          marks.mark(g, i);
          PermissibilityScanner scan(index, g, i, cfg.quality);
          for (const auto& e : g.out_edges(i)) {
            auto k = detail::permissible_target(index, scan, marks,
                                                st.row_cost, i, e.target);
            if (!k) continue;
            auto cand = score_heuristic(st.col_sums, st.row_cost, e.prob, i,
                                        e.target, *k);
            if (cand.delta_hat > 0.0) top.offer(cand);
          }
        }
        if (top.empty()) {
          reason = "no candidate with positive heuristic gain";
          return std::nullopt;
        }
        return detail::gain_checked(
            detail::recheck_exact(P, st.kappa, top.take_sorted()), st.f_total,
            reason);
      });
}

namespace detail {

// Scans every (edge, target) pair of the current graph, optionally filtered
// by q-permissibility, and keeps the best exactly scored candidate.
template <typename ColumnOf>
std::optional<RewiringCandidate> best_over_all_pairs(
    const RecGraph& g, std::span<const double> col_sums,
    std::span<const double> row_cost, ColumnOf column_of,
    const RelevanceIndex* index, double q, NeighbourMarks& marks) {
  std::optional<RewiringCandidate> best;
  auto consider = [&](RewiringCandidate cand) {
    if (!(cand.delta_hat > 0.0)) return;
    complete_exact(cand, column_of(cand.i));
    if (!best || better_exact(cand, *best)) best = cand;
  };
  for (NodeId i = 0; i < g.size(); ++i) {
    if (g.out_degree(i) == 0) continue;
    marks.mark(g, i);
    if (index != nullptr) {
      PermissibilityScanner scan(*index, g, i, q);
      for (const auto& e : g.out_edges(i)) {
        for (const auto& t : index->candidates(i)) {
          if (marks.excluded(t.target) || !scan.permits(e.target, t)) continue;
          consider(score_heuristic(col_sums, row_cost, e.prob, i, e.target,
                                   t.target));
        }
      }
      continue;
    }
    for (const auto& e : g.out_edges(i)) {
      for (NodeId k = 0; k < g.size(); ++k) {
        if (marks.excluded(k)) continue;
        consider(score_heuristic(col_sums, row_cost, e.prob, i, e.target, k));
      }
    }
  }
  return best;
}

inline void check_oracle_size(const RecGraph& g, const RunConfig& cfg) {
  if (g.size() > cfg.oracle_limit) {
    throw SizeLimitError("graph with n = " + std::to_string(g.size()) +
                         " exceeds the oracle limit " +
                         std::to_string(cfg.oracle_limit));
  }
}

}  // namespace detail

// Exact greedy: power-iteration vectors plus every column F e_i, exact delta
// for every (edge, target) pair.
inline RunTrace exact_greedy(RecGraph& g, const CostVector& c,
                             const RunConfig& cfg,
                             const RelevanceIndex* index = nullptr) {
  detail::check_oracle_size(g, cfg);
  detail::check_quality(g, index, cfg.quality);
  detail::NeighbourMarks marks(g.size());
  return detail::power_driver(
      Algorithm::kExact, g, c, cfg,
      [&](const TransitionMatrix& P, const ExposureState& st, std::size_t,
          std::string& reason) -> std::optional<RewiringCandidate> {
        std::vector<std::vector<double>> columns(g.size());
        for (NodeId i = 0; i < g.size(); ++i) {
          if (g.out_degree(i) > 0) columns[i] = power_column(P, i, st.kappa);
        }
        auto best = detail::best_over_all_pairs(
            g, st.col_sums, st.row_cost,
            [&](NodeId i) -> std::span<const double> { return columns[i]; },
            index, cfg.quality, marks);
        return detail::gain_checked(best, st.f_total, reason);
      });
}

// Naive greedy: exact F maintained by Sherman-Morrison updates.
inline RunTrace naive_greedy(RecGraph& g, const CostVector& c,
                             const RunConfig& cfg,
                             const RelevanceIndex* index = nullptr) {
  cfg.validate();
  detail::check_oracle_size(g, cfg);
  detail::check_quality(g, index, cfg.quality);
  RunTrace trace;
  trace.algorithm = Algorithm::kNaive;
  trace.kappa = 0;
  trace.initial_segregation = detail::segregation_summary(g, c, cfg);
  Eigen::MatrixXd F = dense_fundamental(g, cfg.oracle_limit);
  const Eigen::VectorXd cost = as_eigen(c.values());
  detail::NeighbourMarks marks(g.size());
  for (std::size_t round = 0;; ++round) {
    const auto start = detail::Clock::now();
    const std::vector<double> col_sums = to_std(F.colwise().sum().transpose());
    const std::vector<double> row_cost = to_std(F * cost);
    const double f = std::accumulate(row_cost.begin(), row_cost.end(), 0.0);
    if (round == 0) trace.f_initial = f;
    if (!trace.rounds.empty()) trace.rounds.back().f_after = f;
    trace.f_final = f;
    if (round >= cfg.budget) break;
    auto best = detail::best_over_all_pairs(
        g, col_sums, row_cost,
        [&](NodeId i) {
          return std::span<const double>(F.col(i).data(), g.size());
        },
        index, cfg.quality, marks);
    std::string reason;
    best = detail::gain_checked(best, f, reason);
    if (!best) {
      trace.stop_reason = reason;
      break;
    }
    RoundRecord rec = detail::make_round(*best, round, f);
    apply_rewiring(g, best->i, best->j, best->k, round);
    sherman_morrison_update(F, best->i, best->j, best->k, best->prob);
    rec.ms = detail::elapsed_ms(start);
    trace.rounds.push_back(rec);
  }
  trace.dense_drift =
      (F - dense_fundamental(g, cfg.oracle_limit)).cwiseAbs().maxCoeff();
  trace.final_segregation = detail::segregation_summary(g, c, cfg);
  return trace;
}

namespace detail {

// Least exposed target available for edge (i, j): any non-neighbour for
// the unconstrained problem, a q-permissible candidate otherwise.
class TargetPicker {
 public:
  TargetPicker(const RecGraph& g, std::span<const double> row_cost,
               const RelevanceIndex* index, double q)
      : g_(g), row_cost_(row_cost), index_(index), q_(q), marks_(g.size()) {
    if (index_ == nullptr) {
      by_exposure_.resize(g.size());
      std::iota(by_exposure_.begin(), by_exposure_.end(), NodeId{0});
      std::sort(by_exposure_.begin(), by_exposure_.end(),
                [&](NodeId a, NodeId b) {
                  return row_cost[a] != row_cost[b] ? row_cost[a] < row_cost[b]
                                                    : a < b;
                });
    }
  }

  std::optional<NodeId> pick(NodeId i, NodeId j) {
    marks_.mark(g_, i);
    if (index_ == nullptr) {
      for (NodeId k : by_exposure_) {
        if (!marks_.excluded(k)) return k;
      }
      return std::nullopt;
    }
    PermissibilityScanner scan(*index_, g_, i, q_);
    return permissible_target(*index_, scan, marks_, row_cost_, i, j);
  }

 private:
  const RecGraph& g_;
  std::span<const double> row_cost_;
  const RelevanceIndex* index_;
  double q_;
  NeighbourMarks marks_;
  std::vector<NodeId> by_exposure_;
};

// Scores (i, j, k) exactly against the current vectors; nullopt unless it
// strictly reduces f.
inline std::optional<RewiringCandidate> gated(const TransitionMatrix& P,
                                              const ExposureState& st,
                                              double p, NodeId i, NodeId j,
                                              NodeId k) {
  auto cand = score_heuristic(st.col_sums, st.row_cost, p, i, j, k);
  if (!(cand.tau > 0.0)) return std::nullopt;
  complete_exact(cand, power_column(P, i, st.kappa));
  if (!is_gain(cand.delta, st.f_total)) return std::nullopt;
  return cand;
}

inline std::vector<NodeId> nodes_by_descending(std::span<const double> v) {
  std::vector<NodeId> ids(v.size());
  std::iota(ids.begin(), ids.end(), NodeId{0});
  std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
    return v[a] != v[b] ? v[a] > v[b] : a < b;
  });
  return ids;
}

}  // namespace detail

// BL1: uniformly random permissible rewiring by rejection sampling.
inline RunTrace baseline_random(RecGraph& g, const CostVector& c,
                                const RunConfig& cfg,
                                const RelevanceIndex* index = nullptr) {
  detail::check_quality(g, index, cfg.quality);
  std::mt19937_64 rng(cfg.seed);
  return detail::power_driver(
      Algorithm::kBL1, g, c, cfg,
      [&](const TransitionMatrix& P, const ExposureState& st, std::size_t,
          std::string& reason) -> std::optional<RewiringCandidate> {
        const std::size_t m = P.targets.size();
        if (m == 0) {
          reason = "graph has no edges";
          return std::nullopt;
        }
        std::uniform_int_distribution<std::size_t> edge_dist(0, m - 1);
        std::uniform_int_distribution<NodeId> node_dist(
            0, static_cast<NodeId>(g.size() - 1));
        for (std::size_t draw = 0; draw < cfg.bl1_max_draws; ++draw) {
          const std::size_t e = edge_dist(rng);
          const auto src = static_cast<NodeId>(
              std::upper_bound(P.offsets.begin(), P.offsets.end(), e) -
              P.offsets.begin() - 1);
          const NodeId j = P.targets[e];
          NodeId k;
          if (index != nullptr) {
            auto cands = index->candidates(src);
            if (cands.empty()) continue;
            std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
            k = cands[pick(rng)].target;
          } else {
            k = node_dist(rng);
          }
          if (k == src || g.has_edge(src, k)) continue;
          if (index != nullptr &&
              !q_permissible(*index, g, src, j, k, cfg.quality)) {
            continue;
          }
          if (auto cand = detail::gated(P, st, P.probs[e], src, j, k)) {
            return cand;
          }
        }
        reason = "rejection sampling found no permissible rewiring";
        return std::nullopt;
      });
}

// BL2: most exposed old target j first, then its most visited in-neighbour i,
// then the least exposed available k. Falls through to the next (i, j) pair
// in that order when a pair admits no improving rewiring.
inline RunTrace baseline_exposed_target(RecGraph& g, const CostVector& c,
                                        const RunConfig& cfg,
                                        const RelevanceIndex* index = nullptr) {
  detail::check_quality(g, index, cfg.quality);
  return detail::power_driver(
      Algorithm::kBL2, g, c, cfg,
      [&](const TransitionMatrix& P, const ExposureState& st, std::size_t,
          std::string& reason) -> std::optional<RewiringCandidate> {
        std::vector<std::vector<NodeId>> in(g.size());
        for (NodeId i = 0; i < g.size(); ++i) {
          for (const auto& e : g.out_edges(i)) in[e.target].push_back(i);
        }
        detail::TargetPicker picker(g, st.row_cost, index, cfg.quality);
        for (NodeId j : detail::nodes_by_descending(st.row_cost)) {
          auto& sources = in[j];
          std::sort(sources.begin(), sources.end(), [&](NodeId a, NodeId b) {
            return st.col_sums[a] != st.col_sums[b]
                       ? st.col_sums[a] > st.col_sums[b]
                       : a < b;
          });
          for (NodeId i : sources) {
            auto k = picker.pick(i, j);
            if (!k) continue;
            if (auto cand = detail::gated(P, st, *g.edge_prob(i, j), i, j, *k)) {
              return cand;
            }
          }
        }
        reason = "no improving rewiring";
        return std::nullopt;
      });
}

// BL3: most visited source i first, then its most exposed neighbour j, then
// the least exposed available k; same fall-through as BL2.
inline RunTrace baseline_visited_source(RecGraph& g, const CostVector& c,
                                        const RunConfig& cfg,
                                        const RelevanceIndex* index = nullptr) {
  detail::check_quality(g, index, cfg.quality);
  return detail::power_driver(
      Algorithm::kBL3, g, c, cfg,
      [&](const TransitionMatrix& P, const ExposureState& st, std::size_t,
          std::string& reason) -> std::optional<RewiringCandidate> {
        detail::TargetPicker picker(g, st.row_cost, index, cfg.quality);
        for (NodeId i : detail::nodes_by_descending(st.col_sums)) {
          std::vector<OutEdge> edges(g.out_edges(i).begin(),
                                     g.out_edges(i).end());
          std::sort(edges.begin(), edges.end(), [&](const auto& a, const auto& b) {
            return st.row_cost[a.target] != st.row_cost[b.target]
                       ? st.row_cost[a.target] > st.row_cost[b.target]
                       : a.target < b.target;
          });
          for (const auto& e : edges) {
            auto k = picker.pick(i, e.target);
            if (!k) continue;
            if (auto cand = detail::gated(P, st, e.prob, i, e.target, *k)) {
              return cand;
            }
          }
        }
        reason = "no improving rewiring";
        return std::nullopt;
      });
}

// BL4: the r largest initial delta_hat values, scored once on the input
// graph with the same candidate generation as the greedy algorithm. Each
// edge is rewired at most once; stale or non-improving candidates are
// skipped.
inline RunTrace baseline_initial_scores(RecGraph& g, const CostVector& c,
                                        const RunConfig& cfg,
                                        const RelevanceIndex* index = nullptr) {
  detail::check_quality(g, index, cfg.quality);
  std::vector<RewiringCandidate> ranked;
  std::size_t next = 0;
  std::vector<std::pair<NodeId, NodeId>> used;
  detail::NeighbourMarks marks(g.size());
  bool scored = false;
  return detail::power_driver(
      Algorithm::kBL4, g, c, cfg,
      [&](const TransitionMatrix& P, const ExposureState& st, std::size_t,
          std::string& reason) -> std::optional<RewiringCandidate> {
        if (!scored) {
          scored = true;
          const auto pool = detail::target_pool(
              st.row_cost, degree_stats(g).max_out_degree, cfg.prune_targets);
          for (NodeId i = 0; i < g.size(); ++i) {
            if (g.out_degree(i) == 0) continue;
            marks.mark(g, i);
            if (index != nullptr) {
              PermissibilityScanner scan(*index, g, i, cfg.quality);
              for (const auto& e : g.out_edges(i)) {
                auto k = detail::permissible_target(*index, scan, marks,
                                                    st.row_cost, i, e.target);
                if (!k) continue;
                auto cand = score_heuristic(st.col_sums, st.row_cost, e.prob,
                                            i, e.target, *k);
                if (cand.delta_hat > 0.0) ranked.push_back(cand);
              }
              continue;
            }
            for (const auto& e : g.out_edges(i)) {
              for (NodeId k : pool) {
                if (marks.excluded(k)) continue;
                auto cand = score_heuristic(st.col_sums, st.row_cost, e.prob,
                                            i, e.target, k);
                if (cand.delta_hat > 0.0) ranked.push_back(cand);
              }
            }
          }
          std::sort(ranked.begin(), ranked.end(), better_heuristic);
        }
        for (; next < ranked.size(); ++next) {
          const auto& cand = ranked[next];
          const std::pair<NodeId, NodeId> edge{cand.i, cand.j};
          if (std::find(used.begin(), used.end(), edge) != used.end()) continue;
          if (!g.has_edge(cand.i, cand.j) || g.has_edge(cand.i, cand.k)) {
            continue;
          }
          if (index != nullptr &&
              !q_permissible(*index, g, cand.i, cand.j, cand.k, cfg.quality)) {
            continue;
          }
          if (auto ok = detail::gated(P, st, cand.prob, cand.i, cand.j,
                                      cand.k)) {
            used.push_back(edge);
            ++next;
            return ok;
          }
        }
        reason = "initial candidates exhausted";
        return std::nullopt;
      });
}

// Dispatches on cfg.algorithm. Gamine runs the quality-constrained variant
// whenever a relevance index is supplied.
inline RunTrace run(RecGraph& g, const CostVector& c,
                    const RelevanceIndex* index, const RunConfig& cfg) {
  if (c.size() != g.size()) throw PreconditionError("cost vector size mismatch");
  switch (cfg.algorithm) {
    case Algorithm::kGamine:
      return index != nullptr ? gamine_qrem(g, c, *index, cfg)
                              : gamine_rem(g, c, cfg);
    case Algorithm::kExact: return exact_greedy(g, c, cfg, index);
    case Algorithm::kNaive: return naive_greedy(g, c, cfg, index);
    case Algorithm::kBL1: return baseline_random(g, c, cfg, index);
    case Algorithm::kBL2: return baseline_exposed_target(g, c, cfg, index);
    case Algorithm::kBL3: return baseline_visited_source(g, c, cfg, index);
    case Algorithm::kBL4: return baseline_initial_scores(g, c, cfg, index);
  }
  throw PreconditionError("unknown algorithm");
}

}  // namespace gamine
