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

// Relevance rankings and the nDCG quality of a node's recommendations.
//
//   DCG(i)  = sum_{j in N+(i)} R[i,j] / log2(1 + rank_i(j))
//   iDCG(i) = same sum over the deg(i) top-ranked targets of i
//   nDCG(i) = DCG(i) / iDCG(i)
//
// The discount uses the global relevance rank of j for i, not the slot j
// occupies in i's recommendation list, so nDCG depends only on the set of
// neighbours.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gamine/errors.hpp"
#include "gamine/graph.hpp"

namespace gamine {

inline constexpr std::size_t kDefaultCandidateCount = 100;

struct RankedTarget {
  NodeId target = 0;
  double score = 0.0;
  std::uint32_t rank = 0;  // 1-based
};

class RelevanceIndex {
 public:
  RelevanceIndex() = default;
  RelevanceIndex(std::size_t n, std::size_t k_cand = kDefaultCandidateCount)
      : k_cand_(k_cand), lists_(n), lookup_(n) {}

  std::size_t size() const noexcept { return lists_.size(); }
  std::size_t k_cand() const noexcept { return k_cand_; }

  // Replaces i's ranked list. Targets must be given in rank order (rank 1
  // first), with non-negative scores and no repeats.
  void set_ranking(NodeId i, std::vector<RankedTarget> ranked) {
    if (i >= size()) throw PreconditionError("source id out of range");
    std::vector<std::pair<NodeId, std::uint32_t>> lookup;
    lookup.reserve(ranked.size());
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      auto& t = ranked[r];
      if (t.rank != r + 1) {
        throw ValidationError("ranks of source " + std::to_string(i) +
                              " are not contiguous from 1");
      }
      if (!(t.score >= 0.0)) {
        throw ValidationError("negative relevance score at source " +
                              std::to_string(i));
      }
      if (t.target >= size() || t.target == i) {
        throw ValidationError("invalid relevance target at source " +
                              std::to_string(i));
      }
      lookup.emplace_back(t.target, static_cast<std::uint32_t>(r));
    }
    std::sort(lookup.begin(), lookup.end());
    for (std::size_t a = 1; a < lookup.size(); ++a) {
      if (lookup[a].first == lookup[a - 1].first) {
        throw ValidationError("target listed twice for source " +
                              std::to_string(i));
      }
    }
    lists_[i] = std::move(ranked);
    lookup_[i] = std::move(lookup);
  }

  std::span<const RankedTarget> ranking(NodeId i) const { return lists_[i]; }

  // The top k_cand targets: potential rewiring targets for i's edges.
  std::span<const RankedTarget> candidates(NodeId i) const {
    std::span<const RankedTarget> all = lists_[i];
    return all.first(std::min(all.size(), k_cand_));
  }

  const RankedTarget* find(NodeId i, NodeId j) const {
    const auto& lk = lookup_[i];
    auto it = std::lower_bound(
        lk.begin(), lk.end(), j,
        [](const auto& entry, NodeId key) { return entry.first < key; });
    if (it == lk.end() || it->first != j) return nullptr;
    return &lists_[i][it->second];
  }

  bool is_candidate(NodeId i, NodeId j) const {
    const auto* t = find(i, j);
    return t != nullptr && t->rank <= k_cand_;
  }

  // Fails fast unless every current out-neighbour of every node is scored
  // and every ranking covers at least the node's out-degree.
  void validate_against(const RecGraph& g) const {
    if (g.size() != size()) {
      throw ValidationError("relevance index covers " + std::to_string(size()) +
                            " nodes, graph has " + std::to_string(g.size()));
    }
    for (NodeId i = 0; i < g.size(); ++i) {
      if (lists_[i].size() < g.out_degree(i)) {
        throw ValidationError("ranking of source " + g.name(i) +
                              " is shorter than its out-degree");
      }
      for (const auto& e : g.out_edges(i)) {
        if (find(i, e.target) == nullptr) {
          throw ValidationError("neighbour " + g.name(e.target) +
                                " of source " + g.name(i) +
                                " has no relevance score");
        }
      }
    }
  }

 private:
  std::size_t k_cand_ = kDefaultCandidateCount;
  std::vector<std::vector<RankedTarget>> lists_;
  std::vector<std::vector<std::pair<NodeId, std::uint32_t>>> lookup_;
};

inline double discounted_gain(const RankedTarget& t) {
  return t.score / std::log2(1.0 + static_cast<double>(t.rank));
}

// Ideal DCG for a node recommending `degree` items.
inline double ideal_dcg(const RelevanceIndex& index, NodeId i,
                        std::size_t degree) {
  auto ranked = index.ranking(i);
  double sum = 0.0;
  for (std::size_t r = 0; r < std::min(degree, ranked.size()); ++r) {
    sum += discounted_gain(ranked[r]);
  }
  return sum;
}

namespace detail {

// DCG over a target set, summed in rank order so the value is independent
// of storage order and matches ideal_dcg bit-for-bit on the ideal set.
inline double dcg_of(std::vector<const RankedTarget*>& targets) {
  std::sort(targets.begin(), targets.end(),
            [](const auto* a, const auto* b) { return a->rank < b->rank; });
  double sum = 0.0;
  for (const auto* t : targets) sum += discounted_gain(*t);
  return sum;
}

inline const RankedTarget& scored(const RelevanceIndex& index, const RecGraph& g,
                                  NodeId i, NodeId j) {
  const auto* t = index.find(i, j);
  if (t == nullptr) {
    throw ValidationError("neighbour " + g.name(j) + " of " + g.name(i) +
                          " has no relevance score");
  }
  return *t;
}

inline double ndcg_ratio(double dcg, double idcg) {
  return idcg > 0.0 ? dcg / idcg : 1.0;
}

}  // namespace detail

inline double ndcg(const RelevanceIndex& index, const RecGraph& g, NodeId i) {
  if (g.out_degree(i) == 0) return 1.0;
  std::vector<const RankedTarget*> targets;
  for (const auto& e : g.out_edges(i)) {
    targets.push_back(&detail::scored(index, g, i, e.target));
  }
  const double dcg = detail::dcg_of(targets);
  return detail::ndcg_ratio(dcg, ideal_dcg(index, i, g.out_degree(i)));
}

// nDCG of i after k takes over j's slot.
inline double ndcg_after_rewiring(const RelevanceIndex& index, const RecGraph& g,
                                  NodeId i, NodeId j, NodeId k) {
  const auto* tk = index.find(i, k);
  if (tk == nullptr) return 0.0;
  std::vector<const RankedTarget*> targets;
  for (const auto& e : g.out_edges(i)) {
    targets.push_back(e.target == j ? tk
                                    : &detail::scored(index, g, i, e.target));
  }
  const double dcg = detail::dcg_of(targets);
  return detail::ndcg_ratio(dcg, ideal_dcg(index, i, g.out_degree(i)));
}

// True iff (i, j, k) is a structurally valid rewiring to one of i's
// candidates that keeps nDCG(i) >= q.
inline bool q_permissible(const RelevanceIndex& index, const RecGraph& g,
                          NodeId i, NodeId j, NodeId k, double q) {
  if (!g.has_edge(i, j)) {
    throw PreconditionError("edge " + std::to_string(i) + "->" +
                            std::to_string(j) + " does not exist");
  }
  if (k == i || k >= g.size() || g.has_edge(i, k)) return false;
  if (!index.is_candidate(i, k)) return false;
  return ndcg_after_rewiring(index, g, i, j, k) >= q;
}

// Per-source helper for scanning many (j, k) pairs of one source: uses the
// incremental DCG change and falls back to the exact evaluation near q.
class PermissibilityScanner {
 public:
  PermissibilityScanner(const RelevanceIndex& index, const RecGraph& g,
                        NodeId i, double q)
      : index_(index), g_(g), i_(i), q_(q) {
    const std::size_t deg = g.out_degree(i);
    idcg_ = ideal_dcg(index, i, deg);
    if (deg > 0) {
      std::vector<const RankedTarget*> targets;
      for (const auto& e : g.out_edges(i)) {
        targets.push_back(&detail::scored(index, g, i, e.target));
      }
      dcg_ = detail::dcg_of(targets);
    }
  }

  // k must be a candidate of i that is neither i nor a current neighbour.
  bool permits(NodeId j, const RankedTarget& k) const {
    if (q_ <= 0.0) return true;
    const auto& tj = detail::scored(index_, g_, i_, j);
    const double approx = detail::ndcg_ratio(
        dcg_ - discounted_gain(tj) + discounted_gain(k), idcg_);
    if (approx >= q_ + 1e-9) return true;
    if (approx < q_ - 1e-9) return false;
    return ndcg_after_rewiring(index_, g_, i_, j, k.target) >= q_;
  }

 private:
  const RelevanceIndex& index_;
  const RecGraph& g_;
  NodeId i_;
  double q_;
  double idcg_ = 0.0;
  double dcg_ = 0.0;
};

// Permissible target for edge (i, j) with the smallest exposure; ties go to
// the more relevant target, then to the lower id.
inline std::optional<NodeId> best_permissible_target(
    const RelevanceIndex& index, const RecGraph& g,
    std::span<const double> row_cost, NodeId i, NodeId j, double q) {
  if (!g.has_edge(i, j)) {
    throw PreconditionError("edge " + std::to_string(i) + "->" +
                            std::to_string(j) + " does not exist");
  }
  PermissibilityScanner scan(index, g, i, q);
  const RankedTarget* best = nullptr;
  for (const auto& t : index.candidates(i)) {
    if (t.target == i || g.has_edge(i, t.target)) continue;
    if (!scan.permits(j, t)) continue;
    if (best == nullptr || row_cost[t.target] < row_cost[best->target] ||
        (row_cost[t.target] == row_cost[best->target] &&
         (t.score > best->score ||
          (t.score == best->score && t.target < best->target)))) {
      best = &t;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->target;
}

inline double min_ndcg(const RelevanceIndex& index, const RecGraph& g) {
  double m = 1.0;
  for (NodeId i = 0; i < g.size(); ++i) m = std::min(m, ndcg(index, g, i));
  return m;
}

}  // namespace gamine
