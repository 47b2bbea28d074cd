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

// Recommendation graph with absorbing random-walk transition probabilities.
//
// Every node i carries an ordered list of out-edges (j, p_ij). The order is
// the recommendation rank order; a rewiring (i, j, k) puts k into the slot
// previously held by j. For every node with at least one out-edge the
// probabilities sum to 1 - alpha, the remaining mass being absorption.

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

namespace gamine {

using NodeId = std::uint32_t;

// Row-sum tolerance for freshly loaded or generated graphs.
inline constexpr double kLoadRowSumTolerance = 1e-12;
// Row-sum tolerance after long edit sequences (accumulated rounding).
inline constexpr double kEditRowSumTolerance = 1e-9;

struct OutEdge {
  NodeId target;
  double prob;

  friend bool operator==(const OutEdge&, const OutEdge&) = default;
};

class RecGraph {
 public:
  RecGraph() = default;

  RecGraph(std::size_t n, double alpha) : alpha_(alpha), out_(n) {
    if (n == 0) throw ValidationError("graph must have at least one node");
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      throw ValidationError("alpha must lie in (0, 1], got " +
                            std::to_string(alpha));
    }
  }

  std::size_t size() const noexcept { return out_.size(); }
  double alpha() const noexcept { return alpha_; }

  std::span<const OutEdge> out_edges(NodeId i) const { return out_[i]; }
  std::size_t out_degree(NodeId i) const { return out_[i].size(); }

  // Position of target j in i's recommendation sequence.
  std::optional<std::size_t> slot_of(NodeId i, NodeId j) const {
    const auto& row = out_[i];
    for (std::size_t s = 0; s < row.size(); ++s) {
      if (row[s].target == j) return s;
    }
    return std::nullopt;
  }

  bool has_edge(NodeId i, NodeId j) const { return slot_of(i, j).has_value(); }

  std::optional<double> edge_prob(NodeId i, NodeId j) const {
    if (auto s = slot_of(i, j)) return out_[i][*s].prob;
    return std::nullopt;
  }

  // Appends an edge at the end of i's recommendation sequence. Structural
  // checks only; row sums are checked by validate().
  void add_edge(NodeId i, NodeId j, double p) {
    check_node(i);
    check_node(j);
    if (i == j) {
      throw PreconditionError("self-loop " + std::to_string(i) + "->" +
                              std::to_string(j));
    }
    if (has_edge(i, j)) {
      throw PreconditionError("duplicate edge " + std::to_string(i) + "->" +
                              std::to_string(j));
    }
    out_[i].push_back({j, p});
  }

  // Throws ValidationError on the first broken invariant.
  void validate(double row_tol = kLoadRowSumTolerance) const {
    const double budget = 1.0 - alpha_;
    for (NodeId i = 0; i < size(); ++i) {
      if (out_[i].empty()) continue;
      double sum = 0.0;
      for (const auto& e : out_[i]) {
        if (e.target >= size()) {
          throw ValidationError("edge target out of range at node " +
                                std::to_string(i));
        }
        if (e.target == i) {
          throw ValidationError("self-loop at node " + std::to_string(i));
        }
        if (!(e.prob > 0.0 && e.prob <= budget + row_tol)) {
          throw ValidationError("probability out of (0, 1 - alpha] on edge " +
                                std::to_string(i) + "->" +
                                std::to_string(e.target));
        }
        sum += e.prob;
      }
      if (std::abs(sum - budget) > row_tol) {
        throw ValidationError("out-probabilities of node " + std::to_string(i) +
                              " sum to " + std::to_string(sum) +
                              ", expected 1 - alpha = " +
                              std::to_string(budget));
      }
      for (std::size_t a = 0; a < out_[i].size(); ++a) {
        for (std::size_t b = a + 1; b < out_[i].size(); ++b) {
          if (out_[i][a].target == out_[i][b].target) {
            throw ValidationError("duplicate edge at node " +
                                  std::to_string(i));
          }
        }
      }
    }
  }

  // External node labels; empty means labels are the decimal ids.
  const std::vector<std::string>& names() const noexcept { return names_; }
  void set_names(std::vector<std::string> names) {
    if (!names.empty() && names.size() != size()) {
      throw ValidationError("name table size does not match node count");
    }
    names_ = std::move(names);
  }
  std::string name(NodeId i) const {
    return names_.empty() ? std::to_string(i) : names_[i];
  }

  friend bool operator==(const RecGraph& a, const RecGraph& b) {
    return a.alpha_ == b.alpha_ && a.out_ == b.out_;
  }

 private:
  friend struct GraphEditor;

  void check_node(NodeId i) const {
    if (i >= size()) {
      throw PreconditionError("node id " + std::to_string(i) +
                              " out of range");
    }
  }

  double alpha_ = 1.0;
  std::vector<std::vector<OutEdge>> out_;
  std::vector<std::string> names_;
};

// Per-node harm costs in [0, 1].
class CostVector {
 public:
  CostVector() = default;
  explicit CostVector(std::vector<double> costs) : costs_(std::move(costs)) {
    for (std::size_t i = 0; i < costs_.size(); ++i) {
      if (!(costs_[i] >= 0.0 && costs_[i] <= 1.0)) {
        throw ValidationError("cost of node " + std::to_string(i) +
                              " outside [0, 1]");
      }
    }
  }
  static CostVector zeros(std::size_t n) {
    return CostVector(std::vector<double>(n, 0.0));
  }

  std::size_t size() const noexcept { return costs_.size(); }
  double operator[](std::size_t i) const { return costs_[i]; }
  std::span<const double> values() const noexcept { return costs_; }

 private:
  std::vector<double> costs_;
};

enum class EditKind { kRewiring, kDeletion, kInsertion };

inline const char* to_string(EditKind kind) {
  switch (kind) {
    case EditKind::kRewiring: return "rewiring";
    case EditKind::kDeletion: return "deletion";
    case EditKind::kInsertion: return "insertion";
  }
  return "unknown";
}

struct EditRecord {
  EditKind kind = EditKind::kRewiring;
  NodeId i = 0;
  NodeId j = 0;
  std::optional<NodeId> k;        // rewiring target
  std::optional<double> prob;     // probability moved or inserted
  std::size_t round = 0;
};

struct DegreeStats {
  std::size_t max_out_degree = 0;
  std::size_t edge_count = 0;
};

inline DegreeStats degree_stats(const RecGraph& g) {
  DegreeStats s;
  for (NodeId i = 0; i < g.size(); ++i) {
    s.max_out_degree = std::max(s.max_out_degree, g.out_degree(i));
    s.edge_count += g.out_degree(i);
  }
  return s;
}

// Mutation access for the edit operations below; keeps RecGraph's storage
// private to everything else.
struct GraphEditor {
  static std::vector<OutEdge>& row(RecGraph& g, NodeId i) { return g.out_[i]; }
  static void check(const RecGraph& g, NodeId i) { g.check_node(i); }
};

// Replaces edge (i, j) by (i, k); k inherits j's slot and probability.
inline EditRecord apply_rewiring(RecGraph& g, NodeId i, NodeId j, NodeId k,
                                 std::size_t round = 0) {
  GraphEditor::check(g, i);
  GraphEditor::check(g, j);
  GraphEditor::check(g, k);
  if (k == i) {
    throw PreconditionError("rewiring would create self-loop at " +
                            std::to_string(i));
  }
  auto slot = g.slot_of(i, j);
  if (!slot) {
    throw PreconditionError("edge " + std::to_string(i) + "->" +
                            std::to_string(j) + " does not exist");
  }
  if (g.has_edge(i, k)) {
    throw PreconditionError("edge " + std::to_string(i) + "->" +
                            std::to_string(k) + " already exists");
  }
  auto& row = GraphEditor::row(g, i);
  row[*slot].target = k;
  return {EditKind::kRewiring, i, j, k, row[*slot].prob, round};
}

// Removes (i, j) and spreads p_ij evenly over i's remaining out-edges.
inline EditRecord apply_deletion(RecGraph& g, NodeId i, NodeId j,
                                 std::size_t round = 0) {
  GraphEditor::check(g, i);
  auto slot = g.slot_of(i, j);
  if (!slot) {
    throw PreconditionError("edge " + std::to_string(i) + "->" +
                            std::to_string(j) + " does not exist");
  }
  if (g.out_degree(i) < 2) {
    throw PreconditionError("deleting the only out-edge of " +
                            std::to_string(i) +
                            " would create an absorbing state");
  }
  auto& row = GraphEditor::row(g, i);
  const double freed = row[*slot].prob;
  row.erase(row.begin() + static_cast<std::ptrdiff_t>(*slot));
  const double share = freed / static_cast<double>(row.size());
  for (auto& e : row) e.prob += share;
  return {EditKind::kDeletion, i, j, std::nullopt, freed, round};
}

// Adds (i, j) with probability p, subtracting p / deg(i) from every existing
// out-edge of i. The new edge is appended as the last recommendation.
inline EditRecord apply_insertion(RecGraph& g, NodeId i, NodeId j, double p,
                                  std::size_t round = 0) {
  GraphEditor::check(g, i);
  GraphEditor::check(g, j);
  if (i == j) {
    throw PreconditionError("insertion would create self-loop at " +
                            std::to_string(i));
  }
  if (g.has_edge(i, j)) {
    throw PreconditionError("edge " + std::to_string(i) + "->" +
                            std::to_string(j) + " already exists");
  }
  if (g.out_degree(i) == 0) {
    throw PreconditionError("insertion needs existing out-edges at " +
                            std::to_string(i) + " to take mass from");
  }
  if (!(p > 0.0 && p <= 1.0 - g.alpha())) {
    throw PreconditionError("insertion probability outside (0, 1 - alpha]");
  }
  auto& row = GraphEditor::row(g, i);
  const double take = p / static_cast<double>(row.size());
  for (const auto& e : row) {
    if (e.prob - take <= 0.0) {
      throw PreconditionError("insertion probability too large: edge " +
                              std::to_string(i) + "->" +
                              std::to_string(e.target) +
                              " would drop to a non-positive probability");
    }
  }
  for (auto& e : row) e.prob -= take;
  row.push_back({j, p});
  return {EditKind::kInsertion, i, j, std::nullopt, p, round};
}

}  // namespace gamine
