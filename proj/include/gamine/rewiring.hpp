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

// Closed-form effect of a single graph edit on the total exposure.
//
// An edit of row i is a rank-one change P' = P - u v^T with u = p_ij e_i, so
// by Sherman-Morrison
//   F' = F - (F u)(v^T F) / (1 + v^T F u)
// and the exposure drops by
//   delta = sigma * tau / rho,  sigma = 1^T F u,  tau = v^T F c,
//                               rho   = 1 + v^T F u.
// For a rewiring (i, j, k), v = e_j - e_k; sigma and rho are always positive,
// so the edit helps exactly when tau > 0.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gamine/errors.hpp"
#include "gamine/graph.hpp"

namespace gamine {

struct RewiringCandidate {
  NodeId i = 0;
  NodeId j = 0;
  NodeId k = 0;
  double prob = 0.0;       // p_ij
  double sigma = 0.0;      // 1^T F u
  double tau = 0.0;        // v^T F c
  double rho = 1.0;        // 1 + v^T F u
  double delta = 0.0;      // sigma * tau / rho
  double delta_hat = 0.0;  // sigma * tau
  bool exact = false;      // rho and delta were evaluated
};

namespace detail {

inline double checked_prob(const RecGraph& g, NodeId i, NodeId j) {
  auto p = g.edge_prob(i, j);
  if (!p) {
    throw PreconditionError("edge " + std::to_string(i) + "->" +
                            std::to_string(j) + " does not exist");
  }
  return *p;
}

inline void check_rewiring(const RecGraph& g, NodeId i, NodeId j, NodeId k) {
  if (i >= g.size() || j >= g.size() || k >= g.size()) {
    throw PreconditionError("node id out of range");
  }
  if (k == i) throw PreconditionError("rewiring target equals source");
  if (!g.has_edge(i, j)) {
    throw PreconditionError("edge " + std::to_string(i) + "->" +
                            std::to_string(j) + " does not exist");
  }
  if (g.has_edge(i, k)) {
    throw PreconditionError("edge " + std::to_string(i) + "->" +
                            std::to_string(k) + " already exists");
  }
}

}  // namespace detail

// Constant-time heuristic score delta_hat = sigma * tau; rho is left at 1.
inline RewiringCandidate score_heuristic(std::span<const double> col_sums,
                                         std::span<const double> row_cost,
                                         double p_ij, NodeId i, NodeId j,
                                         NodeId k) {
  RewiringCandidate c;
  c.i = i;
  c.j = j;
  c.k = k;
  c.prob = p_ij;
  c.sigma = p_ij * col_sums[i];
  c.tau = row_cost[j] - row_cost[k];
  c.delta_hat = c.sigma * c.tau;
  return c;
}

// Fills rho and delta of a heuristic candidate from the column F e_i.
inline void complete_exact(RewiringCandidate& c,
                           std::span<const double> column_i) {
  c.rho = 1.0 + c.prob * (column_i[c.j] - column_i[c.k]);
  c.delta = c.delta_hat / c.rho;
  c.exact = true;
}

inline RewiringCandidate score_exact(const RecGraph& g,
                                     std::span<const double> col_sums,
                                     std::span<const double> row_cost,
                                     std::span<const double> column_i, NodeId i,
                                     NodeId j, NodeId k) {
  detail::check_rewiring(g, i, j, k);
  auto c = score_heuristic(col_sums, row_cost, detail::checked_prob(g, i, j),
                           i, j, k);
  complete_exact(c, column_i);
  return c;
}

// In-place Sherman-Morrison update of an exact F for the rewiring (i, j, k).
// Returns rho.
inline double sherman_morrison_update(Eigen::MatrixXd& F, NodeId i, NodeId j,
                                      NodeId k, double p_ij) {
  const double rho = 1.0 + p_ij * (F(j, i) - F(k, i));
  if (std::abs(rho) < 1e-12) {
    throw std::logic_error("singular Sherman-Morrison update (rho ~ 0)");
  }
  const Eigen::VectorXd Fu = p_ij * F.col(i);
  const Eigen::RowVectorXd vF = F.row(j) - F.row(k);
  F.noalias() -= (Fu * vF) / rho;
  return rho;
}

// Scores for the two other edit kinds. They share sigma with rewirings but
// use an averaged v; for insertions rho may be non-positive, in which case
// `rankable` is false and the candidate must not be ranked.
struct EditScore {
  NodeId i = 0;
  NodeId j = 0;
  double prob = 0.0;
  double sigma = 0.0;
  double tau = 0.0;
  double rho = 1.0;
  double delta = 0.0;
  bool rankable = true;
};

// Deletion of (i, j) with even redistribution:
// v = e_j - 1/(deg - 1) * sum_{k in N+(i) \ j} e_k.
inline EditScore score_deletion(const RecGraph& g,
                                std::span<const double> col_sums,
                                std::span<const double> row_cost,
                                std::span<const double> column_i, NodeId i,
                                NodeId j) {
  const double p = detail::checked_prob(g, i, j);
  const std::size_t deg = g.out_degree(i);
  if (deg < 2) {
    throw PreconditionError("deletion needs out-degree > 1 at " +
                            std::to_string(i));
  }
  double mean_cost = 0.0;
  double mean_col = 0.0;
  for (const auto& e : g.out_edges(i)) {
    if (e.target == j) continue;
    mean_cost += row_cost[e.target];
    mean_col += column_i[e.target];
  }
  mean_cost /= static_cast<double>(deg - 1);
  mean_col /= static_cast<double>(deg - 1);
  EditScore s;
  s.i = i;
  s.j = j;
  s.prob = p;
  s.sigma = p * col_sums[i];
  s.tau = row_cost[j] - mean_cost;
  s.rho = 1.0 + p * (column_i[j] - mean_col);
  s.delta = s.sigma * s.tau / s.rho;
  return s;
}

// Insertion of (i, j) with probability p taken evenly from i's edges:
// v = -e_j + 1/deg * sum_{k in N+(i)} e_k.
inline EditScore score_insertion(const RecGraph& g,
                                 std::span<const double> col_sums,
                                 std::span<const double> row_cost,
                                 std::span<const double> column_i, NodeId i,
                                 NodeId j, double p) {
  if (i >= g.size() || j >= g.size()) {
    throw PreconditionError("node id out of range");
  }
  if (i == j) throw PreconditionError("insertion would create a self-loop");
  if (g.has_edge(i, j)) {
    throw PreconditionError("edge " + std::to_string(i) + "->" +
                            std::to_string(j) + " already exists");
  }
  const std::size_t deg = g.out_degree(i);
  if (deg == 0) {
    throw PreconditionError("insertion needs existing out-edges at " +
                            std::to_string(i));
  }
  for (const auto& e : g.out_edges(i)) {
    if (e.prob - p / static_cast<double>(deg) <= 0.0) {
      throw PreconditionError("insertion probability too large");
    }
  }
  double mean_cost = 0.0;
  double mean_col = 0.0;
  for (const auto& e : g.out_edges(i)) {
    mean_cost += row_cost[e.target];
    mean_col += column_i[e.target];
  }
  mean_cost /= static_cast<double>(deg);
  mean_col /= static_cast<double>(deg);
  EditScore s;
  s.i = i;
  s.j = j;
  s.prob = p;
  s.sigma = p * col_sums[i];
  s.tau = mean_cost - row_cost[j];
  s.rho = 1.0 + p * (mean_col - column_i[j]);
  s.rankable = s.rho > 0.0;
  s.delta = s.rankable ? s.sigma * s.tau / s.rho : 0.0;
  return s;
}

}  // namespace gamine
