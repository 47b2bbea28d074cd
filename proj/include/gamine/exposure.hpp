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

// Fundamental-matrix quantities of the absorbing walk, F = sum_t P^t.
//
// Everything here is a truncated series with kappa terms beyond P^0:
//   column sums   1^T F  ~ 1^T + 1^T P + ... + 1^T P^kappa
//   exposures     F c    ~ c + P c + ... + P^kappa c
//   single column F e_i  ~ e_i + P e_i + ... + P^kappa e_i
// Since every row of P sums to at most 1 - alpha, a row-side series misses
// at most (1 - alpha)^(kappa + 1) / alpha per entry.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "gamine/errors.hpp"
#include "gamine/graph.hpp"

namespace gamine {

// Compressed row snapshot of P, rebuilt once per scoring round.
struct TransitionMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> offsets;  // n + 1 entries
  std::vector<NodeId> targets;
  std::vector<double> probs;

  explicit TransitionMatrix(const RecGraph& g) : n(g.size()) {
    offsets.reserve(n + 1);
    offsets.push_back(0);
    for (NodeId i = 0; i < n; ++i) {
      for (const auto& e : g.out_edges(i)) {
        targets.push_back(e.target);
        probs.push_back(e.prob);
      }
      offsets.push_back(targets.size());
    }
  }

  // out = P * x
  void multiply(std::span<const double> x, std::span<double> out) const {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) {
        acc += probs[e] * x[targets[e]];
      }
      out[i] = acc;
    }
  }

  // out = x^T * P
  void multiply_transposed(std::span<const double> x,
                           std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) {
        out[targets[e]] += xi * probs[e];
      }
    }
  }
};

// Smallest kappa with (1 - alpha)^kappa / alpha <= eps.
inline std::size_t kappa_for(double alpha, double eps) {
  if (!(alpha > 0.0 && alpha <= 1.0) || !(eps > 0.0)) {
    throw PreconditionError("kappa_for needs alpha in (0, 1] and eps > 0");
  }
  if (alpha == 1.0) return 0;
  const auto bound = [&](double k) { return std::pow(1.0 - alpha, k) / alpha; };
  double k = std::ceil(std::log(eps * alpha) / std::log(1.0 - alpha));
  k = std::max(k, 0.0);
  while (k > 0.0 && bound(k - 1.0) <= eps) k -= 1.0;
  while (bound(k) > eps) k += 1.0;
  return static_cast<std::size_t>(k);
}

namespace detail {

// Sums start + A start + ... + A^kappa start, where step applies A.
template <typename Step>
std::vector<double> partial_series(std::vector<double> term, std::size_t kappa,
                                   Step step) {
  std::vector<double> sum = term;
  std::vector<double> next(term.size());
  for (std::size_t t = 0; t < kappa; ++t) {
    step(term, next);
    term.swap(next);
    for (std::size_t x = 0; x < sum.size(); ++x) sum[x] += term[x];
  }
  return sum;
}

}  // namespace detail

inline std::vector<double> power_col_sums(const TransitionMatrix& P,
                                          std::size_t kappa) {
  return detail::partial_series(
      std::vector<double>(P.n, 1.0), kappa,
      [&](const std::vector<double>& x, std::vector<double>& out) {
        P.multiply_transposed(x, out);
      });
}

inline std::vector<double> power_row_cost(const TransitionMatrix& P,
                                          const CostVector& c,
                                          std::size_t kappa) {
  if (c.size() != P.n) throw PreconditionError("cost vector size mismatch");
  return detail::partial_series(
      std::vector<double>(c.values().begin(), c.values().end()), kappa,
      [&](const std::vector<double>& x, std::vector<double>& out) {
        P.multiply(x, out);
      });
}

// Column F e_i: entry x is the expected number of visits to i from x.
inline std::vector<double> power_column(const TransitionMatrix& P, NodeId i,
                                        std::size_t kappa) {
  if (i >= P.n) throw PreconditionError("node id out of range");
  std::vector<double> start(P.n, 0.0);
  start[i] = 1.0;
  return detail::partial_series(
      std::move(start), kappa,
      [&](const std::vector<double>& x, std::vector<double>& out) {
        P.multiply(x, out);
      });
}

inline std::vector<double> power_col_sums(const RecGraph& g, std::size_t kappa) {
  return power_col_sums(TransitionMatrix(g), kappa);
}
inline std::vector<double> power_row_cost(const RecGraph& g,
                                          const CostVector& c,
                                          std::size_t kappa) {
  return power_row_cost(TransitionMatrix(g), c, kappa);
}
inline std::vector<double> power_column(const RecGraph& g, NodeId i,
                                        std::size_t kappa) {
  return power_column(TransitionMatrix(g), i, kappa);
}

struct ExposureState {
  std::vector<double> col_sums;  // ~ 1^T F
  std::vector<double> row_cost;  // ~ F c, per-node exposure
  double f_total = 0.0;          // 1^T F c
  std::size_t kappa = 0;
  double eps_bound = 0.0;        // (1 - alpha)^kappa / alpha
};

inline ExposureState exposure_total(const TransitionMatrix& P, double alpha,
                                    const CostVector& c, std::size_t kappa) {
  ExposureState s;
  s.kappa = kappa;
  s.eps_bound = std::pow(1.0 - alpha, static_cast<double>(kappa)) / alpha;
  s.col_sums = power_col_sums(P, kappa);
  s.row_cost = power_row_cost(P, c, kappa);
  for (double x : s.row_cost) s.f_total += x;
  return s;
}

inline ExposureState exposure_total(const RecGraph& g, const CostVector& c,
                                    std::size_t kappa) {
  return exposure_total(TransitionMatrix(g), g.alpha(), c, kappa);
}

struct SafePartition {
  std::vector<NodeId> safe;
  std::vector<NodeId> unsafe;
  std::vector<bool> is_safe;
  std::size_t lambda_plus = 0;  // max out-degree over unsafe nodes

  // Precondition for the submodularity guarantee: |S| >= lambda_plus.
  bool precondition_holds() const { return safe.size() >= lambda_plus; }
};

// Safe nodes cannot reach any node of positive cost. Decided structurally by
// reverse reachability from the positive-cost nodes.
inline SafePartition safe_partition(const RecGraph& g, const CostVector& c) {
  const std::size_t n = g.size();
  if (c.size() != n) throw PreconditionError("cost vector size mismatch");
  std::vector<std::vector<NodeId>> in(n);
  for (NodeId i = 0; i < n; ++i) {
    for (const auto& e : g.out_edges(i)) in[e.target].push_back(i);
  }
  std::vector<bool> unsafe(n, false);
  std::deque<NodeId> queue;
  for (NodeId j = 0; j < n; ++j) {
    if (c[j] > 0.0) {
      unsafe[j] = true;
      queue.push_back(j);
    }
  }
  while (!queue.empty()) {
    NodeId j = queue.front();
    queue.pop_front();
    for (NodeId i : in[j]) {
      if (!unsafe[i]) {
        unsafe[i] = true;
        queue.push_back(i);
      }
    }
  }
  SafePartition part;
  part.is_safe.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    part.is_safe[i] = !unsafe[i];
    if (unsafe[i]) {
      part.unsafe.push_back(i);
      part.lambda_plus = std::max(part.lambda_plus, g.out_degree(i));
    } else {
      part.safe.push_back(i);
    }
  }
  return part;
}

inline constexpr std::size_t kDefaultStepCap = 20;

struct Segregation {
  std::vector<NodeId> harmful;
  std::vector<double> steps;  // per harmful node, aligned with `harmful`
  double max = 0.0;
  double total = 0.0;
};

// Costs at or above the threshold become harmful (1), the rest benign (0).
inline std::vector<bool> binarize(const CostVector& c, double threshold) {
  std::vector<bool> harmful(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) harmful[i] = c[i] >= threshold;
  return harmful;
}

// Expected number of steps from each harmful node until the first visit to a
// benign node, on the walk without absorption (probabilities p_ij / (1 - a))
// and with benign nodes absorbing. Walks are truncated at step_cap steps, so
// each value is E[min(T, step_cap)]: exactly step_cap when no benign node is
// reachable.
inline Segregation segregation(const RecGraph& g, const std::vector<bool>& harmful,
                               std::size_t step_cap = kDefaultStepCap) {
  const std::size_t n = g.size();
  if (harmful.size() != n) throw PreconditionError("label vector size mismatch");
  if (std::all_of(harmful.begin(), harmful.end(), [](bool h) { return h; })) {
    throw PreconditionError("segregation needs at least one benign node");
  }
  Segregation seg;
  std::vector<std::size_t> slot(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    if (harmful[i]) {
      slot[i] = seg.harmful.size();
      seg.harmful.push_back(i);
    }
  }
  const std::size_t h = seg.harmful.size();
  // h_{s+1} = 1 + Q_HH h_s, with Q the renormalized walk restricted to H.
  std::vector<double> cur(h, 0.0), next(h, 0.0);
  for (std::size_t step = 0; step < step_cap; ++step) {
    for (std::size_t a = 0; a < h; ++a) {
      const NodeId i = seg.harmful[a];
      double mass = 0.0;
      double acc = 0.0;
      for (const auto& e : g.out_edges(i)) mass += e.prob;
      if (mass == 0.0) {
        next[a] = cur[a] + 1.0;  // stuck: never reaches a benign node
        continue;
      }
      for (const auto& e : g.out_edges(i)) {
        if (harmful[e.target]) acc += (e.prob / mass) * cur[slot[e.target]];
      }
      next[a] = 1.0 + acc;
    }
    cur.swap(next);
  }
  seg.steps = std::move(cur);
  for (double s : seg.steps) {
    seg.max = std::max(seg.max, s);
    seg.total += s;
  }
  return seg;
}

}  // namespace gamine
