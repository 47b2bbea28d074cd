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

// Per-rewiring timing of the optimizers on SU graphs of growing size.

#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gamine/datagen.hpp"
#include "gamine/exposure.hpp"
#include "gamine/optimizers.hpp"

namespace gamine {

struct BenchRow {
  std::size_t n = 0;
  std::size_t m = 0;
  Algorithm algorithm = Algorithm::kGamine;
  std::size_t rounds = 0;
  double seconds_per_rewiring = 0.0;
  double precompute_seconds = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  // Least-squares slope of log(seconds per rewiring) against log(m) for one
  // algorithm; nullopt with fewer than two sizes.
  std::optional<double> slope(Algorithm algo) const {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& r : rows) {
      if (r.algorithm != algo || r.seconds_per_rewiring <= 0.0) continue;
      xs.push_back(std::log(static_cast<double>(r.m)));
      ys.push_back(std::log(r.seconds_per_rewiring));
    }
    if (xs.size() < 2) return std::nullopt;
    const double k = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t a = 0; a < xs.size(); ++a) {
      sx += xs[a];
      sy += ys[a];
      sxx += xs[a] * xs[a];
      sxy += xs[a] * ys[a];
    }
    const double denom = k * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    return (k * sxy - sx * sy) / denom;
  }
};

struct BenchConfig {
  std::vector<std::size_t> sizes = {1000, 10000, 100000};
  std::size_t d = 5;
  double alpha = 0.05;
  double beta = 0.5;
  std::size_t rounds = 10;
  std::uint64_t seed = 0;
  std::vector<Algorithm> algorithms = {Algorithm::kGamine};
  RunConfig run;  // budget and algorithm are overwritten per row
};

inline BenchReport run_bench(const BenchConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  BenchReport report;
  for (std::size_t n : cfg.sizes) {
    SyntheticConfig gen;
    gen.n = n;
    gen.d = cfg.d;
    gen.alpha = cfg.alpha;
    gen.beta = cfg.beta;
    gen.seed = cfg.seed;
    const CostVector costs = gen_costs(gen);
    const RecGraph base = gen_graph(gen, costs);
    for (Algorithm algo : cfg.algorithms) {
      if ((algo == Algorithm::kExact || algo == Algorithm::kNaive) &&
          n > cfg.run.oracle_limit) {
        continue;
      }
      RunConfig rc = cfg.run;
      rc.algorithm = algo;
      rc.budget = cfg.rounds;
      rc.track_segregation = false;

      // Warm precompute: the exposure vectors of the input graph.
      const auto t0 = Clock::now();
      const auto warm = exposure_total(base, costs, rc.kappa_for_graph(base));
      const double pre =
          std::chrono::duration<double>(Clock::now() - t0).count();
      (void)warm;

      RecGraph g = base;
      const auto trace = run(g, costs, nullptr, rc);
      BenchRow row;
      row.n = n;
      row.m = degree_stats(base).edge_count;
      row.algorithm = algo;
      row.rounds = trace.rounds.size();
      row.precompute_seconds = pre;
      double total_ms = 0.0;
      for (const auto& r : trace.rounds) total_ms += r.ms;
      row.seconds_per_rewiring =
          row.rounds > 0 ? total_ms / 1000.0 / static_cast<double>(row.rounds)
                         : 0.0;
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace gamine
