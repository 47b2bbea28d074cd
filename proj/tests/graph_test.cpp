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

#include "gamine/graph.hpp"

#include <random>

#include <gtest/gtest.h>

#include "gamine/datagen.hpp"
#include "oracle.hpp"

namespace gamine {
namespace {

double row_sum(const RecGraph& g, NodeId i) {
  double s = 0.0;
  for (const auto& e : g.out_edges(i)) s += e.prob;
  return s;
}

TEST(RecGraphTest, RejectsBadAlpha) {
  EXPECT_THROW(RecGraph(3, 0.0), ValidationError);
  EXPECT_THROW(RecGraph(3, 1.5), ValidationError);
  EXPECT_NO_THROW(RecGraph(3, 1.0));
}

TEST(RecGraphTest, RejectsSelfLoopsDuplicatesAndRange) {
  RecGraph g(3, 0.5);
  EXPECT_THROW(g.add_edge(0, 0, 0.5), PreconditionError);
  g.add_edge(0, 1, 0.25);
  EXPECT_THROW(g.add_edge(0, 1, 0.25), PreconditionError);
  EXPECT_THROW(g.add_edge(0, 3, 0.25), PreconditionError);
}

TEST(RecGraphTest, ValidateChecksRowSums) {
  RecGraph g(2, 0.5);
  g.add_edge(0, 1, 0.4);
  EXPECT_THROW(g.validate(), ValidationError);
  RecGraph ok(2, 0.5);
  ok.add_edge(0, 1, 0.5);
  EXPECT_NO_THROW(ok.validate());
}

TEST(RecGraphTest, NamesDefaultToIds) {
  RecGraph g(2, 0.5);
  EXPECT_EQ(g.name(1), "1");
  g.set_names({"a", "b"});
  EXPECT_EQ(g.name(1), "b");
  EXPECT_THROW(g.set_names({"a"}), ValidationError);
}

TEST(CostVectorTest, RejectsOutOfRange) {
  EXPECT_THROW(CostVector({0.0, 1.5}), ValidationError);
  EXPECT_THROW(CostVector({-0.1}), ValidationError);
  EXPECT_EQ(CostVector::zeros(4).size(), 4u);
}

TEST(DegreeStatsTest, SmallCases) {
  RecGraph cycle(3, 0.5);
  cycle.add_edge(0, 1, 0.5);
  cycle.add_edge(1, 2, 0.5);
  cycle.add_edge(2, 0, 0.5);
  auto s = degree_stats(cycle);
  EXPECT_EQ(s.max_out_degree, 1u);
  EXPECT_EQ(s.edge_count, 3u);

  auto empty = degree_stats(RecGraph(4, 0.5));
  EXPECT_EQ(empty.max_out_degree, 0u);
  EXPECT_EQ(empty.edge_count, 0u);

  SyntheticConfig cfg;
  cfg.n = 100;
  cfg.d = 5;
  auto costs = gen_costs(cfg);
  auto reg = degree_stats(gen_graph(cfg, costs));
  EXPECT_EQ(reg.max_out_degree, 5u);
  EXPECT_EQ(reg.edge_count, 500u);
}

TEST(ApplyRewiringTest, SubstitutesTarget) {
  auto g = testing::tiny_graph();
  auto rec = apply_rewiring(g, 0, 1, 2);
  EXPECT_EQ(rec.kind, EditKind::kRewiring);
  EXPECT_EQ(*rec.k, 2u);
  EXPECT_FALSE(g.has_edge(0, 1));
  EXPECT_DOUBLE_EQ(*g.edge_prob(0, 2), 0.5);
  EXPECT_DOUBLE_EQ(*g.edge_prob(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(*g.edge_prob(2, 0), 0.5);
}

TEST(ApplyRewiringTest, Errors) {
  auto g = testing::tiny_graph();
  EXPECT_THROW(apply_rewiring(g, 0, 1, 0), PreconditionError);  // self-loop
  apply_rewiring(g, 0, 1, 2);
  EXPECT_THROW(apply_rewiring(g, 0, 1, 2), PreconditionError);  // (0,1) gone
  RecGraph h(3, 0.5);
  h.add_edge(1, 0, 0.25);
  h.add_edge(1, 2, 0.25);
  EXPECT_THROW(apply_rewiring(h, 1, 0, 2), PreconditionError);  // multi-edge
}

TEST(ApplyRewiringTest, KeepsSlot) {
  RecGraph g(4, 0.1);
  g.add_edge(0, 1, 0.3);
  g.add_edge(0, 2, 0.6);
  apply_rewiring(g, 0, 1, 3);
  ASSERT_EQ(g.out_edges(0)[0].target, 3u);
  EXPECT_DOUBLE_EQ(g.out_edges(0)[0].prob, 0.3);
}

TEST(ApplyDeletionTest, SpreadsMassEvenly) {
  RecGraph g(4, 0.05);
  g.add_edge(0, 1, 0.3);
  g.add_edge(0, 2, 0.2);
  g.add_edge(0, 3, 0.45);
  apply_deletion(g, 0, 1);
  EXPECT_NEAR(*g.edge_prob(0, 2), 0.35, 1e-15);
  EXPECT_NEAR(*g.edge_prob(0, 3), 0.60, 1e-15);
  EXPECT_NEAR(row_sum(g, 0), 0.95, 1e-12);
  EXPECT_THROW(apply_deletion(g, 0, 1), PreconditionError);
}

TEST(ApplyDeletionTest, RefusesLastEdge) {
  auto g = testing::tiny_graph();
  EXPECT_THROW(apply_deletion(g, 0, 1), PreconditionError);
}

TEST(ApplyInsertionTest, SubtractsEvenly) {
  RecGraph g(4, 0.05);
  g.add_edge(0, 1, 0.5);
  g.add_edge(0, 2, 0.45);
  apply_insertion(g, 0, 3, 0.2);
  EXPECT_NEAR(*g.edge_prob(0, 1), 0.4, 1e-15);
  EXPECT_NEAR(*g.edge_prob(0, 2), 0.35, 1e-15);
  EXPECT_DOUBLE_EQ(*g.edge_prob(0, 3), 0.2);
  EXPECT_EQ(g.out_edges(0).back().target, 3u);
}

TEST(ApplyInsertionTest, Errors) {
  RecGraph g(4, 0.05);
  g.add_edge(0, 1, 0.5);
  g.add_edge(0, 2, 0.45);
  EXPECT_THROW(apply_insertion(g, 0, 3, 0.95), PreconditionError);
  EXPECT_THROW(apply_insertion(g, 0, 1, 0.1), PreconditionError);
  EXPECT_THROW(apply_insertion(g, 0, 0, 0.1), PreconditionError);
  EXPECT_THROW(apply_insertion(g, 3, 0, 0.1), PreconditionError);
}

// Property: long random edit sequences keep every row sum at 1 - alpha,
// never change n or alpha, and a rewiring followed by its inverse restores
// the graph exactly.
TEST(EditPropertyTest, RandomEditSequences) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SyntheticConfig cfg;
    cfg.n = 40;
    cfg.d = 5;
    cfg.seed = seed;
    auto costs = gen_costs(cfg);
    auto g = gen_graph(cfg, costs);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<NodeId> node(0, 39);
    for (int step = 0; step < 2000; ++step) {
      const NodeId i = node(rng);
      const auto edges = g.out_edges(i);
      if (edges.empty()) continue;
      std::uniform_int_distribution<std::size_t> slot(0, edges.size() - 1);
      const NodeId j = edges[slot(rng)].target;
      const NodeId k = node(rng);
      const int kind = static_cast<int>(rng() % 3);
      if (kind == 0 && k != i && !g.has_edge(i, k)) {
        const RecGraph before = g;
        apply_rewiring(g, i, j, k);
        RecGraph undo = g;
        apply_rewiring(undo, i, k, j);
        ASSERT_TRUE(undo == before);
      } else if (kind == 1 && g.out_degree(i) > 2) {
        apply_deletion(g, i, j);
      } else if (kind == 2 && k != i && !g.has_edge(i, k)) {
        double min_p = 1.0;
        for (const auto& e : g.out_edges(i)) min_p = std::min(min_p, e.prob);
        const double p = 0.5 * min_p * static_cast<double>(g.out_degree(i));
        if (p <= 1.0 - g.alpha()) apply_insertion(g, i, k, p);
      }
    }
    EXPECT_EQ(g.size(), 40u);
    EXPECT_DOUBLE_EQ(g.alpha(), cfg.alpha);
    EXPECT_NO_THROW(g.validate(kEditRowSumTolerance));
  }
}

}  // namespace
}  // namespace gamine
