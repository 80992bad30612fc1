#include <vector>

#include "doctest.h"
#include "sbm/block_state.hpp"
#include "sbm/graph.hpp"
#include "sbm/rng.hpp"

using sbm::BlockState;
using sbm::Graph;
using sbm::PartitionMode;
using sbm::RngStream;

namespace {

Graph triangle() { return Graph::from_edges(3, std::vector<Graph::Edge>{{0, 1}, {1, 2}, {0, 2}}); }

Graph random_graph(RngStream& rng, int n, double p) {
  std::vector<Graph::Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  }
  return Graph::from_edges(n, edges);
}

void expect_equal_stats(const BlockState& a, const BlockState& b) {
  REQUIRE(a.k() == b.k());
  for (int x = 0; x < a.k(); ++x) {
    CHECK(a.block_size(x) == b.block_size(x));
    for (int y = x; y < a.k(); ++y) {
      CHECK(a.edges_between(x, y) == b.edges_between(x, y));
      CHECK(a.pair_capacity(x, y) == b.pair_capacity(x, y));
    }
  }
}

}  // namespace

TEST_SUITE("blockstate") {

TEST_CASE("triangle in one block") {
  const Graph g = triangle();
  const BlockState s = BlockState::from_labels(g, {0, 0, 0});
  CHECK(s.k() == 1);
  CHECK(s.block_size(0) == 3);
  CHECK(s.edges_between(0, 0) == 3);
  CHECK(s.pair_capacity(0, 0) == 3);
}

TEST_CASE("triangle split two blocks") {
  const Graph g = triangle();
  const BlockState s = BlockState::from_labels(g, {0, 0, 1});
  CHECK(s.edges_between(0, 0) == 1);
  CHECK(s.edges_between(0, 1) == 2);
  CHECK(s.pair_capacity(0, 0) == 1);
  CHECK(s.pair_capacity(0, 1) == 2);
}

TEST_CASE("empty graph capacities") {
  const Graph g = Graph::from_edges(4, {});
  const BlockState s = BlockState::from_labels(g, {0, 1, 0, 1});
  CHECK(s.edges_between(0, 0) == 0);
  CHECK(s.edges_between(0, 1) == 0);
  CHECK(s.edges_between(1, 1) == 0);
  CHECK(s.pair_capacity(0, 0) == 1);
  CHECK(s.pair_capacity(0, 1) == 4);
  CHECK(s.pair_capacity(1, 1) == 1);
}

TEST_CASE("label gap rejected") {
  const Graph g = triangle();
  CHECK_THROWS_AS(BlockState::from_labels(g, {0, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(BlockState::from_labels(g, {0, -1, 1}), std::invalid_argument);
}

TEST_CASE("merge move compacts") {
  const Graph g = triangle();
  BlockState s = BlockState::from_labels(g, {0, 0, 1});
  const auto out = s.move_node(g, 2, 0);
  CHECK(s.k() == 1);
  CHECK(out.removed);
  CHECK(s.labels() == std::vector<int>{0, 0, 0});
  CHECK(s.edges_between(0, 0) == 3);
}

TEST_CASE("singleton to new block relabels only") {
  const Graph g = triangle();
  BlockState s = BlockState::from_labels(g, {0, 0, 1});
  s.move_node(g, 2, BlockState::kNewBlock);
  CHECK(s.k() == 2);
  CHECK(s.block_size(0) == 2);
  CHECK(s.block_size(1) == 1);
  CHECK(s.edges_between(0, 1) == 2);
}

TEST_CASE("two-node merge reports compaction") {
  const Graph g = Graph::from_edges(2, std::vector<Graph::Edge>{{0, 1}});
  BlockState s = BlockState::from_labels(g, {0, 1});
  const auto out = s.move_node(g, 1, 0);
  CHECK(s.k() == 1);
  CHECK(out.removed);
  CHECK(out.removed_block == 1);
  CHECK(s.edges_between(0, 0) == 1);
}

TEST_CASE("move to swapped target block") {
  // node 0 is a singleton; its removal relocates the last block, and the
  // caller-facing target index must follow the relocation
  const Graph g = Graph::from_edges(5, std::vector<Graph::Edge>{{0, 4}, {3, 4}});
  BlockState s = BlockState::from_labels(g, {0, 1, 1, 2, 2});
  s.move_node(g, 0, 2);
  CHECK(s.k() == 2);
  CHECK(s.block_size(0) == 3);  // old block 2, relocated, plus node 0
  CHECK(s.block_size(1) == 2);  // old block 1
  CHECK(s.edges_between(0, 0) == 2);
}

TEST_CASE("node-block edge counts") {
  const Graph g = triangle();
  const BlockState s = BlockState::from_labels(g, {0, 0, 1});
  const auto r = s.node_block_edge_counts(g, 0);
  CHECK(r == std::vector<long>{1, 1});

  const Graph empty = Graph::from_edges(4, {});
  const BlockState s2 = BlockState::from_labels(empty, {0, 1, 0, 1});
  CHECK(s2.node_block_edge_counts(empty, 2) == std::vector<long>{0, 0});

  // star: center in block 0, leaves in block 1
  const Graph star = Graph::from_edges(5, std::vector<Graph::Edge>{{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  const BlockState s3 = BlockState::from_labels(star, {0, 1, 1, 1, 1});
  CHECK(s3.node_block_edge_counts(star, 0) == std::vector<long>{0, 4});
}

TEST_CASE("fixed-k mode keeps empty blocks") {
  const Graph g = triangle();
  BlockState s = BlockState::with_fixed_k(g, {0, 0, 1}, 3);
  CHECK(s.k() == 3);
  CHECK(s.block_size(2) == 0);
  s.move_node(g, 2, 0);
  CHECK(s.k() == 3);
  CHECK(s.block_size(1) == 0);
  CHECK(s.edges_between(0, 0) == 3);
  CHECK_THROWS_AS(s.move_node(g, 0, BlockState::kNewBlock), std::invalid_argument);
}

TEST_CASE("incremental statistics match recomputation under random moves") {
  RngStream rng(1234);
  for (int rep = 0; rep < 12; ++rep) {
    const int n = 5 + static_cast<int>(rng.uniform() * 45);
    const Graph g = random_graph(rng, n, 0.25);
    std::vector<int> z(static_cast<std::size_t>(n), 0);
    BlockState s = BlockState::from_labels(g, z);
    const long pairs = static_cast<long>(n) * (n - 1) / 2;
    for (int step = 0; step < 200; ++step) {
      const int i = static_cast<int>(rng.uniform() * n);
      const bool fresh = rng.uniform() < 0.15;
      const int target = fresh ? BlockState::kNewBlock : static_cast<int>(rng.uniform() * s.k());
      if (!fresh && target == s.label(i)) continue;
      s.move_node(g, i, target);

      long cap_total = 0, edge_total = 0;
      for (int a = 0; a < s.k(); ++a) {
        CHECK(s.block_size(a) >= 1);
        for (int b = a; b < s.k(); ++b) {
          cap_total += s.pair_capacity(a, b);
          edge_total += s.edges_between(a, b);
        }
      }
      CHECK(cap_total == pairs);
      CHECK(edge_total == g.edge_count());
    }
    const BlockState fresh_stats = BlockState::from_labels(g, s.labels());
    expect_equal_stats(s, fresh_stats);
  }
}

TEST_CASE("fixed-k incremental statistics match recomputation") {
  RngStream rng(99);
  const int n = 30, k = 5;
  const Graph g = random_graph(rng, n, 0.3);
  std::vector<int> z(static_cast<std::size_t>(n));
  for (auto& zi : z) zi = static_cast<int>(rng.uniform() * k);
  BlockState s = BlockState::with_fixed_k(g, z, k);
  for (int step = 0; step < 300; ++step) {
    const int i = static_cast<int>(rng.uniform() * n);
    const int target = static_cast<int>(rng.uniform() * k);
    if (target != s.label(i)) s.move_node(g, i, target);
  }
  const BlockState fresh_stats = BlockState::with_fixed_k(g, s.labels(), k);
  expect_equal_stats(s, fresh_stats);
}

TEST_CASE("statistics invariant under node reordering") {
  RngStream rng(7);
  const int n = 20;
  const Graph g = random_graph(rng, n, 0.3);
  std::vector<int> z(static_cast<std::size_t>(n));
  for (auto& zi : z) zi = static_cast<int>(rng.uniform() * 3);
  z[0] = 0; z[1] = 1; z[2] = 2;  // keep labels contiguous

  // reverse node order, same partition content
  std::vector<Graph::Edge> rev_edges;
  for (int i = 0; i < n; ++i) {
    for (int j : g.neighbors(i)) {
      if (j > i) rev_edges.emplace_back(n - 1 - i, n - 1 - j);
    }
  }
  const Graph rg = Graph::from_edges(n, rev_edges);
  std::vector<int> rz(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) rz[static_cast<std::size_t>(n - 1 - i)] = z[static_cast<std::size_t>(i)];

  const BlockState a = BlockState::from_labels(g, z);
  const BlockState b = BlockState::from_labels(rg, rz);
  expect_equal_stats(a, b);
}

}  // TEST_SUITE
