#include <sstream>

#include "doctest.h"
#include "sbm/graph.hpp"

using sbm::Graph;
using sbm::SoftGraph;

TEST_SUITE("graph") {

TEST_CASE("triangle build") {
  const std::vector<Graph::Edge> edges{{0, 1}, {1, 2}, {0, 2}};
  const Graph g = Graph::from_edges(3, edges);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 3);
  for (int i = 0; i < 3; ++i) CHECK(g.degree(i) == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(g.has_edge(0, 0));
}

TEST_CASE("empty graph") {
  const Graph g = Graph::from_edges(4, {});
  CHECK(g.edge_count() == 0);
  for (int i = 0; i < 4; ++i) CHECK(g.degree(i) == 0);
}

TEST_CASE("duplicate edges collapse") {
  const std::vector<Graph::Edge> edges{{0, 1}, {0, 1}, {1, 0}};
  const Graph g = Graph::from_edges(2, edges);
  CHECK(g.edge_count() == 1);
  CHECK(g.degree(0) == 1);
}

TEST_CASE("invalid edges rejected") {
  CHECK_THROWS_AS(Graph::from_edges(3, std::vector<Graph::Edge>{{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::from_edges(3, std::vector<Graph::Edge>{{-1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::from_edges(3, std::vector<Graph::Edge>{{1, 1}}), std::invalid_argument);
}

TEST_CASE("edge list parsing with header and comments") {
  std::istringstream in(
      "# benchmark network\n"
      "n 5\n"
      "0 1\n"
      "  # isolated node 4\n"
      "1 2\n"
      "\n"
      "3 0\n");
  const Graph g = Graph::load_edge_list(in);
  CHECK(g.node_count() == 5);
  CHECK(g.edge_count() == 3);
  CHECK(g.degree(4) == 0);
}

TEST_CASE("edge list node count inferred from max index") {
  std::istringstream in("0 1\n5 2\n");
  const Graph g = Graph::load_edge_list(in);
  CHECK(g.node_count() == 6);
  CHECK(g.edge_count() == 2);
}

TEST_CASE("edge list round trip") {
  const std::vector<Graph::Edge> edges{{0, 1}, {2, 3}, {1, 3}};
  const Graph g = Graph::from_edges(6, edges);
  std::stringstream buf;
  g.save_edge_list(buf);
  const Graph h = Graph::load_edge_list(buf);
  CHECK(h.node_count() == 6);
  CHECK(h.edge_count() == 3);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) CHECK(g.has_edge(i, j) == h.has_edge(i, j));
  }
}

TEST_CASE("malformed edge lines rejected") {
  std::istringstream in("0 x\n");
  CHECK_THROWS_AS(Graph::load_edge_list(in), std::invalid_argument);
}

TEST_CASE("soft graph stays symmetric and bounded") {
  SoftGraph g(3);
  g.set_weight(0, 1, 0.25);
  CHECK(g.weight(1, 0) == doctest::Approx(0.25));
  CHECK(g.weight(0, 0) == 0.0);
  CHECK_THROWS_AS(g.set_weight(1, 1, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(g.set_weight(0, 2, 1.5), std::invalid_argument);
}

}  // TEST_SUITE
