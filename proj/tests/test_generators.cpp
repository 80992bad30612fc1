#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "sbm/generators.hpp"

using namespace sbm;

namespace {

LfrSpec paper_lfr_spec(double mu, double d_avg) {
  LfrSpec spec;
  spec.n = 200;
  spec.t1 = 2.0;
  spec.t2 = 2.0;
  spec.n_min = 5;
  spec.n_max = 50;
  spec.d_avg = d_avg;
  spec.d_max = 49;
  spec.mu = mu;
  return spec;
}

double mean_degree(const Graph& g) {
  return 2.0 * static_cast<double>(g.edge_count()) / g.node_count();
}

int community_count(const std::vector<int>& z) {
  return 1 + *std::max_element(z.begin(), z.end());
}

std::string edges_fingerprint(const Graph& g) {
  std::ostringstream out;
  g.save_edge_list(out);
  return out.str();
}

}  // namespace

TEST_SUITE("generators") {

TEST_CASE("sbm with sure edges gives the complete graph") {
  RngStream rng(101);
  SbmSpec spec;
  spec.n = 20;
  spec.pi = {0.5, 0.5};
  spec.p = SymMatrix(2, 1.0);
  const auto net = generate_sbm(rng, spec);
  CHECK(net.graph.edge_count() == 20 * 19 / 2);
}

TEST_CASE("sbm density concentrates") {
  RngStream rng(103);
  SbmSpec spec;
  spec.n = 500;
  spec.pi = {1.0};
  spec.p = SymMatrix(1, 0.5);
  const auto net = generate_sbm(rng, spec);
  const double density =
      static_cast<double>(net.graph.edge_count()) / (500.0 * 499.0 / 2.0);
  CHECK(density == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("sbm per-pair edge frequencies match P") {
  RngStream rng(107);
  SbmSpec spec;
  spec.n = 1000;
  spec.pi = {0.5, 0.5};
  spec.p = SymMatrix(2);
  spec.p.set(0, 0, 0.10);
  spec.p.set(0, 1, 0.02);
  spec.p.set(1, 1, 0.08);
  const auto net = generate_sbm(rng, spec);
  std::vector<long> pairs(3, 0), edges(3, 0);
  for (int i = 0; i < spec.n; ++i) {
    for (int j = i + 1; j < spec.n; ++j) {
      const int a = net.z_true[static_cast<std::size_t>(i)];
      const int b = net.z_true[static_cast<std::size_t>(j)];
      const int cell = a == b ? (a == 0 ? 0 : 2) : 1;
      ++pairs[static_cast<std::size_t>(cell)];
      if (net.graph.has_edge(i, j)) ++edges[static_cast<std::size_t>(cell)];
    }
  }
  const double truth[3] = {0.10, 0.02, 0.08};
  for (int c = 0; c < 3; ++c) {
    const double freq = static_cast<double>(edges[static_cast<std::size_t>(c)]) /
                        static_cast<double>(pairs[static_cast<std::size_t>(c)]);
    const double sd = std::sqrt(truth[c] * (1 - truth[c]) / static_cast<double>(pairs[static_cast<std::size_t>(c)]));
    CHECK(std::fabs(freq - truth[c]) < 4.0 * sd);
  }
}

TEST_CASE("sbm spec validation") {
  RngStream rng(1);
  SbmSpec spec;
  spec.n = 4;
  spec.pi = {0.7, 0.7};
  spec.p = SymMatrix(2, 0.5);
  CHECK_THROWS_AS(generate_sbm(rng, spec), std::invalid_argument);
  spec.pi = {0.5, 0.5};
  spec.p.set(0, 0, 1.5);
  CHECK_THROWS_AS(generate_sbm(rng, spec), std::invalid_argument);
}

TEST_CASE("star example block design") {
  RngStream rng(109);
  const auto net = generate_star_example(rng);
  CHECK(net.graph.node_count() == 100);
  std::vector<int> sizes(3, 0);
  for (int zi : net.z_true) ++sizes[static_cast<std::size_t>(zi)];
  CHECK(sizes == std::vector<int>{60, 20, 20});

  long core_edges = 0;
  for (int i = 0; i < 60; ++i)
    for (int j = i + 1; j < 60; ++j)
      if (net.graph.has_edge(i, j)) ++core_edges;
  const double core_density = static_cast<double>(core_edges) / 1770.0;
  CHECK(std::fabs(core_density - 0.30) < 0.03);
}

TEST_CASE("star example expected edge counts") {
  RngStream rng(113);
  const int reps = 50;
  double within_periph = 0.0, between_periph = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto net = generate_star_example(rng);
    for (int i = 60; i < 100; ++i) {
      for (int j = i + 1; j < 100; ++j) {
        if (!net.graph.has_edge(i, j)) continue;
        if (net.z_true[static_cast<std::size_t>(i)] == net.z_true[static_cast<std::size_t>(j)]) {
          within_periph += 1.0;
        } else {
          between_periph += 1.0;
        }
      }
    }
  }
  CHECK(within_periph / reps == doctest::Approx(2 * 190 * 0.13).epsilon(0.06));  // 49.4
  CHECK(between_periph / reps == doctest::Approx(400 * 0.01).scale(1).epsilon(0.3));  // 4
}

TEST_CASE("lfr stays simple and respects size bounds") {
  RngStream rng(127);
  for (double mu : {0.1, 0.4}) {
    for (double d : {10.0, 25.0}) {
      const auto net = generate_lfr(rng, paper_lfr_spec(mu, d));
      CHECK(net.graph.node_count() == 200);
      std::vector<int> sizes(static_cast<std::size_t>(community_count(net.z_true)), 0);
      for (int zi : net.z_true) ++sizes[static_cast<std::size_t>(zi)];
      for (int s : sizes) {
        CHECK(s >= 5);
        CHECK(s <= 50);
      }
      const int k = community_count(net.z_true);
      CHECK(k >= 4);
      CHECK(k <= 40);
    }
  }
}

TEST_CASE("lfr hits the target degree and mixing") {
  RngStream rng(131);
  const int reps = 50;
  double deg_sum = 0.0, mix_sum = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto net = generate_lfr(rng, paper_lfr_spec(0.2, 20.0));
    deg_sum += mean_degree(net.graph);
    mix_sum += realized_mixing(net.graph, net.z_true);
  }
  CHECK(std::fabs(deg_sum / reps - 20.0) < 0.15 * 20.0);
  CHECK(std::fabs(mix_sum / reps - 0.2) < 0.05);
}

TEST_CASE("lfr with a single community has near-zero mixing") {
  RngStream rng(137);
  LfrSpec spec;
  spec.n = 60;
  spec.t1 = 2.0;
  spec.t2 = 2.0;
  spec.n_min = 60;
  spec.n_max = 60;
  spec.d_avg = 8.0;
  spec.d_max = 20;
  spec.mu = 0.01;
  const auto net = generate_lfr(rng, spec);
  CHECK(community_count(net.z_true) == 1);
  CHECK(realized_mixing(net.graph, net.z_true) <= 0.02);
}

TEST_CASE("lfr failures carry the violated constraint") {
  RngStream rng(139);

  // no community can host the largest internal degree
  LfrSpec cramped = paper_lfr_spec(0.05, 40.0);
  cramped.n_max = 20;
  CHECK_THROWS_WITH_AS(generate_lfr(rng, cramped),
                       doctest::Contains("exceeds the maximum community capacity"),
                       GenerationError);

  // sizes in [40,45] cannot sum to exactly 100
  LfrSpec unsummable = paper_lfr_spec(0.2, 10.0);
  unsummable.n = 100;
  unsummable.n_min = 40;
  unsummable.n_max = 45;
  CHECK_THROWS_AS(generate_lfr(rng, unsummable), GenerationError);

  LfrSpec invalid = paper_lfr_spec(0.2, 20.0);
  invalid.mu = 0.0;
  CHECK_THROWS_AS(generate_lfr(rng, invalid), std::invalid_argument);
}

TEST_CASE("generators are seed deterministic") {
  RngStream a(149), b(149), c(151);
  const auto ga = generate_lfr(a, paper_lfr_spec(0.3, 15.0));
  const auto gb = generate_lfr(b, paper_lfr_spec(0.3, 15.0));
  const auto gc = generate_lfr(c, paper_lfr_spec(0.3, 15.0));
  CHECK(edges_fingerprint(ga.graph) == edges_fingerprint(gb.graph));
  CHECK(ga.z_true == gb.z_true);
  CHECK(edges_fingerprint(ga.graph) != edges_fingerprint(gc.graph));

  RngStream s1(157), s2(157);
  CHECK(edges_fingerprint(generate_star_example(s1).graph) ==
        edges_fingerprint(generate_star_example(s2).graph));
}

TEST_CASE("realized mixing") {
  const Graph one_block = Graph::from_edges(3, std::vector<Graph::Edge>{{0, 1}, {1, 2}});
  CHECK(realized_mixing(one_block, std::vector<int>{0, 0, 0}) == 0.0);

  // complete bipartite with blocks equal to the sides
  std::vector<Graph::Edge> bip;
  for (int i = 0; i < 2; ++i)
    for (int j = 2; j < 5; ++j) bip.emplace_back(i, j);
  const Graph kb = Graph::from_edges(5, bip);
  CHECK(realized_mixing(kb, std::vector<int>{0, 0, 1, 1, 1}) == 1.0);

  std::vector<Graph::Edge> k4;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) k4.emplace_back(i, j);
  const Graph g4 = Graph::from_edges(4, k4);
  CHECK(realized_mixing(g4, std::vector<int>{0, 0, 1, 1}) == doctest::Approx(4.0 / 6.0));

  const Graph empty = Graph::from_edges(3, {});
  CHECK_THROWS_AS(realized_mixing(empty, std::vector<int>{0, 0, 0}), std::invalid_argument);
}

}  // TEST_SUITE
