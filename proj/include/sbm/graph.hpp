#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace sbm {

// Immutable simple undirected graph. Adjacency is kept twice: a packed
// symmetric bitset for O(1) membership and per-node sorted neighbor lists for
// O(degree) scans; samplers need both access patterns.
class Graph {
 public:
  using Edge = std::pair<int, int>;

  Graph() = default;  // empty graph

  static Graph from_edges(int n, std::span<const Edge> edges);

  // Text format: one "i j" pair per line (0-based), '#' starts a comment,
  // an optional "n <count>" line fixes the node count; otherwise the count is
  // inferred as max index + 1.
  static Graph load_edge_list(std::istream& in);
  static Graph load_edge_list(const std::filesystem::path& path);

  void save_edge_list(std::ostream& out) const;
  void save_edge_list(const std::filesystem::path& path) const;

  int node_count() const { return n_; }
  long edge_count() const { return m_; }
  int degree(int i) const { return static_cast<int>(neighbors_[i].size()); }
  const std::vector<int>& neighbors(int i) const { return neighbors_[i]; }

  bool has_edge(int i, int j) const {
    const std::size_t bit = static_cast<std::size_t>(i) * n_ + j;
    return (bits_[bit >> 6] >> (bit & 63)) & 1u;
  }

 private:
  int n_ = 0;
  long m_ = 0;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::uint64_t> bits_;
};

// Symmetric real-valued relation in [0,1] with zero diagonal; stands in for a
// binary adjacency when evaluating likelihoods at an expected adjacency.
class SoftGraph {
 public:
  explicit SoftGraph(int n);
  int node_count() const { return n_; }
  double weight(int i, int j) const { return w_[static_cast<std::size_t>(i) * n_ + j]; }
  void set_weight(int i, int j, double v);

 private:
  int n_ = 0;
  std::vector<double> w_;
};

}  // namespace sbm
