#include "sbm/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sbm {

Graph Graph::from_edges(int n, std::span<const Edge> edges) {
  if (n < 0) throw std::invalid_argument("node count must be nonnegative");
  Graph g;
  g.n_ = n;
  g.neighbors_.resize(static_cast<std::size_t>(n));
  g.bits_.assign((static_cast<std::size_t>(n) * n + 63) / 64, 0);
  for (const auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw std::invalid_argument("edge endpoint out of range: (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") with n=" + std::to_string(n));
    }
    if (i == j) {
      throw std::invalid_argument("self-loop rejected at node " + std::to_string(i));
    }
    if (g.has_edge(i, j)) continue;  // duplicates collapse to one edge
    const std::size_t bij = static_cast<std::size_t>(i) * n + j;
    const std::size_t bji = static_cast<std::size_t>(j) * n + i;
    g.bits_[bij >> 6] |= 1ULL << (bij & 63);
    g.bits_[bji >> 6] |= 1ULL << (bji & 63);
    g.neighbors_[i].push_back(j);
    g.neighbors_[j].push_back(i);
    ++g.m_;
  }
  for (auto& nb : g.neighbors_) std::sort(nb.begin(), nb.end());
  return g;
}

Graph Graph::load_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  int n = -1;
  int max_index = -1;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line.substr(first));
    std::string tok;
    ls >> tok;
    if (tok == "n") {
      if (!(ls >> n) || n < 0) throw std::invalid_argument("malformed node-count header line");
      continue;
    }
    int i = 0, j = 0;
    try {
      i = std::stoi(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed edge line: " + line);
    }
    if (!(ls >> j)) throw std::invalid_argument("malformed edge line: " + line);
    edges.emplace_back(i, j);
    max_index = std::max({max_index, i, j});
  }
  if (n < 0) n = max_index + 1;
  return from_edges(n, edges);
}

Graph Graph::load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path.string());
  return load_edge_list(in);
}

void Graph::save_edge_list(std::ostream& out) const {
  out << "n " << n_ << "\n";
  for (int i = 0; i < n_; ++i) {
    for (int j : neighbors_[i]) {
      if (j > i) out << i << " " << j << "\n";
    }
  }
}

void Graph::save_edge_list(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list: " + path.string());
  save_edge_list(out);
}

SoftGraph::SoftGraph(int n) : n_(n), w_(static_cast<std::size_t>(n) * n, 0.0) {
  if (n < 0) throw std::invalid_argument("node count must be nonnegative");
}

void SoftGraph::set_weight(int i, int j, double v) {
  if (i == j) throw std::invalid_argument("soft graph diagonal must stay zero");
  if (!(v >= 0.0) || !(v <= 1.0)) throw std::invalid_argument("soft weights must lie in [0,1]");
  w_[static_cast<std::size_t>(i) * n_ + j] = v;
  w_[static_cast<std::size_t>(j) * n_ + i] = v;
}

}  // namespace sbm
