#include "sbm/block_state.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sbm {

namespace {

std::vector<int> validate_labels(const Graph& g, const std::vector<int>& z, int k,
                                 bool require_contiguous) {
  if (static_cast<int>(z.size()) != g.node_count()) {
    throw std::invalid_argument("label vector length must equal node count");
  }
  std::vector<int> used(static_cast<std::size_t>(k), 0);
  for (int zi : z) {
    if (zi < 0 || zi >= k) throw std::invalid_argument("label out of range");
    used[static_cast<std::size_t>(zi)] = 1;
  }
  if (require_contiguous) {
    for (int a = 0; a < k; ++a) {
      if (!used[static_cast<std::size_t>(a)]) {
        throw std::invalid_argument("label gap: block " + std::to_string(a) + " unused");
      }
    }
  }
  return used;
}

}  // namespace

std::size_t BlockState::tri_index(int a, int b) const {
  if (a > b) std::swap(a, b);
  return static_cast<std::size_t>(b) * (b + 1) / 2 + a;
}

BlockState BlockState::from_labels(const Graph& g, std::vector<int> z) {
  int k = 0;
  for (int zi : z) k = std::max(k, zi + 1);
  if (g.node_count() > 0 && k == 0) throw std::invalid_argument("labels must be nonnegative");
  validate_labels(g, z, k, /*require_contiguous=*/true);
  BlockState s;
  s.mode_ = PartitionMode::compacting;
  s.z_ = std::move(z);
  s.k_ = k;
  s.sizes_.assign(static_cast<std::size_t>(k), 0);
  s.edge_counts_.assign(static_cast<std::size_t>(k) * (k + 1) / 2, 0);
  for (int i = 0; i < g.node_count(); ++i) {
    ++s.sizes_[static_cast<std::size_t>(s.z_[i])];
    for (int j : g.neighbors(i)) {
      if (j > i) ++s.edge_counts_[s.tri_index(s.z_[i], s.z_[j])];
    }
  }
  return s;
}

BlockState BlockState::with_fixed_k(const Graph& g, std::vector<int> z, int k) {
  if (k < 1) throw std::invalid_argument("fixed k must be >= 1");
  validate_labels(g, z, k, /*require_contiguous=*/false);
  BlockState s;
  s.mode_ = PartitionMode::fixed_k;
  s.z_ = std::move(z);
  s.k_ = k;
  s.sizes_.assign(static_cast<std::size_t>(k), 0);
  s.edge_counts_.assign(static_cast<std::size_t>(k) * (k + 1) / 2, 0);
  for (int i = 0; i < g.node_count(); ++i) {
    ++s.sizes_[static_cast<std::size_t>(s.z_[i])];
    for (int j : g.neighbors(i)) {
      if (j > i) ++s.edge_counts_[s.tri_index(s.z_[i], s.z_[j])];
    }
  }
  return s;
}

long BlockState::edges_between(int a, int b) const { return edge_counts_[tri_index(a, b)]; }

long BlockState::pair_capacity(int a, int b) const {
  if (a == b) return sizes_[a] * (sizes_[a] - 1) / 2;
  return sizes_[a] * sizes_[b];
}

long BlockState::total_edges() const {
  long total = 0;
  for (long c : edge_counts_) total += c;
  return total;
}

std::vector<long> BlockState::node_block_edge_counts(const Graph& g, int i) const {
  std::vector<long> r(static_cast<std::size_t>(k_), 0);
  for (int j : g.neighbors(i)) {
    if (z_[j] >= 0) ++r[static_cast<std::size_t>(z_[j])];
  }
  return r;
}

void BlockState::compact_block(int a, MoveOutcome& out) {
  const int last = k_ - 1;
  out.removed = true;
  out.removed_block = a;
  out.swapped_from = (a == last) ? -1 : last;
  if (a != last) {
    for (auto& zi : z_) {
      if (zi == last) zi = a;
    }
    sizes_[static_cast<std::size_t>(a)] = sizes_[static_cast<std::size_t>(last)];
    // repack the triangle with block `last` relocated to slot `a`
    std::vector<long> next(static_cast<std::size_t>(last) * (last + 1) / 2, 0);
    const auto src = [&](int x) { return x == a ? last : x; };
    for (int x = 0; x < last; ++x) {
      for (int y = x; y < last; ++y) {
        next[static_cast<std::size_t>(y) * (y + 1) / 2 + x] = edge_counts_[tri_index(src(x), src(y))];
      }
    }
    edge_counts_ = std::move(next);
  } else {
    edge_counts_.resize(static_cast<std::size_t>(last) * (last + 1) / 2);
  }
  sizes_.pop_back();
  --k_;
}

MoveOutcome BlockState::remove_node(const Graph& g, int i) {
  if (!assigned(i)) throw std::logic_error("node already removed");
  MoveOutcome out;
  const int a = z_[i];
  for (int j : g.neighbors(i)) {
    if (z_[j] >= 0) --edge_counts_[tri_index(a, z_[j])];
  }
  --sizes_[static_cast<std::size_t>(a)];
  z_[i] = -1;
  if (mode_ == PartitionMode::compacting && sizes_[static_cast<std::size_t>(a)] == 0) {
    compact_block(a, out);
  }
  return out;
}

MoveOutcome BlockState::add_node(const Graph& g, int i, int target) {
  if (assigned(i)) throw std::logic_error("node already assigned");
  MoveOutcome out;
  int a = target;
  if (target == kNewBlock) {
    if (mode_ == PartitionMode::fixed_k) {
      throw std::invalid_argument("fixed-k state cannot grow a new block");
    }
    a = k_;
    ++k_;
    sizes_.push_back(0);
    edge_counts_.resize(static_cast<std::size_t>(k_) * (k_ + 1) / 2, 0);
    out.created = true;
  } else if (target < 0 || target >= k_) {
    throw std::invalid_argument("target block out of range");
  }
  for (int j : g.neighbors(i)) {
    if (z_[j] >= 0) ++edge_counts_[tri_index(a, z_[j])];
  }
  ++sizes_[static_cast<std::size_t>(a)];
  z_[i] = a;
  out.label = a;
  return out;
}

MoveOutcome BlockState::move_node(const Graph& g, int i, int target) {
  if (!assigned(i)) throw std::logic_error("node is not assigned");
  if (target != kNewBlock && (target < 0 || target >= k_)) {
    throw std::invalid_argument("target block out of range");
  }
  if (target == z_[i]) {
    MoveOutcome out;
    out.label = target;
    return out;
  }
  const MoveOutcome removal = remove_node(g, i);
  int mapped = target;
  if (removal.removed && target != kNewBlock) {
    if (target == removal.swapped_from) {
      mapped = removal.removed_block;
    }
  }
  MoveOutcome out = add_node(g, i, mapped);
  out.removed = removal.removed;
  out.removed_block = removal.removed_block;
  out.swapped_from = removal.swapped_from;
  return out;
}

}  // namespace sbm
