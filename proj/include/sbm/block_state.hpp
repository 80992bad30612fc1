#pragma once

#include <vector>

#include "sbm/graph.hpp"

namespace sbm {

enum class PartitionMode {
  compacting,  // no empty blocks; emptied labels are compacted away
  fixed_k      // fixed number of labels; blocks may be empty
};

struct MoveOutcome {
  int label = -1;           // block the node ended in (post-compaction index)
  bool created = false;     // a new block was appended
  bool removed = false;     // a block emptied and was removed
  int removed_block = -1;   // index that was vacated
  int swapped_from = -1;    // previous index of the block relocated into removed_block, -1 if none
};

// Labels plus the sufficient statistics every sampler conditions on:
// block sizes n_a, inter-block edge counts O_ab and pair capacities n_ab,
// all maintained incrementally under single-node moves.
class BlockState {
 public:
  static constexpr int kNewBlock = -1;

  // Exact statistics from scratch. Labels must be 0-based and contiguous:
  // every label in [0, max] used at least once.
  static BlockState from_labels(const Graph& g, std::vector<int> z);

  // Fixed-capacity variant: labels lie in [0,k) and may leave gaps.
  static BlockState with_fixed_k(const Graph& g, std::vector<int> z, int k);

  PartitionMode mode() const { return mode_; }
  int k() const { return k_; }
  int n() const { return static_cast<int>(z_.size()); }
  const std::vector<int>& labels() const { return z_; }
  int label(int i) const { return z_[i]; }
  bool assigned(int i) const { return z_[i] >= 0; }

  long block_size(int a) const { return sizes_[a]; }
  long edges_between(int a, int b) const;  // O_ab
  long pair_capacity(int a, int b) const;  // n_ab
  long total_edges() const;

  // r_b = number of neighbors of i in block b (over currently assigned nodes).
  std::vector<long> node_block_edge_counts(const Graph& g, int i) const;

  MoveOutcome move_node(const Graph& g, int i, int target);
  MoveOutcome remove_node(const Graph& g, int i);
  MoveOutcome add_node(const Graph& g, int i, int target);

 private:
  BlockState() = default;
  std::size_t tri_index(int a, int b) const;
  void compact_block(int a, MoveOutcome& out);

  PartitionMode mode_ = PartitionMode::compacting;
  std::vector<int> z_;
  int k_ = 0;
  std::vector<long> sizes_;
  std::vector<long> edge_counts_;  // packed upper triangle of O_ab
};

}  // namespace sbm
