#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sbm/graph.hpp"
#include "sbm/sym_matrix.hpp"

namespace sbm {

// Mixture deviance D = -2 sum_{i<j} log( sum_{a,b} P_ab^{A_ij} (1-P_ab)^{1-A_ij}
// n_a n_b / n^2 ). The inner double sum runs over ordered block pairs exactly
// as printed, a = b included with weight n_a^2 / n^2.
double deviance(const Graph& g, std::span<const int> z, const SymMatrix& p);

// Split-chain potential scale reduction: every chain is halved and the usual
// between/within variance ratio is computed across the halves. Degenerate
// within-chain variance returns +infinity with a warning.
double split_rhat(const std::vector<std::vector<double>>& chains);

// Effective sample size by initial-positive-sequence truncation of the
// autocorrelation series. A flat chain returns its length with a warning.
double effective_sample_size(std::span<const double> x);

struct PsmMatrix {
  int n = 0;
  std::vector<double> values;  // n*n row-major
  double operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
};

PsmMatrix posterior_similarity(const std::vector<std::vector<int>>& samples);

// Candidate-dependent part of the expected variation-of-information lower
// bound: (1/n) sum_i [ log |c_i| - 2 log sum_j PSM_ij 1(c_j = c_i) ].
double vi_lower_bound_loss(std::span<const int> partition, const PsmMatrix& psm);

struct PointEstimate {
  std::vector<int> partition;  // canonical first-appearance labels
  int k_hat = 0;
  double loss = 0.0;
};

// Greedy sequential allocation plus hill climbing over the VI lower bound,
// restarted `restarts` times; every sampled partition also enters as a
// candidate, so the result is never worse than the best sample.
PointEstimate point_estimate_partition(const std::vector<std::vector<int>>& samples,
                                       const PsmMatrix& psm, std::uint64_t seed,
                                       int restarts = 16);

double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

double relative_k_error(int k_hat, int k_true);

struct AlignedPAverage {
  int k_hat = 0;          // modal block count across samples
  SymMatrix p_hat;        // entrywise mean after size ordering
  int used_samples = 0;   // samples at the modal block count
};

// Orders every sample's blocks by decreasing size (ties by smallest member
// node) and averages the correspondingly permuted P snapshots over samples
// whose block count equals the modal one.
AlignedPAverage order_blocks_by_size(const std::vector<std::vector<int>>& samples,
                                     const std::vector<SymMatrix>& p_snapshots);

// n (p-q)^2 / (2 (p+q))
double signal_to_noise(double n, double p, double q);

}  // namespace sbm
