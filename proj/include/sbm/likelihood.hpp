#pragma once

#include <span>
#include <vector>

#include "sbm/block_state.hpp"
#include "sbm/graph.hpp"
#include "sbm/sym_matrix.hpp"

namespace sbm {

// log p(A, z | P, pi) summed pairwise over i < j plus the label factor
// sum_i log pi_{z_i}. A boundary P entry facing opposing evidence yields
// -infinity, not an error.
double complete_log_likelihood(const Graph& g, std::span<const int> z, const SymMatrix& p,
                               std::span<const double> pi);

// Same likelihood evaluated at a real-valued adjacency (e.g. the expected
// adjacency of a known design).
double complete_log_likelihood(const SoftGraph& g, std::span<const int> z, const SymMatrix& p,
                               std::span<const double> pi);

// Block-count form: sum_{a<=b} O_ab log P_ab + (n_ab - O_ab) log(1-P_ab)
// + sum_a n_a log pi_a. Equals the pairwise form on binary graphs.
double block_form_log_likelihood(const BlockState& state, const SymMatrix& p,
                                 std::span<const double> pi);

// Expected adjacency of an SBM design: entry (i,j) = P_{z_i z_j}, zero diagonal.
SoftGraph expected_adjacency(std::span<const int> z, const SymMatrix& p);

}  // namespace sbm
