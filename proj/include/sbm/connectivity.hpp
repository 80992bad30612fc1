#pragma once

#include <cmath>
#include <optional>

#include "sbm/sym_matrix.hpp"

namespace sbm {

// Symmetric block connectivity matrix with log(P) / log(1-P) kept in step so
// label sweeps never recompute logs, plus the assortativity cutoff when the
// constrained variant is running.
class ConnectivityState {
 public:
  ConnectivityState() = default;
  explicit ConnectivityState(int k) : p_(k), logp_(k), log1mp_(k) {}

  int dim() const { return p_.dim(); }
  double p(int a, int b) const { return p_(a, b); }
  double logp(int a, int b) const { return logp_(a, b); }
  double log1mp(int a, int b) const { return log1mp_(a, b); }
  const SymMatrix& matrix() const { return p_; }

  void set(int a, int b, double value) {
    p_.set(a, b, value);
    logp_.set(a, b, std::log(value));
    log1mp_.set(a, b, std::log1p(-value));
  }

  void append_block() {
    p_.append_block();
    logp_.append_block();
    log1mp_.append_block();
  }

  void remove_block_swap_last(int a) {
    p_.remove_block_swap_last(a);
    logp_.remove_block_swap_last(a);
    log1mp_.remove_block_swap_last(a);
  }

  std::optional<double> epsilon;

 private:
  SymMatrix p_;
  SymMatrix logp_;
  SymMatrix log1mp_;
};

}  // namespace sbm
