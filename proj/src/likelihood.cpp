#include "sbm/likelihood.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sbm {

namespace {

void check_inputs(int n, std::span<const int> z, const SymMatrix& p, std::span<const double> pi) {
  if (static_cast<int>(z.size()) != n) throw std::invalid_argument("label length mismatch");
  const int k = p.dim();
  if (static_cast<int>(pi.size()) != k) throw std::invalid_argument("pi dimension mismatch");
  for (int zi : z) {
    if (zi < 0 || zi >= k) throw std::invalid_argument("label out of range for P");
  }
}

// w log r + (1-w) log(1-r) with the 0*log(0) ambiguities resolved to 0.
double bernoulli_term(double w, double r) {
  double t = 0.0;
  if (w > 0.0) t += (r > 0.0) ? w * std::log(r) : -std::numeric_limits<double>::infinity();
  if (w < 1.0) t += (r < 1.0) ? (1.0 - w) * std::log1p(-r) : -std::numeric_limits<double>::infinity();
  return t;
}

double label_term(std::span<const int> z, std::span<const double> pi) {
  double s = 0.0;
  for (int zi : z) {
    const double pa = pi[static_cast<std::size_t>(zi)];
    s += (pa > 0.0) ? std::log(pa) : -std::numeric_limits<double>::infinity();
  }
  return s;
}

}  // namespace

double complete_log_likelihood(const Graph& g, std::span<const int> z, const SymMatrix& p,
                               std::span<const double> pi) {
  check_inputs(g.node_count(), z, p, pi);
  const int n = g.node_count();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      s += bernoulli_term(g.has_edge(i, j) ? 1.0 : 0.0, p(z[i], z[j]));
    }
  }
  return s + label_term(z, pi);
}

double complete_log_likelihood(const SoftGraph& g, std::span<const int> z, const SymMatrix& p,
                               std::span<const double> pi) {
  check_inputs(g.node_count(), z, p, pi);
  const int n = g.node_count();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      s += bernoulli_term(g.weight(i, j), p(z[i], z[j]));
    }
  }
  return s + label_term(z, pi);
}

double block_form_log_likelihood(const BlockState& state, const SymMatrix& p,
                                 std::span<const double> pi) {
  const int k = state.k();
  if (p.dim() != k) throw std::invalid_argument("P dimension mismatch");
  if (static_cast<int>(pi.size()) != k) throw std::invalid_argument("pi dimension mismatch");
  double s = 0.0;
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      const double o = static_cast<double>(state.edges_between(a, b));
      const double cap = static_cast<double>(state.pair_capacity(a, b));
      if (o > 0.0) s += (p(a, b) > 0.0) ? o * std::log(p(a, b)) : -std::numeric_limits<double>::infinity();
      if (cap - o > 0.0)
        s += (p(a, b) < 1.0) ? (cap - o) * std::log1p(-p(a, b))
                             : -std::numeric_limits<double>::infinity();
    }
  }
  for (int a = 0; a < k; ++a) {
    const double na = static_cast<double>(state.block_size(a));
    if (na > 0.0) {
      s += (pi[static_cast<std::size_t>(a)] > 0.0)
               ? na * std::log(pi[static_cast<std::size_t>(a)])
               : -std::numeric_limits<double>::infinity();
    }
  }
  return s;
}

SoftGraph expected_adjacency(std::span<const int> z, const SymMatrix& p) {
  const int n = static_cast<int>(z.size());
  SoftGraph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      g.set_weight(i, j, p(z[i], z[j]));
    }
  }
  return g;
}

}  // namespace sbm
