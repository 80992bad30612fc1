#include "sbm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sbm/diagnostics.hpp"
#include "sbm/special.hpp"
#include "sbm/warnings.hpp"

namespace sbm {

bool is_assortative(SamplerVariant v) {
  return v == SamplerVariant::assortative_fixed_k || v == SamplerVariant::assortative_unknown_k;
}

bool is_fixed_k(SamplerVariant v) {
  return v == SamplerVariant::standard_fixed_k || v == SamplerVariant::assortative_fixed_k;
}

std::string variant_name(SamplerVariant v) {
  switch (v) {
    case SamplerVariant::standard_fixed_k: return "sbm-k";
    case SamplerVariant::assortative_fixed_k: return "asbm-k";
    case SamplerVariant::standard_unknown_k: return "sbm";
    case SamplerVariant::assortative_unknown_k: return "asbm";
  }
  throw std::logic_error("unreachable");
}

SamplerVariant parse_variant(const std::string& name) {
  if (name == "sbm-k") return SamplerVariant::standard_fixed_k;
  if (name == "asbm-k") return SamplerVariant::assortative_fixed_k;
  if (name == "sbm") return SamplerVariant::standard_unknown_k;
  if (name == "asbm") return SamplerVariant::assortative_unknown_k;
  throw std::invalid_argument("unknown variant: " + name +
                              " (expected sbm-k, asbm-k, sbm or asbm)");
}

void SamplerConfig::validate(int n) const {
  if (n < 2) throw std::invalid_argument("need at least two nodes to sample");
  if (iterations < 0 || burn_in < 0 || thinning < 1 || burn_in > iterations) {
    throw std::invalid_argument("schedule must satisfy 0 <= burnIn <= iterations, thinning >= 1");
  }
  if (is_fixed_k(variant)) {
    if (fixed_k < 1 || fixed_k > n) throw std::invalid_argument("fixed k must lie in [1, n]");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  } else {
    if (!(lambda > 0.0) || !(lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0,1)");
    if (gamma != 1.0) {
      warn("unknown-k samplers fix the Dirichlet scale at 1; gamma setting ignored");
    }
  }
  if (is_assortative(variant)) {
    if (alpha != 1.0 || beta != 1.0) {
      warn("assortative variants use uniform connectivity components; alpha/beta ignored");
    }
    if (variant == SamplerVariant::assortative_unknown_k && aux_m < 1) {
      throw std::invalid_argument("auxiliary community count m must be >= 1");
    }
  } else {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("alpha/beta must be positive");
  }
  if (init == Init::given && static_cast<int>(init_labels.size()) != n) {
    throw std::invalid_argument("given init labels must have length n");
  }
  if (init == Init::singletons && is_fixed_k(variant) && fixed_k != n) {
    throw std::invalid_argument("singleton init needs k == n under a fixed-k variant");
  }
}

ConnectivityState update_p_standard(RngStream& rng, const BlockState& state, double alpha,
                                    double beta) {
  const int k = state.k();
  ConnectivityState conn(k);
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      const double o = static_cast<double>(state.edges_between(a, b));
      const double cap = static_cast<double>(state.pair_capacity(a, b));
      conn.set(a, b, sample_beta(rng, o + alpha, cap - o + beta));
    }
  }
  return conn;
}

ConnectivityState update_p_assortative(RngStream& rng, const BlockState& state, double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
  const int k = state.k();
  ConnectivityState conn(k);
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      const double o = static_cast<double>(state.edges_between(a, b));
      const double cap = static_cast<double>(state.pair_capacity(a, b));
      const double lo = (a == b) ? epsilon : 0.0;
      const double hi = (a == b) ? 1.0 : epsilon;
      conn.set(a, b, sample_truncated_beta(rng, o + 1.0, cap - o + 1.0, lo, hi));
    }
  }
  conn.epsilon = epsilon;
  return conn;
}

double epsilon_inverse_cdf(int k, double p_min_diag, double q_bar, double w) {
  if (k < 2) throw std::invalid_argument("inverse CDF branch needs k >= 2");
  if (!(q_bar > 0.0) || !(q_bar < p_min_diag) || !(p_min_diag < 1.0)) {
    throw std::invalid_argument("need 0 < q_bar < p < 1");
  }
  if (k == 2) {
    return std::exp(w * (std::log(p_min_diag) - std::log(q_bar)) + std::log(q_bar));
  }
  // density ~ eps^{-k(k-1)/2}; integrate in log space to survive large k
  const double t = 1.0 - 0.5 * static_cast<double>(k) * (k - 1);
  const double a1 = t * std::log(p_min_diag);
  const double a2 = t * std::log(q_bar);  // a2 >= a1 since t < 0
  const double log_mix = a2 + std::log(w * std::exp(a1 - a2) + (1.0 - w));
  return std::exp(log_mix / t);
}

double update_epsilon(RngStream& rng, const ConnectivityState& conn, int k) {
  if (conn.dim() != k) throw std::invalid_argument("connectivity dimension mismatch");
  if (k == 1) {
    const double w = rng.uniform();
    return -std::expm1(w * std::log1p(-conn.p(0, 0)));
  }
  double p = 1.0, q = 0.0;
  for (int a = 0; a < k; ++a) {
    p = std::min(p, conn.p(a, a));
    for (int b = a + 1; b < k; ++b) q = std::max(q, conn.p(a, b));
  }
  if (!(p > q)) {
    throw std::logic_error("assortativity invariant violated: min P_aa <= max P_ab");
  }
  if (!conn.epsilon.has_value()) {
    throw std::invalid_argument("incumbent epsilon required for the latent-variable update");
  }
  // y | eps ~ U(0, (1-eps)^{-k}), handled in logs so large k cannot overflow.
  const double log_y = std::log(rng.uniform()) - k * std::log1p(-*conn.epsilon);
  const double bound = -std::expm1(-log_y / static_cast<double>(k));
  const double q_bar = std::max(q, bound);
  const double w = rng.uniform();
  const double eps = epsilon_inverse_cdf(k, p, q_bar, w);
  return std::clamp(eps, std::nextafter(q_bar, 1.0), std::nextafter(p, 0.0));
}

namespace {

// Block sizes with node i left out.
std::vector<long> sizes_excluding(const BlockState& state, int i) {
  std::vector<long> nb(static_cast<std::size_t>(state.k()));
  for (int b = 0; b < state.k(); ++b) nb[static_cast<std::size_t>(b)] = state.block_size(b);
  if (state.assigned(i)) --nb[static_cast<std::size_t>(state.label(i))];
  return nb;
}

// sum_b r_b log P_ab + (n_b - r_b) log(1 - P_ab) for candidate block a.
double block_log_lik(const ConnectivityState& conn, int a, std::span<const long> r,
                     std::span<const long> nb) {
  double s = 0.0;
  for (std::size_t b = 0; b < nb.size(); ++b) {
    const long rb = r[b];
    const long miss = nb[b] - rb;
    if (rb > 0) s += static_cast<double>(rb) * conn.logp(a, static_cast<int>(b));
    if (miss > 0) s += static_cast<double>(miss) * conn.log1mp(a, static_cast<int>(b));
  }
  return s;
}

double aux_log_lik(const AuxComponent& aux, std::span<const long> r, std::span<const long> nb) {
  double s = 0.0;
  for (std::size_t b = 0; b < nb.size(); ++b) {
    const long rb = r[b];
    const long miss = nb[b] - rb;
    if (rb > 0) s += static_cast<double>(rb) * std::log(aux.off[b]);
    if (miss > 0) s += static_cast<double>(miss) * std::log1p(-aux.off[b]);
  }
  return s;
}

// log of k_{-i}(k_{-i} - lambda) / (n - 1 - k_{-i} + lambda)
double new_cluster_log_prior(long n, long k_minus, double lambda) {
  return std::log(static_cast<double>(k_minus)) +
         std::log(static_cast<double>(k_minus) - lambda) -
         std::log(static_cast<double>(n - 1 - k_minus) + lambda);
}

}  // namespace

std::vector<double> fixed_k_assignment_log_weights(const BlockState& state,
                                                   const ConnectivityState& conn, const Graph& g,
                                                   int i, double gamma, bool prior_only) {
  const int k = state.k();
  if (conn.dim() != k) throw std::invalid_argument("connectivity dimension mismatch");
  const auto r = state.node_block_edge_counts(g, i);
  const auto nb = sizes_excluding(state, i);
  std::vector<double> lw(static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) {
    double v = std::log(static_cast<double>(nb[static_cast<std::size_t>(a)]) + gamma);
    if (!prior_only) v += block_log_lik(conn, a, r, nb);
    lw[static_cast<std::size_t>(a)] = v;
  }
  return lw;
}

int update_z_fixed_k(RngStream& rng, int i, BlockState& state, const ConnectivityState& conn,
                     const Graph& g, double gamma, bool prior_only) {
  const auto lw = fixed_k_assignment_log_weights(state, conn, g, i, gamma, prior_only);
  const int a = sample_categorical_log(rng, lw);
  if (a != state.label(i)) state.move_node(g, i, a);
  return a;
}

double marginal_log_lik_new_cluster(const Graph& g, const BlockState& state, int i, double alpha,
                                    double beta) {
  const auto r = state.node_block_edge_counts(g, i);
  const auto nb = sizes_excluding(state, i);
  const double lb0 = log_beta(alpha, beta);
  double s = 0.0;
  for (std::size_t b = 0; b < nb.size(); ++b) {
    if (nb[b] == 0) continue;  // not a block of z_{-i}
    s += log_beta(static_cast<double>(r[b]) + alpha, static_cast<double>(nb[b] - r[b]) + beta) -
         lb0;
  }
  return s;
}

std::vector<double> unknown_standard_assignment_log_weights(const BlockState& state,
                                                            const ConnectivityState& conn,
                                                            const Graph& g, int i, double lambda,
                                                            double alpha, double beta,
                                                            bool prior_only) {
  const int km = state.k();
  if (conn.dim() != km) throw std::invalid_argument("connectivity dimension mismatch");
  const auto r = state.node_block_edge_counts(g, i);
  const auto nb = sizes_excluding(state, i);
  std::vector<double> lw(static_cast<std::size_t>(km) + 1);
  for (int a = 0; a < km; ++a) {
    double v = std::log(static_cast<double>(nb[static_cast<std::size_t>(a)]) + 1.0);
    if (!prior_only) v += block_log_lik(conn, a, r, nb);
    lw[static_cast<std::size_t>(a)] = v;
  }
  double fresh = new_cluster_log_prior(state.n(), km, lambda);
  if (!prior_only) fresh += marginal_log_lik_new_cluster(g, state, i, alpha, beta);
  lw[static_cast<std::size_t>(km)] = fresh;
  return lw;
}

int update_z_unknown_standard(RngStream& rng, int i, BlockState& state, ConnectivityState& conn,
                              const Graph& g, double lambda, double alpha, double beta,
                              bool prior_only) {
  const MoveOutcome removal = state.remove_node(g, i);
  if (removal.removed) conn.remove_block_swap_last(removal.removed_block);

  const int km = state.k();
  const auto lw =
      unknown_standard_assignment_log_weights(state, conn, g, i, lambda, alpha, beta, prior_only);
  const int a = sample_categorical_log(rng, lw);
  if (a == km) {
    // The new block's parameters must come from their conditional given the
    // edges of node i alone, or the kernel loses the posterior as its
    // stationary law; the diagonal has no data and stays a prior draw.
    const auto r = state.node_block_edge_counts(g, i);
    const auto nb = sizes_excluding(state, i);
    state.add_node(g, i, BlockState::kNewBlock);
    conn.append_block();
    for (int b = 0; b < km; ++b) {
      conn.set(km, b,
               sample_beta(rng, static_cast<double>(r[static_cast<std::size_t>(b)]) + alpha,
                           static_cast<double>(nb[static_cast<std::size_t>(b)] -
                                               r[static_cast<std::size_t>(b)]) +
                               beta));
    }
    conn.set(km, km, sample_beta(rng, alpha, beta));
    return km;
  }
  state.add_node(g, i, a);
  return a;
}

AuxComponent draw_aux_component(RngStream& rng, int k_existing, double epsilon) {
  AuxComponent aux;
  aux.off.resize(static_cast<std::size_t>(k_existing));
  for (auto& v : aux.off) v = rng.uniform(0.0, epsilon);
  aux.diag = rng.uniform(epsilon, 1.0);
  return aux;
}

std::vector<double> assortative_assignment_log_weights(const BlockState& state,
                                                       const ConnectivityState& conn,
                                                       const Graph& g, int i,
                                                       const std::vector<AuxComponent>& aux,
                                                       double lambda, bool prior_only) {
  const int km = state.k();
  if (conn.dim() != km) throw std::invalid_argument("connectivity dimension mismatch");
  const int m = static_cast<int>(aux.size());
  const auto r = state.node_block_edge_counts(g, i);
  const auto nb = sizes_excluding(state, i);
  std::vector<double> lw(static_cast<std::size_t>(km + m));
  for (int a = 0; a < km; ++a) {
    double v = std::log(static_cast<double>(nb[static_cast<std::size_t>(a)]) + 1.0);
    if (!prior_only) v += block_log_lik(conn, a, r, nb);
    lw[static_cast<std::size_t>(a)] = v;
  }
  const double fresh = new_cluster_log_prior(state.n(), km, lambda) -
                       std::log(static_cast<double>(m));
  for (int t = 0; t < m; ++t) {
    double v = fresh;
    if (!prior_only) v += aux_log_lik(aux[static_cast<std::size_t>(t)], r, nb);
    lw[static_cast<std::size_t>(km + t)] = v;
  }
  return lw;
}

double assortative_aux_average_likelihood(RngStream& rng, std::span<const long> r,
                                          std::span<const long> block_counts, double epsilon,
                                          int m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  const int k = static_cast<int>(block_counts.size());
  double total = 0.0;
  for (int t = 0; t < m; ++t) {
    const AuxComponent aux = draw_aux_component(rng, k, epsilon);
    double s = 0.0;
    for (int b = 0; b < k; ++b) {
      const long rb = r[b];
      const long miss = block_counts[b] - rb;
      if (rb > 0) s += static_cast<double>(rb) * std::log(aux.off[static_cast<std::size_t>(b)]);
      if (miss > 0) s += static_cast<double>(miss) * std::log1p(-aux.off[static_cast<std::size_t>(b)]);
    }
    total += std::exp(s);
  }
  return total / static_cast<double>(m);
}

int update_z_unknown_assortative(RngStream& rng, int i, BlockState& state,
                                 ConnectivityState& conn, const Graph& g, double lambda, int aux_m,
                                 bool prior_only) {
  if (!conn.epsilon.has_value()) throw std::invalid_argument("assortative update needs epsilon");
  const double eps = *conn.epsilon;
  const int cur = state.label(i);
  const bool singleton = state.block_size(cur) == 1;

  std::vector<double> pre_row;
  double pre_diag = 0.0;
  if (singleton) {
    pre_row.resize(static_cast<std::size_t>(state.k()));
    for (int b = 0; b < state.k(); ++b) pre_row[static_cast<std::size_t>(b)] = conn.p(cur, b);
    pre_diag = conn.p(cur, cur);
  }

  const MoveOutcome removal = state.remove_node(g, i);
  if (removal.removed) conn.remove_block_swap_last(removal.removed_block);
  const int km = state.k();

  std::vector<AuxComponent> aux(static_cast<std::size_t>(aux_m));
  for (int t = 0; t < aux_m; ++t) {
    if (t == 0 && singleton) {
      // a vacated singleton keeps its parameters as the first candidate
      aux[0].off.resize(static_cast<std::size_t>(km));
      for (int b = 0; b < km; ++b) {
        const int pre = (removal.swapped_from != -1 && b == removal.removed_block)
                            ? removal.swapped_from
                            : b;
        aux[0].off[static_cast<std::size_t>(b)] = pre_row[static_cast<std::size_t>(pre)];
      }
      aux[0].diag = pre_diag;
    } else {
      aux[static_cast<std::size_t>(t)] = draw_aux_component(rng, km, eps);
    }
  }

  const auto lw = assortative_assignment_log_weights(state, conn, g, i, aux, lambda, prior_only);
  const int a = sample_categorical_log(rng, lw);
  if (a < km) {
    state.add_node(g, i, a);
    return a;
  }
  const auto& chosen = aux[static_cast<std::size_t>(a - km)];
  state.add_node(g, i, BlockState::kNewBlock);
  conn.append_block();
  for (int b = 0; b < km; ++b) conn.set(km, b, chosen.off[static_cast<std::size_t>(b)]);
  conn.set(km, km, chosen.diag);
  return km;
}

namespace {

std::vector<int> initial_labels(RngStream& rng, const Graph& g, const SamplerConfig& cfg) {
  const int n = g.node_count();
  std::vector<int> z(static_cast<std::size_t>(n));
  switch (cfg.init) {
    case SamplerConfig::Init::given:
      z = cfg.init_labels;
      break;
    case SamplerConfig::Init::singletons:
      for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = i;
      break;
    case SamplerConfig::Init::random_blocks: {
      int k_init = cfg.init_k > 0 ? cfg.init_k
                                  : (is_fixed_k(cfg.variant)
                                         ? cfg.fixed_k
                                         : static_cast<int>(std::ceil(std::sqrt(n))));
      k_init = std::clamp(k_init, 1, n);
      for (auto& zi : z) {
        zi = std::min(static_cast<int>(rng.uniform() * k_init), k_init - 1);
      }
      break;
    }
  }
  if (!is_fixed_k(cfg.variant)) {
    // compacting states need contiguous labels; relabel by first appearance
    std::vector<int> remap(z.size(), -1);
    int next = 0;
    for (auto& zi : z) {
      if (remap[static_cast<std::size_t>(zi)] < 0) remap[static_cast<std::size_t>(zi)] = next++;
      zi = remap[static_cast<std::size_t>(zi)];
    }
  }
  return z;
}

}  // namespace

ChainTrace run_chain(const Graph& g, const SamplerConfig& cfg) {
  cfg.validate(g.node_count());
  const int n = g.node_count();
  RngStream rng(cfg.seed);

  std::vector<int> z = initial_labels(rng, g, cfg);
  BlockState state = is_fixed_k(cfg.variant) ? BlockState::with_fixed_k(g, std::move(z), cfg.fixed_k)
                                             : BlockState::from_labels(g, std::move(z));

  const bool assort = is_assortative(cfg.variant);
  double epsilon = 0.5;  // before any P draw there is no constraint state
  ConnectivityState conn;

  ChainTrace trace;
  trace.config = cfg;
  trace.n = n;
  if (cfg.iterations > cfg.burn_in) {
    trace.records.reserve(static_cast<std::size_t>(cfg.kept_samples()));
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  if (cfg.reverse_sweep) std::reverse(order.begin(), order.end());

  for (long it = 1; it <= cfg.iterations; ++it) {
    if (assort) {
      conn = update_p_assortative(rng, state, epsilon);
      epsilon = update_epsilon(rng, conn, state.k());
      conn.epsilon = epsilon;
    } else {
      conn = update_p_standard(rng, state, cfg.alpha, cfg.beta);
    }

    for (int i : order) {
      switch (cfg.variant) {
        case SamplerVariant::standard_fixed_k:
        case SamplerVariant::assortative_fixed_k:
          update_z_fixed_k(rng, i, state, conn, g, cfg.gamma, cfg.prior_only);
          break;
        case SamplerVariant::standard_unknown_k:
          update_z_unknown_standard(rng, i, state, conn, g, cfg.lambda, cfg.alpha, cfg.beta,
                                    cfg.prior_only);
          break;
        case SamplerVariant::assortative_unknown_k:
          update_z_unknown_assortative(rng, i, state, conn, g, cfg.lambda, cfg.aux_m,
                                       cfg.prior_only);
          break;
      }
    }

    if (it > cfg.burn_in && (it - cfg.burn_in) % cfg.thinning == 0) {
      TraceRecord rec;
      rec.z = state.labels();
      rec.k = state.k();
      rec.p = conn.matrix();
      if (assort) rec.epsilon = epsilon;
      rec.deviance = deviance(g, state.labels(), conn.matrix());
      trace.records.push_back(std::move(rec));
    }
  }
  return trace;
}

}  // namespace sbm
