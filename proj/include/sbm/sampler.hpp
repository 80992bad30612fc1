#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbm/block_state.hpp"
#include "sbm/connectivity.hpp"
#include "sbm/distributions.hpp"
#include "sbm/graph.hpp"
#include "sbm/rng.hpp"

namespace sbm {

enum class SamplerVariant {
  standard_fixed_k,       // conjugate beta components, k fixed
  assortative_fixed_k,    // cutoff-constrained components, k fixed
  standard_unknown_k,     // Gnedin prior on k, conjugate marginal for new blocks
  assortative_unknown_k,  // Gnedin prior on k, auxiliary-community proposals
};

bool is_assortative(SamplerVariant v);
bool is_fixed_k(SamplerVariant v);
std::string variant_name(SamplerVariant v);
SamplerVariant parse_variant(const std::string& name);

struct SamplerConfig {
  SamplerVariant variant = SamplerVariant::standard_unknown_k;
  int fixed_k = 0;      // required for fixed-k variants
  double gamma = 1.0;   // Dirichlet concentration (fixed-k only; 1 when k unknown)
  double alpha = 1.0;   // beta prior shapes (standard variants)
  double beta = 1.0;
  double lambda = 0.45;  // Gnedin parameter (unknown-k)
  int aux_m = 3;         // auxiliary communities (assortative unknown-k)

  long iterations = 4000;  // total sweeps, burn-in included
  long burn_in = 1000;
  long thinning = 5;
  std::uint64_t seed = 0;

  enum class Init { random_blocks, singletons, given };
  Init init = Init::random_blocks;
  int init_k = 0;                // 0 = default rule (fixed_k, or ceil(sqrt(n)))
  std::vector<int> init_labels;  // used when init == given

  // Test instrumentation.
  bool prior_only = false;    // force every likelihood factor to a constant
  bool reverse_sweep = false; // update nodes in reverse order

  long kept_samples() const { return (iterations - burn_in) / thinning; }
  void validate(int n) const;  // throws std::invalid_argument on inconsistency
};

struct TraceRecord {
  std::vector<int> z;
  int k = 0;
  SymMatrix p;
  std::optional<double> epsilon;
  double deviance = 0.0;
};

struct ChainTrace {
  SamplerConfig config;
  int n = 0;
  std::vector<TraceRecord> records;
};

// --- component conditional updates -----------------------------------------

// P_ab ~ Beta(O_ab + alpha, n_ab - O_ab + beta), independently for a <= b.
ConnectivityState update_p_standard(RngStream& rng, const BlockState& state, double alpha,
                                    double beta);

// Diagonal entries from beta_(epsilon,1), off-diagonals from beta_(0,epsilon);
// the strong-assortativity ordering holds by construction.
ConnectivityState update_p_assortative(RngStream& rng, const BlockState& state, double epsilon);

// Inverse-CDF draw for the cutoff conditional; density on (q_bar, p) is
// proportional to epsilon^{-k(k-1)/2}. Exposed for direct testing.
double epsilon_inverse_cdf(int k, double p_min_diag, double q_bar, double w);

// Full-conditional cutoff update; conn.epsilon holds the incumbent value used
// by the latent uniform when k >= 2. Throws if min diag <= max off-diagonal.
double update_epsilon(RngStream& rng, const ConnectivityState& conn, int k);

// Log weights of assigning node i to each of the k blocks, fixed-k variant:
// log(n_a(z_-i) + gamma) + sum over blocks of edge/non-edge log factors.
std::vector<double> fixed_k_assignment_log_weights(const BlockState& state,
                                                   const ConnectivityState& conn, const Graph& g,
                                                   int i, double gamma, bool prior_only = false);

int update_z_fixed_k(RngStream& rng, int i, BlockState& state, const ConnectivityState& conn,
                     const Graph& g, double gamma, bool prior_only = false);

// log m(A_i): new-block likelihood with the fresh block's edge probabilities
// integrated against their beta prior; node i must currently be unassigned.
double marginal_log_lik_new_cluster(const Graph& g, const BlockState& state, int i, double alpha,
                                    double beta);

// Log weights over the k_{-i} existing blocks plus one new-block slot; node i
// must already be detached from the state.
std::vector<double> unknown_standard_assignment_log_weights(const BlockState& state,
                                                            const ConnectivityState& conn,
                                                            const Graph& g, int i, double lambda,
                                                            double alpha, double beta,
                                                            bool prior_only = false);

// One collapsed label update for the standard unknown-k sampler. Mutates the
// state and connectivity (block creation/removal reshapes P). Returns the new
// label.
int update_z_unknown_standard(RngStream& rng, int i, BlockState& state, ConnectivityState& conn,
                              const Graph& g, double lambda, double alpha, double beta,
                              bool prior_only = false);

// Auxiliary-community parameters for one candidate block: entries toward the
// existing blocks plus the candidate's own diagonal.
struct AuxComponent {
  std::vector<double> off;  // toward existing blocks, in block order
  double diag = 0.0;
};

AuxComponent draw_aux_component(RngStream& rng, int k_existing, double epsilon);

// Log weights over k existing blocks followed by m auxiliary candidates.
std::vector<double> assortative_assignment_log_weights(const BlockState& state,
                                                       const ConnectivityState& conn,
                                                       const Graph& g, int i,
                                                       const std::vector<AuxComponent>& aux,
                                                       double lambda, bool prior_only = false);

// Monte Carlo estimate of the new-cluster likelihood factor: the average over
// m fresh auxiliary components of prod_b P^{r_b} (1-P)^{n_b - r_b}. This is
// the same draw-and-average route the sampler uses.
double assortative_aux_average_likelihood(RngStream& rng, std::span<const long> r,
                                          std::span<const long> block_counts, double epsilon,
                                          int m);

// One label update for the assortative unknown-k sampler (auxiliary-community
// scheme; a current singleton's parameters serve as the first candidate).
int update_z_unknown_assortative(RngStream& rng, int i, BlockState& state,
                                 ConnectivityState& conn, const Graph& g, double lambda, int aux_m,
                                 bool prior_only = false);

// --- full chains ------------------------------------------------------------

ChainTrace run_chain(const Graph& g, const SamplerConfig& config);

}  // namespace sbm
