#pragma once

#include <span>
#include <vector>

#include "sbm/rng.hpp"

namespace sbm {

double sample_normal(RngStream& rng);

// Unit-scale gamma variate, Marsaglia-Tsang squeeze.
double sample_gamma(RngStream& rng, double shape);

double sample_beta(RngStream& rng, double alpha, double beta);

// Beta(alpha,beta) conditioned on the interval (lo,hi), drawn by inversion of
// the regularized incomplete beta. When the interval mass underflows
// (< 1e-300) the draw degrades to uniform on (lo,hi) and a warning is logged.
double sample_truncated_beta(RngStream& rng, double alpha, double beta, double lo, double hi);

std::vector<double> sample_dirichlet_symmetric(RngStream& rng, int k, double gamma);

// Inverse-CDF draw from unnormalized log weights. Ties and ordering are
// resolved by walking the weights in index order.
int sample_categorical_log(RngStream& rng, std::span<const double> log_weights);

// Prior mass p(k) = lambda (1-lambda)_{(k-1)} / k! on k = 1,2,...
// Rising-factorial convention (x)_t = x (x+1) ... (x+t-1).
double gnedin_log_pmf(int k, double lambda);
double gnedin_pmf(int k, double lambda);

// log V_{n,k} = log[(k-1)! (1-lambda)_{k-1} (lambda)_{n-k}] -
//               log[(n-1)! (1+lambda)_{n-1}], unit Dirichlet scale.
double log_v(long n, long k, double lambda);

struct PredictiveProbabilities {
  std::vector<double> existing;  // one weight per existing block
  double fresh = 0.0;            // weight of opening a new block
};

// Gnedin-prior predictive allocation probabilities for the n-th item given
// block sizes over the other n-1 items. Weights sum to one.
PredictiveProbabilities predictive_probabilities(std::span<const long> block_sizes, long n,
                                                 double lambda);

}  // namespace sbm
