#include "sbm/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sbm/special.hpp"
#include "sbm/warnings.hpp"

namespace sbm {

namespace {

void check_shape(double s, const char* what) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !(lambda < 1.0)) {
    throw std::invalid_argument("lambda must lie in (0,1)");
  }
}

}  // namespace

double sample_normal(RngStream& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample_gamma(RngStream& rng, double shape) {
  check_shape(shape, "gamma shape");
  if (shape < 1.0) {
    const double u = rng.uniform();
    return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = sample_normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return d * v;
    }
  }
}

double sample_beta(RngStream& rng, double alpha, double beta) {
  check_shape(alpha, "beta shape alpha");
  check_shape(beta, "beta shape beta");
  for (;;) {
    const double ga = sample_gamma(rng, alpha);
    const double gb = sample_gamma(rng, beta);
    const double s = ga + gb;
    if (s > 0.0) return ga / s;
  }
}

double sample_truncated_beta(RngStream& rng, double alpha, double beta, double lo, double hi) {
  check_shape(alpha, "beta shape alpha");
  check_shape(beta, "beta shape beta");
  if (!(lo >= 0.0) || !(lo < hi) || !(hi <= 1.0)) {
    throw std::invalid_argument("truncation interval must satisfy 0 <= lo < hi <= 1");
  }
  const double f_lo = lo <= 0.0 ? 0.0 : reg_inc_beta(lo, alpha, beta);
  const double f_hi = hi >= 1.0 ? 1.0 : reg_inc_beta(hi, alpha, beta);
  const double mass = f_hi - f_lo;
  const double u = rng.uniform();
  if (!(mass > 1e-300)) {
    warn("truncated beta: interval mass underflow, drawing uniformly on the interval");
    return lo + u * (hi - lo);
  }
  double x = reg_inc_beta_inv(f_lo + u * mass, alpha, beta);
  const double inner_lo = std::nextafter(lo, 1.0);
  const double inner_hi = std::nextafter(hi, 0.0);
  return std::clamp(x, inner_lo, inner_hi);
}

std::vector<double> sample_dirichlet_symmetric(RngStream& rng, int k, double gamma) {
  if (k < 1) throw std::invalid_argument("dirichlet dimension must be >= 1");
  check_shape(gamma, "dirichlet concentration");
  if (k == 1) return {1.0};
  std::vector<double> out(static_cast<std::size_t>(k));
  for (;;) {
    double total = 0.0;
    for (auto& v : out) {
      v = sample_gamma(rng, gamma);
      total += v;
    }
    if (total > 0.0) {
      for (auto& v : out) v /= total;
      return out;
    }
  }
}

int sample_categorical_log(RngStream& rng, std::span<const double> log_weights) {
  if (log_weights.empty()) throw std::invalid_argument("empty categorical weights");
  const double m = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(m)) throw std::invalid_argument("categorical weights are all -inf");
  double total = 0.0;
  for (double lw : log_weights) total += std::exp(lw - m);
  const double u = rng.uniform() * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    cum += std::exp(log_weights[i] - m);
    if (u <= cum) return static_cast<int>(i);
  }
  return static_cast<int>(log_weights.size()) - 1;
}

double gnedin_log_pmf(int k, double lambda) {
  check_lambda(lambda);
  if (k < 1) throw std::invalid_argument("gnedin pmf needs k >= 1");
  // (1-lambda)_{(k-1)} = Gamma(k-lambda) / Gamma(1-lambda)
  return std::log(lambda) + std::lgamma(k - lambda) - std::lgamma(1.0 - lambda) -
         std::lgamma(k + 1.0);
}

double gnedin_pmf(int k, double lambda) { return std::exp(gnedin_log_pmf(k, lambda)); }

double log_v(long n, long k, double lambda) {
  check_lambda(lambda);
  if (k < 1 || n < 1 || k > n) throw std::invalid_argument("log_v requires 1 <= k <= n");
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return std::lgamma(kd)                                            // (k-1)!
         + std::lgamma(kd - lambda) - std::lgamma(1.0 - lambda)     // (1-lambda)_{k-1}
         + std::lgamma(nd - kd + lambda) - std::lgamma(lambda)      // (lambda)_{n-k}
         - std::lgamma(nd)                                          // (n-1)!
         - (std::lgamma(nd + lambda) - std::lgamma(1.0 + lambda));  // (1+lambda)_{n-1}
}

PredictiveProbabilities predictive_probabilities(std::span<const long> block_sizes, long n,
                                                 double lambda) {
  check_lambda(lambda);
  const long k = static_cast<long>(block_sizes.size());
  if (k < 1) throw std::invalid_argument("predictive probabilities need k >= 1 blocks");
  long total = 0;
  for (long s : block_sizes) total += s;
  if (total != n - 1) {
    throw std::invalid_argument("block sizes must sum to n-1");
  }
  const double denom = static_cast<double>(n - 1) * (static_cast<double>(n - 1) + lambda);
  PredictiveProbabilities out;
  out.existing.reserve(block_sizes.size());
  const double existing_factor = (static_cast<double>(n - 1 - k) + lambda) / denom;
  for (long s : block_sizes) {
    out.existing.push_back(existing_factor * static_cast<double>(s + 1));
  }
  out.fresh = static_cast<double>(k) * (static_cast<double>(k) - lambda) / denom;
  return out;
}

}  // namespace sbm
