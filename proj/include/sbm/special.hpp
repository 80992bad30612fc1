#pragma once

#include <span>

namespace sbm {

// log Gamma(a) + log Gamma(b) - log Gamma(a+b)
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a,b), continued-fraction evaluation.
double reg_inc_beta(double x, double a, double b);

// Inverse of I_x(a,b) in x, solved to |I_x(a,b) - p| <= 1e-12 by bracketed
// Newton iteration with bisection fallback. Throws on non-convergence.
double reg_inc_beta_inv(double p, double a, double b);

double log_sum_exp(std::span<const double> v);

}  // namespace sbm
