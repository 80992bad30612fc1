#include "sbm/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sbm {

namespace {

void check_shapes(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("beta shapes must be positive and finite");
  }
}

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 400;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

double log_beta(double a, double b) {
  check_shapes(a, b);
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double reg_inc_beta(double x, double a, double b) {
  check_shapes(a, b);
  if (!(x >= 0.0) || !(x <= 1.0)) throw std::invalid_argument("x must lie in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double reg_inc_beta_inv(double p, double a, double b) {
  check_shapes(a, b);
  if (!(p >= 0.0) || !(p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  constexpr double kTol = 1e-12;
  constexpr int kMaxIter = 300;
  const double lbeta = log_beta(a, b);

  double lo = 0.0, hi = 1.0;
  double x = a / (a + b);
  for (int it = 0; it < kMaxIter; ++it) {
    const double f = reg_inc_beta(x, a, b);
    if (std::fabs(f - p) <= kTol) return x;
    if (f > p) {
      hi = x;
    } else {
      lo = x;
    }
    const double log_pdf = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lbeta;
    double next = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(log_pdf)) {
      next = x - (f - p) * std::exp(-log_pdf);
    }
    if (!(next > lo) || !(next < hi)) {
      next = 0.5 * (lo + hi);
    }
    if (next == x) {
      // Bracket is a single representable value; accept it.
      return x;
    }
    x = next;
  }
  if (std::fabs(reg_inc_beta(x, a, b) - p) <= 1e-9) return x;
  throw std::runtime_error("inverse incomplete beta did not converge");
}

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("log_sum_exp of empty span");
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace sbm
