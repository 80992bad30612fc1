#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace test_util {

// One-sample Kolmogorov-Smirnov statistic against a CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

// Critical value at level 0.01 (two-sided, asymptotic).
inline double ks_critical_01(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

inline double ks_two_sample_critical_01(std::size_t n1, std::size_t n2) {
  return 1.6276 * std::sqrt(static_cast<double>(n1 + n2) / (static_cast<double>(n1) * n2));
}

inline double simpson(const std::function<double(double)>& f, double a, double b) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 40) {
  const double mid = 0.5 * (a + b);
  const double whole = simpson(f, a, b);
  const double left = simpson(f, a, mid);
  const double right = simpson(f, mid, b);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, mid, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, mid, b, 0.5 * tol, depth - 1);
}

// Canonical first-appearance relabeling, usable as a partition key.
inline std::vector<int> canonical_partition(std::span<const int> z) {
  std::vector<int> out(z.size());
  std::map<int, int> remap;
  int next = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(z[i], next);
    if (inserted) ++next;
    out[i] = it->second;
  }
  return out;
}

inline std::string partition_key(std::span<const int> z) {
  const auto canon = canonical_partition(z);
  std::string key;
  for (int c : canon) {
    key += std::to_string(c);
    key += '.';
  }
  return key;
}

// All set partitions of {0..n-1} as restricted-growth label vectors.
inline std::vector<std::vector<int>> all_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> z(static_cast<std::size_t>(n), 0);
  const std::function<void(int, int)> rec = [&](int i, int max_used) {
    if (i == n) {
      out.push_back(z);
      return;
    }
    for (int c = 0; c <= max_used + 1 && c < n; ++c) {
      z[static_cast<std::size_t>(i)] = c;
      rec(i + 1, std::max(max_used, c));
    }
  };
  if (n > 0) rec(1, 0);  // item 0 pinned to block 0
  return out;
}

// All label vectors in {0..k-1}^n.
inline std::vector<std::vector<int>> all_labelings(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> z(static_cast<std::size_t>(n), 0);
  const std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      out.push_back(z);
      return;
    }
    for (int c = 0; c < k; ++c) {
      z[static_cast<std::size_t>(i)] = c;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

// Total variation distance between two distributions over string keys.
inline double total_variation(const std::map<std::string, double>& p,
                              const std::map<std::string, double>& q) {
  double tv = 0.0;
  for (const auto& [key, mass] : p) {
    const auto it = q.find(key);
    tv += std::fabs(mass - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [key, mass] : q) {
    if (!p.contains(key)) tv += mass;
  }
  return 0.5 * tv;
}

}  // namespace test_util
