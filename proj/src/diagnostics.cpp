#include "sbm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "sbm/rng.hpp"
#include "sbm/warnings.hpp"

namespace sbm {

double deviance(const Graph& g, std::span<const int> z, const SymMatrix& p) {
  const int n = g.node_count();
  const int k = p.dim();
  if (static_cast<int>(z.size()) != n) throw std::invalid_argument("label length mismatch");
  std::vector<double> weight(static_cast<std::size_t>(k), 0.0);
  for (int zi : z) {
    if (zi < 0 || zi >= k) throw std::invalid_argument("label out of range for P");
    weight[static_cast<std::size_t>(zi)] += 1.0 / n;
  }
  double s_edge = 0.0, s_gap = 0.0;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const double w = weight[static_cast<std::size_t>(a)] * weight[static_cast<std::size_t>(b)];
      s_edge += p(a, b) * w;
      s_gap += (1.0 - p(a, b)) * w;
    }
  }
  const double m = static_cast<double>(g.edge_count());
  const double pairs = 0.5 * n * (n - 1.0);
  return -2.0 * (m * std::log(s_edge) + (pairs - m) * std::log(s_gap));
}

double split_rhat(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2) throw std::invalid_argument("split R-hat needs at least two chains");
  const std::size_t len = chains.front().size();
  if (len < 4) throw std::invalid_argument("chains must have length >= 4");
  for (const auto& c : chains) {
    if (c.size() != len) throw std::invalid_argument("chains must share one length");
  }
  const std::size_t half = len / 2;
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    spans.emplace_back(c, 0);          // first half
    spans.emplace_back(c, len - half); // last half (middle dropped when odd)
  }
  const double n = static_cast<double>(half);
  std::vector<double> means, vars;
  for (const auto& [c, start] : spans) {
    const auto& x = chains[c];
    double mean = 0.0;
    for (std::size_t t = 0; t < half; ++t) mean += x[start + t];
    mean /= n;
    double var = 0.0;
    for (std::size_t t = 0; t < half; ++t) {
      const double d = x[start + t] - mean;
      var += d * d;
    }
    var /= (n - 1.0);
    means.push_back(mean);
    vars.push_back(var);
  }
  const double w = std::accumulate(vars.begin(), vars.end(), 0.0) / vars.size();
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / means.size();
  if (!(w > 1e-13 * (1.0 + grand * grand))) {
    warn("split R-hat: zero within-chain variance");
    return std::numeric_limits<double>::infinity();
  }
  double b = 0.0;
  for (double mu : means) b += (mu - grand) * (mu - grand);
  b *= n / (static_cast<double>(means.size()) - 1.0);
  const double var_plus = (n - 1.0) / n * w + b / n;
  return std::sqrt(var_plus / w);
}

double effective_sample_size(std::span<const double> x) {
  const std::size_t len = x.size();
  if (len < 8) throw std::invalid_argument("ESS needs at least 8 samples");
  const double n = static_cast<double>(len);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  const auto autocov = [&](std::size_t t) {
    double s = 0.0;
    for (std::size_t i = 0; i + t < len; ++i) s += (x[i] - mean) * (x[i + t] - mean);
    return s / n;
  };
  const double c0 = autocov(0);
  if (!(c0 > 0.0)) {
    warn("ESS: degenerate variance, reporting chain length");
    return n;
  }
  double tau = -1.0;
  for (std::size_t m = 0; 2 * m + 1 < len; ++m) {
    const double pair_sum = (autocov(2 * m) + autocov(2 * m + 1)) / c0;
    if (pair_sum <= 0.0) break;
    tau += 2.0 * pair_sum;
  }
  tau = std::max(tau, 1.0 / n);
  return n / tau;
}

PsmMatrix posterior_similarity(const std::vector<std::vector<int>>& samples) {
  if (samples.empty()) throw std::invalid_argument("posterior similarity needs >= 1 sample");
  const int n = static_cast<int>(samples.front().size());
  for (const auto& z : samples) {
    if (static_cast<int>(z.size()) != n) throw std::invalid_argument("sample length mismatch");
  }
  PsmMatrix psm;
  psm.n = n;
  psm.values.assign(static_cast<std::size_t>(n) * n, 0.0);
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (const auto& z : samples) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        if (z[static_cast<std::size_t>(i)] == z[static_cast<std::size_t>(j)]) {
          psm.values[static_cast<std::size_t>(i) * n + j] += inv;
          psm.values[static_cast<std::size_t>(j) * n + i] += (i == j) ? 0.0 : inv;
        }
      }
    }
  }
  return psm;
}

double vi_lower_bound_loss(std::span<const int> partition, const PsmMatrix& psm) {
  const int n = psm.n;
  if (static_cast<int>(partition.size()) != n) throw std::invalid_argument("partition length mismatch");
  std::map<int, long> sizes;
  for (int c : partition) ++sizes[c];
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    double w = 0.0;
    for (int j = 0; j < n; ++j) {
      if (partition[static_cast<std::size_t>(j)] == partition[static_cast<std::size_t>(i)]) {
        w += psm(i, j);
      }
    }
    loss += std::log(static_cast<double>(sizes[partition[static_cast<std::size_t>(i)]])) -
            2.0 * std::log(w);
  }
  return loss / n;
}

namespace {

std::vector<int> canonical_labels(std::span<const int> z) {
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

// Incremental state for greedy VI-lower-bound search.
class GreedyState {
 public:
  GreedyState(const PsmMatrix& psm) : psm_(psm), n_(psm.n), c_(psm.n, -1) {}

  void clear() {
    std::fill(c_.begin(), c_.end(), -1);
    sizes_.clear();
    w_.clear();
  }

  int cluster_count() const { return static_cast<int>(sizes_.size()); }
  const std::vector<int>& labels() const { return c_; }

  // Change in total objective (n * loss) when item i joins cluster cl;
  // cl == cluster_count() probes a brand-new cluster.
  double join_delta(int i, int cl) const {
    if (cl == cluster_count()) return 0.0;  // log 1 - 2 log psm_ii
    const long s = sizes_[static_cast<std::size_t>(cl)];
    double delta = std::log(static_cast<double>(s + 1));
    delta -= 2.0 * std::log(w_of(i, cl) + psm_(i, i));
    const double grow = std::log(static_cast<double>(s + 1)) - std::log(static_cast<double>(s));
    for (int j = 0; j < n_; ++j) {
      if (c_[static_cast<std::size_t>(j)] == cl) {
        delta += grow - 2.0 * (std::log(w_of(j, cl) + psm_(j, i)) - std::log(w_of(j, cl)));
      }
    }
    return delta;
  }

  void join(int i, int cl) {
    if (cl == cluster_count()) {
      sizes_.push_back(0);
      w_.resize(w_.size() + static_cast<std::size_t>(n_), 0.0);
    }
    ++sizes_[static_cast<std::size_t>(cl)];
    for (int j = 0; j < n_; ++j) w_ref(j, cl) += psm_(j, i);
    c_[static_cast<std::size_t>(i)] = cl;
  }

  double leave_delta(int i) const {
    const int cl = c_[static_cast<std::size_t>(i)];
    const long s = sizes_[static_cast<std::size_t>(cl)];
    double delta = -(std::log(static_cast<double>(s)) - 2.0 * std::log(w_of(i, cl)));
    if (s > 1) {
      const double shrink = std::log(static_cast<double>(s - 1)) - std::log(static_cast<double>(s));
      for (int j = 0; j < n_; ++j) {
        if (j != i && c_[static_cast<std::size_t>(j)] == cl) {
          delta += shrink - 2.0 * (std::log(w_of(j, cl) - psm_(j, i)) - std::log(w_of(j, cl)));
        }
      }
    }
    return delta;
  }

  void leave(int i) {
    const int cl = c_[static_cast<std::size_t>(i)];
    --sizes_[static_cast<std::size_t>(cl)];
    for (int j = 0; j < n_; ++j) w_ref(j, cl) -= psm_(j, i);
    c_[static_cast<std::size_t>(i)] = -1;
    if (sizes_[static_cast<std::size_t>(cl)] == 0) {
      const int last = cluster_count() - 1;
      if (cl != last) {
        sizes_[static_cast<std::size_t>(cl)] = sizes_[static_cast<std::size_t>(last)];
        for (int j = 0; j < n_; ++j) w_ref(j, cl) = w_of(j, last);
        for (auto& cj : c_) {
          if (cj == last) cj = cl;
        }
      }
      sizes_.pop_back();
      w_.resize(w_.size() - static_cast<std::size_t>(n_));
    }
  }

  void load(std::span<const int> partition) {
    clear();
    const auto canon = canonical_labels(partition);
    for (int i = 0; i < n_; ++i) {
      const int cl = canon[static_cast<std::size_t>(i)];
      while (cl >= cluster_count()) {
        sizes_.push_back(0);
        w_.resize(w_.size() + static_cast<std::size_t>(n_), 0.0);
      }
      ++sizes_[static_cast<std::size_t>(cl)];
      c_[static_cast<std::size_t>(i)] = cl;
    }
    for (int j = 0; j < n_; ++j) {
      for (int i = 0; i < n_; ++i) {
        w_ref(j, c_[static_cast<std::size_t>(i)]) += psm_(j, i);
      }
    }
  }

  double objective() const {
    double total = 0.0;
    for (int i = 0; i < n_; ++i) {
      const int cl = c_[static_cast<std::size_t>(i)];
      total += std::log(static_cast<double>(sizes_[static_cast<std::size_t>(cl)])) -
               2.0 * std::log(w_of(i, cl));
    }
    return total;
  }

  // Full sweeps of single-item best moves until no strict improvement.
  void hill_climb(int max_sweeps) {
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      bool improved = false;
      for (int i = 0; i < n_; ++i) {
        const double out_delta = leave_delta(i);
        leave(i);
        int best_cl = -1;
        double best_delta = std::numeric_limits<double>::infinity();
        const int options = cluster_count() + 1;
        for (int cl = 0; cl < options; ++cl) {
          const double d = join_delta(i, cl);
          if (d < best_delta - 1e-13) {
            best_delta = d;
            best_cl = cl;
          }
        }
        join(i, best_cl);
        if (out_delta + best_delta < -1e-10) improved = true;
      }
      if (!improved) break;
    }
  }

 private:
  double w_of(int j, int cl) const { return w_[static_cast<std::size_t>(cl) * n_ + j]; }
  double& w_ref(int j, int cl) { return w_[static_cast<std::size_t>(cl) * n_ + j]; }

  const PsmMatrix& psm_;
  int n_;
  std::vector<int> c_;
  std::vector<long> sizes_;
  std::vector<double> w_;  // w_[cl*n + j] = sum of psm(j, i) over members i of cl
};

}  // namespace

PointEstimate point_estimate_partition(const std::vector<std::vector<int>>& samples,
                                       const PsmMatrix& psm, std::uint64_t seed, int restarts) {
  if (samples.empty()) throw std::invalid_argument("point estimate needs samples");
  const int n = psm.n;
  RngStream rng(seed);
  GreedyState st(psm);

  std::vector<int> best;
  double best_loss = std::numeric_limits<double>::infinity();
  const auto consider = [&](const std::vector<int>& cand, double loss) {
    if (loss < best_loss) {
      best_loss = loss;
      best = cand;
    }
  };

  // Sampled partitions are always candidates (hill-climbed from the best one).
  for (const auto& z : samples) {
    consider(canonical_labels(z), vi_lower_bound_loss(z, psm));
  }
  st.load(best);
  st.hill_climb(50);
  consider(st.labels(), st.objective() / n);

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int r = 0; r < restarts; ++r) {
    // Fisher-Yates shuffle for the allocation order
    for (int i = n - 1; i > 0; --i) {
      const int j = std::min(static_cast<int>(rng.uniform() * (i + 1)), i);
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    st.clear();
    for (int i : order) {
      int best_cl = -1;
      double best_delta = std::numeric_limits<double>::infinity();
      const int options = st.cluster_count() + 1;
      for (int cl = 0; cl < options; ++cl) {
        const double d = st.join_delta(i, cl);
        if (d < best_delta - 1e-13) {
          best_delta = d;
          best_cl = cl;
        }
      }
      st.join(i, best_cl);
    }
    st.hill_climb(50);
    consider(st.labels(), st.objective() / n);
  }

  PointEstimate out;
  out.partition = canonical_labels(best);
  out.k_hat = 1 + *std::max_element(out.partition.begin(), out.partition.end());
  out.loss = best_loss;
  return out;
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("partitions must share a length");
  const long n = static_cast<long>(a.size());
  if (n < 2) throw std::invalid_argument("ARI needs n >= 2");
  std::map<std::pair<int, int>, long> joint;
  std::map<int, long> ca, cb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[{a[i], b[i]}];
    ++ca[a[i]];
    ++cb[b[i]];
  }
  const auto comb2 = [](long x) { return 0.5 * static_cast<double>(x) * (x - 1); };
  double sum_joint = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [key, c] : joint) sum_joint += comb2(c);
  for (const auto& [key, c] : ca) sum_a += comb2(c);
  for (const auto& [key, c] : cb) sum_b += comb2(c);
  const double expected = sum_a * sum_b / comb2(n);
  const double denom = 0.5 * (sum_a + sum_b) - expected;
  if (denom == 0.0) return 1.0;  // both partitions trivial and identical
  return (sum_joint - expected) / denom;
}

double relative_k_error(int k_hat, int k_true) {
  if (k_true < 1) throw std::invalid_argument("true k must be >= 1");
  return static_cast<double>(k_hat - k_true) / static_cast<double>(k_true);
}

AlignedPAverage order_blocks_by_size(const std::vector<std::vector<int>>& samples,
                                     const std::vector<SymMatrix>& p_snapshots) {
  AlignedPAverage out;
  if (samples.empty()) return out;
  if (samples.size() != p_snapshots.size()) {
    throw std::invalid_argument("one P snapshot per sample required");
  }
  std::map<int, int> k_counts;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    ++k_counts[p_snapshots[s].dim()];
  }
  int modal_k = 0, modal_count = 0;
  for (const auto& [k, c] : k_counts) {
    if (c > modal_count) {
      modal_k = k;
      modal_count = c;
    }
  }
  out.k_hat = modal_k;
  out.p_hat = SymMatrix(modal_k, 0.0);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (p_snapshots[s].dim() != modal_k) continue;
    const auto& z = samples[s];
    std::vector<long> sizes(static_cast<std::size_t>(modal_k), 0);
    std::vector<int> first_node(static_cast<std::size_t>(modal_k), std::numeric_limits<int>::max());
    for (int i = 0; i < static_cast<int>(z.size()); ++i) {
      const int b = z[static_cast<std::size_t>(i)];
      if (b < 0 || b >= modal_k) throw std::invalid_argument("label outside snapshot dimension");
      ++sizes[static_cast<std::size_t>(b)];
      first_node[static_cast<std::size_t>(b)] = std::min(first_node[static_cast<std::size_t>(b)], i);
    }
    std::vector<int> perm(static_cast<std::size_t>(modal_k));
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](int x, int y) {
      if (sizes[static_cast<std::size_t>(x)] != sizes[static_cast<std::size_t>(y)]) {
        return sizes[static_cast<std::size_t>(x)] > sizes[static_cast<std::size_t>(y)];
      }
      return first_node[static_cast<std::size_t>(x)] < first_node[static_cast<std::size_t>(y)];
    });
    for (int a = 0; a < modal_k; ++a) {
      for (int b = a; b < modal_k; ++b) {
        out.p_hat.set(a, b, out.p_hat(a, b) + p_snapshots[s](perm[static_cast<std::size_t>(a)],
                                                             perm[static_cast<std::size_t>(b)]));
      }
    }
    ++out.used_samples;
  }
  if (out.used_samples > 0) {
    for (int a = 0; a < modal_k; ++a) {
      for (int b = a; b < modal_k; ++b) {
        out.p_hat.set(a, b, out.p_hat(a, b) / out.used_samples);
      }
    }
  }
  return out;
}

double signal_to_noise(double n, double p, double q) {
  if (!(n >= 1.0)) throw std::invalid_argument("n must be >= 1");
  if (!(q >= 0.0) || !(q <= p) || !(p <= 1.0)) {
    throw std::invalid_argument("need 0 <= q <= p <= 1");
  }
  if (p == q) return 0.0;
  return n * (p - q) * (p - q) / (2.0 * (p + q));
}

}  // namespace sbm
