#include "sbm/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

namespace sbm {

namespace {

Graph sample_edges_given_labels(RngStream& rng, const std::vector<int>& z, const SymMatrix& p) {
  const int n = static_cast<int>(z.size());
  std::vector<Graph::Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < p(z[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(j)])) {
        edges.emplace_back(i, j);
      }
    }
  }
  return Graph::from_edges(n, edges);
}

}  // namespace

GeneratedNetwork generate_sbm(RngStream& rng, const SbmSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("need n >= 1");
  const int k = spec.p.dim();
  if (static_cast<int>(spec.pi.size()) != k) throw std::invalid_argument("pi/P dimension mismatch");
  double total = 0.0;
  for (double w : spec.pi) {
    if (!(w >= 0.0)) throw std::invalid_argument("pi entries must be nonnegative");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw std::invalid_argument("pi must sum to 1");
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      if (!(spec.p(a, b) >= 0.0) || !(spec.p(a, b) <= 1.0)) {
        throw std::invalid_argument("P entries must lie in [0,1]");
      }
    }
  }
  GeneratedNetwork out;
  out.z_true.resize(static_cast<std::size_t>(spec.n));
  for (auto& zi : out.z_true) {
    const double u = rng.uniform();
    double cum = 0.0;
    zi = k - 1;
    for (int a = 0; a < k; ++a) {
      cum += spec.pi[static_cast<std::size_t>(a)];
      if (u <= cum) {
        zi = a;
        break;
      }
    }
  }
  out.graph = sample_edges_given_labels(rng, out.z_true, spec.p);
  return out;
}

SymMatrix star_example_p() {
  SymMatrix p(3);
  p.set(0, 0, 0.30);
  p.set(0, 1, 0.085);
  p.set(0, 2, 0.085);
  p.set(1, 1, 0.13);
  p.set(1, 2, 0.01);
  p.set(2, 2, 0.13);
  return p;
}

std::vector<int> star_example_labels() {
  std::vector<int> z(100);
  for (int i = 0; i < 100; ++i) z[static_cast<std::size_t>(i)] = i < 60 ? 0 : (i < 80 ? 1 : 2);
  return z;
}

GeneratedNetwork generate_star_example(RngStream& rng) {
  GeneratedNetwork out;
  out.z_true = star_example_labels();
  out.graph = sample_edges_given_labels(rng, out.z_true, star_example_p());
  return out;
}

namespace {

// Discrete power law with weight (integral of u^-t over [max(d,x), d+1)) for
// integer degrees d in [ceil(x)-1 .. cap]; the continuous lower cutoff x is
// the knob the mean is solved against.
double power_integral(double t, double lo, double hi) {
  if (hi <= lo) return 0.0;
  if (std::fabs(t - 1.0) < 1e-12) return std::log(hi) - std::log(lo);
  return (std::pow(hi, 1.0 - t) - std::pow(lo, 1.0 - t)) / (1.0 - t);
}

struct TruncatedPowerLaw {
  double t = 2.0;
  double x_min = 1.0;
  int cap = 1;
  std::vector<double> cdf;  // over degrees floor(x_min) .. cap
  int lowest = 1;

  void build() {
    lowest = static_cast<int>(std::floor(x_min));
    cdf.clear();
    double cum = 0.0;
    for (int d = lowest; d <= cap; ++d) {
      const double lo = std::max(static_cast<double>(d), x_min);
      const double hi = static_cast<double>(d) + 1.0;
      cum += power_integral(t, lo, hi);
      cdf.push_back(cum);
    }
    for (auto& v : cdf) v /= cum;
  }

  double mean() const {
    double m = 0.0, prev = 0.0;
    for (std::size_t idx = 0; idx < cdf.size(); ++idx) {
      m += (cdf[idx] - prev) * static_cast<double>(lowest + static_cast<int>(idx));
      prev = cdf[idx];
    }
    return m;
  }

  int draw(RngStream& rng) const {
    const double u = rng.uniform();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const int idx = static_cast<int>(it - cdf.begin());
    return lowest + std::min(idx, static_cast<int>(cdf.size()) - 1);
  }
};

// Solve the continuous lower cutoff so the discrete truncated mean hits the
// target; bisection over [1, cap].
TruncatedPowerLaw solve_degree_law(double t, double target_mean, int cap) {
  TruncatedPowerLaw law;
  law.t = t;
  law.cap = cap;
  law.x_min = 1.0;
  law.build();
  const double mean_lo = law.mean();
  law.x_min = static_cast<double>(cap);
  law.build();
  const double mean_hi = law.mean();
  if (target_mean < mean_lo || target_mean > mean_hi) {
    throw GenerationError("target mean degree " + std::to_string(target_mean) +
                          " is outside the attainable range [" + std::to_string(mean_lo) + ", " +
                          std::to_string(mean_hi) + "]");
  }
  double lo = 1.0, hi = static_cast<double>(cap);
  for (int it = 0; it < 200; ++it) {
    law.x_min = 0.5 * (lo + hi);
    law.build();
    if (law.mean() < target_mean) {
      lo = law.x_min;
    } else {
      hi = law.x_min;
    }
  }
  law.x_min = 0.5 * (lo + hi);
  law.build();
  return law;
}

std::vector<int> draw_community_sizes(RngStream& rng, const LfrSpec& spec) {
  TruncatedPowerLaw law;
  law.t = spec.t2;
  law.cap = spec.n_max;
  law.x_min = static_cast<double>(spec.n_min);
  law.build();

  std::vector<int> sizes;
  long total = 0;
  int rejects = 0;
  while (total < spec.n && rejects < 10000) {
    const int s = law.draw(rng);
    if (total + s <= spec.n) {
      sizes.push_back(s);
      total += s;
    } else {
      ++rejects;  // resample the last size until the total fits
    }
  }
  if (total < spec.n) {
    // distribute the remainder over the largest communities, capped at n_max
    long residual = spec.n - total;
    std::vector<std::size_t> idx(sizes.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
    for (std::size_t j : idx) {
      const long room = spec.n_max - sizes[j];
      const long add = std::min(room, residual);
      sizes[j] += static_cast<int>(add);
      residual -= add;
      if (residual == 0) break;
    }
    if (residual > 0) {
      throw GenerationError("community sizes cannot reach n within [n_min, n_max]");
    }
  }
  return sizes;
}

// Every node needs a community with size >= internal degree + 1. With nodes
// taken in decreasing demand order this reduces to a prefix condition on the
// sorted sequences.
bool sizes_can_host(const std::vector<int>& sizes, const std::vector<int>& demand_desc) {
  std::vector<int> sorted_sizes = sizes;
  std::sort(sorted_sizes.begin(), sorted_sizes.end(), std::greater<>());
  long placed = 0;
  std::size_t c = 0;
  long open_slots = 0;
  for (int demand : demand_desc) {
    while (c < sorted_sizes.size() && sorted_sizes[c] >= demand + 1) {
      open_slots += sorted_sizes[c];
      ++c;
    }
    ++placed;
    if (placed > open_slots) return false;
  }
  return true;
}

// Havel-Hakimi realization of a degree sequence on the given nodes, followed
// by double-edge swaps for randomness. Non-graphical sequences shed one unit
// off the largest residual (returned so the caller can move it to the
// external stub pool).
std::vector<Graph::Edge> realize_degree_sequence(RngStream& rng, const std::vector<int>& nodes,
                                                 std::vector<int>& degrees,
                                                 std::vector<int>& shed) {
  const std::size_t m = nodes.size();
  std::vector<int> residual = degrees;
  long total = std::accumulate(residual.begin(), residual.end(), 0L);
  const auto largest = [&]() {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < m; ++i) {
      if (residual[i] > residual[arg]) arg = i;
    }
    return arg;
  };
  if (total % 2 == 1) {
    const std::size_t a = largest();
    --residual[a];
    ++shed[a];
  }

  std::vector<Graph::Edge> edges;
  for (;;) {
    edges.clear();
    std::vector<int> work = residual;
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    bool ok = true;
    for (;;) {
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return work[a] > work[b]; });
      const std::size_t u = order[0];
      if (work[u] == 0) break;
      if (static_cast<std::size_t>(work[u]) >= m) {
        ok = false;
        break;
      }
      const int need = work[u];
      for (int t = 1; t <= need; ++t) {
        const std::size_t v = order[static_cast<std::size_t>(t)];
        if (work[v] == 0) {
          ok = false;
          break;
        }
        --work[v];
        edges.emplace_back(nodes[u], nodes[v]);
      }
      if (!ok) break;
      work[u] = 0;
    }
    if (ok) break;
    // not graphical: move one stub of the most demanding node outside
    const std::size_t a = largest();
    if (residual[a] == 0) break;
    --residual[a];
    ++shed[a];
    if (std::accumulate(residual.begin(), residual.end(), 0L) % 2 == 1) {
      const std::size_t b = largest();
      --residual[b];
      ++shed[b];
    }
  }

  // randomize with double-edge swaps
  if (edges.size() > 1) {
    std::set<std::pair<int, int>> present;
    for (const auto& [u, v] : edges) present.insert(std::minmax(u, v));
    const std::size_t swaps = 10 * edges.size();
    for (std::size_t t = 0; t < swaps; ++t) {
      const std::size_t e1 = std::min(static_cast<std::size_t>(rng.uniform() * edges.size()),
                                      edges.size() - 1);
      const std::size_t e2 = std::min(static_cast<std::size_t>(rng.uniform() * edges.size()),
                                      edges.size() - 1);
      if (e1 == e2) continue;
      auto [a, b] = edges[e1];
      auto [c, d] = edges[e2];
      if (rng.uniform() < 0.5) std::swap(c, d);
      if (a == c || a == d || b == c || b == d) continue;
      const auto n1 = std::minmax(a, c);
      const auto n2 = std::minmax(b, d);
      if (present.contains(n1) || present.contains(n2)) continue;
      present.erase(std::minmax(a, b));
      present.erase(std::minmax(edges[e2].first, edges[e2].second));
      edges[e1] = {n1.first, n1.second};
      edges[e2] = {n2.first, n2.second};
      present.insert(n1);
      present.insert(n2);
    }
  }
  return edges;
}

// Pair up stubs, fixing self-loops / duplicates / (for external stubs)
// within-community pairs by random swaps; irreparable pairs are dropped.
void wire_stubs(RngStream& rng, std::vector<int>& stubs, const std::vector<int>& community,
                bool forbid_same_community, std::set<std::pair<int, int>>& edge_set,
                std::vector<Graph::Edge>& edges) {
  if (stubs.size() % 2 == 1) stubs.pop_back();
  const auto bad = [&](int u, int v) {
    if (u == v) return true;
    if (forbid_same_community && community[static_cast<std::size_t>(u)] == community[static_cast<std::size_t>(v)]) {
      return true;
    }
    const auto key = std::minmax(u, v);
    return edge_set.contains({key.first, key.second});
  };
  // Fisher-Yates
  for (std::size_t i = stubs.size(); i > 1; --i) {
    const std::size_t j = std::min(static_cast<std::size_t>(rng.uniform() * i), i - 1);
    std::swap(stubs[i - 1], stubs[j]);
  }
  for (std::size_t pos = 0; pos + 1 < stubs.size(); pos += 2) {
    bool ok = !bad(stubs[pos], stubs[pos + 1]);
    for (int attempt = 0; !ok && attempt < 100; ++attempt) {
      // swap the partner with a random stub further down the list
      if (pos + 2 >= stubs.size()) break;
      const std::size_t other =
          pos + 2 + std::min(static_cast<std::size_t>(rng.uniform() * (stubs.size() - pos - 2)),
                             stubs.size() - pos - 3);
      std::swap(stubs[pos + 1], stubs[other]);
      ok = !bad(stubs[pos], stubs[pos + 1]);
    }
    if (!ok) continue;  // drop the pair; degrees tolerate small shortfalls
    const auto key = std::minmax(stubs[pos], stubs[pos + 1]);
    edge_set.insert({key.first, key.second});
    edges.emplace_back(key.first, key.second);
  }
}

}  // namespace

GeneratedNetwork generate_lfr(RngStream& rng, const LfrSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("need n >= 2");
  if (!(spec.n_min >= 1) || spec.n_min > spec.n_max || spec.n_max > spec.n) {
    throw std::invalid_argument("need 1 <= n_min <= n_max <= n");
  }
  if (!(spec.d_max >= 1) || spec.d_max >= spec.n) throw std::invalid_argument("need 1 <= d_max < n");
  if (!(spec.mu > 0.0) || !(spec.mu < 1.0)) throw std::invalid_argument("mu must lie in (0,1)");
  if (!(spec.t1 > 0.0) || !(spec.t2 > 0.0)) throw std::invalid_argument("exponents must be positive");
  if (!(spec.d_avg >= 1.0) || spec.d_avg > spec.d_max) {
    throw std::invalid_argument("need 1 <= d_avg <= d_max");
  }

  const TruncatedPowerLaw degree_law = solve_degree_law(spec.t1, spec.d_avg, spec.d_max);

  std::vector<int> degree(static_cast<std::size_t>(spec.n));
  std::vector<int> internal(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    degree[static_cast<std::size_t>(i)] = degree_law.draw(rng);
    internal[static_cast<std::size_t>(i)] =
        static_cast<int>(std::ceil((1.0 - spec.mu) * degree[static_cast<std::size_t>(i)]));
  }

  // High-internal-degree nodes are placed first; each needs a community with
  // size >= internal + 1, so the size sequence is redrawn until it can host
  // the demand profile (the benchmark is only defined on such draws).
  std::vector<int> node_order(static_cast<std::size_t>(spec.n));
  std::iota(node_order.begin(), node_order.end(), 0);
  std::sort(node_order.begin(), node_order.end(), [&](int a, int b) {
    if (internal[static_cast<std::size_t>(a)] != internal[static_cast<std::size_t>(b)]) {
      return internal[static_cast<std::size_t>(a)] > internal[static_cast<std::size_t>(b)];
    }
    return a < b;
  });
  std::vector<int> demand_desc;
  demand_desc.reserve(node_order.size());
  for (int i : node_order) demand_desc.push_back(internal[static_cast<std::size_t>(i)]);

  if (demand_desc.front() > spec.n_max - 1) {
    throw GenerationError("largest internal degree " + std::to_string(demand_desc.front()) +
                          " exceeds the maximum community capacity " +
                          std::to_string(spec.n_max - 1));
  }
  std::vector<int> sizes = draw_community_sizes(rng, spec);
  // Infeasible size draws are repaired by merging the smallest communities:
  // the benchmark is only defined on size sequences that can host the
  // internal-degree demand.
  while (!sizes_can_host(sizes, demand_desc)) {
    std::sort(sizes.begin(), sizes.end());
    if (sizes.size() >= 2 && sizes[0] + sizes[1] <= spec.n_max) {
      sizes[1] += sizes[0];
      sizes.erase(sizes.begin());
      continue;
    }
    // smallest cannot merge: hand its slots to communities with headroom
    bool moved = false;
    if (sizes.size() >= 2) {
      int give = sizes[0];
      for (std::size_t c = sizes.size() - 1; c >= 1 && give > 0; --c) {
        const int room = spec.n_max - sizes[c];
        const int add = std::min(room, give);
        sizes[c] += add;
        give -= add;
      }
      if (give == 0) {
        sizes.erase(sizes.begin());
        moved = true;
      }
    }
    if (!moved && !sizes_can_host(sizes, demand_desc)) {
      throw GenerationError("community sizes cannot host the internal-degree demand");
    }
  }
  const int n_comms = static_cast<int>(sizes.size());

  std::vector<int> community(static_cast<std::size_t>(spec.n), -1);
  std::vector<int> filled(static_cast<std::size_t>(n_comms), 0);
  for (int i : node_order) {
    std::vector<int> options;
    for (int c = 0; c < n_comms; ++c) {
      if (filled[static_cast<std::size_t>(c)] < sizes[static_cast<std::size_t>(c)] &&
          internal[static_cast<std::size_t>(i)] <= sizes[static_cast<std::size_t>(c)] - 1) {
        options.push_back(c);
      }
    }
    if (options.empty()) {
      throw GenerationError("node placement failed despite a hostable size sequence");
    }
    const int pick = options[std::min(static_cast<std::size_t>(rng.uniform() * options.size()),
                                      options.size() - 1)];
    community[static_cast<std::size_t>(i)] = pick;
    ++filled[static_cast<std::size_t>(pick)];
  }

  // Internal edges realized per community from the exact internal degree
  // sequence; whatever cannot be realized is shed to the external pool.
  std::vector<int> shed(static_cast<std::size_t>(spec.n), 0);
  std::vector<Graph::Edge> edges;
  std::set<std::pair<int, int>> edge_set;
  for (int c = 0; c < n_comms; ++c) {
    std::vector<int> members;
    std::vector<int> member_internal;
    for (int i = 0; i < spec.n; ++i) {
      if (community[static_cast<std::size_t>(i)] != c) continue;
      members.push_back(i);
      member_internal.push_back(internal[static_cast<std::size_t>(i)]);
    }
    std::vector<int> member_shed(members.size(), 0);
    const auto internal_edges = realize_degree_sequence(rng, members, member_internal, member_shed);
    for (const auto& e : internal_edges) {
      edge_set.insert(std::minmax(e.first, e.second));
      edges.push_back(e);
    }
    for (std::size_t j = 0; j < members.size(); ++j) {
      shed[static_cast<std::size_t>(members[j])] = member_shed[j];
    }
  }
  std::vector<int> ext_stubs;
  for (int i = 0; i < spec.n; ++i) {
    const int ext = degree[static_cast<std::size_t>(i)] - internal[static_cast<std::size_t>(i)] +
                    shed[static_cast<std::size_t>(i)];
    for (int s = 0; s < ext; ++s) ext_stubs.push_back(i);
  }
  wire_stubs(rng, ext_stubs, community, /*forbid_same_community=*/true, edge_set, edges);

  GeneratedNetwork out;
  out.z_true = community;
  out.graph = Graph::from_edges(spec.n, edges);
  return out;
}

double realized_mixing(const Graph& g, std::span<const int> z) {
  if (g.edge_count() == 0) throw std::invalid_argument("mixing is undefined on an empty graph");
  if (static_cast<int>(z.size()) != g.node_count()) throw std::invalid_argument("label length mismatch");
  long cross = 0;
  for (int i = 0; i < g.node_count(); ++i) {
    for (int j : g.neighbors(i)) {
      if (j > i && z[static_cast<std::size_t>(i)] != z[static_cast<std::size_t>(j)]) ++cross;
    }
  }
  return static_cast<double>(cross) / static_cast<double>(g.edge_count());
}

}  // namespace sbm
