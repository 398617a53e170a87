#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gsq/graph.hpp"
#include "gsq/graph_io.hpp"
#include "gsq/rational.hpp"

namespace gsq {

// Brute-force caps. GSQ_CAP_OVERRIDE="cheeger=22,iso=14,exact_partition=14" overrides defaults.
struct Caps {
  std::size_t cheeger = 20;
  std::size_t iso = 12;
  std::size_t exact_partition = 12;
  std::size_t ball = 200000;

  static Caps from_env() {
    Caps caps;
    if (const char* env = std::getenv("GSQ_CAP_OVERRIDE")) {
      for (const auto& item : detail::split(env, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        require(eq != std::string::npos, "cap", "malformed GSQ_CAP_OVERRIDE item '" + item + "'");
        auto key = item.substr(0, eq);
        auto value = static_cast<std::size_t>(std::stoull(item.substr(eq + 1)));
        if (key == "cheeger") caps.cheeger = value;
        else if (key == "iso") caps.iso = value;
        else if (key == "exact_partition") caps.exact_partition = value;
        else if (key == "ball") caps.ball = value;
        else throw Error("cap", "unknown cap '" + key + "'");
      }
    }
    return caps;
  }
};

inline const Caps& default_caps() {
  static const Caps caps = Caps::from_env();
  return caps;
}

enum class GirthMode { simple, multi };
enum class EdgeMode { simple, multi, multi_no_loops };

inline std::string to_string(EdgeMode m) {
  switch (m) {
    case EdgeMode::simple: return "simple";
    case EdgeMode::multi: return "multi";
    case EdgeMode::multi_no_loops: return "multi_no_loops";
  }
  return "?";
}

inline EdgeMode parse_edge_mode(const std::string& s) {
  if (s == "simple") return EdgeMode::simple;
  if (s == "multi") return EdgeMode::multi;
  if (s == "multi_no_loops") return EdgeMode::multi_no_loops;
  throw Error("mode", "unknown edge mode '" + s + "'");
}

inline std::size_t edge_count(const LabeledMultigraph& g, EdgeMode mode) {
  switch (mode) {
    case EdgeMode::simple: return SimpleGraph(g).edge_count();
    case EdgeMode::multi: return g.edge_count();
    case EdgeMode::multi_no_loops:
      return static_cast<std::size_t>(
          std::count_if(g.edges().begin(), g.edges().end(), [](const auto& e) { return e.source != e.target; }));
  }
  return 0;
}

// Length of the shortest cycle of the simple view; kInfinity on forests.
inline Distance girth(const SimpleGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<Distance> per_root(n, kInfinity);
  parallel_for(n, [&](std::size_t s) {
    std::vector<Distance> dist(n, kInfinity);
    std::vector<Vertex> parent(n, static_cast<Vertex>(-1));
    std::vector<Vertex> queue{static_cast<Vertex>(s)};
    dist[s] = 0;
    Distance best = kInfinity;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Vertex u = queue[head];
      if (best != kInfinity && 2 * dist[u] + 1 >= best) break;
      for (Vertex v : g.neighbors(u)) {
        if (dist[v] == kInfinity) {
          dist[v] = dist[u] + 1;
          parent[v] = u;
          queue.push_back(v);
        } else if (parent[u] != v) {
          best = std::min(best, dist[u] + dist[v] + 1);
        }
      }
    }
    per_root[s] = best;
  });
  Distance best = kInfinity;
  for (auto b : per_root) best = std::min(best, b);
  return best;
}

// Multi mode counts a loop as a 1-cycle and two edges on one vertex pair as a 2-cycle.
inline Distance girth(const LabeledMultigraph& g, GirthMode mode) {
  if (mode == GirthMode::multi) {
    std::map<std::pair<Vertex, Vertex>, int> pairs;
    bool has_loop = false;
    bool has_parallel = false;
    for (const auto& e : g.edges()) {
      if (e.source == e.target) {
        has_loop = true;
        continue;
      }
      auto key = std::minmax(e.source, e.target);
      if (++pairs[key] > 1) has_parallel = true;
    }
    if (has_loop) return 1;
    if (has_parallel) return 2;
  }
  return girth(SimpleGraph(g));
}

// |E| - |V| + #components on the simple view.
inline std::size_t cycle_space_dim(const SimpleGraph& g) {
  return g.edge_count() + connected_components(g).count - g.vertex_count();
}

inline std::size_t cycle_space_dim(const LabeledMultigraph& g) { return cycle_space_dim(SimpleGraph(g)); }

struct RatioRow {
  long index;
  std::size_t vertices;
  std::size_t edges;
  Rational ratio;
  Rational tail_min;  // min ratio over this row and all later rows
};

struct RatioTable {
  EdgeMode mode = EdgeMode::multi;
  std::vector<RatioRow> rows;
  std::size_t tail_window = 0;  // ceil(rows/2)

  // Minimum over the last ceil(half) rows: the finite stand-in for the liminf.
  Rational liminf_proxy() const {
    require(!rows.empty(), "empty", "empty ratio table");
    return rows[rows.size() - tail_window].tail_min;
  }
};

inline RatioTable edge_number_table(const GraphSequence& seq, EdgeMode mode) {
  require(seq.size() > 0, "empty", "edge_number_table needs a non-empty sequence");
  RatioTable t;
  t.mode = mode;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& g = seq.graphs[i];
    require(g.vertex_count() > 0, "empty", "graph with no vertices");
    auto e = edge_count(g, mode);
    Rational r(static_cast<std::int64_t>(e), static_cast<std::int64_t>(g.vertex_count()));
    t.rows.push_back({seq.indices[i], g.vertex_count(), e, r, r});
  }
  for (std::size_t i = t.rows.size() - 1; i-- > 0;)
    t.rows[i].tail_min = std::min(t.rows[i].ratio, t.rows[i + 1].tail_min);
  t.tail_window = (t.rows.size() + 1) / 2;
  return t;
}

inline void write_ratio_table(std::ostream& out, const RatioTable& t) {
  out << "#index\tvertices\tedges_" << to_string(t.mode) << "\tratio\ttail_min\n";
  for (const auto& r : t.rows)
    out << r.index << "\t" << r.vertices << "\t" << r.edges << "\t" << to_string(r.ratio) << "\t"
        << to_string(r.tail_min) << "\n";
}

// Exact Cheeger constant min |dA|/|A| over 0 < |A| <= |V|/2, edge boundary.
inline Rational cheeger_exact(const SimpleGraph& g, std::size_t cap = default_caps().cheeger) {
  const std::size_t n = g.vertex_count();
  require(n <= cap, "cap", "cheeger exact needs |V| <= " + std::to_string(cap) + " (got " + std::to_string(n) + ")");
  require(n >= 2, "degenerate", "cheeger constant needs at least two vertices");
  require(n < 32, "cap", "cheeger exact supports at most 31 vertices");
  require(is_connected(g), "disconnected", "cheeger constant needs a connected graph");
  std::vector<std::uint32_t> adj(n, 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
  std::optional<Rational> best;
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (2 * size > n) continue;
    std::int64_t boundary = 0;
    for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
      auto v = static_cast<std::size_t>(std::countr_zero(rest));
      boundary += std::popcount(adj[v] & ~mask);
    }
    Rational ratio(boundary, static_cast<std::int64_t>(size));
    if (!best || ratio < *best) best = ratio;
    if (mask == full) break;
  }
  return *best;
}

struct SpectralResult {
  double lambda2 = 0;      // second-smallest eigenvalue of the normalized Laplacian
  double lower_bound = 0;  // lambda2 / 2
  std::size_t iterations = 0;
};

// Deterministic deflated power iteration on 2I - L (PSD, top eigenvector
// sqrt(deg)). Stops when successive estimates differ by < tol.
inline SpectralResult cheeger_spectral_lower(const SimpleGraph& g, double tol = 1e-9,
                                             std::size_t max_iterations = 2000000) {
  const std::size_t n = g.vertex_count();
  require(n >= 2, "degenerate", "spectral bound needs at least two vertices");
  require(is_connected(g), "disconnected", "spectral bound needs a connected graph");
  std::vector<double> inv_sqrt_deg(n), top(n);
  double top_norm = 0;
  for (Vertex v = 0; v < n; ++v) {
    inv_sqrt_deg[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
    top[v] = std::sqrt(static_cast<double>(g.degree(v)));
    top_norm += top[v] * top[v];
  }
  top_norm = std::sqrt(top_norm);
  for (auto& t : top) t /= top_norm;

  auto deflate_normalize = [&](std::vector<double>& x) {
    double dot = 0;
    for (std::size_t i = 0; i < n; ++i) dot += x[i] * top[i];
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] -= dot * top[i];
      norm += x[i] * x[i];
    }
    norm = std::sqrt(norm);
    ensure(norm > 0, "spectral iteration collapsed");
    for (auto& xi : x) xi /= norm;
  };
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (Vertex u = 0; u < n; ++u) {
      double s = x[u];
      for (Vertex v : g.neighbors(u)) s += inv_sqrt_deg[u] * inv_sqrt_deg[v] * x[v];
      y[u] = s;
    }
  };

  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> x(n), y(n);
  for (auto& xi : x) xi = uni(rng);
  deflate_normalize(x);
  double previous = -1;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    apply(x, y);
    double mu = 0;
    for (std::size_t i = 0; i < n; ++i) mu += x[i] * y[i];
    if (std::abs(mu - previous) < tol) {
      double lambda2 = std::max(0.0, 2.0 - mu);
      return {lambda2, lambda2 / 2, it};
    }
    previous = mu;
    x.swap(y);
    deflate_normalize(x);
  }
  throw Error("convergence", "spectral iteration did not converge within " + std::to_string(max_iterations) +
                                 " iterations");
}

}  // namespace gsq
