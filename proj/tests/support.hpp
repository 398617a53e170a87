#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "gsq/families.hpp"
#include "gsq/graph.hpp"
#include "gsq/rational.hpp"
#include "gsq/witness.hpp"

namespace testing_support {

using gsq::LabeledMultigraph;
using gsq::Vertex;
using gsq::Rational;
using gsq::SparseVector;

inline LabeledMultigraph cycle(std::size_t n) { return gsq::schreier_graph(gsq::cycle_action(n), "cycle_" + std::to_string(n)); }
inline LabeledMultigraph torus(std::size_t n) { return gsq::schreier_graph(gsq::torus_action(n), "torus_" + std::to_string(n)); }

inline LabeledMultigraph from_pairs(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges,
                                    std::size_t degree_bound = 16) {
  LabeledMultigraph g("g", n, {"e"}, degree_bound);
  for (auto [u, v] : edges) g.add_edge(u, v, 0u);
  return g;
}

inline LabeledMultigraph path(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return from_pairs(n, e);
}

inline LabeledMultigraph complete(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return from_pairs(n, e);
}

// Floyd-Warshall on the undirected simple view; kInf marks disconnected pairs.
inline constexpr unsigned kInf = 1u << 30;
inline std::vector<std::vector<unsigned>> floyd(const LabeledMultigraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<unsigned>> d(n, std::vector<unsigned>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges())
    if (e.source != e.target) d[e.source][e.target] = d[e.target][e.source] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// Undirected simple edge set {u<v}.
inline std::set<std::pair<Vertex, Vertex>> simple_edges(const LabeledMultigraph& g) {
  std::set<std::pair<Vertex, Vertex>> s;
  for (const auto& e : g.edges())
    if (e.source != e.target) s.insert(std::minmax(e.source, e.target));
  return s;
}

// Connected random graph: random spanning tree plus extra edges, degree-bounded.
inline LabeledMultigraph random_connected(std::size_t n, std::size_t extra, std::uint64_t seed, std::size_t max_deg = 4) {
  auto rng = gsq::seeded_rng(seed, 99);
  std::vector<std::pair<Vertex, Vertex>> e;
  std::vector<std::size_t> deg(n, 0);
  std::set<std::pair<Vertex, Vertex>> have;
  for (Vertex v = 1; v < n; ++v) {
    Vertex u;
    do u = static_cast<Vertex>(gsq::uniform_below(rng, v));
    while (deg[u] >= max_deg);
    e.emplace_back(u, v);
    have.insert({u, v});
    ++deg[u];
    ++deg[v];
  }
  for (std::size_t tries = 0; tries < 50 * extra && extra > 0; ++tries) {
    auto u = static_cast<Vertex>(gsq::uniform_below(rng, n)), v = static_cast<Vertex>(gsq::uniform_below(rng, n));
    if (u == v) continue;
    auto p = std::minmax(u, v);
    if (have.count(p) || deg[u] >= max_deg || deg[v] >= max_deg) continue;
    have.insert(p);
    e.push_back(p);
    ++deg[u];
    ++deg[v];
    if (--extra == 0) break;
  }
  return from_pairs(n, e, max_deg);
}

// Girth oracle: for every edge, shortest detour between its endpoints without it.
inline gsq::Distance girth_by_edge_removal(const LabeledMultigraph& g) {
  auto edges = simple_edges(g);
  gsq::Distance best = gsq::kInfinity;
  for (auto [u, v] : edges) {
    std::vector<std::pair<Vertex, Vertex>> rest;
    for (auto e : edges)
      if (e != std::make_pair(u, v)) rest.push_back(e);
    auto d = gsq::bfs_distances(gsq::SimpleGraph(g.vertex_count(), rest), u);
    if (d[v] != gsq::kInfinity) best = std::min(best, d[v] + 1);
  }
  return best;
}

// First strict level set, recomputed from scratch for every threshold.
inline std::vector<Vertex> level_set_oracle(const LabeledMultigraph& G, const SparseVector& phi, const Rational& eps) {
  std::vector<Rational> values;
  for (const auto& [_, q] : phi) values.push_back(q);
  std::sort(values.begin(), values.end(), std::greater<>());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  for (const auto& t : values) {
    std::vector<char> in(G.vertex_count(), 0);
    std::int64_t size = 0;
    for (const auto& [v, q] : phi)
      if (q >= t) in[v] = 1, ++size;
    std::int64_t boundary = 0;
    for (auto [u, v] : simple_edges(G)) boundary += in[u] != in[v];
    if (Rational(boundary) < eps * size) {
      std::vector<Vertex> F;
      for (Vertex v = 0; v < G.vertex_count(); ++v)
        if (in[v]) F.push_back(v);
      return F;
    }
  }
  return {};
}

// Minimum K over all cut subsets with |cut| < eps |V|.
inline std::size_t min_k_oracle(const LabeledMultigraph& G, const Rational& eps) {
  auto set = simple_edges(G);
  std::vector<std::pair<Vertex, Vertex>> edges(set.begin(), set.end());
  const auto n = G.vertex_count();
  std::size_t best = n;
  for (std::uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
    if (!(Rational(std::popcount(mask)) < eps * static_cast<std::int64_t>(n))) continue;
    std::vector<Vertex> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    std::function<Vertex(Vertex)> find = [&](Vertex v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (!((mask >> i) & 1u)) parent[find(edges[i].first)] = find(edges[i].second);
    std::vector<std::size_t> size(n, 0);
    for (Vertex v = 0; v < n; ++v) ++size[find(v)];
    best = std::min(best, *std::max_element(size.begin(), size.end()));
  }
  return best;
}

}  // namespace testing_support
