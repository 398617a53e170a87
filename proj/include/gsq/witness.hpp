#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsq/families.hpp"
#include "gsq/folner.hpp"
#include "gsq/parallel.hpp"

namespace gsq {

inline Rational l1_norm(const SparseVector& v) {
  Rational s;
  for (const auto& [_, q] : v) s += abs(q);
  return s;
}

inline Rational l1_distance(const SparseVector& a, const SparseVector& b) {
  Rational s;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) s += abs(a[i++].second);
    else if (i == a.size() || b[j].first < a[i].first) s += abs(b[j++].second);
    else s += abs(a[i++].second - b[j++].second);
  }
  return s;
}

inline SparseVector to_sparse(const std::map<Vertex, Rational>& m) {
  SparseVector v;
  for (const auto& [k, q] : m)
    if (q != Rational(0)) v.emplace_back(k, q);
  return v;
}

// Property-A witness on one graph. Vertices outside `alive` carry no vector;
// an empty mask means all vertices are alive.
struct WitnessCertificate {
  std::string graph;
  std::vector<SparseVector> xi;
  VertexMask alive;
  Distance S = 0;    // support radius, measured in the alive subgraph
  Rational epsilon;  // max over alive edges of |xi_x - xi_y|_1

  bool is_alive(Vertex v) const { return alive.empty() || alive[v]; }
  const VertexMask* mask() const { return alive.empty() ? nullptr : &alive; }
  std::size_t alive_count() const {
    return alive.empty() ? xi.size() : static_cast<std::size_t>(std::count(alive.begin(), alive.end(), 1));
  }
};

inline Distance measure_support_radius(const SimpleGraph& g, const std::vector<SparseVector>& xi,
                                       const VertexMask* mask = nullptr) {
  const auto n = g.vertex_count();
  std::vector<Distance> slot(n, 0);
  parallel_for(n, [&](std::size_t x) {
    if (!present(mask, static_cast<Vertex>(x)) || xi[x].empty()) return;
    // BFS that stops once every support point is reached
    std::vector<Distance> dist(n, kInfinity);
    std::vector<char> wanted(n, 0);
    std::size_t left = 0;
    for (const auto& [z, _] : xi[x]) left += !wanted[z]++;
    std::vector<Vertex> queue{static_cast<Vertex>(x)};
    dist[x] = 0;
    for (std::size_t head = 0; head < queue.size() && left > 0; ++head) {
      const Vertex u = queue[head];
      if (wanted[u]) {
        --left;
        slot[x] = dist[u];
      }
      for (Vertex v : g.neighbors(u))
        if (dist[v] == kInfinity && present(mask, v)) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
    }
    if (left > 0) slot[x] = kInfinity;
  });
  return slot.empty() ? 0 : *std::max_element(slot.begin(), slot.end());
}

inline std::vector<Rational> edge_variations(const SimpleGraph& g, const std::vector<SparseVector>& xi,
                                             const VertexMask* mask = nullptr) {
  const auto& edges = g.edges();
  std::vector<Rational> out(edges.size());
  parallel_for(edges.size(), [&](std::size_t i) {
    auto [u, v] = edges[i];
    if (present(mask, u) && present(mask, v)) out[i] = l1_distance(xi[u], xi[v]);
  });
  return out;
}

inline Rational max_edge_variation(const SimpleGraph& g, const std::vector<SparseVector>& xi,
                                   const VertexMask* mask = nullptr) {
  Rational best;
  for (const auto& q : edge_variations(g, xi, mask)) best = std::max(best, q);
  return best;
}

// Measures S and epsilon and checks every alive norm is exactly one.
inline WitnessCertificate make_witness(const SimpleGraph& g, std::vector<SparseVector> xi, std::string name,
                                       VertexMask alive = {}) {
  require(xi.size() == g.vertex_count(), "witness", "one vector per vertex required");
  WitnessCertificate w;
  w.graph = std::move(name);
  w.alive = std::move(alive);
  for (Vertex x = 0; x < xi.size(); ++x) {
    if (!w.is_alive(x)) {
      require(xi[x].empty(), "witness", "removed vertex " + std::to_string(x) + " carries a vector");
      continue;
    }
    require(l1_norm(xi[x]) == Rational(1), "witness", "norm of xi_" + std::to_string(x) + " is " + to_string(l1_norm(xi[x])));
    for (const auto& [z, _] : xi[x])
      require(w.is_alive(z), "witness", "xi_" + std::to_string(x) + " charges removed vertex " + std::to_string(z));
  }
  w.xi = std::move(xi);
  w.S = measure_support_radius(g, w.xi, w.mask());
  require(w.S != kInfinity, "witness", "some support leaves the connected component of its vertex");
  w.epsilon = max_edge_variation(g, w.xi, w.mask());
  return w;
}

// Pure recomputation of every stored quantity.
inline void verify_witness(const SimpleGraph& g, const WitnessCertificate& w) {
  require(w.xi.size() == g.vertex_count(), "certificate", "witness size differs from graph");
  require(w.alive.empty() || w.alive.size() == g.vertex_count(), "certificate", "alive mask size differs from graph");
  auto fresh = make_witness(g, w.xi, w.graph, w.alive);
  require(fresh.S <= w.S, "certificate",
          "support radius " + std::to_string(fresh.S) + " exceeds declared S " + std::to_string(w.S));
  require(fresh.epsilon == w.epsilon, "certificate",
          "measured epsilon " + to_string(fresh.epsilon) + " differs from stored " + to_string(w.epsilon));
}

// xi_x uniform on B(x, r).
inline WitnessCertificate uniform_ball_witness(const SimpleGraph& g, Distance r, std::string name = "") {
  std::vector<SparseVector> xi(g.vertex_count());
  parallel_for(g.vertex_count(), [&](std::size_t x) {
    auto ball = ball_vertices(g, static_cast<Vertex>(x), r);
    const Rational q(1, static_cast<std::int64_t>(ball.size()));
    for (Vertex z : ball) xi[x].emplace_back(z, q);
  });
  auto w = make_witness(g, std::move(xi), std::move(name));
  ensure(w.S <= r, "uniform ball witness leaves its ball");
  return w;
}

// xi_x(y) = |{z in xF : z acts to y}| / |F|, computed by acting the words of F on the coset x.
inline std::vector<SparseVector> pushed_vectors(const GroupOracle& oracle, const PermAction& action,
                                                const FolnerSet& F, std::size_t cap = default_caps().ball) {
  require(oracle.kind() != GroupKind::permutation, "group", "push needs a free or free abelian group");
  require(oracle.rank() == action.generator_count(), "rank",
          "group rank " + std::to_string(oracle.rank()) + " differs from action generator count " +
              std::to_string(action.generator_count()));
  require(!F.elements.empty(), "empty", "Folner set must be a non-empty group-side set");
  require(F.elements.size() <= cap, "cap", "Folner set exceeds cap " + std::to_string(cap));
  std::vector<Word> words;
  for (const auto& z : F.elements) words.push_back(oracle.word_of(z));
  const auto size = static_cast<std::int64_t>(F.elements.size());
  std::vector<SparseVector> xi(action.degree());
  parallel_for(action.degree(), [&](std::size_t x) {
    std::map<Vertex, std::int64_t> hits;
    for (const auto& w : words) ++hits[action.act(static_cast<Vertex>(x), w)];
    for (auto [y, c] : hits) xi[x].emplace_back(y, Rational(c, size));
  });
  return xi;
}

inline WitnessCertificate push_witness_to_schreier(const GroupOracle& oracle, const PermAction& action,
                                                   const FolnerSet& F, std::string name = "") {
  auto g = schreier_graph(action, name);
  auto w = make_witness(SimpleGraph(g), pushed_vectors(oracle, action, F), std::move(name));
  ensure(w.S <= word_radius(oracle, F), "pushed support exceeds the word radius of F");
  return w;
}

// Group and action behind a cycle_<n> or torus_<n> graph.
struct FamilyGroup {
  GroupOracle oracle;
  PermAction action;
};

inline FamilyGroup family_group(const LabeledMultigraph& g) {
  auto tag = family_tag(g);
  if (tag.family == "cycle") return {GroupOracle::free_abelian(1), cycle_action(tag.size)};
  if (tag.family == "torus") return {GroupOracle::free_abelian(2), torus_action(tag.size)};
  throw Error("family", "graph '" + g.name() + "' is not a cycle_<n> or torus_<n> family graph");
}

// Interval or box witness of side m on a cycle or torus family graph.
inline WitnessCertificate family_box_witness(const LabeledMultigraph& g, std::size_t m) {
  require(m >= 1, "param", "box side must be positive");
  auto fg = family_group(g);
  require(fg.action.degree() == g.vertex_count(), "family", "graph size does not match its family tag");
  std::vector<GroupElement> box;
  GroupElement z(fg.oracle.rank(), 0);
  while (true) {
    box.push_back(z);
    std::size_t i = 0;
    while (i < z.size() && ++z[i] == static_cast<int>(m)) z[i++] = 0;
    if (i == z.size()) break;
  }
  auto F = group_folner(fg.oracle, std::move(box));
  return make_witness(SimpleGraph(g), pushed_vectors(fg.oracle, fg.action, F), g.name());
}

struct LocalizedFolner {
  FolnerSet F;
  Vertex center = 0;
  Distance S = 0;
  Rational eps_prime;     // d * measured epsilon
  Rational column_ratio;  // edge variation / mass of the chosen coordinate
};

// Picks the coordinate z0 minimizing variation/mass, normalizes xi_.(z0) and
// sweeps its level sets.
inline LocalizedFolner localized_folner(const SimpleGraph& g, const WitnessCertificate& w) {
  require(w.epsilon > 0, "precondition", "witness has zero edge variation; no strict Folner bound is available");
  const auto n = g.vertex_count();
  const auto mask = w.mask();
  std::vector<Rational> mass(n), var(n);
  for (Vertex x = 0; x < n; ++x)
    for (const auto& [z, q] : w.xi[x]) mass[z] += abs(q);
  for (auto [u, v] : g.edges()) {
    if (!present(mask, u) || !present(mask, v)) continue;
    const auto &a = w.xi[u], &b = w.xi[v];
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        var[a[i].first] += abs(a[i].second);
        ++i;
      } else if (i == a.size() || b[j].first < a[i].first) {
        var[b[j].first] += abs(b[j].second);
        ++j;
      } else {
        var[a[i].first] += abs(a[i].second - b[j].second);
        ++i, ++j;
      }
    }
  }
  std::optional<Vertex> best;
  for (Vertex z = 0; z < n; ++z) {
    if (mass[z] == Rational(0)) continue;
    if (!best || var[z] * mass[*best] < var[*best] * mass[z]) best = z;
  }
  require(best.has_value(), "witness", "witness has no mass");
  const Vertex z0 = *best;
  LocalizedFolner out;
  out.center = z0;
  out.S = w.S;
  out.eps_prime = Rational(static_cast<std::int64_t>(g.max_degree())) * w.epsilon;
  out.column_ratio = var[z0] / mass[z0];
  require(out.column_ratio < out.eps_prime, "witness",
          "no coordinate satisfies the averaged inequality (best " + to_string(out.column_ratio) + ")");
  SparseVector psi;
  for (Vertex x = 0; x < n; ++x) {
    if (!present(mask, x)) continue;
    auto it = std::lower_bound(w.xi[x].begin(), w.xi[x].end(), std::make_pair(z0, Rational()),
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    if (it != w.xi[x].end() && it->first == z0) psi.emplace_back(x, abs(it->second) / mass[z0]);
  }
  out.F = folner_from_function(g, psi, out.eps_prime, mask);
  ensure(Rational(static_cast<std::int64_t>(out.F.boundary)) < out.eps_prime * static_cast<std::int64_t>(out.F.size()),
         "localized Folner set is not strict");
  auto dist = bfs_distances(g, z0, w.S, mask);
  for (Vertex v : out.F.vertices) ensure(dist[v] != kInfinity, "localized Folner set leaves B(z0, S)");
  return out;
}

// Moves mass off the removed vertices, column by column. For a column z the
// vertices charging z, together with z itself when it survives, split into
// components of the remaining graph; a component keeps its mass at z when it
// contains z and otherwise sends it to its smallest vertex.
inline std::vector<SparseVector> reroute_vectors(const SimpleGraph& g, const std::vector<SparseVector>& xi,
                                                 const VertexMask& alive) {
  const auto n = g.vertex_count();
  std::vector<std::vector<Vertex>> charging(n);
  for (Vertex x = 0; x < n; ++x) {
    if (!alive[x]) continue;
    for (const auto& [z, _] : xi[x]) charging[z].push_back(x);
  }
  // target[x] per column, filled column by column
  std::vector<std::map<Vertex, Rational>> acc(n);
  std::vector<char> in_set(n, 0);
  std::vector<Vertex> comp_of(n, 0), stack;
  for (Vertex z = 0; z < n; ++z) {
    const auto& R = charging[z];
    if (R.empty()) continue;
    for (Vertex x : R) in_set[x] = 1;
    if (alive[z]) in_set[z] = 1;
    std::vector<Vertex> target_of_comp;
    std::vector<Vertex> touched;
    auto flood = [&](Vertex s, Vertex label) {
      stack.assign(1, s);
      in_set[s] = 2;
      comp_of[s] = label;
      std::vector<Vertex> members{s};
      while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (Vertex v : g.neighbors(u)) {
          if (in_set[v] != 1 || !alive[v]) continue;
          in_set[v] = 2;
          comp_of[v] = label;
          stack.push_back(v);
          members.push_back(v);
        }
      }
      touched.insert(touched.end(), members.begin(), members.end());
      return *std::min_element(members.begin(), members.end());
    };
    if (alive[z]) {
      flood(z, 0);
      target_of_comp.push_back(z);
    }
    for (Vertex x : R) {
      if (in_set[x] != 1) continue;
      auto label = static_cast<Vertex>(target_of_comp.size());
      target_of_comp.push_back(flood(x, label));
    }
    for (Vertex x : R) {
      auto it = std::lower_bound(xi[x].begin(), xi[x].end(), std::make_pair(z, Rational()),
                                 [](const auto& a, const auto& b) { return a.first < b.first; });
      acc[x][target_of_comp[comp_of[x]]] += abs(it->second);
    }
    for (Vertex v : touched) in_set[v] = 0;
    for (Vertex x : R) in_set[x] = 0;
    if (alive[z]) in_set[z] = 0;
  }
  std::vector<SparseVector> out(n);
  for (Vertex x = 0; x < n; ++x)
    if (alive[x]) out[x] = to_sparse(acc[x]);
  return out;
}

// Reroutes onto `alive`, asserting exact norm preservation and that no edge
// variation between surviving vertices increases.
inline WitnessCertificate reroute_checked(const SimpleGraph& g, const std::vector<SparseVector>& before, VertexMask alive,
                                          std::string name) {
  require(std::find(alive.begin(), alive.end(), 1) != alive.end(), "empty", "nothing remains after removal");
  auto xi = reroute_vectors(g, before, alive);
  for (Vertex x = 0; x < g.vertex_count(); ++x)
    if (alive[x]) ensure(l1_norm(xi[x]) == l1_norm(before[x]), "reroute changed the norm of xi_" + std::to_string(x));
  const auto& edges = g.edges();
  std::vector<char> grew(edges.size(), 0);
  parallel_for(edges.size(), [&](std::size_t i) {
    auto [u, v] = edges[i];
    if (alive[u] && alive[v]) grew[i] = l1_distance(xi[u], xi[v]) > l1_distance(before[u], before[v]);
  });
  ensure(std::find(grew.begin(), grew.end(), 1) == grew.end(), "reroute increased an edge variation");
  return make_witness(g, std::move(xi), std::move(name), std::move(alive));
}

// Witness on g minus `removed`.
inline WitnessCertificate reroute_witness(const SimpleGraph& g, const WitnessCertificate& w,
                                          const std::vector<Vertex>& removed) {
  VertexMask alive = w.alive.empty() ? VertexMask(g.vertex_count(), 1) : w.alive;
  for (Vertex a : removed) {
    require(a < g.vertex_count(), "range", "removed vertex " + std::to_string(a) + " out of range");
    alive[a] = 0;
  }
  auto out = reroute_checked(g, w.xi, std::move(alive), w.graph);
  // the support radius stays within the largest S-ball size
  std::size_t largest = 0;
  for (Vertex y = 0; y < g.vertex_count(); ++y)
    if (w.is_alive(y)) largest = std::max(largest, ball_vertices(g, y, w.S, w.mask()).size());
  ensure(out.S <= largest, "rerouted support radius " + std::to_string(out.S) + " exceeds max |B(y,S)| = " +
                               std::to_string(largest));
  return out;
}

}  // namespace gsq
