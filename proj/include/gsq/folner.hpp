#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "gsq/graph.hpp"
#include "gsq/group.hpp"
#include "gsq/rational.hpp"

namespace gsq {

// Finitely supported vector over vertices: sorted by vertex, zero entries omitted.
using SparseVector = std::vector<std::pair<Vertex, Rational>>;

// Finite set with small edge boundary. Group-side sets fill `elements`,
// graph-side sets fill `vertices`.
struct FolnerSet {
  std::vector<GroupElement> elements;
  std::vector<Vertex> vertices;
  std::size_t boundary = 0;
  Rational ratio;

  std::size_t size() const { return elements.empty() ? vertices.size() : elements.size(); }
};

// Edge boundary of a finite subset of the Cayley graph: pairs (z, z.l) leaving the set.
inline std::size_t group_edge_boundary(const GroupOracle& oracle, const std::vector<GroupElement>& elements) {
  std::set<GroupElement> in(elements.begin(), elements.end());
  std::size_t count = 0;
  for (const auto& z : in)
    for (std::size_t s = 1; s <= oracle.rank(); ++s)
      for (Letter l : {static_cast<Letter>(s), -static_cast<Letter>(s)})
        if (!in.count(oracle.multiply(z, l))) ++count;
  return count;
}

inline FolnerSet group_folner(const GroupOracle& oracle, std::vector<GroupElement> elements) {
  require(!elements.empty(), "empty", "Folner set must be non-empty");
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  FolnerSet F;
  F.boundary = group_edge_boundary(oracle, elements);
  F.ratio = Rational(static_cast<std::int64_t>(F.boundary), static_cast<std::int64_t>(elements.size()));
  F.elements = std::move(elements);
  return F;
}

inline FolnerSet graph_folner(const SimpleGraph& g, std::vector<Vertex> vertices, const VertexMask* mask = nullptr) {
  require(!vertices.empty(), "empty", "Folner set must be non-empty");
  std::sort(vertices.begin(), vertices.end());
  FolnerSet F;
  F.boundary = edge_boundary(g, indicator(g.vertex_count(), vertices), mask);
  F.ratio = Rational(static_cast<std::int64_t>(F.boundary), static_cast<std::int64_t>(vertices.size()));
  F.vertices = std::move(vertices);
  return F;
}

inline std::size_t word_radius(const GroupOracle& oracle, const FolnerSet& F) {
  std::size_t r = 0;
  for (const auto& z : F.elements) r = std::max(r, oracle.word_length(z));
  return r;
}

// Box [0,m)^d in Z^d with the smallest m such that 2d/m < eps.
inline FolnerSet folner_set(const GroupOracle& oracle, const Rational& eps) {
  require(oracle.kind() == GroupKind::free_abelian, "group",
          "Folner sets are built only for free abelian groups, got " + oracle.describe());
  require(eps > 0, "param", "eps must be positive");
  const auto d = static_cast<std::int64_t>(oracle.rank());
  const std::int64_t m = (2 * d * eps.denominator()) / eps.numerator() + 1;
  std::vector<GroupElement> box;
  GroupElement z(oracle.rank(), 0);
  while (true) {
    box.push_back(z);
    std::size_t i = 0;
    while (i < z.size() && ++z[i] == m) z[i++] = 0;
    if (i == z.size()) break;
  }
  auto F = group_folner(oracle, std::move(box));
  ensure(F.ratio == Rational(2 * d, m) && F.ratio < eps, "box boundary ratio differs from 2d/m");
  return F;
}

inline Rational edge_variation(const SimpleGraph& g, const SparseVector& phi, const VertexMask* mask = nullptr) {
  std::vector<Rational> value(g.vertex_count());
  for (const auto& [v, q] : phi) value[v] = q;
  Rational total;
  for (auto [u, v] : g.edges())
    if (present(mask, u) && present(mask, v)) total += abs(value[u] - value[v]);
  return total;
}

// Level-set sweep: thresholds in decreasing order, first F_t = {phi >= t} with
// |dF| < eps |F| strictly. Requires phi >= 0, |phi|_1 = 1 and variation <= eps.
inline FolnerSet folner_from_function(const SimpleGraph& g, const SparseVector& phi, const Rational& eps,
                                      const VertexMask* mask = nullptr) {
  require(eps > 0, "precondition", "eps must be positive");
  Rational norm;
  for (const auto& [v, q] : phi) {
    require(v < g.vertex_count() && present(mask, v), "precondition", "function supported outside the graph");
    require(q > 0, "precondition", "function must be positive on its support");
    norm += q;
  }
  require(norm == Rational(1), "precondition", "function norm is " + to_string(norm) + ", not 1");
  const auto variation = edge_variation(g, phi, mask);
  require(variation <= eps, "precondition",
          "edge variation " + to_string(variation) + " exceeds eps " + to_string(eps));

  auto order = phi;
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<char> inside(g.vertex_count(), 0);
  std::int64_t boundary = 0;
  for (std::size_t i = 0; i < order.size();) {
    const auto level = order[i].second;
    for (; i < order.size() && order[i].second == level; ++i) {
      const Vertex v = order[i].first;
      inside[v] = 1;
      for (Vertex w : g.neighbors(v)) {
        if (!present(mask, w)) continue;
        boundary += inside[w] ? -1 : 1;
      }
    }
    if (Rational(boundary) < eps * static_cast<std::int64_t>(i)) {
      std::vector<Vertex> F;
      for (std::size_t j = 0; j < i; ++j) F.push_back(order[j].first);
      auto out = graph_folner(g, std::move(F), mask);
      ensure(static_cast<std::int64_t>(out.boundary) == boundary, "incremental boundary drifted");
      return out;
    }
  }
  throw Error("precondition", "no level set satisfies |dF| < eps|F| (variation equals eps)");
}

}  // namespace gsq
