#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gsq/error.hpp"
#include "gsq/parallel.hpp"

namespace gsq {

using Vertex = std::uint32_t;
using Distance = std::uint32_t;
inline constexpr Distance kInfinity = std::numeric_limits<Distance>::max();

struct LabeledEdge {
  Vertex source;
  Vertex target;
  std::uint32_t label;

  friend bool operator==(const LabeledEdge&, const LabeledEdge&) = default;
  friend auto operator<=>(const LabeledEdge&, const LabeledEdge&) = default;
};

// Finite directed multigraph whose edges carry generator labels. Loops and
// parallel edges are allowed; the metric is always taken on the simple view.
class LabeledMultigraph {
 public:
  LabeledMultigraph() = default;
  LabeledMultigraph(std::string name, std::size_t vertex_count, std::vector<std::string> labels,
                    std::size_t degree_bound)
      : name_(std::move(name)),
        vertex_count_(vertex_count),
        labels_(std::move(labels)),
        degree_bound_(degree_bound) {
    require(degree_bound_ > 0, "degree", "degree bound must be positive");
    for (std::size_t i = 0; i < labels_.size(); ++i)
      for (std::size_t j = i + 1; j < labels_.size(); ++j)
        require(labels_[i] != labels_[j], "label", "duplicate label '" + labels_[i] + "'");
  }

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t degree_bound() const noexcept { return degree_bound_; }
  void set_degree_bound(std::size_t d) { degree_bound_ = d; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<LabeledEdge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::uint32_t label_index(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return static_cast<std::uint32_t>(i);
    throw Error("label", "undeclared label '" + std::string(label) + "'");
  }

  std::uint32_t add_label(const std::string& label) {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return static_cast<std::uint32_t>(i);
    labels_.push_back(label);
    return static_cast<std::uint32_t>(labels_.size() - 1);
  }

  void add_edge(Vertex u, Vertex v, std::uint32_t label) {
    require(u < vertex_count_ && v < vertex_count_, "range",
            "edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range for " +
                std::to_string(vertex_count_) + " vertices");
    require(label < labels_.size(), "label", "label index out of range");
    edges_.push_back({u, v, label});
  }

  void add_edge(Vertex u, Vertex v, std::string_view label) { add_edge(u, v, label_index(label)); }

  Vertex add_vertex() { return static_cast<Vertex>(vertex_count_++); }

  void remove_edge_at(std::size_t index) { edges_.erase(edges_.begin() + static_cast<std::ptrdiff_t>(index)); }

 private:
  std::string name_;
  std::size_t vertex_count_ = 0;
  std::vector<std::string> labels_;
  std::size_t degree_bound_ = 1;
  std::vector<LabeledEdge> edges_;
};

// Simple undirected view: loops dropped, parallel edges merged, directions forgotten.
class SimpleGraph {
 public:
  SimpleGraph() = default;
  explicit SimpleGraph(std::size_t n) : adjacency_(n) {}

  SimpleGraph(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) : adjacency_(n) {
    for (auto [u, v] : edges) {
      require(u < n && v < n, "range", "edge endpoint out of range");
      if (u == v) continue;
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
    finalize();
  }

  explicit SimpleGraph(const LabeledMultigraph& g) : adjacency_(g.vertex_count()) {
    for (const auto& e : g.edges()) {
      if (e.source == e.target) continue;
      adjacency_[e.source].push_back(e.target);
      adjacency_[e.target].push_back(e.source);
    }
    finalize();
  }

  std::size_t vertex_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_[v]; }
  // Sorted (u < v) edge list.
  const std::vector<std::pair<Vertex, Vertex>>& edges() const noexcept { return edges_; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }

  bool has_edge(Vertex u, Vertex v) const {
    const auto& a = adjacency_[u];
    return std::binary_search(a.begin(), a.end(), v);
  }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& a : adjacency_) d = std::max(d, a.size());
    return d;
  }

 private:
  void finalize() {
    for (std::size_t u = 0; u < adjacency_.size(); ++u) {
      auto& a = adjacency_[u];
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
      for (Vertex v : a)
        if (u < v) edges_.emplace_back(static_cast<Vertex>(u), v);
    }
  }

  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<std::pair<Vertex, Vertex>> edges_;
};

inline SimpleGraph metric_view(const LabeledMultigraph& g) { return SimpleGraph(g); }

// Optional vertex mask: nullptr means every vertex is present.
using VertexMask = std::vector<char>;

inline bool present(const VertexMask* mask, Vertex v) { return mask == nullptr || (*mask)[v]; }

// BFS distances from `source`, truncated at `max_radius` (vertices further away
// report kInfinity). Restricted to `mask` when given.
inline std::vector<Distance> bfs_distances(const SimpleGraph& g, Vertex source,
                                           Distance max_radius = kInfinity,
                                           const VertexMask* mask = nullptr) {
  require(source < g.vertex_count(), "range", "vertex " + std::to_string(source) + " out of range");
  std::vector<Distance> dist(g.vertex_count(), kInfinity);
  if (!present(mask, source)) return dist;
  std::deque<Vertex> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    if (dist[u] == max_radius) continue;
    for (Vertex v : g.neighbors(u)) {
      if (dist[v] != kInfinity || !present(mask, v)) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

// Multi-source BFS (distance to the nearest source).
inline std::vector<Distance> bfs_from_set(const SimpleGraph& g, const std::vector<Vertex>& sources) {
  std::vector<Distance> dist(g.vertex_count(), kInfinity);
  std::deque<Vertex> queue;
  for (Vertex s : sources) {
    if (dist[s] == 0) continue;
    dist[s] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    for (Vertex v : g.neighbors(u)) {
      if (dist[v] != kInfinity) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

inline std::vector<Vertex> ball_vertices(const SimpleGraph& g, Vertex x, Distance r,
                                         const VertexMask* mask = nullptr) {
  auto dist = bfs_distances(g, x, r, mask);
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (dist[v] != kInfinity) out.push_back(v);
  return out;
}

// Exact all-pairs distance table, rows computed in parallel.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(const SimpleGraph& g) : rows_(g.vertex_count()) {
    parallel_for(g.vertex_count(), [&](std::size_t s) { rows_[s] = bfs_distances(g, static_cast<Vertex>(s)); });
  }

  Distance operator()(Vertex x, Vertex y) const { return rows_[x][y]; }
  const std::vector<Distance>& row(Vertex x) const { return rows_[x]; }
  std::size_t size() const noexcept { return rows_.size(); }

 private:
  std::vector<std::vector<Distance>> rows_;
};

struct Components {
  std::vector<std::uint32_t> id;  // kInfinity for masked-out vertices
  std::uint32_t count = 0;
  std::vector<std::size_t> sizes;
};

inline Components connected_components(const SimpleGraph& g, const VertexMask* mask = nullptr) {
  Components c;
  c.id.assign(g.vertex_count(), kInfinity);
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (c.id[s] != kInfinity || !present(mask, s)) continue;
    c.sizes.push_back(0);
    c.id[s] = c.count;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      ++c.sizes.back();
      for (Vertex v : g.neighbors(u)) {
        if (c.id[v] != kInfinity || !present(mask, v)) continue;
        c.id[v] = c.count;
        stack.push_back(v);
      }
    }
    ++c.count;
  }
  return c;
}

inline bool is_connected(const SimpleGraph& g) {
  return g.vertex_count() > 0 && connected_components(g).count == 1;
}

// Checks the declared degree bound and, optionally, connectivity.
inline void validate_graph(const LabeledMultigraph& g, bool require_connected) {
  SimpleGraph s(g);
  for (Vertex v = 0; v < s.vertex_count(); ++v)
    require(s.degree(v) <= g.degree_bound(), "degree",
            "vertex " + std::to_string(v) + " has degree " + std::to_string(s.degree(v)) +
                " > bound " + std::to_string(g.degree_bound()));
  if (require_connected)
    require(is_connected(s), "disconnected", "graph '" + g.name() + "' is not connected");
}

// Edge boundary of a vertex set (edges of the simple view with exactly one endpoint inside).
inline std::size_t edge_boundary(const SimpleGraph& g, const std::vector<char>& inside,
                                 const VertexMask* mask = nullptr) {
  std::size_t count = 0;
  for (auto [u, v] : g.edges()) {
    if (!present(mask, u) || !present(mask, v)) continue;
    if (inside[u] != inside[v]) ++count;
  }
  return count;
}

inline std::vector<char> indicator(std::size_t n, const std::vector<Vertex>& set) {
  std::vector<char> in(n, 0);
  for (Vertex v : set) in[v] = 1;
  return in;
}

// Parsed "<family>_<size>" tag carried in the names of built-in family graphs.
struct FamilyTag {
  std::string family;
  std::size_t size = 0;
};

inline FamilyTag family_tag(const LabeledMultigraph& g) {
  const auto& n = g.name();
  auto pos = n.rfind('_');
  if (pos == std::string::npos || pos + 1 >= n.size()) return {};
  for (std::size_t i = pos + 1; i < n.size(); ++i)
    if (n[i] < '0' || n[i] > '9') return {};
  return {n.substr(0, pos), static_cast<std::size_t>(std::stoull(n.substr(pos + 1)))};
}

}  // namespace gsq
