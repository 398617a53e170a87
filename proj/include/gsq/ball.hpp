#pragma once

#include <unordered_map>
#include <vector>

#include "gsq/graph.hpp"

namespace gsq {

// Out/in edge incidence of a labeled multigraph (edge indices into g.edges()).
class LabeledAdjacency {
 public:
  explicit LabeledAdjacency(const LabeledMultigraph& g) : out_(g.vertex_count()), in_(g.vertex_count()) {
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      out_[g.edges()[i].source].push_back(static_cast<std::uint32_t>(i));
      in_[g.edges()[i].target].push_back(static_cast<std::uint32_t>(i));
    }
  }

  const std::vector<std::uint32_t>& out(Vertex v) const { return out_[v]; }
  const std::vector<std::uint32_t>& in(Vertex v) const { return in_[v]; }

 private:
  std::vector<std::vector<std::uint32_t>> out_, in_;
};

// Induced labeled subgraph on a metric ball; the root is local vertex 0 and
// local ids follow BFS order.
struct RootedBall {
  LabeledMultigraph graph;
  Vertex root = 0;
  Distance radius = 0;
  std::vector<Vertex> original;  // local id -> vertex of the host graph
};

class BallExtractor {
 public:
  explicit BallExtractor(const LabeledMultigraph& g) : g_(g), simple_(g), adjacency_(g) {}

  const SimpleGraph& simple() const noexcept { return simple_; }

  RootedBall operator()(Vertex x, Distance r) const {
    require(x < g_.vertex_count(), "range", "vertex " + std::to_string(x) + " out of range");
    std::vector<Vertex> order{x};
    std::unordered_map<Vertex, Vertex> local{{x, 0}};
    std::vector<Distance> depth{0};
    for (std::size_t head = 0; head < order.size(); ++head) {
      if (depth[head] == r) continue;
      for (Vertex v : simple_.neighbors(order[head])) {
        if (local.count(v)) continue;
        local.emplace(v, static_cast<Vertex>(order.size()));
        order.push_back(v);
        depth.push_back(depth[head] + 1);
      }
    }
    RootedBall b;
    b.graph = LabeledMultigraph(g_.name() + "_ball", order.size(), g_.labels(), g_.degree_bound());
    b.root = 0;
    b.radius = r;
    b.original = order;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (auto ei : adjacency_.out(order[i])) {
        const auto& e = g_.edges()[ei];
        auto it = local.find(e.target);
        if (it != local.end()) b.graph.add_edge(static_cast<Vertex>(i), it->second, e.label);
      }
    }
    return b;
  }

 private:
  const LabeledMultigraph& g_;
  SimpleGraph simple_;
  LabeledAdjacency adjacency_;
};

inline RootedBall ball(const LabeledMultigraph& g, Vertex x, Distance r) { return BallExtractor(g)(x, r); }

}  // namespace gsq
