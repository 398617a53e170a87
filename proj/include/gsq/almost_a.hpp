#pragma once

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gsq/bs_stats.hpp"
#include "gsq/lift.hpp"
#include "gsq/witness.hpp"

namespace gsq {

struct InducedSubgraph {
  LabeledMultigraph graph;
  std::vector<Vertex> original;  // new id -> old id
};

// Subgraph on `keep` (any order; relabeled ascending), keeping every edge with both ends kept.
inline InducedSubgraph induced_subgraph(const LabeledMultigraph& g, std::vector<Vertex> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();
  std::vector<Vertex> id(g.vertex_count(), kNoVertex);
  for (Vertex i = 0; i < keep.size(); ++i) {
    require(keep[i] < g.vertex_count(), "range", "vertex " + std::to_string(keep[i]) + " out of range");
    id[keep[i]] = i;
  }
  InducedSubgraph out{LabeledMultigraph(g.name() + "_induced", keep.size(), g.labels(), g.degree_bound()), keep};
  for (const auto& e : g.edges())
    if (id[e.source] != kNoVertex && id[e.target] != kNoVertex) out.graph.add_edge(id[e.source], id[e.target], e.label);
  return out;
}

struct AlmostARow {
  long index = 0;
  std::size_t s = 0;             // scheduled radius s_n (0 before phi(1))
  std::vector<Vertex> removed;   // V'_n
  std::size_t vertices = 0;
  Rational fraction;             // |V'_n| / |V_n|
  std::string branch;            // folner | uniform
  WitnessCertificate witness;
};

struct AlmostAReport {
  std::string group;
  std::size_t folner_radius = 0;                     // word radius S of F
  Rational folner_ratio;
  std::vector<std::optional<std::size_t>> schedule;  // schedule[s-1] = phi(s) as a sequence position
  std::vector<std::size_t> undefined;                // radii whose statistic is still short at the last index
  std::vector<AlmostARow> rows;
};

// phi(s) is the first position m such that every later graph has p_s >= 1 - 1/s.
// Graph n uses the largest s with phi(s) <= n, removes the vertices with a bad
// s-ball, and takes the translated Folner indicator when s_n >= S, otherwise
// the uniform vector on the component of x among the survivors. The vectors
// are then rerouted onto the survivors.
inline AlmostAReport almost_a_certify(const GraphSequence& seq, const GroupOracle& oracle, const FolnerSet& F,
                                      std::optional<std::size_t> s_max = std::nullopt) {
  require(seq.size() > 0, "empty", "almost-A needs a non-empty sequence");
  require(!F.elements.empty(), "param", "Folner set must be group-side");
  AlmostAReport rep;
  rep.group = oracle.describe();
  rep.folner_radius = word_radius(oracle, F);
  rep.folner_ratio = F.ratio;
  const std::size_t top = s_max.value_or(std::max<std::size_t>(rep.folner_radius, 1));

  for (std::size_t s = 1; s <= top; ++s) {
    const auto ref = oracle_code(oracle, static_cast<Distance>(s));
    const Rational need = Rational(1) - Rational(1, static_cast<std::int64_t>(s));
    std::optional<std::size_t> phi;
    for (std::size_t m = seq.size(); m-- > 0;) {
      const auto& g = seq.graphs[m];
      auto hit = match_flags(g, ref, static_cast<Distance>(s));
      Rational p(static_cast<std::int64_t>(std::count(hit.begin(), hit.end(), 1)),
                 static_cast<std::int64_t>(g.vertex_count()));
      if (p < need) break;
      phi = m;
    }
    rep.schedule.push_back(phi);
    if (!phi) rep.undefined.push_back(s);
  }

  std::set<GroupElement> in_F(F.elements.begin(), F.elements.end());
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const auto& graph = seq.graphs[n];
    const SimpleGraph g(graph);
    const auto V = g.vertex_count();
    AlmostARow row;
    row.index = seq.indices[n];
    row.vertices = V;
    for (std::size_t s = 1; s <= top; ++s)
      if (rep.schedule[s - 1] && *rep.schedule[s - 1] <= n) row.s = s;
    row.removed = row.s == 0 ? std::vector<Vertex>{} : bad_vertex_set(graph, oracle, static_cast<Distance>(row.s));
    row.fraction = Rational(static_cast<std::int64_t>(row.removed.size()), static_cast<std::int64_t>(V));
    VertexMask alive(V, 1);
    for (Vertex v : row.removed) alive[v] = 0;
    require(row.removed.size() < V, "empty", "every vertex of index " + std::to_string(row.index) + " is bad");

    std::vector<SparseVector> xi(V);
    if (row.s >= rep.folner_radius) {
      row.branch = "folner";
      CayleyChart chart(graph, oracle);
      const Rational mass(1, static_cast<std::int64_t>(F.elements.size()));
      parallel_for(V, [&](std::size_t x) {
        if (!alive[x]) return;
        std::vector<Vertex> support;
        for (const auto& [v, z] : chart(static_cast<Vertex>(x), static_cast<Distance>(rep.folner_radius)))
          if (in_F.count(z)) support.push_back(v);
        ensure(support.size() == F.elements.size(), "translate of F at vertex " + std::to_string(x) + " is not injective");
        std::sort(support.begin(), support.end());
        for (Vertex v : support) xi[x].emplace_back(v, mass);
      });
    } else {
      row.branch = "uniform";
      auto comps = connected_components(g, &alive);
      std::map<std::size_t, std::vector<Vertex>> members;
      for (Vertex v = 0; v < V; ++v)
        if (alive[v]) members[comps.id[v]].push_back(v);
      for (Vertex x = 0; x < V; ++x) {
        if (!alive[x]) continue;
        const auto& C = members.at(comps.id[x]);
        const Rational mass(1, static_cast<std::int64_t>(C.size()));
        for (Vertex v : C) xi[x].emplace_back(v, mass);
      }
    }
    row.witness = reroute_checked(g, xi, std::move(alive), graph.name());
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

struct GlueRow {
  long index = 0;
  std::size_t box_position = 0;  // position k in the box sequence
  std::size_t box_vertices = 0;
  std::size_t expander_vertices = 0;
  Rational ratio;  // expander / box
};

struct GlueResult {
  GraphSequence sequence;
  std::vector<GlueRow> rows;
};

// Box vertex v keeps id v; expander vertex 0 is box vertex 0 and expander
// vertex j >= 1 becomes N + j - 1.
inline Vertex glued_expander_vertex(std::size_t box_vertices, Vertex j) {
  return j == 0 ? 0 : static_cast<Vertex>(box_vertices + j - 1);
}

inline LabeledMultigraph glue_at_point(const LabeledMultigraph& box, const LabeledMultigraph& exp) {
  require(box.vertex_count() > 0 && exp.vertex_count() > 0, "empty", "cannot glue empty graphs");
  const auto N = box.vertex_count();
  LabeledMultigraph out(box.name() + "+" + exp.name(), N + exp.vertex_count() - 1, box.labels(),
                        box.degree_bound() + exp.degree_bound());
  for (const auto& e : box.edges()) out.add_edge(e.source, e.target, e.label);
  for (const auto& e : exp.edges())
    out.add_edge(glued_expander_vertex(N, e.source), glued_expander_vertex(N, e.target),
                 out.add_label(exp.labels()[e.label]));
  return out;
}

// Graph n (1-based) of `exp` is glued to the first unused box graph k with
// |V(exp_n)| / |V(box_k)| < 1/n; box positions strictly increase.
inline GlueResult glue_expander(const GraphSequence& box, const GraphSequence& exp) {
  require(exp.size() > 0, "empty", "expander sequence is empty");
  GlueResult out;
  out.sequence.family = "glued";
  std::size_t next = 0;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    const auto n = static_cast<std::int64_t>(i + 1);
    const auto M = static_cast<std::int64_t>(exp.graphs[i].vertex_count());
    std::size_t k = next;
    while (k < box.size() && !(n * M < static_cast<std::int64_t>(box.graphs[k].vertex_count()))) ++k;
    if (k == box.size())
      throw Error("ratio", "no box graph after position " + std::to_string(next) + " has more than " +
                               std::to_string(n * M) + " vertices (expander index " + std::to_string(n) + ")");
    GlueRow row;
    row.index = n;
    row.box_position = k;
    row.box_vertices = box.graphs[k].vertex_count();
    row.expander_vertices = static_cast<std::size_t>(M);
    row.ratio = Rational(M, static_cast<std::int64_t>(row.box_vertices));
    ensure(row.ratio < Rational(1, n), "glue ratio check");
    out.sequence.push_back(glue_at_point(box.graphs[k], exp.graphs[i]), n);
    out.rows.push_back(row);
    next = k + 1;
  }
  return out;
}

// Expander side of a glued graph: the glue vertex plus ids N .. end.
inline InducedSubgraph expander_side(const LabeledMultigraph& glued, std::size_t box_vertices) {
  std::vector<Vertex> keep{0};
  for (Vertex v = static_cast<Vertex>(box_vertices); v < glued.vertex_count(); ++v) keep.push_back(v);
  return induced_subgraph(glued, std::move(keep));
}

}  // namespace gsq
