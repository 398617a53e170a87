#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gsq/coarse.hpp"
#include "gsq/families.hpp"
#include "gsq/invariants.hpp"
#include "gsq/moves.hpp"
#include "gsq/subgroup.hpp"

namespace gsq {

// One rewired graph: the identity map to the input is L-bi-Lipschitz.
struct CostRow {
  long index = 0;
  std::size_t vertices = 0;
  std::size_t edges_before = 0, edges_after = 0;  // multi mode
  Rational ratio_before, ratio_after;
  std::int64_t measured = 1;  // identity-map bi-Lipschitz constant
  bool exhaustive = true;
  MoveLog moves;
  LabeledMultigraph output;
};

struct CostBound {
  std::string method;
  std::int64_t L = 1;
  std::vector<CostRow> rows;
  bool verified = false;
};

inline constexpr std::size_t kExhaustiveLimit = 512;
inline constexpr std::size_t kSampledPairs = 10000;
inline constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

// Identity map output -> input, exhaustive up to kExhaustiveLimit vertices and
// otherwise over seeded source vertices covering about kSampledPairs pairs.
inline DistortionCertificate verify_identity(const LabeledMultigraph& input, const LabeledMultigraph& output,
                                             std::int64_t bound, std::uint64_t seed = 1) {
  const auto n = input.vertex_count();
  std::vector<Vertex> sources;
  if (n > kExhaustiveLimit) {
    auto rng = seeded_rng(seed, 0);
    auto perm = random_permutation(rng, n);
    const auto k = std::min(n, (kSampledPairs + n - 1) / n);
    sources.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(sources.begin(), sources.end());
  }
  auto c = measure_distortion(output, input, identity_map(n), MapKind::bilipschitz, sources);
  if (c.constant > bound)
    throw Error("violation", "identity map is " + std::to_string(c.constant) + "-bi-Lipschitz at pair (" +
                                 std::to_string(c.worst.x) + "," + std::to_string(c.worst.y) + "), bound " +
                                 std::to_string(bound));
  return c;
}

inline CostRow finish_row(const LabeledMultigraph& input, LabeledMultigraph output, MoveLog moves, std::int64_t bound) {
  CostRow row;
  row.vertices = input.vertex_count();
  const auto n = static_cast<std::int64_t>(row.vertices);
  row.edges_before = input.edge_count();
  row.edges_after = output.edge_count();
  row.ratio_before = Rational(static_cast<std::int64_t>(row.edges_before), n);
  row.ratio_after = Rational(static_cast<std::int64_t>(row.edges_after), n);
  ensure(graph_to_string(replay(input, moves)) == graph_to_string(output), "move log does not replay to the output");
  auto c = verify_identity(input, output, bound);
  row.measured = c.constant;
  row.exhaustive = c.exhaustive;
  row.moves = std::move(moves);
  row.output = std::move(output);
  return row;
}

// Deletes edges in (source, target, label) order whenever, without that
// edge, its endpoints and the endpoints of every edge deleted so far stay
// within distance L. Only deleted edges touching the L-ball of the candidate
// can be affected, so only those are rechecked.
inline CostRow greedy_thin(const LabeledMultigraph& g, std::int64_t L) {
  require(L >= 1, "param", "L must be at least 1");
  require(is_connected(SimpleGraph(g)), "disconnected", "greedy thinning needs a connected graph");
  const auto n = g.vertex_count();
  const auto& edges = g.edges();
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(edges[a].source, edges[a].target, edges[a].label) <
           std::tie(edges[b].source, edges[b].target, edges[b].label);
  });
  std::vector<std::vector<std::pair<Vertex, std::size_t>>> adj(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].source].emplace_back(edges[i].target, i);
    if (edges[i].source != edges[i].target) adj[edges[i].target].emplace_back(edges[i].source, i);
  }
  std::vector<char> alive(edges.size(), 1);
  std::vector<std::vector<std::size_t>> deleted_at(n);
  std::vector<Distance> dist(n, kInfinity);
  std::vector<Vertex> queue;
  // vertices within L of u over alive edges other than `skip`
  auto ball = [&](Vertex u, std::size_t skip) {
    queue.assign(1, u);
    dist[u] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Vertex x = queue[head];
      if (static_cast<std::int64_t>(dist[x]) >= L) continue;
      for (auto [y, e] : adj[x])
        if (alive[e] && e != skip && dist[y] == kInfinity) dist[y] = dist[x] + 1, queue.push_back(y);
    }
    auto out = queue;
    for (Vertex x : queue) dist[x] = kInfinity;
    return out;
  };
  auto within = [&](Vertex u, Vertex v, std::size_t skip) {
    if (u == v) return true;
    auto b = ball(u, skip);
    return std::find(b.begin(), b.end(), v) != b.end();
  };
  LabeledMultigraph out = g;
  MoveLog log;
  for (std::size_t i : order) {
    const auto& e = edges[i];
    if (!within(e.source, e.target, i)) continue;
    std::vector<std::size_t> touched;
    for (Vertex x : ball(e.source, kNoEdge))
      for (auto d : deleted_at[x]) touched.push_back(d);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    if (!std::all_of(touched.begin(), touched.end(),
                     [&](std::size_t d) { return within(edges[d].source, edges[d].target, i); }))
      continue;
    alive[i] = 0;
    deleted_at[e.source].push_back(i);
    deleted_at[e.target].push_back(i);
    log_move(out, log, {false, e.source, e.target, e.label});
  }
  return finish_row(g, std::move(out), std::move(log), L);
}

// Keeps every a-edge and the b-edges of every L-th column of torus_<n>.
inline CostRow torus_thinning(const LabeledMultigraph& g, std::int64_t L) {
  auto tag = family_tag(g);
  require(tag.family == "torus" && tag.size * tag.size == g.vertex_count(), "family",
          "torus thinning needs a torus_<n> graph, got '" + g.name() + "'");
  const auto side = static_cast<std::int64_t>(tag.size);
  require(L >= 1 && side % L == 0, "param", "L = " + std::to_string(L) + " does not divide " + std::to_string(side));
  const auto b = g.label_index("b");
  LabeledMultigraph out = g;
  MoveLog log;
  for (const auto& e : g.edges())
    if (e.label == b && static_cast<std::int64_t>(e.source % tag.size) % L != 0)
      log_move(out, log, {false, e.source, e.target, e.label});
  const auto n2 = side * side;
  ensure(static_cast<std::int64_t>(out.edge_count()) == n2 + n2 / L, "torus thinning edge count differs from n^2(1+1/L)");
  return finish_row(g, std::move(out), std::move(log), L + 2);
}

inline CostBound cost_over_sequence(const GraphSequence& seq, std::int64_t L, const std::string& method) {
  require(method == "greedy" || method == "torus", "param", "unknown thinning method '" + method + "' (greedy|torus)");
  CostBound cb;
  cb.method = method;
  cb.L = L;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    auto row = method == "greedy" ? greedy_thin(seq.graphs[i], L) : torus_thinning(seq.graphs[i], L);
    row.index = seq.indices[i];
    cb.rows.push_back(std::move(row));
  }
  cb.verified = true;
  return cb;
}

struct CostIntervalRow {
  long index = 0;
  std::size_t vertices = 0;
  Rational lower, upper;
  Distance girth = kInfinity;
};

struct CostInterval {
  bool large_girth = false;
  std::vector<CostIntervalRow> rows;
  Rational lower, upper;  // at the last index
};

// lower = 1 - 1/|V|, or the multi-mode edge number when the family is flagged
// large-girth (girth must then increase strictly); upper = best edge ratio known.
inline CostInterval cost_interval(const GraphSequence& seq, bool large_girth, const CostBound* rewired = nullptr) {
  require(seq.size() > 0, "empty", "cost report needs a non-empty sequence");
  if (rewired) require(rewired->rows.size() == seq.size(), "align", "rewiring rows do not match the sequence");
  CostInterval out;
  out.large_girth = large_girth;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& g = seq.graphs[i];
    const auto n = static_cast<std::int64_t>(g.vertex_count());
    CostIntervalRow row;
    row.index = seq.indices[i];
    row.vertices = g.vertex_count();
    row.girth = girth(SimpleGraph(g));
    const Rational e(static_cast<std::int64_t>(g.edge_count()), n);
    row.lower = large_girth ? e : Rational(1) - Rational(1, n);
    row.upper = rewired ? std::min(e, rewired->rows[i].ratio_after) : e;
    if (large_girth && i > 0)
      require(row.girth > out.rows.back().girth && row.girth != kInfinity, "girth",
              "large-girth flag set but girth does not increase at index " + std::to_string(row.index));
    out.rows.push_back(row);
  }
  out.lower = out.rows.back().lower;
  out.upper = out.rows.back().upper;
  return out;
}

// Sch(Gamma, N, S) with S = ambient generators plus the subgroup's Schreier
// generators, on the points of one pair level.
inline LabeledMultigraph pair_combined_graph(const SubgroupPair& pair, std::size_t level) {
  require(level < pair.levels.size(), "range", "pair level out of range");
  const auto& lv = pair.levels[level];
  std::vector<std::string> labels = pair.ambient_labels;
  std::vector<std::vector<Vertex>> perms;
  for (std::size_t s = 0; s < pair.ambient_labels.size(); ++s) perms.push_back(lv.gamma.permutation(s));
  for (std::size_t i = 0; i < pair.subgroup_generators.size(); ++i) {
    labels.push_back(pair.subgroup_labels[i]);
    perms.push_back(lv.gamma.word_permutation(pair.subgroup_generators[i]));
  }
  return schreier_graph(PermAction(labels, perms), "pair_combined_" + std::to_string(lv.gamma.degree()));
}

struct ReductionResult {
  LabeledMultigraph input;
  LabeledMultigraph output;
  MoveLog phase1, phase2;
  std::vector<Vertex> base;
  std::size_t index = 1;
  std::int64_t r_max = 0;
  std::int64_t phase1_constant = 1;  // measured identity bi-Lipschitz constant after phase 1
  bool phase1_exhaustive = true;
  std::vector<Distance> depth;       // distance to the base copy, equal before and after
  std::size_t arcs = 0;
};

namespace detail {

// Multi-source BFS over the given edges from a vertex set; returns distances.
inline std::vector<Distance> bfs_over(std::size_t n, const std::vector<LabeledEdge>& edges,
                                      const std::vector<char>& use, const std::vector<Vertex>& sources) {
  std::vector<std::vector<Vertex>> adj(n);
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (use[i] && edges[i].source != edges[i].target) {
      adj[edges[i].source].push_back(edges[i].target);
      adj[edges[i].target].push_back(edges[i].source);
    }
  std::vector<Distance> dist(n, kInfinity);
  std::vector<Vertex> queue;
  for (Vertex s : sources)
    if (dist[s] == kInfinity) dist[s] = 0, queue.push_back(s);
  for (std::size_t head = 0; head < queue.size(); ++head)
    for (Vertex v : adj[queue[head]])
      if (dist[v] == kInfinity) dist[v] = dist[queue[head]] + 1, queue.push_back(v);
  return dist;
}

// Arc as the edge ids along it, from one base vertex to another.
struct Arc {
  std::vector<Vertex> path;
  std::vector<std::size_t> edge_ids;
};

// Shortest arc: BFS from the base copy through non-base vertices along
// g-edges; every non-tree g-edge joining different branches (or returning to
// the base copy) closes an arc. Ties go to the lexicographically smallest
// (length, sorted endpoints, vertex sequence).
inline std::optional<Arc> shortest_arc(const LabeledMultigraph& g, const std::vector<char>& is_g,
                                       const std::vector<char>& in_base) {
  const auto n = g.vertex_count();
  const auto& edges = g.edges();
  std::vector<std::vector<std::pair<Vertex, std::size_t>>> adj(n);
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (is_g[edges[i].label] && edges[i].source != edges[i].target) {
      adj[edges[i].source].emplace_back(edges[i].target, i);
      adj[edges[i].target].emplace_back(edges[i].source, i);
    }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  std::vector<Distance> dist(n, kInfinity);
  std::vector<std::size_t> parent_edge(n, kNone), branch(n, kNone);
  std::vector<Vertex> parent(n, 0), queue;
  for (Vertex b = 0; b < n; ++b)
    if (in_base[b]) dist[b] = 0;
  for (Vertex b = 0; b < n; ++b) {
    if (!in_base[b]) continue;
    for (auto [v, e] : adj[b])
      if (!in_base[v] && dist[v] == kInfinity) {
        dist[v] = 1, parent[v] = b, parent_edge[v] = e, branch[v] = e;
        queue.push_back(v);
      }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex u = queue[head];
    for (auto [v, e] : adj[u])
      if (!in_base[v] && dist[v] == kInfinity) {
        dist[v] = dist[u] + 1, parent[v] = u, parent_edge[v] = e, branch[v] = branch[u];
        queue.push_back(v);
      }
  }
  auto climb = [&](Vertex v, std::vector<Vertex>& p, std::vector<std::size_t>& es) {
    // path from v up to the base copy, v first
    p.push_back(v);
    while (!in_base[v]) {
      es.push_back(parent_edge[v]);
      v = parent[v];
      p.push_back(v);
    }
  };
  std::optional<Arc> best;
  auto consider = [&](Arc a) {
    auto key = [](const Arc& x) {
      return std::make_tuple(x.edge_ids.size(), std::min(x.path.front(), x.path.back()),
                             std::max(x.path.front(), x.path.back()));
    };
    // orient so the path starts at the smaller endpoint
    if (a.path.back() < a.path.front()) {
      std::reverse(a.path.begin(), a.path.end());
      std::reverse(a.edge_ids.begin(), a.edge_ids.end());
    }
    if (!best || key(a) < key(*best) || (key(a) == key(*best) && a.path < best->path)) best = std::move(a);
  };
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (!is_g[e.label] || e.source == e.target) continue;
    const Vertex u = e.source, v = e.target;
    if (in_base[u] && in_base[v]) {
      consider({{u, v}, {i}});
      continue;
    }
    if (dist[u] == kInfinity || dist[v] == kInfinity) continue;
    if (i == parent_edge[u] || i == parent_edge[v]) continue;
    if (!in_base[u] && !in_base[v] && branch[u] == branch[v]) continue;
    Arc a;
    std::vector<Vertex> pu, pv;
    std::vector<std::size_t> eu, ev;
    climb(u, pu, eu);
    climb(v, pv, ev);
    a.path.assign(pu.rbegin(), pu.rend());
    a.edge_ids.assign(eu.rbegin(), eu.rend());
    a.edge_ids.push_back(i);
    a.path.insert(a.path.end(), pv.begin(), pv.end());
    a.edge_ids.insert(a.edge_ids.end(), ev.begin(), ev.end());
    consider(std::move(a));
  }
  return best;
}

}  // namespace detail

// Phase 1 removes h-edges outside the base copy once the trapezoid constant
// R_max fits the budget; phase 2 cuts the middle of shortest g-arcs until none
// remain. Distances to the base copy never change.
inline ReductionResult base_copy_reduction(const LabeledMultigraph& G, const std::vector<std::string>& h_labels,
                                           std::vector<Vertex> base, std::size_t index, std::int64_t budget) {
  const auto n = G.vertex_count();
  std::sort(base.begin(), base.end());
  require(!base.empty(), "param", "base copy is empty");
  std::vector<char> in_base(n, 0);
  for (Vertex b : base) {
    require(b < n, "range", "base vertex out of range");
    in_base[b] = 1;
  }
  std::vector<char> is_h(G.labels().size(), 0);
  for (const auto& l : h_labels) is_h[G.label_index(l)] = 1;
  std::vector<char> is_g(is_h.size());
  for (std::size_t i = 0; i < is_h.size(); ++i) is_g[i] = !is_h[i];

  ReductionResult out;
  out.input = G;
  out.base = base;
  out.index = index;
  const auto& edges = G.edges();
  std::vector<char> all(edges.size(), 1), g_only(edges.size()), base_h(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    g_only[i] = is_g[edges[i].label];
    base_h[i] = is_h[edges[i].label] && in_base[edges[i].source] && in_base[edges[i].target];
  }
  const auto depth_before = detail::bfs_over(n, edges, all, base);
  const auto g_depth = detail::bfs_over(n, edges, g_only, base);
  for (Vertex v = 0; v < n; ++v)
    require(g_depth[v] != kInfinity && g_depth[v] <= index, "precondition",
            "vertex " + std::to_string(v) + " is not within " + std::to_string(index) + " g-steps of the base copy");

  // landing point: nearest base vertex along g-edges, smallest id on ties
  auto landing = [&](Vertex v) {
    auto d = detail::bfs_over(n, edges, g_only, {v});
    Vertex best = base.front();
    Distance bd = kInfinity;
    for (Vertex b : base)
      if (d[b] < bd) bd = d[b], best = b;
    return best;
  };
  std::map<Vertex, Vertex> land;
  std::map<Vertex, std::vector<Distance>> base_dist;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (!is_h[e.label] || base_h[i]) continue;
    for (Vertex x : {e.source, e.target})
      if (!land.count(x)) land[x] = landing(x);
    Vertex a = land[e.source];
    if (!base_dist.count(a)) base_dist[a] = detail::bfs_over(n, edges, base_h, {a});
    const auto R = base_dist[a][land[e.target]];
    require(R != kInfinity, "budget", "base copy is disconnected between landing points");
    out.r_max = std::max<std::int64_t>(out.r_max, R);
  }
  if (out.r_max > budget)
    throw Error("budget", "trapezoid constant R_max = " + std::to_string(out.r_max) + " exceeds budget " +
                              std::to_string(budget));

  LabeledMultigraph cur = G;
  for (const auto& e : G.edges())
    if (is_h[e.label] && !(in_base[e.source] && in_base[e.target]))
      log_move(cur, out.phase1, {false, e.source, e.target, e.label});
  auto c = verify_identity(G, cur, out.r_max + 2 * static_cast<std::int64_t>(index));
  out.phase1_constant = c.constant;
  out.phase1_exhaustive = c.exhaustive;

  while (auto arc = detail::shortest_arc(cur, is_g, in_base)) {
    const auto L = arc->edge_ids.size();
    std::size_t pick;
    if (L % 2 == 1) {
      pick = arc->edge_ids[L / 2];
    } else {
      // of the two edges at the midpoint, the one toward the smaller neighbour
      const auto m = L / 2;
      const Vertex left = arc->path[m - 1], right = arc->path[m + 1];
      pick = left < right ? arc->edge_ids[m - 1]
             : right < left ? arc->edge_ids[m]
                            : std::min(arc->edge_ids[m - 1], arc->edge_ids[m]);
    }
    const auto e = cur.edges()[pick];
    cur.remove_edge_at(pick);
    out.phase2.push_back({false, e.source, e.target, e.label});
    ++out.arcs;
    std::vector<char> every(cur.edges().size(), 1);
    const auto now = detail::bfs_over(n, cur.edges(), every, base);
    for (Vertex v = 0; v < n; ++v)
      ensure(now[v] == depth_before[v], "arc deletion changed the distance of vertex " + std::to_string(v) +
                                            " to the base copy");
  }
  out.depth = depth_before;

  // base copy plus pendant trees: every non-base component is a tree hanging by one edge
  SimpleGraph s(cur);
  VertexMask outside(n, 0);
  for (Vertex v = 0; v < n; ++v) outside[v] = !in_base[v];
  auto comps = connected_components(s, &outside);
  std::vector<std::size_t> inner(comps.count, 0), attach(comps.count, 0);
  for (auto [u, v] : s.edges()) {
    if (!in_base[u] && !in_base[v]) ++inner[comps.id[u]];
    else if (in_base[u] != in_base[v]) ++attach[comps.id[in_base[u] ? v : u]];
  }
  for (std::uint32_t k = 0; k < comps.count; ++k)
    ensure(attach[k] == 1 && inner[k] + 1 == comps.sizes[k], "reduced graph is not the base copy plus pendant trees");
  for (Vertex v = 0; v < n; ++v) ensure(depth_before[v] <= index, "pendant tree deeper than the index");
  ensure(graph_to_string(replay(replay(G, out.phase1), out.phase2)) == graph_to_string(cur), "move logs do not replay");
  out.output = std::move(cur);
  return out;
}

inline ReductionResult base_copy_reduction(const SubgroupPair& pair, std::size_t level, std::int64_t budget) {
  return base_copy_reduction(pair_combined_graph(pair, level), pair.subgroup_labels, pair.levels.at(level).base,
                             pair.index, budget);
}

struct MultRow {
  long index = 0;
  std::size_t gamma_vertices = 0, lambda_vertices = 0;
  Rational e_gamma, e_lambda;
  Rational lhs, rhs;  // m (e_gamma - 1), e_lambda - 1
  bool holds = false;
};

struct MultReport {
  std::size_t index = 1;
  EdgeMode mode = EdgeMode::multi;
  std::vector<MultRow> rows;
  bool all_hold = true;
};

inline MultReport multiplicativity_check(const GraphSequence& gamma, const GraphSequence& lambda, std::size_t index,
                                         EdgeMode mode = EdgeMode::multi) {
  require(gamma.size() == lambda.size() && gamma.indices == lambda.indices, "align",
          "gamma and lambda sequences have different indices");
  MultReport rep;
  rep.index = index;
  rep.mode = mode;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    MultRow row;
    row.index = gamma.indices[i];
    row.gamma_vertices = gamma.graphs[i].vertex_count();
    row.lambda_vertices = lambda.graphs[i].vertex_count();
    require(row.gamma_vertices == index * row.lambda_vertices, "align",
            "index " + std::to_string(row.index) + ": |V_gamma| is not [Gamma:Lambda] |V_lambda|");
    row.e_gamma = Rational(static_cast<std::int64_t>(edge_count(gamma.graphs[i], mode)),
                           static_cast<std::int64_t>(row.gamma_vertices));
    row.e_lambda = Rational(static_cast<std::int64_t>(edge_count(lambda.graphs[i], mode)),
                            static_cast<std::int64_t>(row.lambda_vertices));
    row.lhs = Rational(static_cast<std::int64_t>(index)) * (row.e_gamma - Rational(1));
    row.rhs = row.e_lambda - Rational(1);
    row.holds = row.lhs == row.rhs;
    rep.all_hold = rep.all_hold && row.holds;
    rep.rows.push_back(row);
  }
  return rep;
}

inline MultReport multiplicativity_check(const SubgroupPair& pair, EdgeMode mode = EdgeMode::multi) {
  return multiplicativity_check(pair.gamma_sequence, pair.lambda_sequence, pair.index, mode);
}

}  // namespace gsq
