#pragma once

#include <bit>
#include <optional>
#include <string>
#include <vector>

#include "gsq/invariants.hpp"
#include "gsq/partition.hpp"
#include "gsq/witness.hpp"

namespace gsq {

struct PeelResult {
  PartitionCertificate partition;
  std::size_t rounds = 0;
  Rational bound;                 // d * measured epsilon of the input witness
  std::size_t ball_bound = 0;     // max |B(x, S)| of the input witness
  std::vector<Rational> epsilons;  // measured epsilon before each round
};

// Repeatedly extracts a localized Folner set, removes it and reroutes the
// witness. A round whose witness has zero variation takes the component of
// the smallest remaining vertex instead.
inline PeelResult peel_partition(const LabeledMultigraph& graph, const WitnessCertificate& witness, const Rational& eps) {
  SimpleGraph g(graph);
  const auto n = g.vertex_count();
  require(n > 0, "empty", "cannot peel an empty graph");
  require(witness.alive.empty(), "precondition", "peeling starts from a witness on the whole graph");
  verify_witness(g, witness);
  PeelResult out;
  out.bound = Rational(static_cast<std::int64_t>(g.max_degree())) * witness.epsilon;
  require(out.bound <= eps, "precondition",
          "d * measured epsilon = " + to_string(out.bound) + " exceeds eps " + to_string(eps));
  for (Vertex x = 0; x < n; ++x) out.ball_bound = std::max(out.ball_bound, ball_vertices(g, x, witness.S).size());

  std::vector<std::uint32_t> block(n, 0);
  VertexMask alive(n, 1);
  std::size_t remaining = n;
  WitnessCertificate current = witness;
  while (remaining > 0) {
    out.epsilons.push_back(current.epsilon);
    std::vector<Vertex> F;
    if (current.epsilon == Rational(0)) {
      Vertex first = 0;
      while (!alive[first]) ++first;
      auto comps = connected_components(g, &alive);
      for (Vertex v = 0; v < n; ++v)
        if (alive[v] && comps.id[v] == comps.id[first]) F.push_back(v);
    } else {
      F = localized_folner(g, current).F.vertices;
    }
    ensure(!F.empty(), "peeling extracted nothing");
    for (Vertex v : F) {
      block[v] = static_cast<std::uint32_t>(out.rounds);
      alive[v] = 0;
    }
    remaining -= F.size();
    ++out.rounds;
    if (remaining > 0) current = reroute_witness(g, current, F);
  }
  out.partition = make_partition(g, block, graph.name());
  out.partition.target = eps;
  ensure(out.partition.epsilon < eps, "peeled cut fraction " + to_string(out.partition.epsilon) + " not below eps");
  ensure(out.partition.K <= out.ball_bound,
         "peeled block of " + std::to_string(out.partition.K) + " exceeds max |B(x,S)| = " + std::to_string(out.ball_bound));
  return out;
}

// Exact minimum K with cut fraction < eps, by dynamic programming over vertex
// subsets: best[S] = min over blocks B in S holding S's lowest vertex of
// |dB| + best[S \ B]; the cut is half the boundary sum.
inline PartitionCertificate hyperfinite_exact(const LabeledMultigraph& graph, const Rational& eps,
                                              std::optional<std::size_t> max_k = std::nullopt,
                                              std::size_t cap = default_caps().exact_partition) {
  SimpleGraph g(graph);
  const auto n = g.vertex_count();
  require(eps > 0, "param", "eps must be positive");
  require(n > 0, "empty", "cannot partition an empty graph");
  require(n <= cap, "cap", "exact partition needs |V| <= " + std::to_string(cap) + " (got " + std::to_string(n) + ")");
  const std::uint32_t full = (1u << n) - 1;
  std::vector<std::uint32_t> boundary(full + 1, 0);
  for (std::uint32_t s = 0; s <= full; ++s)
    for (auto [u, v] : g.edges()) boundary[s] += ((s >> u) & 1u) != ((s >> v) & 1u);
  const auto limit = std::min<std::size_t>(n, max_k.value_or(n));
  std::vector<std::uint32_t> best(full + 1), choice(full + 1);
  std::uint32_t last_cut = 0;
  for (std::size_t K = 1; K <= limit; ++K) {
    best[0] = 0;
    for (std::uint32_t s = 1; s <= full; ++s) {
      const std::uint32_t low = s & (~s + 1u);
      const std::uint32_t rest = s ^ low;
      std::uint32_t top = std::numeric_limits<std::uint32_t>::max(), pick = 0;
      // enumerate subsets of rest in decreasing order, ending with the empty set
      for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
        const std::uint32_t b = sub | low;
        if (static_cast<std::size_t>(std::popcount(b)) <= K) {
          auto cost = boundary[b] + best[s ^ b];
          if (cost < top) top = cost, pick = b;
        }
        if (sub == 0) break;
      }
      best[s] = top;
      choice[s] = pick;
    }
    last_cut = best[full] / 2;
    if (Rational(static_cast<std::int64_t>(last_cut)) < eps * static_cast<std::int64_t>(n)) {
      std::vector<std::uint32_t> block(n);
      std::uint32_t id = 0;
      for (std::uint32_t s = full; s != 0; s ^= choice[s], ++id)
        for (Vertex v = 0; v < n; ++v)
          if ((choice[s] >> v) & 1u) block[v] = id;
      auto p = make_partition(g, block, graph.name());
      p.target = eps;
      ensure(p.cut.size() == last_cut, "exact partition cut differs from the dynamic program");
      ensure(p.K <= K, "exact partition block exceeds K");
      return p;
    }
  }
  throw Infeasible("no partition with K <= " + std::to_string(limit) + " cuts fewer than eps*|V| = " +
                   to_string(eps * static_cast<std::int64_t>(n)) + " edges (best cut at K = " + std::to_string(limit) +
                   " is " + std::to_string(last_cut) + ")");
}

// Interval blocks of length b on cycle_<n>, b x b boxes on torus_<n>.
inline PartitionCertificate hyperfinite_blocks(const LabeledMultigraph& graph, std::size_t b,
                                               std::optional<Rational> eps = std::nullopt) {
  require(b >= 1, "param", "block size must be positive");
  auto tag = family_tag(graph);
  const auto n = graph.vertex_count();
  std::vector<std::uint32_t> block(n);
  if (tag.family == "cycle" && tag.size == n) {
    for (Vertex v = 0; v < n; ++v) block[v] = static_cast<std::uint32_t>(v / b);
  } else if (tag.family == "torus" && tag.size * tag.size == n) {
    const auto side = tag.size, per_row = (side + b - 1) / b;
    for (Vertex v = 0; v < n; ++v) block[v] = static_cast<std::uint32_t>((v % side) / b + per_row * ((v / side) / b));
  } else {
    throw Error("family", "blocks need a cycle_<n> or torus_<n> family graph, got '" + graph.name() + "'");
  }
  auto p = make_partition(SimpleGraph(graph), block, graph.name());
  if (eps) {
    p.target = *eps;
    if (!(p.epsilon < *eps))
      throw Infeasible("blocks(" + std::to_string(b) + ") cut fraction " + to_string(p.epsilon) + " is not below " +
                       to_string(*eps));
  }
  return p;
}

// Peeling with the uniform-ball witness of the smallest radius r for which
// d * measured epsilon <= eps.
inline PeelResult hyperfinite_carve(const LabeledMultigraph& graph, const Rational& eps) {
  SimpleGraph g(graph);
  require(eps > 0, "param", "eps must be positive");
  const auto d = static_cast<std::int64_t>(g.max_degree());
  for (Distance r = 0; r <= g.vertex_count(); ++r) {
    auto w = uniform_ball_witness(g, r, graph.name());
    if (Rational(d) * w.epsilon <= eps) return peel_partition(graph, w, eps);
  }
  throw Infeasible("no uniform-ball radius reaches d * epsilon <= " + to_string(eps));
}

enum class PartitionMethod { exact, blocks, carve };

inline PartitionMethod parse_partition_method(const std::string& s) {
  if (s == "exact") return PartitionMethod::exact;
  if (s == "blocks") return PartitionMethod::blocks;
  if (s == "carve") return PartitionMethod::carve;
  throw Error("param", "unknown partition method '" + s + "' (exact|blocks|carve)");
}

inline PartitionCertificate hyperfinite_partition(const LabeledMultigraph& g, const Rational& eps, PartitionMethod method,
                                                  std::size_t block_size = 0,
                                                  std::optional<std::size_t> max_k = std::nullopt) {
  switch (method) {
    case PartitionMethod::exact: return hyperfinite_exact(g, eps, max_k);
    case PartitionMethod::blocks: return hyperfinite_blocks(g, block_size, eps);
    case PartitionMethod::carve: return hyperfinite_carve(g, eps).partition;
  }
  throw Error("param", "bad method");
}

}  // namespace gsq
