#include <gtest/gtest.h>

#include "gsq/coarse.hpp"
#include "gsq/invariants.hpp"
#include "support.hpp"

using namespace gsq;
using namespace testing_support;

namespace {

std::vector<Vertex> mod_map(std::size_t n, std::size_t m) {
  std::vector<Vertex> f(n);
  for (Vertex x = 0; x < n; ++x) f[x] = static_cast<Vertex>(x % m);
  return f;
}

// Smallest A satisfying the quasi-isometry inequalities, tried directly with rationals.
std::int64_t qi_oracle(const LabeledMultigraph& G, const LabeledMultigraph& H, const std::vector<Vertex>& f) {
  auto dg = floyd(G), dh = floyd(H);
  for (std::int64_t A = 1;; ++A) {
    bool ok = true;
    for (Vertex x = 0; x < G.vertex_count() && ok; ++x)
      for (Vertex y = 0; y < G.vertex_count() && ok; ++y) {
        Rational d(dg[x][y]), dp(dh[f[x]][f[y]]);
        ok = d / A - A <= dp && dp <= A * d + A;
      }
    for (Vertex z = 0; z < H.vertex_count() && ok; ++z) {
      unsigned best = kInf;
      for (Vertex x = 0; x < G.vertex_count(); ++x) best = std::min(best, dh[z][f[x]]);
      ok = best <= A;
    }
    if (ok) return A;
  }
}

LabeledMultigraph with_pendants(LabeledMultigraph g, const std::vector<Vertex>& bases) {
  for (Vertex b : bases) g.add_edge(b, g.add_vertex(), 0u);
  g.set_degree_bound(g.degree_bound() + bases.size());
  return g;
}

std::size_t count_edge(const LabeledMultigraph& g, Vertex u, Vertex v) {
  std::size_t c = 0;
  for (const auto& e : g.edges()) c += (e.source == u && e.target == v) || (e.source == v && e.target == u);
  return c;
}

}  // namespace

TEST(VerifyMap, IdentityDoublingAndConstant) {
  auto c8 = cycle(8), c4 = cycle(4);
  auto id = verify_map(c8, c8, identity_map(8), MapKind::bilipschitz, 1);
  EXPECT_EQ(id.constant, 1);
  auto dbl = measure_distortion(c8, c4, mod_map(8, 4), MapKind::quasi_isometry);
  EXPECT_EQ(dbl.constant, 2);
  EXPECT_EQ(dbl.density_distance, 0u);
  EXPECT_EQ(dbl.constant, qi_oracle(c8, c4, mod_map(8, 4)));
  EXPECT_NO_THROW(verify_map(c8, c4, mod_map(8, 4), MapKind::quasi_isometry, 2));
  EXPECT_THROW(verify_map(c8, c4, mod_map(8, 4), MapKind::quasi_isometry, 1), Error);

  std::vector<Vertex> constant(8, 0);
  auto cst = measure_distortion(c8, c8, constant, MapKind::quasi_isometry);
  EXPECT_EQ(cst.pair_constant, 2);  // d = 4 <= A * A first holds at A = 2
  EXPECT_EQ(cst.density_distance, 4u);
  EXPECT_EQ(cst.constant, 4);
  EXPECT_EQ(cst.constant, qi_oracle(c8, c8, constant));
  for (std::int64_t A : {1, 2, 3}) {
    try {
      verify_map(c8, c8, constant, MapKind::quasi_isometry, A);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.reason(), "violation");
    }
  }
  EXPECT_EQ(measure_distortion(c8, c8, constant, MapKind::bilipschitz).constant, kUnbounded);
}

TEST(VerifyMap, QuasiIsometryMatchesOracleOnRandomMaps) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    auto G = random_connected(12, 4, seed), H = random_connected(8, 3, seed + 100);
    auto rng = seeded_rng(seed, 3);
    std::vector<Vertex> f(12);
    for (auto& v : f) v = static_cast<Vertex>(uniform_below(rng, 8));
    EXPECT_EQ(measure_distortion(G, H, f, MapKind::quasi_isometry).constant, qi_oracle(G, H, f)) << seed;
  }
}

TEST(VerifyMap, MapFileRoundTrip) {
  std::ostringstream out;
  write_map(out, {3, 1, 2});
  std::istringstream in(out.str());
  EXPECT_EQ(parse_map(in), (std::vector<Vertex>{3, 1, 2}));
  std::istringstream bad("map 2\n1\n");
  EXPECT_THROW(parse_map(bad), ParseError);
}

TEST(StripTerminals, PendantsPathAndTorus) {
  auto g = with_pendants(cycle(8), {0, 3, 5});
  auto s = strip_terminals(g);
  EXPECT_EQ(s.graph.vertex_count(), 8u);
  EXPECT_EQ(graph_to_string(s.graph).substr(graph_to_string(s.graph).find('\n')),
            graph_to_string(cycle(8)).substr(graph_to_string(cycle(8)).find('\n')));
  EXPECT_EQ(s.terminals, (std::vector<Terminal>{{8, 0}, {9, 3}, {10, 5}}));
  try {
    strip_terminals(path(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.reason(), "empty");
  }
  std::vector<Vertex> bases;
  for (Vertex v = 0; v < 16; ++v) bases.insert(bases.end(), {v, v});
  auto t = strip_terminals(with_pendants(torus(4), bases));
  EXPECT_EQ(t.terminals.size(), 32u);
  EXPECT_EQ(t.graph.edge_count(), torus(4).edge_count());
}

TEST(NormalizeTerminals, TypeOneChain) {
  auto ref = with_pendants(cycle(4), {0, 0});  // terminals 4, 5 on base 0
  LabeledMultigraph h("h", 6, {"t"}, 4);
  auto base = cycle(4);
  for (const auto& e : base.edges()) h.add_edge(e.source, e.target, e.label);
  h.add_edge(0, 4, 0u);
  h.add_edge(4, 5, 0u);
  auto r = normalize_terminal_edges(ref, h, strip_terminals(ref).terminals);
  EXPECT_EQ(r.type1_rounds, 1u);
  EXPECT_EQ(r.log, (MoveLog{{false, 4, 5, 0}, {true, 0, 5, 0}}));
  EXPECT_EQ(count_edge(r.graph, 0, 5), 1u);
  EXPECT_EQ(count_edge(r.graph, 4, 5), 0u);
  EXPECT_LE(r.certificate.constant, r.bound);
}

TEST(NormalizeTerminals, TypeThreeAKeepsBase) {
  auto ref = with_pendants(cycle(6), {0});  // terminal 6 on base 0
  LabeledMultigraph h("h", 7, {"t"}, 5);
  auto base = cycle(6);
  for (const auto& e : base.edges()) h.add_edge(e.source, e.target, e.label);
  h.add_edge(0, 6, 0u);
  h.add_edge(1, 6, 0u);
  h.add_edge(5, 6, 0u);
  auto r = normalize_terminal_edges(ref, h, strip_terminals(ref).terminals);
  EXPECT_EQ(r.type3a_terminals, 1u);
  EXPECT_EQ(count_edge(r.graph, 0, 6), 1u);
  EXPECT_EQ(count_edge(r.graph, 1, 6), 0u);
  EXPECT_EQ(count_edge(r.graph, 5, 6), 0u);
  EXPECT_EQ(count_edge(r.graph, 1, 0), 2u);  // cycle edge plus the added (x', x)
  EXPECT_EQ(count_edge(r.graph, 5, 0), 2u);
  EXPECT_EQ(replay(h, r.log).edges(), r.graph.edges());
}

TEST(NormalizeTerminals, TypeThreeBMovesToBase) {
  auto ref = with_pendants(cycle(6), {0});
  LabeledMultigraph h("h", 7, {"t"}, 3);
  auto base = cycle(6);
  for (const auto& e : base.edges()) h.add_edge(e.source, e.target, e.label);
  h.add_edge(2, 6, 0u);
  auto r = normalize_terminal_edges(ref, h, strip_terminals(ref).terminals);
  EXPECT_EQ(r.reference_L, 3);
  EXPECT_EQ(r.type3b_terminals, 1u);
  EXPECT_EQ(r.log, (MoveLog{{false, 2, 6, 0}, {true, 0, 6, 0}}));
  EXPECT_LE(r.certificate.constant, r.bound);
}

TEST(NormalizeTerminals, RandomRewiringsReplayAndKeepInternalEdges) {
  auto base_graph = torus(4);
  std::vector<Vertex> bases{0, 0, 5, 10, 15};
  auto ref = with_pendants(base_graph, bases);
  auto terms = strip_terminals(ref).terminals;
  auto dist = floyd(ref);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto rng = seeded_rng(seed, 8);
    LabeledMultigraph h = ref;
    h.set_degree_bound(32);
    // extra edges between vertices at distance 2, some touching terminals
    for (int k = 0; k < 6; ++k) {
      Vertex u, v;
      do {
        u = static_cast<Vertex>(uniform_below(rng, ref.vertex_count()));
        v = static_cast<Vertex>(uniform_below(rng, ref.vertex_count()));
      } while (dist[u][v] != 2);
      h.add_edge(u, v, 0u);
    }
    auto r = normalize_terminal_edges(ref, h, terms);
    EXPECT_EQ(replay(h, r.log).edges(), r.graph.edges());
    for (const auto& t : terms) {
      std::size_t touching = 0;
      for (const auto& e : r.graph.edges()) touching += e.source == t.terminal || e.target == t.terminal;
      EXPECT_EQ(touching, 1u);
      EXPECT_GE(count_edge(r.graph, t.terminal, t.base), 1u);
    }
    // internal-internal edges of h survive unless the log deleted them
    std::vector<char> is_term(ref.vertex_count(), 0);
    for (const auto& t : terms) is_term[t.terminal] = 1;
    for (const auto& e : h.edges()) {
      if (is_term[e.source] || is_term[e.target]) continue;
      bool deleted = false;
      for (const auto& m : r.log) deleted = deleted || (!m.add && m.u == e.source && m.v == e.target);
      if (!deleted) EXPECT_GE(count_edge(r.graph, e.source, e.target), 1u);
    }
    EXPECT_LE(r.certificate.constant, r.bound);
  }
}

TEST(Injectivize, DoublingInjectiveAndPair) {
  auto c8 = cycle(8), c4 = cycle(4);
  auto r = injectivize(c8, c4, mod_map(8, 4));
  EXPECT_EQ(r.h_prime.vertex_count(), 8u);
  EXPECT_EQ(r.added, 4u);
  EXPECT_EQ(r.A, 2);
  std::set<Vertex> img(r.image.begin(), r.image.end());
  EXPECT_EQ(img.size(), 8u);
  EXPECT_EQ(strip_terminals(r.h_prime).terminals.size(), 4u);

  auto same = injectivize(c8, c8, identity_map(8));
  EXPECT_EQ(graph_to_string(same.h_prime).substr(graph_to_string(same.h_prime).find('\n')),
            graph_to_string(c8).substr(graph_to_string(c8).find('\n')));
  EXPECT_EQ(same.added, 0u);

  std::vector<Vertex> squash{0, 0, 1, 2, 3, 4, 5, 6};  // C_8 onto C_7, collapsing 0 and 1
  auto one = injectivize(c8, cycle(7), squash);
  EXPECT_EQ(one.added, 1u);
  EXPECT_EQ(one.h_prime.vertex_count(), 8u);
  EXPECT_EQ(count_edge(one.h_prime, 0, 7), 1u);
  EXPECT_EQ(one.image[1], 7u);
}

TEST(Pushforward, DoublingPipelineAndIdentity) {
  for (std::size_t n : {8, 16}) {
    auto G = cycle(n), H = cycle(n / 2);
    auto inj = injectivize(G, H, mod_map(n, n / 2));
    auto p = pushforward_graph(G, inj.image, inj.h_prime);
    EXPECT_EQ(p.h_second.vertex_count(), n);
    EXPECT_EQ(p.R, 0u);  // f' is a bijection, so no vertex is hung
    SimpleGraph s(p.h_second);
    EXPECT_TRUE(is_connected(s));
    EXPECT_EQ(s.edge_count(), n);
    EXPECT_EQ(s.max_degree(), 2u);
    EXPECT_EQ(girth(s), n);
    EXPECT_LE(p.certificate.constant, p.bound);
    EXPECT_EQ(p.certificate.constant, bilipschitz_constant(inj.h_prime, p.h_second));
  }
  auto c8 = cycle(8);
  auto id = pushforward_graph(c8, identity_map(8), c8);
  EXPECT_EQ(id.certificate.constant, 1);
  EXPECT_EQ(id.h_second.edges(), c8.edges());
}

TEST(Pushforward, IsometricEmbeddingRoundTrip) {
  auto G = cycle(8);
  auto H = with_pendants(cycle(8), {0, 3, 5});
  auto inj = injectivize(G, H, identity_map(8));
  EXPECT_EQ(inj.added, 0u);
  auto p = pushforward_graph(G, inj.image, inj.h_prime);
  EXPECT_EQ(p.R, 1u);
  auto s = strip_terminals(p.h_second);
  EXPECT_EQ(s.graph.edges(), G.edges());
  EXPECT_EQ(s.terminals, (std::vector<Terminal>{{8, 0}, {9, 3}, {10, 5}}));
}

TEST(TransferPartition, SameGraphChordsAndTorus) {
  auto c8 = cycle(8);
  std::vector<std::uint32_t> halves{0, 0, 0, 0, 1, 1, 1, 1};
  auto P = make_partition(SimpleGraph(c8), halves);
  EXPECT_EQ(P.cut.size(), 2u);
  auto same = transfer_partition(P, c8, c8);
  EXPECT_EQ(same.partition.cut, P.cut);
  EXPECT_EQ(same.L, 1);

  auto chords = c8;
  chords.add_edge(0, 2, 0u);
  chords.add_edge(4, 6, 0u);
  chords.set_degree_bound(3);
  auto t = transfer_partition(P, c8, chords);
  EXPECT_EQ(t.L, 2);
  EXPECT_EQ(t.d, 3u);
  EXPECT_EQ(t.bound, 288);
  EXPECT_EQ(t.partition.cut.size(), 2u);

  auto T = torus(8);
  std::vector<std::uint32_t> blocks(64);
  for (Vertex v = 0; v < 64; ++v) blocks[v] = (v % 8) / 4 + 2 * ((v / 8) / 4);
  auto TP = make_partition(SimpleGraph(T), blocks);
  auto diag = T;
  diag.add_label("c");
  for (Vertex v = 0; v < 64; ++v) diag.add_edge(v, static_cast<Vertex>((v % 8 + 1) % 8 + 8 * ((v / 8 + 1) % 8)), 2u);
  diag.set_degree_bound(6);
  auto tt = transfer_partition(TP, T, diag);
  // direct recount: simple edges of the chorded torus crossing blocks
  std::size_t recount = 0;
  for (auto [u, v] : simple_edges(diag)) recount += blocks[u] != blocks[v];
  EXPECT_EQ(tt.partition.cut.size(), recount);
  EXPECT_LE(static_cast<std::int64_t>(recount), tt.bound);
  EXPECT_EQ(tt.L, 2);
}
