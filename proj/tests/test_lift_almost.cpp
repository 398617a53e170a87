#include <gtest/gtest.h>

#include "gsq/almost_a.hpp"
#include "gsq/hyperfinite.hpp"
#include "support.hpp"

using namespace gsq;
using namespace testing_support;

namespace {

GraphSequence family(const std::string& name, std::vector<std::size_t> sizes, std::uint64_t seed = 1) {
  FamilyParams p;
  p.family = name;
  p.sizes = std::move(sizes);
  p.seed = seed;
  return build_family(p).sequence;
}

// Torus with the a-edge leaving vertex 0 deleted.
LabeledMultigraph corrupted_torus(std::size_t n) {
  auto g = family("torus", {n}).graphs[0];
  const auto a = g.label_index("a");
  for (std::size_t i = 0; i < g.edges().size(); ++i)
    if (g.edges()[i].source == 0 && g.edges()[i].label == a) {
      g.remove_edge_at(i);
      break;
    }
  return g;
}

}  // namespace

TEST(Lift, TorusBlockLiftsToBox) {
  auto g = family("torus", {50}).graphs[0];
  auto P = hyperfinite_blocks(g, 10, Rational(2, 5));
  LiftOptions opt;
  opt.R = 10;
  auto oracle = GroupOracle::free_abelian(2);
  auto L = lift_partition_to_folner(g, P, oracle, opt);
  EXPECT_EQ(L.ratio, Rational(2, 5));
  EXPECT_EQ(L.folner.ratio, Rational(2, 5));
  EXPECT_EQ(L.folner.size(), 100u);
  EXPECT_EQ(L.bad_fraction, Rational(0));
  EXPECT_EQ(L.threshold, Rational(8, 5));
  // a translate of the 10x10 box
  std::set<int> xs, ys;
  for (const auto& z : L.folner.elements) xs.insert(z[0]), ys.insert(z[1]);
  EXPECT_EQ(xs.size(), 10u);
  EXPECT_EQ(ys.size(), 10u);
  EXPECT_EQ(*xs.rbegin() - *xs.begin(), 9);
}

TEST(Lift, CycleBlockLiftsToInterval) {
  auto g = family("cycle", {64}).graphs[0];
  auto P = hyperfinite_blocks(g, 8, Rational(1, 4));
  LiftOptions opt;
  opt.R = 4;
  auto L = lift_partition_to_folner(g, P, GroupOracle::free_abelian(1), opt);
  EXPECT_EQ(L.folner.ratio, Rational(1, 4));
  ASSERT_EQ(L.folner.size(), 8u);
  EXPECT_EQ(L.folner.elements.back()[0] - L.folner.elements.front()[0], 7);
}

TEST(Lift, BadFractionFails) {
  // C_6 has no Cayley 3-ball of Z at any vertex
  auto g = family("cycle", {6}).graphs[0];
  auto P = hyperfinite_blocks(g, 3, Rational(1, 2));
  LiftOptions opt;
  opt.R = 2;
  EXPECT_THROW(lift_partition_to_folner(g, P, GroupOracle::free_abelian(1), opt), Infeasible);
}

TEST(Lift, ThresholdFails) {
  auto g = family("cycle", {64}).graphs[0];
  auto P = hyperfinite_blocks(g, 8, Rational(1, 4));
  LiftOptions opt;
  opt.R = 4;
  opt.eps = Rational(1, 5);
  EXPECT_THROW(lift_partition_to_folner(g, P, GroupOracle::free_abelian(1), opt), Infeasible);
}

TEST(Lift, ExpanderHasNoPartition) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(i + 5, (i + 2) % 5 + 5);
  }
  auto petersen = from_pairs(10, e, 3);
  EXPECT_THROW(hyperfinite_exact(petersen, Rational(1, 5), 5), Infeasible);
}

TEST(Lift, ChartMatchesCoordinates) {
  auto g = family("torus", {12}).graphs[0];
  auto oracle = GroupOracle::free_abelian(2);
  auto iso = ball_isomorphism(g, oracle, 0, 3);
  EXPECT_EQ(iso.size(), 25u);
  for (const auto& [v, z] : iso) {
    int x = static_cast<int>(v % 12), y = static_cast<int>(v / 12);
    EXPECT_EQ((z[0] % 12 + 12) % 12, x);
    EXPECT_EQ((z[1] % 12 + 12) % 12, y);
  }
}

TEST(InducedSubgraph, KeepsInternalEdges) {
  auto g = family("cycle", {8}).graphs[0];
  auto h = induced_subgraph(g, {3, 1, 2, 6});
  EXPECT_EQ(h.graph.vertex_count(), 4u);
  EXPECT_EQ(h.graph.edge_count(), 2u);
  EXPECT_EQ(h.original, (std::vector<Vertex>{1, 2, 3, 6}));
}

TEST(AlmostA, PureTorusIsPushedWitness) {
  auto seq = family("torus", {16, 24});
  auto oracle = GroupOracle::free_abelian(2);
  auto F = folner_set(oracle, Rational(2));  // 3x3 box
  auto rep = almost_a_certify(seq, oracle, F);
  EXPECT_EQ(rep.folner_radius, 4u);
  EXPECT_TRUE(rep.undefined.empty());
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const auto& row = rep.rows[n];
    EXPECT_TRUE(row.removed.empty());
    EXPECT_EQ(row.branch, "folner");
    EXPECT_EQ(row.witness.epsilon, Rational(2, 3));
    auto fam = family_group(seq.graphs[n]);
    auto pushed = push_witness_to_schreier(fam.oracle, fam.action, F, seq.graphs[n].name());
    EXPECT_EQ(row.witness.xi, pushed.xi);
  }
}

TEST(AlmostA, CorruptedPatchVanishes) {
  GraphSequence seq;
  std::size_t i = 1;
  for (std::size_t n : {16, 24, 32, 48}) seq.push_back(corrupted_torus(n), static_cast<long>(i++));
  auto oracle = GroupOracle::free_abelian(2);
  auto F = folner_set(oracle, Rational(2));
  auto rep = almost_a_certify(seq, oracle, F);
  EXPECT_TRUE(rep.undefined.empty());
  std::optional<Rational> last;
  for (const auto& row : rep.rows) {
    EXPECT_FALSE(row.removed.empty());
    EXPECT_LE(row.witness.epsilon, Rational(2, 3));
    verify_witness(SimpleGraph(seq.graphs[static_cast<std::size_t>(row.index - 1)]), row.witness);
    if (row.s == rep.folner_radius) {
      EXPECT_EQ(row.branch, "folner");
      EXPECT_EQ(row.witness.epsilon, Rational(2, 3));
      if (last) EXPECT_LT(row.fraction, *last);
      last = row.fraction;
    }
  }
  ASSERT_TRUE(last.has_value());
  EXPECT_LT(rep.rows.back().fraction, rep.rows.front().fraction + Rational(1, 100));
}

TEST(AlmostA, UndefinedScheduleReported) {
  // torus_4 wraps inside the 2-ball of Z^2
  auto seq = family("torus", {4});
  auto oracle = GroupOracle::free_abelian(2);
  auto rep = almost_a_certify(seq, oracle, folner_set(oracle, Rational(2)), 2);
  EXPECT_EQ(rep.undefined, (std::vector<std::size_t>{2}));
}

TEST(Glue, RatiosAndLayout) {
  auto box = family("torus", {8, 32, 64});
  auto exp = family("random_schreier", {10, 10, 10}, 11);
  auto glued = glue_expander(box, exp);
  ASSERT_EQ(glued.rows.size(), 3u);
  EXPECT_EQ(glued.rows[0].ratio, Rational(10, 64));
  EXPECT_EQ(glued.rows[1].ratio, Rational(10, 1024));
  EXPECT_EQ(glued.rows[2].ratio, Rational(10, 4096));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& g = glued.sequence.graphs[i];
    EXPECT_EQ(g.vertex_count(), box.graphs[i].vertex_count() + 9);
    EXPECT_EQ(g.edge_count(), box.graphs[i].edge_count() + exp.graphs[i].edge_count());
    EXPECT_EQ(g.labels(), box.graphs[i].labels());
    auto side = expander_side(g, box.graphs[i].vertex_count());
    EXPECT_EQ(side.graph.edge_count(), exp.graphs[i].edge_count());
    auto a = cheeger_spectral_lower(SimpleGraph(side.graph)), b = cheeger_spectral_lower(SimpleGraph(exp.graphs[i]));
    EXPECT_NEAR(a.lambda2, b.lambda2, 1e-6);
  }
}

TEST(Glue, RatioUnattainable) {
  auto box = family("torus", {4, 4});
  auto exp = family("random_schreier", {10, 10}, 11);
  EXPECT_THROW(glue_expander(box, exp), Error);
}

TEST(Glue, SingleVertexExpander) {
  auto box = family("torus", {8});
  GraphSequence exp;
  exp.push_back(LabeledMultigraph("point", 1, {"a", "b"}, 4), 1);
  auto glued = glue_expander(box, exp);
  EXPECT_EQ(glued.sequence.graphs[0].vertex_count(), 64u);
  EXPECT_EQ(glued.sequence.graphs[0].edges(), box.graphs[0].edges());
}

TEST(Glue, LocalStatisticBound) {
  auto box = family("torus", {8, 32, 64});
  auto exp = family("random_schreier", {10, 10, 10}, 11);
  auto glued = glue_expander(box, exp);
  auto rep = bs_report(glued.sequence, GroupOracle::free_abelian(2), 2);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& row = rep.rows[i * 3 + 2];
    const auto V = static_cast<std::int64_t>(row.vertices);
    EXPECT_GE(row.p, Rational(1) - Rational(9 + 13, V));
  }
  // almost-A removes the whole expander side at radius 2
  auto oracle = GroupOracle::free_abelian(2);
  auto a = almost_a_certify(glued.sequence, oracle, folner_set(oracle, Rational(3)));  // 2x2 box, S = 2
  for (const auto& row : a.rows) {
    ASSERT_EQ(row.s, 2u);
    EXPECT_EQ(row.branch, "folner");
    EXPECT_LE(row.fraction, Rational(9 + 13, static_cast<std::int64_t>(row.vertices)));
    const auto N = row.vertices - 9;
    for (Vertex v = static_cast<Vertex>(N); v < row.vertices; ++v)
      EXPECT_TRUE(std::binary_search(row.removed.begin(), row.removed.end(), v));
  }
}
