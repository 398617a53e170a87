// Acceptance criteria 1-10. Usage: gsq_acceptance <n>; prints one PASS/FAIL line.
#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "gsq/gsq.hpp"
#include "support.hpp"

using namespace gsq;
using namespace testing_support;

namespace {

struct Check {
  int id;
  std::string title;
  double budget_s;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  bool ok = true;
  std::vector<std::string> failed;

  void operator()(bool cond, const std::string& what) {
    std::cout << "  " << (cond ? "ok   " : "FAIL ") << what << "\n";
    if (!cond) {
      ok = false;
      failed.push_back(what);
    }
  }

  int finish() {
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fs < %.0fs", t, budget_s);
    (*this)(t < budget_s, std::string("runtime ") + buf);
    std::cout << "AC" << id << " " << (ok ? "PASS" : "FAIL") << " " << title;
    if (!ok) {
      std::cout << " [";
      for (std::size_t i = 0; i < failed.size(); ++i) std::cout << (i ? "; " : "") << failed[i];
      std::cout << "]";
    }
    std::cout << std::endl;
    return ok ? 0 : 1;
  }
};

std::string q(const Rational& r) { return to_string(r); }

GraphSequence family(const std::string& name, std::vector<std::size_t> sizes, std::uint64_t seed = 1) {
  FamilyParams p;
  p.family = name;
  p.sizes = std::move(sizes);
  p.seed = seed;
  return build_family(p).sequence;
}

// Multi-source BFS over every edge of g.
std::vector<unsigned> depth_to(const LabeledMultigraph& g, const std::vector<Vertex>& base) {
  auto d = floyd(g);
  std::vector<unsigned> out(g.vertex_count(), kInf);
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    for (Vertex b : base) out[v] = std::min(out[v], d[v][b]);
  return out;
}

// Removing the base copy leaves trees, each attached by exactly one edge, of depth <= index.
bool pendant_trees(const LabeledMultigraph& out, const std::vector<Vertex>& base, std::size_t index) {
  const auto n = out.vertex_count();
  auto simple = simple_edges(out);
  std::vector<char> in_base(n, 0);
  for (Vertex b : base) in_base[b] = 1;
  std::vector<Vertex> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  std::function<Vertex(Vertex)> find = [&](Vertex v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (auto [u, v] : simple)
    if (!in_base[u] && !in_base[v]) parent[find(u)] = find(v);
  std::map<Vertex, std::size_t> vertices, inner, attach;
  for (Vertex v = 0; v < n; ++v)
    if (!in_base[v]) ++vertices[find(v)];
  for (auto [u, v] : simple) {
    if (!in_base[u] && !in_base[v]) ++inner[find(u)];
    else if (in_base[u] != in_base[v]) ++attach[find(in_base[u] ? v : u)];
  }
  for (const auto& [root, size] : vertices)
    if (inner[root] != size - 1 || attach[root] != 1) return false;
  for (auto d : depth_to(out, base))
    if (d > index) return false;
  return true;
}

// Second-smallest eigenvalue of the normalized Laplacian by a dense solver.
double lambda2_dense(const SimpleGraph& g) {
  const auto n = g.vertex_count();
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (auto [u, v] : g.edges()) {
    const double w = 1.0 / std::sqrt(static_cast<double>(g.degree(u) * g.degree(v)));
    L(u, v) -= w;
    L(v, u) -= w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  return es.eigenvalues()[1];
}

int ac1() {
  Check c{1, "free-group edge number and large girth (sl2p 5,7,11,13)", 60};
  auto seq = family("sl2p", {5, 7, 11, 13});
  auto t = edge_number_table(seq, EdgeMode::multi);
  bool two = true;
  for (const auto& r : t.rows) two = two && r.ratio == Rational(2);
  c(two, "multi-mode edge number exactly 2 at every index");
  std::vector<Distance> g;
  for (const auto& G : seq.graphs) g.push_back(girth(SimpleGraph(G)));
  std::ostringstream gs;
  for (auto x : g) gs << x << " ";
  c(g == std::vector<Distance>{5, 6, 9, 10}, "girths 5 6 9 10 (got " + gs.str() + ")");
  c(std::is_sorted(g.begin(), g.end()) && std::adjacent_find(g.begin(), g.end()) == g.end(), "girth strictly increasing");
  auto ci = cost_interval(seq, true);
  c(ci.lower == Rational(2) && ci.upper == Rational(2), "cost interval [" + q(ci.lower) + ", " + q(ci.upper) + "] = [2, 2]");
  return c.finish();
}

int ac2() {
  Check c{2, "multiplicativity m(e_Gamma - 1) = e_Lambda - 1 up to 2500 cosets", 10};
  const std::vector<std::size_t> sizes{100, 200, 400, 800, 1250};
  for (std::size_t r : {2u, 3u}) {
    std::vector<std::vector<Vertex>> coset_perms{{1, 0}};
    for (std::size_t s = 1; s < r; ++s) coset_perms.push_back({0, 1});
    PermAction cosets(generator_labels(r), coset_perms);
    std::vector<PermAction> tower;
    for (std::size_t k = 0; k < sizes.size(); ++k) tower.push_back(random_action(sizes[k], r, 7, k));
    auto pair = subgroup_pair_sequence(r, cosets, tower);
    auto rep = multiplicativity_check(pair, EdgeMode::multi);
    const auto lam_rank = static_cast<std::int64_t>(2 * (r - 1) + 1);
    bool exact = rep.all_hold, ranks = pair.subgroup_generators.size() == static_cast<std::size_t>(lam_rank);
    std::size_t largest = 0;
    for (const auto& row : rep.rows) {
      exact = exact && row.lhs == row.rhs && row.e_gamma == Rational(static_cast<std::int64_t>(r)) &&
              row.e_lambda == Rational(lam_rank) && row.gamma_vertices == 2 * row.lambda_vertices;
      largest = std::max(largest, row.gamma_vertices);
    }
    const auto tag = "F_" + std::to_string(r) + " index 2";
    c(ranks, tag + ": subgroup rank " + std::to_string(pair.subgroup_generators.size()) + " = " + std::to_string(lam_rank));
    c(exact, tag + ": identity exact at all " + std::to_string(rep.rows.size()) + " indices");
    c(largest <= 2500 && largest > 1250, tag + ": largest quotient " + std::to_string(largest) + " cosets");
  }
  return c.finish();
}

int ac3() {
  Check c{3, "base-copy reduction preserves depth and leaves pendant trees", 5};
  std::vector<Vertex> a{1, 2, 3, 4, 5, 6, 7, 0}, b{1, 0, 2, 3, 4, 5, 6, 7};
  struct Case {
    std::string name;
    SubgroupPair pair;
  };
  std::vector<Case> cases{
      {"Z/8", subgroup_pair_sequence(1, PermAction({"t"}, {{1, 0}}), {cycle_action(8)})},
      {"F_2 16 cosets", subgroup_pair_sequence(2, PermAction({"a", "b"}, {{1, 0}, {0, 1}}),
                                               {PermAction({"a", "b"}, {a, b})})}};
  for (const auto& cs : cases) {
    auto r = base_copy_reduction(cs.pair, 0, 64);
    c(r.input.vertex_count() == (cs.name == "Z/8" ? 8u : 16u), cs.name + ": " + std::to_string(r.input.vertex_count()) + " vertices");
    c(depth_to(r.input, r.base) == depth_to(r.output, r.base), cs.name + ": distance to base copy unchanged (exhaustive)");
    c(pendant_trees(r.output, r.base, r.index), cs.name + ": base copy plus pendant trees of depth <= " + std::to_string(r.index));
    if (cs.name == "Z/8") c(r.output.edge_count() == 8, "Z/8: h-square plus four pendants");
  }
  return c.finish();
}

int ac4() {
  Check c{4, "torus 16x16 thinning 3/2, 5/4, 9/8; greedy matches or beats", 120};
  auto g = family("torus", {16}).graphs[0];
  const std::vector<std::pair<std::int64_t, Rational>> want{{2, Rational(3, 2)}, {4, Rational(5, 4)}, {8, Rational(9, 8)}};
  for (const auto& [L, ratio] : want) {
    auto t = torus_thinning(g, L);
    const auto l = "L=" + std::to_string(L);
    c(t.ratio_after == ratio, l + ": torus thinning ratio " + q(t.ratio_after) + " = " + q(ratio));
    c(t.exhaustive && t.measured <= L + 2,
      l + ": exhaustive bi-Lipschitz certificate, constant " + std::to_string(t.measured) + " <= " + std::to_string(L + 2));
    auto gr = greedy_thin(g, L);
    c(gr.exhaustive && gr.measured <= L, l + ": greedy certificate exhaustive, constant " + std::to_string(gr.measured));
    c(gr.ratio_after <= t.ratio_after, l + ": greedy_thin(" + std::to_string(L) + ") ratio " + q(gr.ratio_after) +
                                           " <= " + q(t.ratio_after));
    // Same certified constant on both sides, for reference.
    auto eq = greedy_thin(g, t.measured);
    std::cout << "  info " << l << ": greedy at the thinning's certified constant " << t.measured << " gives "
              << q(eq.ratio_after) << (eq.ratio_after <= t.ratio_after ? " (<= " : " (> ") << q(t.ratio_after) << ")\n";
  }
  return c.finish();
}

int ac5() {
  Check c{5, "hyperfiniteness: exact vs oracle, blocks on torus 64 and C_100", 120};
  bool match = true;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto G = random_connected(4 + seed % 7, 1 + seed % 6, 1000 + seed);
    for (auto eps : {Rational(1, 5), Rational(2, 5)}) {
      auto p = hyperfinite_exact(G, eps);
      verify_partition(SimpleGraph(G), p);
      if (p.K != min_k_oracle(G, eps) || !(p.epsilon < eps)) {
        match = false;
        std::cout << "  mismatch seed " << seed << " eps " << q(eps) << "\n";
      }
    }
  }
  c(match, "50 random graphs (<= 10 vertices): optimal K equals the cut-subset oracle for eps 1/5 and 2/5");
  auto t64 = family("torus", {64}).graphs[0];
  auto bt = hyperfinite_blocks(t64, 11);
  verify_partition(SimpleGraph(t64), bt);
  c(bt.epsilon == Rational(2, 11), "torus 64 blocks(11): cut fraction " + q(bt.epsilon) + " = 2/11");
  c(bt.epsilon < Rational(1, 5), "torus 64 blocks(11): cut fraction " + q(bt.epsilon) + " < 1/5");
  c(bt.K == 121, "torus 64 blocks(11): K = " + std::to_string(bt.K));
  auto c100 = family("cycle", {100}).graphs[0];
  auto bc = hyperfinite_blocks(c100, 6);
  verify_partition(SimpleGraph(c100), bc);
  c(bc.epsilon == Rational(17, 100) && bc.epsilon < Rational(1, 5), "C_100 blocks(6): cut fraction " + q(bc.epsilon) + " = 17/100 < 1/5");
  c(bc.K == 6, "C_100 blocks(6): K = " + std::to_string(bc.K));
  return c.finish();
}

int ac6() {
  Check c{6, "pushed witness on torus 50 and rerouting trials", 60};
  auto g = family("torus", {50}).graphs[0];
  SimpleGraph s(g);
  auto w = family_box_witness(g, 10);
  bool norms = true;
  for (const auto& v : w.xi) norms = norms && l1_norm(v) == Rational(1) && v.size() == 100;
  c(norms, "every vector has norm exactly 1 on 100 points");
  Rational worst(0);
  for (auto [u, v] : s.edges()) worst = std::max(worst, l1_distance(w.xi[u], w.xi[v]));
  c(worst == Rational(1, 5) && w.epsilon == Rational(1, 5), "edge variation " + q(worst) + " = 1/5");

  bool preserved = true, monotone = true, clean = true;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto rng = seeded_rng(seed, 61);
    std::vector<Vertex> removed;
    for (std::size_t k = 0, m = 1 + uniform_below(rng, 40); k < m; ++k)
      removed.push_back(static_cast<Vertex>(uniform_below(rng, g.vertex_count())));
    auto r = reroute_witness(s, w, removed);
    std::vector<char> dead(g.vertex_count(), 0);
    for (Vertex v : removed) dead[v] = 1;
    for (Vertex x = 0; x < g.vertex_count(); ++x) {
      if (dead[x]) continue;
      preserved = preserved && l1_norm(r.xi[x]) == l1_norm(w.xi[x]);
      for (const auto& [z, _] : r.xi[x]) clean = clean && !dead[z];
    }
    for (auto [u, v] : s.edges())
      if (!dead[u] && !dead[v]) monotone = monotone && l1_distance(r.xi[u], r.xi[v]) <= l1_distance(w.xi[u], w.xi[v]);
  }
  c(preserved, "100 seeded removals: every surviving norm unchanged");
  c(monotone, "100 seeded removals: no edge variation increases");
  c(clean, "100 seeded removals: no mass left on removed vertices");
  return c.finish();
}

int ac7() {
  Check c{7, "peeling: C_100 and torus 20 with built-in witnesses", 60};
  struct Case {
    std::string name;
    LabeledMultigraph g;
    std::size_t box;
    Rational eps;
  };
  std::vector<Case> cases{{"C_100", family("cycle", {100}).graphs[0], 20, Rational(1, 5)},
                          {"torus 20", family("torus", {20}).graphs[0], 10, Rational(4, 5)}};
  for (const auto& cs : cases) {
    auto w = family_box_witness(cs.g, cs.box);
    auto p = peel_partition(cs.g, w, cs.eps);
    verify_partition(SimpleGraph(cs.g), p.partition);
    std::size_t ball = 0;
    SimpleGraph s(cs.g);
    for (Vertex x = 0; x < cs.g.vertex_count(); ++x) {
      auto d = bfs_distances(s, x);
      ball = std::max<std::size_t>(ball, std::count_if(d.begin(), d.end(), [&](Distance t) { return t <= w.S; }));
    }
    c(p.partition.epsilon < cs.eps, cs.name + ": cut fraction " + q(p.partition.epsilon) + " < " + q(cs.eps) + " after " +
                                        std::to_string(p.rounds) + " rounds");
    c(p.partition.K <= ball, cs.name + ": K = " + std::to_string(p.partition.K) + " <= max |B(x, S)| = " + std::to_string(ball));
  }
  return c.finish();
}

int ac8() {
  Check c{8, "Folner set from a near-invariant function vs level-set oracle", 30};
  bool strict = true, agree = true;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto G = random_connected(10 + seed % 41, 2 + seed % 15, 500 + seed);
    SimpleGraph s(G);
    auto rng = seeded_rng(seed, 81);
    const auto center = static_cast<Vertex>(uniform_below(rng, G.vertex_count()));
    const auto R = static_cast<std::int64_t>(2 + uniform_below(rng, 5));
    auto dist = bfs_distances(s, center);
    std::vector<std::int64_t> weight(G.vertex_count(), 0);
    std::int64_t total = 0;
    for (Vertex v = 0; v < G.vertex_count(); ++v)
      if (static_cast<std::int64_t>(dist[v]) < R) total += weight[v] = (R - dist[v]) * (1 + uniform_below(rng, 3));
    SparseVector phi;
    for (Vertex v = 0; v < G.vertex_count(); ++v)
      if (weight[v]) phi.emplace_back(v, Rational(weight[v], total));
    const auto eps = edge_variation(s, phi) + Rational(1, 100);
    auto F = folner_from_function(s, phi, eps);
    strict = strict && Rational(static_cast<std::int64_t>(F.boundary)) < eps * static_cast<std::int64_t>(F.size());
    agree = agree && F.vertices == level_set_oracle(G, phi, eps);
  }
  c(strict, "100 seeded functions: |dF| < eps |F| strictly");
  c(agree, "100 seeded functions: set equals the exhaustive level-set oracle");
  return c.finish();
}

int ac9() {
  Check c{9, "glued expander/torus sequence", 60};
  // Fixture: lambda_2 / 2 of random_schreier(n, 2, seed 11) for n = 16, 32, 64, pinned to 4 decimals (rounded down).
  const std::vector<double> fixture{0.1511, 0.0888, 0.0894};
  auto box = family("torus", {8, 16, 32, 64, 128});
  auto exp = family("random_schreier", {16, 32, 64}, 11);
  auto glued = glue_expander(box, exp);
  bool ratios = true;
  for (const auto& row : glued.rows) ratios = ratios && row.ratio < Rational(1, row.index);
  c(ratios && glued.rows.size() == 3, "size ratio below 1/n at all 3 indices");
  auto rep = bs_report(glued.sequence, GroupOracle::free_abelian(2), 2);
  bool local = true;
  for (std::size_t i = 0; i < glued.rows.size(); ++i) {
    const auto& row = rep.rows[i * 3 + 2];
    const auto M = static_cast<std::int64_t>(glued.rows[i].expander_vertices);
    const auto bound = Rational(1) - Rational(M - 1 + 13, static_cast<std::int64_t>(row.vertices));
    std::cout << "  info index " << row.index << ": p_2 = " << q(row.p) << " >= " << q(bound) << "\n";
    local = local && row.p >= bound;
  }
  c(local, "p_2 >= 1 - (M - 1 + 13)/|V| exactly at every index");
  bool spectral = true, dense = true;
  for (std::size_t i = 0; i < glued.rows.size(); ++i) {
    auto side = expander_side(glued.sequence.graphs[i], glued.rows[i].box_vertices);
    SimpleGraph s(side.graph);
    auto sp = cheeger_spectral_lower(s);
    const double d2 = lambda2_dense(s) / 2;
    std::printf("  info index %zu: expander side spectral lower %.6f (dense %.6f, fixture %.4f)\n", i + 1,
                sp.lower_bound, d2, fixture[i]);
    spectral = spectral && sp.lower_bound >= fixture[i];
    dense = dense && std::abs(sp.lower_bound - d2) < 1e-6;
  }
  c(spectral, "expander-side spectral lower bound >= seed-11 fixture");
  c(dense, "iterative bound agrees with a dense eigensolver to 1e-6");
  return c.finish();
}

int ac10() {
  Check c{10, "coarse machinery: C_8 -> C_4 doubling and partition transfer", 10};
  auto c8 = family("cycle", {8}).graphs[0], c4 = family("cycle", {4}).graphs[0];
  std::vector<Vertex> f(8);
  for (Vertex v = 0; v < 8; ++v) f[v] = v % 4;
  auto inj = injectivize(c8, c4, f);
  c(inj.h_prime.vertex_count() == 8, "H' has " + std::to_string(inj.h_prime.vertex_count()) + " vertices");
  std::set<Vertex> img(inj.image.begin(), inj.image.end());
  c(img.size() == 8, "f' is injective");
  auto push = pushforward_graph(c8, inj.image, inj.h_prime);
  const std::int64_t A = measure_distortion(c8, inj.h_prime, inj.image, MapKind::quasi_isometry).constant;
  const std::int64_t R = push.R;
  const std::int64_t formula = std::max({A * (2 * R + 1) + A * A + 2, A * (R + 1) + A * A + 1, A + A * A});
  const auto measured = bilipschitz_constant(inj.h_prime, push.h_second);
  c(measured <= formula, "H'' is " + std::to_string(measured) + "-bi-Lipschitz to H', formula bound " + std::to_string(formula));

  auto chords = c8;
  chords.add_edge(0, 2, 0u);
  chords.add_edge(4, 6, 0u);
  chords.set_degree_bound(3);
  auto P = make_partition(SimpleGraph(c8), {0, 0, 0, 0, 1, 1, 1, 1});
  auto t = transfer_partition(P, c8, chords);
  const auto L = bilipschitz_constant(c8, chords);
  const std::int64_t d = 3;
  std::int64_t sum = 0, power = 1;
  for (std::int64_t i = 1; i <= L; ++i) sum += power *= d;
  const auto bound = static_cast<std::int64_t>(P.cut.size()) * sum * sum;
  c(static_cast<std::int64_t>(t.partition.cut.size()) <= bound,
    "C_8 + chords: transferred cut " + std::to_string(t.partition.cut.size()) + " <= |cut| (sum d^i)^2 = " +
        std::to_string(bound));
  return c.finish();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gsq_acceptance <criterion 1-10>\n";
    return 2;
  }
  const int n = std::atoi(argv[1]);
  try {
    switch (n) {
      case 1: return ac1();
      case 2: return ac2();
      case 3: return ac3();
      case 4: return ac4();
      case 5: return ac5();
      case 6: return ac6();
      case 7: return ac7();
      case 8: return ac8();
      case 9: return ac9();
      case 10: return ac10();
      default: std::cerr << "unknown criterion " << n << "\n"; return 2;
    }
  } catch (const Error& e) {
    std::cout << "AC" << n << " FAIL error: " << e.reason() << ": " << e.what() << std::endl;
    return 1;
  }
}
