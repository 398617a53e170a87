#pragma once

#include <string>
#include <vector>

#include "gsq/graph_io.hpp"
#include "gsq/perm_action.hpp"

namespace gsq {

struct SchreierGenerators {
  std::vector<Word> generators;   // freely reduced, non-trivial
  std::vector<Word> transversal;  // Schreier transversal, one word per coset
};

// Reidemeister-Schreier for the stabilizer of point 0 in a transitive action of
// the free group on the action's labels. Generators are T(c) s T(c.s)^-1 for
// every non-tree edge of the BFS coset tree, reduced only by free reduction.
inline SchreierGenerators reidemeister_schreier(const PermAction& cosets) {
  const std::size_t m = cosets.degree();
  const std::size_t r = cosets.generator_count();
  require(m >= 1, "action", "coset table must have at least one coset");
  require(cosets.is_transitive(), "transitive", "coset action is not transitive");
  SchreierGenerators out;
  out.transversal.assign(m, {});
  std::vector<char> seen(m, 0);
  std::vector<Vertex> order{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    Vertex c = order[head];
    for (std::size_t s = 0; s < r; ++s)
      for (Letter l : {static_cast<Letter>(s + 1), -static_cast<Letter>(s + 1)}) {
        Vertex d = cosets.act(c, l);
        if (seen[d]) continue;
        seen[d] = 1;
        out.transversal[d] = out.transversal[c];
        out.transversal[d].push_back(l);
        order.push_back(d);
      }
  }
  for (Vertex c = 0; c < m; ++c)
    for (std::size_t s = 0; s < r; ++s) {
      auto l = static_cast<Letter>(s + 1);
      Word w = out.transversal[c];
      w.push_back(l);
      w = concat(w, inverse(out.transversal[cosets.act(c, l)]));
      if (!w.empty()) out.generators.push_back(std::move(w));
    }
  ensure(out.generators.size() == m * (r - 1) + 1,
         "Nielsen-Schreier count failed: got " + std::to_string(out.generators.size()) + " generators");
  return out;
}

// Ambient free group, a finite-index subgroup given by its coset action and,
// per tower level, the paired actions of the ambient group and of the subgroup.
struct SubgroupPair {
  std::vector<std::string> ambient_labels;
  std::vector<Word> subgroup_generators;
  std::vector<std::string> subgroup_labels;  // h1, h2, ...
  std::size_t index = 1;

  struct Level {
    PermAction gamma;           // on the orbit of (0,0) in tower x cosets
    PermAction lambda;          // subgroup generators on the base copy
    std::vector<Vertex> base;   // gamma points lying over coset 0; lambda point i is base[i]
    std::vector<Vertex> coset;  // coset coordinate of each gamma point
  };
  std::vector<Level> levels;
  GraphSequence gamma_sequence;
  GraphSequence lambda_sequence;
};

inline SubgroupPair subgroup_pair_sequence(std::size_t ambient_rank, const PermAction& cosets,
                                           const std::vector<PermAction>& tower) {
  require(cosets.generator_count() == ambient_rank, "ambient",
          "coset table has " + std::to_string(cosets.generator_count()) + " generators, ambient rank is " +
              std::to_string(ambient_rank));
  SubgroupPair pair;
  pair.ambient_labels = cosets.labels();
  pair.index = cosets.degree();
  auto rs = reidemeister_schreier(cosets);
  pair.subgroup_generators = rs.generators;
  for (std::size_t i = 0; i < rs.generators.size(); ++i) pair.subgroup_labels.push_back("h" + std::to_string(i + 1));
  pair.gamma_sequence.family = "pair_gamma";
  pair.lambda_sequence.family = "pair_lambda";

  const std::size_t m = pair.index;
  for (std::size_t k = 0; k < tower.size(); ++k) {
    const auto& t = tower[k];
    require(t.labels() == cosets.labels(), "ambient", "tower action labels differ from the coset table");
    // Orbit of (0,0) under the product action, numbered in BFS order.
    const std::size_t total = t.degree() * m;
    std::vector<Vertex> id(total, static_cast<Vertex>(-1));
    std::vector<std::size_t> order{0};
    id[0] = 0;
    auto act = [&](std::size_t point, Letter l) {
      auto tp = static_cast<Vertex>(point / m), cp = static_cast<Vertex>(point % m);
      return static_cast<std::size_t>(t.act(tp, l)) * m + cosets.act(cp, l);
    };
    for (std::size_t head = 0; head < order.size(); ++head)
      for (std::size_t s = 0; s < ambient_rank; ++s)
        for (Letter l : {static_cast<Letter>(s + 1), -static_cast<Letter>(s + 1)}) {
          auto q = act(order[head], l);
          if (id[q] != static_cast<Vertex>(-1)) continue;
          id[q] = static_cast<Vertex>(order.size());
          order.push_back(q);
        }
    SubgroupPair::Level level;
    std::vector<std::vector<Vertex>> perms(ambient_rank, std::vector<Vertex>(order.size()));
    level.coset.resize(order.size());
    std::vector<Vertex> base_index(order.size(), static_cast<Vertex>(-1));
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t s = 0; s < ambient_rank; ++s) perms[s][i] = id[act(order[i], static_cast<Letter>(s + 1))];
      level.coset[i] = static_cast<Vertex>(order[i] % m);
      if (level.coset[i] == 0) {
        base_index[i] = static_cast<Vertex>(level.base.size());
        level.base.push_back(static_cast<Vertex>(i));
      }
    }
    level.gamma = PermAction(cosets.labels(), perms);
    ensure(level.base.size() * m == order.size(), "base copy size times index differs from orbit size");
    std::vector<std::vector<Vertex>> hperms;
    for (const auto& w : pair.subgroup_generators) {
      std::vector<Vertex> p(level.base.size());
      for (std::size_t i = 0; i < level.base.size(); ++i) {
        Vertex img = level.gamma.act(level.base[i], w);
        ensure(base_index[img] != static_cast<Vertex>(-1), "subgroup generator left the base copy");
        p[i] = base_index[img];
      }
      hperms.push_back(std::move(p));
    }
    level.lambda = PermAction(pair.subgroup_labels, hperms);
    pair.gamma_sequence.push_back(schreier_graph(level.gamma, "pair_gamma_" + std::to_string(order.size())),
                                  static_cast<long>(k + 1));
    pair.lambda_sequence.push_back(
        schreier_graph(level.lambda, "pair_lambda_" + std::to_string(level.base.size())), static_cast<long>(k + 1));
    pair.levels.push_back(std::move(level));
  }
  return pair;
}

}  // namespace gsq
