#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsq/bs_stats.hpp"
#include "gsq/folner.hpp"
#include "gsq/partition.hpp"

namespace gsq {

struct LiftOptions {
  Distance R = 1;
  std::optional<Rational> eps;  // default: eps_factor * partition target
  Rational eps_factor{4};
  Rational bad_limit{1, 2};
};

struct LiftResult {
  FolnerSet folner;  // group side
  std::uint32_t block = 0;
  Vertex root = 0;
  Rational ratio;            // graph-side |dA|/|A| of the chosen block
  Rational threshold;        // the lifted set must have ratio below this
  Rational averaging_bound;  // 2|cut| / |V \ V^{2R}|
  Rational bad_fraction;     // |V^{2R}| / |V|
  std::size_t nice_blocks = 0;
};

// Graph label i (by name order) is matched with oracle generator i (by name order).
inline std::vector<Letter> label_to_generator(const LabeledMultigraph& g, const GroupOracle& oracle) {
  require(g.labels().size() == oracle.rank(), "rank",
          "graph has " + std::to_string(g.labels().size()) + " labels, group rank is " + std::to_string(oracle.rank()));
  auto by_name = [](const std::vector<std::string>& names) {
    std::vector<std::size_t> idx(names.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });
    return idx;
  };
  auto gi = by_name(g.labels()), oi = by_name(oracle.labels());
  std::vector<Letter> out(g.labels().size());
  for (std::size_t k = 0; k < gi.size(); ++k) out[gi[k]] = static_cast<Letter>(oi[k] + 1);
  return out;
}

// Reads group elements off the labeled edges around a root: the vertex at the
// end of a word w from `root` gets w. Asserts the labeling is consistent on
// the ball, which holds whenever the ball is good.
class CayleyChart {
 public:
  CayleyChart(const LabeledMultigraph& g, const GroupOracle& oracle)
      : g_(g), oracle_(oracle), gen_(label_to_generator(g, oracle)), adj_(g) {}

  std::map<Vertex, GroupElement> operator()(Vertex root, Distance R) const {
    require(root < g_.vertex_count(), "range", "vertex " + std::to_string(root) + " out of range");
    std::map<Vertex, GroupElement> elem{{root, oracle_.identity()}};
    std::map<Vertex, Distance> depth{{root, 0}};
    std::deque<Vertex> queue{root};
    while (!queue.empty()) {
      Vertex u = queue.front();
      queue.pop_front();
      if (depth.at(u) == R) continue;
      auto visit = [&](Vertex v, Letter l) {
        if (elem.count(v)) return;
        elem.emplace(v, oracle_.multiply(elem.at(u), l));
        depth.emplace(v, depth.at(u) + 1);
        queue.push_back(v);
      };
      for (auto ei : adj_.out(u)) visit(g_.edges()[ei].target, gen_[g_.edges()[ei].label]);
      for (auto ei : adj_.in(u)) visit(g_.edges()[ei].source, -gen_[g_.edges()[ei].label]);
    }
    for (const auto& [u, x] : elem)
      for (auto ei : adj_.out(u)) {
        const auto& e = g_.edges()[ei];
        auto b = elem.find(e.target);
        if (b == elem.end()) continue;
        ensure(oracle_.multiply(x, gen_[e.label]) == b->second,
               "ball around vertex " + std::to_string(root) + " is not labeled like the Cayley ball");
      }
    return elem;
  }

 private:
  const LabeledMultigraph& g_;
  const GroupOracle& oracle_;
  std::vector<Letter> gen_;
  LabeledAdjacency adj_;
};

inline std::map<Vertex, GroupElement> ball_isomorphism(const LabeledMultigraph& g, const GroupOracle& oracle, Vertex root,
                                                       Distance R) {
  return CayleyChart(g, oracle)(root, R);
}

// Finds a particularly nice block (every vertex has a Cayley R-ball and the
// block fits in the R-ball of one member) with the smallest boundary ratio,
// and lifts it to the group.
inline LiftResult lift_partition_to_folner(const LabeledMultigraph& g, const PartitionCertificate& P,
                                           const GroupOracle& oracle, const LiftOptions& opt) {
  SimpleGraph s(g);
  verify_partition(s, P);
  const auto n = static_cast<std::int64_t>(g.vertex_count());
  LiftResult out;
  if (opt.eps) {
    out.threshold = *opt.eps;
  } else {
    require(P.target.has_value(), "param", "partition has no target epsilon; pass eps explicitly");
    out.threshold = opt.eps_factor * *P.target;
  }

  const auto bad_far = bad_vertex_set(g, oracle, 2 * opt.R);
  out.bad_fraction = Rational(static_cast<std::int64_t>(bad_far.size()), n);
  if (!(out.bad_fraction < opt.bad_limit))
    throw Infeasible("bad-vertex fraction " + to_string(out.bad_fraction) + " at radius " + std::to_string(2 * opt.R) +
                     " is not below " + to_string(opt.bad_limit));
  out.averaging_bound = Rational(2 * static_cast<std::int64_t>(P.cut.size()), n - static_cast<std::int64_t>(bad_far.size()));

  std::vector<char> nice(g.vertex_count(), 1);
  for (Vertex v : bad_vertex_set(g, oracle, opt.R)) nice[v] = 0;
  std::optional<std::uint32_t> best;
  Rational best_ratio;
  Vertex best_root = 0;
  const auto blocks = P.blocks();
  for (std::uint32_t b = 0; b < blocks.size(); ++b) {
    const auto& A = blocks[b];
    if (!std::all_of(A.begin(), A.end(), [&](Vertex v) { return nice[v]; })) continue;
    // member of smallest eccentricity within the block
    std::optional<Vertex> root;
    Distance root_ecc = kInfinity;
    for (Vertex a : A) {
      auto d = bfs_distances(s, a, opt.R);
      Distance ecc = 0;
      for (Vertex v : A) ecc = std::max(ecc, d[v]);
      if (ecc < root_ecc) root_ecc = ecc, root = a;
    }
    if (!root || root_ecc > opt.R) continue;
    ++out.nice_blocks;
    const Rational ratio(static_cast<std::int64_t>(edge_boundary(s, indicator(s.vertex_count(), A))),
                         static_cast<std::int64_t>(A.size()));
    if (!best || ratio < best_ratio) best = b, best_ratio = ratio, best_root = *root;
  }
  if (!best) throw Infeasible("no particularly nice block at radius " + std::to_string(opt.R));
  out.block = *best;
  out.ratio = best_ratio;
  out.root = best_root;
  if (!(best_ratio < out.threshold))
    throw Infeasible("best particularly nice block has ratio " + to_string(best_ratio) + ", not below " +
                     to_string(out.threshold));

  auto iso = ball_isomorphism(g, oracle, best_root, opt.R);
  std::vector<GroupElement> lifted;
  for (Vertex v : blocks[*best]) lifted.push_back(iso.at(v));
  out.folner = group_folner(oracle, std::move(lifted));
  ensure(out.folner.size() == blocks[*best].size(), "lift is not injective on the block");
  ensure(out.folner.ratio == best_ratio, "lifted boundary ratio " + to_string(out.folner.ratio) +
                                            " differs from the block ratio " + to_string(best_ratio));
  return out;
}

}  // namespace gsq
