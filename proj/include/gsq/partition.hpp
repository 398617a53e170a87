#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "gsq/graph.hpp"
#include "gsq/rational.hpp"

namespace gsq {

// Vertex partition plus its cut edges (simple view). epsilon is the achieved
// |cut|/|V|; target, when present, is the epsilon the partition was built for.
struct PartitionCertificate {
  std::string graph;
  std::vector<std::uint32_t> block;  // block id per vertex, ids 0..block_count-1
  std::size_t block_count = 0;
  std::vector<std::pair<Vertex, Vertex>> cut;  // u < v, sorted
  Rational epsilon;
  std::optional<Rational> target;
  std::size_t K = 0;  // largest block

  std::vector<std::vector<Vertex>> blocks() const {
    std::vector<std::vector<Vertex>> out(block_count);
    for (Vertex v = 0; v < block.size(); ++v) out[block[v]].push_back(v);
    return out;
  }
};

// Renumbers block ids by first occurrence and derives cut, epsilon and K.
inline PartitionCertificate make_partition(const SimpleGraph& g, const std::vector<std::uint32_t>& block,
                                           std::string name = "") {
  require(block.size() == g.vertex_count(), "partition", "block array length differs from vertex count");
  require(g.vertex_count() > 0, "empty", "cannot partition an empty graph");
  PartitionCertificate p;
  p.graph = std::move(name);
  std::vector<std::uint32_t> renumber;
  std::vector<std::size_t> sizes;
  p.block.resize(block.size());
  for (Vertex v = 0; v < block.size(); ++v) {
    if (block[v] >= renumber.size()) renumber.resize(block[v] + 1, static_cast<std::uint32_t>(-1));
    auto& id = renumber[block[v]];
    if (id == static_cast<std::uint32_t>(-1)) {
      id = static_cast<std::uint32_t>(sizes.size());
      sizes.push_back(0);
    }
    p.block[v] = id;
    ++sizes[id];
  }
  p.block_count = sizes.size();
  p.K = *std::max_element(sizes.begin(), sizes.end());
  for (auto [u, v] : g.edges())
    if (p.block[u] != p.block[v]) p.cut.emplace_back(u, v);
  p.epsilon = Rational(static_cast<std::int64_t>(p.cut.size()), static_cast<std::int64_t>(g.vertex_count()));
  return p;
}

// Blocks = connected components after deleting the given simple edges.
inline PartitionCertificate partition_from_cut(const SimpleGraph& g, const std::vector<std::pair<Vertex, Vertex>>& cut,
                                               std::string name = "") {
  std::vector<std::pair<Vertex, Vertex>> keep;
  std::vector<std::pair<Vertex, Vertex>> removed;
  for (auto e : cut) removed.push_back(std::minmax(e.first, e.second));
  std::sort(removed.begin(), removed.end());
  for (auto e : g.edges())
    if (!std::binary_search(removed.begin(), removed.end(), e)) keep.push_back(e);
  auto comps = connected_components(SimpleGraph(g.vertex_count(), keep));
  return make_partition(g, comps.id, std::move(name));
}

// Recomputes everything stored in the certificate; throws on any drift.
inline void verify_partition(const SimpleGraph& g, const PartitionCertificate& p) {
  require(p.block.size() == g.vertex_count(), "certificate", "partition size differs from graph");
  auto fresh = make_partition(g, p.block);
  require(fresh.block == p.block && fresh.block_count == p.block_count, "certificate", "block ids not canonical");
  require(fresh.cut == p.cut, "certificate", "cut edge set differs from recomputation");
  require(fresh.epsilon == p.epsilon, "certificate", "epsilon differs from |cut|/|V|");
  require(fresh.K == p.K, "certificate", "K differs from the largest block");
  if (p.target) require(p.epsilon < *p.target, "certificate", "cut fraction not below target epsilon");
  // every component of G minus the cut lies in one block, hence has at most K vertices
  auto comps = partition_from_cut(g, p.cut);
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    for (Vertex w : g.neighbors(v))
      if (comps.block[v] == comps.block[w]) require(p.block[v] == p.block[w], "certificate", "component crosses blocks");
  require(comps.K <= p.K, "certificate", "component larger than K");
}

}  // namespace gsq
