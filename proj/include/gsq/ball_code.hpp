#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gsq/ball.hpp"
#include "gsq/invariants.hpp"

namespace gsq {

// Canonical string for a rooted labeled ball. Codes starting with 'R' come from
// the label-regular traversal, 'G' from exhaustive minimization.
struct BallCode {
  std::string bytes;
  Distance radius = 0;
  std::size_t vertex_count = 0;

  bool regular() const { return !bytes.empty() && bytes[0] == 'R'; }

  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (unsigned char c : bytes) {
      out += digits[c >> 4];
      out += digits[c & 15];
    }
    return out;
  }

  friend bool operator==(const BallCode& a, const BallCode& b) { return a.bytes == b.bytes; }
  friend bool operator<(const BallCode& a, const BallCode& b) { return a.bytes < b.bytes; }
};

namespace detail {

// Label indices ordered by label name, so codes do not depend on declaration order.
inline std::vector<std::uint32_t> labels_by_name(const LabeledMultigraph& g) {
  std::vector<std::uint32_t> order(g.labels().size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return g.labels()[x] < g.labels()[y]; });
  return order;
}

inline std::string label_header(const LabeledMultigraph& g, const std::vector<std::uint32_t>& order) {
  std::string h;
  for (auto l : order) h += g.labels()[l] + ",";
  return h;
}

}  // namespace detail

// At most one out-edge and one in-edge per label at every vertex.
inline bool is_label_regular(const LabeledMultigraph& g) {
  const std::size_t L = g.labels().size();
  std::vector<std::uint8_t> out(g.vertex_count() * L, 0), in(g.vertex_count() * L, 0);
  for (const auto& e : g.edges()) {
    if (++out[e.source * L + e.label] > 1) return false;
    if (++in[e.target * L + e.label] > 1) return false;
  }
  return true;
}

// Deterministic traversal: from the root, visit per label (by name) the out-neighbour
// then the in-neighbour. Each vertex record lists those neighbours by discovery number.
inline std::optional<BallCode> regular_ball_code(const RootedBall& b) {
  const auto& g = b.graph;
  if (!is_label_regular(g)) return std::nullopt;
  const std::size_t n = g.vertex_count(), L = g.labels().size();
  const Vertex none = static_cast<Vertex>(-1);
  std::vector<Vertex> out(n * L, none), in(n * L, none);
  for (const auto& e : g.edges()) {
    out[e.source * L + e.label] = e.target;
    in[e.target * L + e.label] = e.source;
  }
  auto order = detail::labels_by_name(g);
  std::vector<Vertex> number(n, none);
  std::vector<Vertex> visit{b.root};
  number[b.root] = 0;
  std::string code = "R" + std::to_string(b.radius) + "|" + detail::label_header(g, order) + "|";
  for (std::size_t head = 0; head < visit.size(); ++head) {
    Vertex v = visit[head];
    for (auto l : order)
      for (Vertex w : {out[v * L + l], in[v * L + l]}) {
        if (w == none) {
          code += "-,";
          continue;
        }
        if (number[w] == none) {
          number[w] = static_cast<Vertex>(visit.size());
          visit.push_back(w);
        }
        code += std::to_string(number[w]) + ",";
      }
    code += ";";
  }
  ensure(visit.size() == n, "ball is not connected through its labeled edges");
  return BallCode{std::move(code), b.radius, n};
}

// Exhaustive canonical form: minimum edge-list serialization over root-preserving
// relabelings that respect a cheap invariant partition.
inline BallCode general_ball_code(const RootedBall& b, std::size_t cap = default_caps().iso) {
  const auto& g = b.graph;
  const std::size_t n = g.vertex_count();
  require(n <= cap, "cap",
          "non-regular ball with " + std::to_string(n) + " vertices exceeds isomorphism cap " + std::to_string(cap));
  auto order = detail::labels_by_name(g);
  std::vector<std::uint32_t> rank(g.labels().size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<std::uint32_t>(i);

  SimpleGraph s(g);
  auto dist = bfs_distances(s, b.root);
  // Cell key: distance to root, then per-label out/in multiplicities and loops.
  std::vector<std::vector<std::uint32_t>> key(n, std::vector<std::uint32_t>(3 * order.size() + 1, 0));
  for (Vertex v = 0; v < n; ++v) key[v][0] = dist[v];
  for (const auto& e : g.edges()) {
    ++key[e.source][1 + 3 * rank[e.label]];
    ++key[e.target][2 + 3 * rank[e.label]];
    if (e.source == e.target) ++key[e.source][3 + 3 * rank[e.label]];
  }
  std::vector<Vertex> verts(n);
  std::iota(verts.begin(), verts.end(), 0u);
  std::stable_sort(verts.begin(), verts.end(), [&](Vertex x, Vertex y) { return key[x] < key[y]; });
  std::vector<std::pair<std::size_t, std::size_t>> cells;  // [begin, end) in verts
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && key[verts[j]] == key[verts[i]]) ++j;
    cells.emplace_back(i, j);
    std::sort(verts.begin() + static_cast<std::ptrdiff_t>(i), verts.begin() + static_cast<std::ptrdiff_t>(j));
    i = j;
  }

  using Triple = std::tuple<std::uint32_t, Vertex, Vertex>;
  std::vector<Triple> best;
  bool have = false;
  std::vector<Vertex> pos(n);
  std::vector<Triple> cur(g.edges().size());
  auto evaluate = [&] {
    for (std::size_t i = 0; i < n; ++i) pos[verts[i]] = static_cast<Vertex>(i);
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      const auto& e = g.edges()[i];
      cur[i] = {rank[e.label], pos[e.source], pos[e.target]};
    }
    std::sort(cur.begin(), cur.end());
    if (!have || cur < best) {
      best = cur;
      have = true;
    }
  };
  // Odometer over the permutations of every cell.
  auto recurse = [&](auto&& self, std::size_t c) -> void {
    if (c == cells.size()) {
      evaluate();
      return;
    }
    auto first = verts.begin() + static_cast<std::ptrdiff_t>(cells[c].first);
    auto last = verts.begin() + static_cast<std::ptrdiff_t>(cells[c].second);
    do self(self, c + 1);
    while (std::next_permutation(first, last));
  };
  recurse(recurse, 0);

  std::string code = "G" + std::to_string(b.radius) + "|" + detail::label_header(g, order) + "|" + std::to_string(n) + "|";
  for (auto [l, u, v] : best) code += std::to_string(l) + ":" + std::to_string(u) + ">" + std::to_string(v) + ",";
  for (std::size_t i = 0; i < n; ++i) code += std::to_string(key[verts[i]][0]) + ",";
  return BallCode{std::move(code), b.radius, n};
}

inline BallCode ball_code(const RootedBall& b, std::size_t cap = default_caps().iso) {
  if (auto c = regular_ball_code(b)) return *c;
  return general_ball_code(b, cap);
}

// Isomorphism test against a reference code. A ball whose type (regular or not)
// differs from the reference cannot match, so no exhaustive search is needed then.
inline bool ball_matches(const RootedBall& b, const BallCode& reference, std::size_t cap = default_caps().iso) {
  if (reference.regular()) {
    auto c = regular_ball_code(b);
    return c && *c == reference;
  }
  if (is_label_regular(b.graph) || b.graph.vertex_count() != reference.vertex_count) return false;
  return general_ball_code(b, cap) == reference;
}

}  // namespace gsq
