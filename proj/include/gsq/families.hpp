#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "gsq/graph_io.hpp"
#include "gsq/perm_action.hpp"

namespace gsq {

// Uniform integer in [0, n) from raw 64-bit output (rejection sampling), so
// fixtures do not depend on the standard library's distribution code.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    auto x = rng();
    if (x >= threshold) return x % n;
  }
}

inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

inline std::vector<Vertex> random_permutation(std::mt19937_64& rng, std::size_t n) {
  std::vector<Vertex> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<Vertex>(i);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[uniform_below(rng, i)]);
  return p;
}

inline bool is_prime(std::size_t p) {
  if (p < 2) return false;
  for (std::size_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline PermAction cycle_action(std::size_t n) {
  require(n >= 1, "param", "cycle size must be positive");
  std::vector<Vertex> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<Vertex>((i + 1) % n);
  return PermAction({"t"}, {t});
}

// Vertex x + n*y; a moves x, b moves y.
inline PermAction torus_action(std::size_t n) {
  require(n >= 1, "param", "torus size must be positive");
  std::vector<Vertex> a(n * n), b(n * n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      a[x + n * y] = static_cast<Vertex>((x + 1) % n + n * y);
      b[x + n * y] = static_cast<Vertex>(x + n * ((y + 1) % n));
    }
  return PermAction({"a", "b"}, {a, b});
}

// Right-regular action of SL(2,p) on itself with generators
// a = [[1,2],[0,1]] and b = [[1,0],[2,1]]; identity is point 0.
inline PermAction sl2_action(std::size_t p) {
  require(is_prime(p) && p >= 3, "prime", "sl2p needs an odd prime, got " + std::to_string(p));
  using Mat = std::array<std::int64_t, 4>;
  const auto P = static_cast<std::int64_t>(p);
  auto mul = [&](const Mat& x, const Mat& y) {
    return Mat{(x[0] * y[0] + x[1] * y[2]) % P, (x[0] * y[1] + x[1] * y[3]) % P, (x[2] * y[0] + x[3] * y[2]) % P,
               (x[2] * y[1] + x[3] * y[3]) % P};
  };
  auto key = [&](const Mat& m) { return ((m[0] * P + m[1]) * P + m[2]) * P + m[3]; };
  const std::array<Mat, 4> moves{Mat{1, 2, 0, 1}, Mat{1, 0, 2, 1}, Mat{1, P - 2, 0, 1}, Mat{1, 0, P - 2, 1}};
  std::vector<Mat> elems{Mat{1, 0, 0, 1}};
  std::unordered_map<std::int64_t, Vertex> id{{key(elems[0]), 0}};
  for (std::size_t head = 0; head < elems.size(); ++head)
    for (const auto& m : moves) {
      auto y = mul(elems[head], m);
      if (id.emplace(key(y), static_cast<Vertex>(elems.size())).second) elems.push_back(y);
    }
  ensure(elems.size() == p * (p * p - 1), "SL(2," + std::to_string(p) + ") enumeration has wrong order");
  std::vector<Vertex> a(elems.size()), b(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    a[i] = id.at(key(mul(elems[i], moves[0])));
    b[i] = id.at(key(mul(elems[i], moves[1])));
  }
  return PermAction({"a", "b"}, {a, b});
}

// r uniform random permutations of n points; stream `index` of the seed.
inline PermAction random_action(std::size_t n, std::size_t r, std::uint64_t seed, std::uint64_t index) {
  require(n >= 1 && r >= 1, "param", "random_schreier needs n >= 1 and r >= 1");
  auto rng = seeded_rng(seed, index);
  std::vector<std::vector<Vertex>> perms;
  for (std::size_t s = 0; s < r; ++s) perms.push_back(random_permutation(rng, n));
  return PermAction(generator_labels(r), perms);
}

struct FamilyParams {
  std::string family;              // cycle | torus | sl2p | random_schreier | box_tower
  std::vector<std::size_t> sizes;  // n_k, or p_k for sl2p
  std::size_t rank = 2;            // random_schreier generator count
  std::uint64_t seed = 1;
  std::vector<PermAction> tower;   // box_tower input
};

struct FamilyBuild {
  GraphSequence sequence;
  std::vector<PermAction> actions;  // the action each graph was built from
};

inline FamilyBuild build_family(const FamilyParams& params) {
  FamilyBuild out;
  out.sequence.family = params.family;
  const bool tower = params.family == "box_tower";
  const std::size_t count = tower ? params.tower.size() : params.sizes.size();
  require(count > 0, "param", "family needs at least one size");
  for (std::size_t i = 1; i < params.sizes.size(); ++i)
    require(params.sizes[i] >= params.sizes[i - 1], "monotone", "family sizes must be ascending");
  for (std::size_t k = 0; k < count; ++k) {
    PermAction action;
    std::string name;
    if (params.family == "cycle") {
      action = cycle_action(params.sizes[k]);
      name = "cycle_" + std::to_string(params.sizes[k]);
    } else if (params.family == "torus") {
      action = torus_action(params.sizes[k]);
      name = "torus_" + std::to_string(params.sizes[k]);
    } else if (params.family == "sl2p") {
      action = sl2_action(params.sizes[k]);
      name = "sl2p_" + std::to_string(params.sizes[k]);
    } else if (params.family == "random_schreier") {
      action = random_action(params.sizes[k], params.rank, params.seed, k);
      name = "random_schreier_" + std::to_string(params.sizes[k]);
    } else if (tower) {
      action = params.tower[k];
      if (k > 0)
        require(action.degree() >= params.tower[k - 1].degree(), "monotone", "tower degrees must be ascending");
      name = "box_tower_" + std::to_string(action.degree());
    } else {
      throw Error("family", "unknown family '" + params.family + "'");
    }
    out.sequence.push_back(schreier_graph(action, name), static_cast<long>(k + 1));
    out.actions.push_back(std::move(action));
  }
  return out;
}

}  // namespace gsq
