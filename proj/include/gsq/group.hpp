#pragma once

#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "gsq/ball.hpp"
#include "gsq/invariants.hpp"
#include "gsq/perm_action.hpp"

namespace gsq {

enum class GroupKind { free_abelian, free, permutation };

// Free-abelian elements are coordinate vectors, free-group elements reduced
// words, permutation-group elements image tuples.
using GroupElement = std::vector<int>;

// Generating set plus exact ball generator for the Cayley graph of a built-in group.
class GroupOracle {
 public:
  static GroupOracle free_abelian(std::size_t d) {
    require(d >= 1, "group", "free abelian rank must be positive");
    return GroupOracle(GroupKind::free_abelian, d, generator_labels(d), {});
  }

  static GroupOracle free_group(std::size_t r) {
    require(r >= 1, "group", "free rank must be positive");
    return GroupOracle(GroupKind::free, r, generator_labels(r), {});
  }

  // The finite group generated by the permutations of `action`.
  static GroupOracle permutation_group(PermAction action) {
    auto labels = action.labels();
    auto r = labels.size();
    return GroupOracle(GroupKind::permutation, r, std::move(labels), std::move(action));
  }

  GroupKind kind() const noexcept { return kind_; }
  std::size_t rank() const noexcept { return rank_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::string describe() const {
    switch (kind_) {
      case GroupKind::free_abelian: return "free_abelian(" + std::to_string(rank_) + ")";
      case GroupKind::free: return "free(" + std::to_string(rank_) + ")";
      case GroupKind::permutation: return "permutation(degree=" + std::to_string(action_.degree()) + ")";
    }
    return "?";
  }

  GroupElement identity() const {
    switch (kind_) {
      case GroupKind::free_abelian: return GroupElement(rank_, 0);
      case GroupKind::free: return {};
      case GroupKind::permutation: {
        GroupElement id(action_.degree());
        for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
        return id;
      }
    }
    return {};
  }

  // x . s^{+-1} for the letter l.
  GroupElement multiply(const GroupElement& x, Letter l) const {
    const auto s = static_cast<std::size_t>(std::abs(l) - 1);
    require(s < rank_, "group", "generator out of range");
    switch (kind_) {
      case GroupKind::free_abelian: {
        auto y = x;
        y[s] += l > 0 ? 1 : -1;
        return y;
      }
      case GroupKind::free: {
        auto y = x;
        if (!y.empty() && y.back() == -l) y.pop_back();
        else y.push_back(l);
        return y;
      }
      case GroupKind::permutation: {
        GroupElement y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = static_cast<int>(action_.act(static_cast<Vertex>(x[i]), l));
        return y;
      }
    }
    return x;
  }

  GroupElement multiply(GroupElement x, const Word& w) const {
    for (Letter l : w) x = multiply(x, l);
    return x;
  }

  // A word representing the element (free abelian and free groups only).
  Word word_of(const GroupElement& x) const {
    switch (kind_) {
      case GroupKind::free_abelian: {
        Word w;
        for (std::size_t i = 0; i < x.size(); ++i)
          for (int k = 0; k < std::abs(x[i]); ++k) w.push_back(x[i] > 0 ? static_cast<Letter>(i + 1) : -static_cast<Letter>(i + 1));
        return w;
      }
      case GroupKind::free: return x;
      case GroupKind::permutation: break;
    }
    throw Error("group", "word_of unsupported for permutation groups");
  }

  std::size_t word_length(const GroupElement& x) const {
    switch (kind_) {
      case GroupKind::free_abelian: {
        std::size_t n = 0;
        for (int c : x) n += static_cast<std::size_t>(std::abs(c));
        return n;
      }
      case GroupKind::free: return x.size();
      case GroupKind::permutation: break;
    }
    throw Error("group", "word_length unsupported for permutation groups");
  }

  struct Ball {
    RootedBall rooted;
    std::vector<GroupElement> elements;  // local id -> element
  };

  // Exact rooted labeled r-ball at the identity (induced subgraph).
  Ball cayley_ball(Distance r, std::size_t cap = default_caps().ball) const {
    std::map<GroupElement, Vertex> index;
    std::vector<GroupElement> elements{identity()};
    std::vector<Distance> depth{0};
    index.emplace(elements[0], 0);
    for (std::size_t head = 0; head < elements.size(); ++head) {
      if (depth[head] == r) continue;
      for (std::size_t s = 0; s < rank_; ++s) {
        for (Letter l : {static_cast<Letter>(s + 1), -static_cast<Letter>(s + 1)}) {
          auto y = multiply(elements[head], l);
          if (index.count(y)) continue;
          require(elements.size() < cap, "cap", "Cayley ball exceeds cap " + std::to_string(cap));
          index.emplace(y, static_cast<Vertex>(elements.size()));
          elements.push_back(std::move(y));
          depth.push_back(depth[head] + 1);
        }
      }
    }
    Ball b;
    b.rooted.graph = LabeledMultigraph("cayley_" + describe(), elements.size(), labels_, 2 * rank_);
    b.rooted.root = 0;
    b.rooted.radius = r;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      b.rooted.original.push_back(static_cast<Vertex>(i));
      for (std::size_t s = 0; s < rank_; ++s) {
        auto it = index.find(multiply(elements[i], static_cast<Letter>(s + 1)));
        if (it != index.end()) b.rooted.graph.add_edge(static_cast<Vertex>(i), it->second, static_cast<std::uint32_t>(s));
      }
    }
    b.elements = std::move(elements);
    return b;
  }

 private:
  GroupOracle(GroupKind kind, std::size_t rank, std::vector<std::string> labels, PermAction action)
      : kind_(kind), rank_(rank), labels_(std::move(labels)), action_(std::move(action)) {}

  GroupKind kind_;
  std::size_t rank_;
  std::vector<std::string> labels_;
  PermAction action_;
};

inline RootedBall cayley_ball(const GroupOracle& oracle, Distance r) { return oracle.cayley_ball(r).rooted; }

// "free2", "free3", "z1", "z2" (also "free_abelian2").
inline GroupOracle parse_group(const std::string& spec) {
  auto rank_of = [&](const std::string& prefix) -> std::size_t {
    auto tail = spec.substr(prefix.size());
    require(!tail.empty() && tail.find_first_not_of("0123456789") == std::string::npos, "group",
            "malformed group '" + spec + "'");
    return std::stoul(tail);
  };
  if (spec.rfind("free_abelian", 0) == 0) return GroupOracle::free_abelian(rank_of("free_abelian"));
  if (spec.rfind("free", 0) == 0) return GroupOracle::free_group(rank_of("free"));
  if (spec.rfind("z", 0) == 0) return GroupOracle::free_abelian(rank_of("z"));
  throw Error("group", "unknown group '" + spec + "' (expected freeN or zN)");
}

}  // namespace gsq
