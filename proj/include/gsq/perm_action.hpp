#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gsq/graph.hpp"
#include "gsq/graph_io.hpp"

namespace gsq {

// Letters of a free-group word: +(i+1) is generator i, -(i+1) its inverse.
using Letter = int;
using Word = std::vector<Letter>;

inline Word free_reduce(const Word& w) {
  Word out;
  for (Letter l : w) {
    if (!out.empty() && out.back() == -l) out.pop_back();
    else out.push_back(l);
  }
  return out;
}

inline Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) l = -l;
  return out;
}

inline Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return free_reduce(a);
}

// "a.b.a^-1"; the empty word prints as "1".
inline std::string word_to_string(const Word& w, const std::vector<std::string>& labels) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += '.';
    s += labels[static_cast<std::size_t>(std::abs(w[i]) - 1)];
    if (w[i] < 0) s += "^-1";
  }
  return s;
}

inline Word parse_word(const std::string& text, const std::vector<std::string>& labels) {
  Word w;
  if (text == "1") return w;
  for (auto tok : detail::split(text, '.')) {
    bool inv = false;
    if (tok.size() > 3 && tok.compare(tok.size() - 3, 3, "^-1") == 0) {
      inv = true;
      tok.resize(tok.size() - 3);
    }
    Letter l = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == tok) l = static_cast<Letter>(i + 1);
    require(l != 0, "label", "unknown generator '" + tok + "' in word '" + text + "'");
    w.push_back(inv ? -l : l);
  }
  return w;
}

// Right action of a free group on {0..degree-1}: one permutation per generator.
class PermAction {
 public:
  PermAction() = default;
  PermAction(std::vector<std::string> labels, std::vector<std::vector<Vertex>> perms)
      : labels_(std::move(labels)), perms_(std::move(perms)) {
    require(labels_.size() == perms_.size(), "action", "label/permutation count mismatch");
    degree_ = perms_.empty() ? 0 : perms_.front().size();
    inverses_.resize(perms_.size());
    for (std::size_t s = 0; s < perms_.size(); ++s) {
      require(perms_[s].size() == degree_, "action", "permutations of unequal degree");
      inverses_[s].assign(degree_, static_cast<Vertex>(-1));
      for (Vertex p = 0; p < degree_; ++p) {
        Vertex q = perms_[s][p];
        require(q < degree_, "bijection", "image " + std::to_string(q) + " out of range for '" + labels_[s] + "'");
        require(inverses_[s][q] == static_cast<Vertex>(-1), "bijection",
                "generator '" + labels_[s] + "' is not a bijection (point " + std::to_string(q) + " hit twice)");
        inverses_[s][q] = p;
      }
    }
  }

  std::size_t degree() const noexcept { return degree_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<Vertex>& permutation(std::size_t s) const { return perms_[s]; }
  std::size_t generator_count() const noexcept { return perms_.size(); }

  Vertex act(Vertex p, Letter l) const {
    auto s = static_cast<std::size_t>(std::abs(l) - 1);
    return l > 0 ? perms_[s][p] : inverses_[s][p];
  }

  Vertex act(Vertex p, const Word& w) const {
    for (Letter l : w) p = act(p, l);
    return p;
  }

  std::vector<Vertex> orbit(Vertex p) const {
    std::vector<char> seen(degree_, 0);
    std::vector<Vertex> order{p};
    seen[p] = 1;
    for (std::size_t head = 0; head < order.size(); ++head) {
      for (std::size_t s = 0; s < perms_.size(); ++s) {
        for (Letter l : {static_cast<Letter>(s + 1), -static_cast<Letter>(s + 1)}) {
          Vertex q = act(order[head], l);
          if (!seen[q]) {
            seen[q] = 1;
            order.push_back(q);
          }
        }
      }
    }
    return order;
  }

  bool is_transitive() const { return degree_ > 0 && orbit(0).size() == degree_; }

  // The permutation induced by a word, as a new generator.
  std::vector<Vertex> word_permutation(const Word& w) const {
    std::vector<Vertex> out(degree_);
    for (Vertex p = 0; p < degree_; ++p) out[p] = act(p, w);
    return out;
  }

 private:
  std::size_t degree_ = 0;
  std::vector<std::string> labels_;
  std::vector<std::vector<Vertex>> perms_;
  std::vector<std::vector<Vertex>> inverses_;
};

// One directed labeled edge x -> x.s per point and generator; loops kept.
inline LabeledMultigraph schreier_graph(const PermAction& action, const std::string& name = "schreier") {
  require(action.degree() >= 1, "degree", "action degree must be at least 1");
  LabeledMultigraph g(name, action.degree(), action.labels(), std::max<std::size_t>(1, 2 * action.generator_count()));
  for (std::size_t s = 0; s < action.generator_count(); ++s)
    for (Vertex p = 0; p < action.degree(); ++p) g.add_edge(p, action.permutation(s)[p], static_cast<std::uint32_t>(s));
  return g;
}

// Action file: "action degree=<n> labels=<...>" then "<label> <image of 0> <image of 1> ...".
inline PermAction parse_action(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t degree = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<Vertex>> perms;
  std::vector<char> seen;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    auto toks = detail::split_ws(line);
    if (!have_header) {
      if (toks[0] != "action") throw ParseError(lineno, "expected 'action degree=<n> labels=<...>'");
      degree = detail::parse_u64(detail::header_value(toks, "degree", lineno), lineno);
      labels = detail::split(detail::header_value(toks, "labels", lineno), ',');
      perms.assign(labels.size(), {});
      seen.assign(labels.size(), 0);
      have_header = true;
      continue;
    }
    std::size_t s = labels.size();
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == toks[0]) s = i;
    if (s == labels.size()) throw ParseError(lineno, "undeclared label '" + toks[0] + "'");
    if (seen[s]) throw ParseError(lineno, "duplicate permutation for '" + toks[0] + "'");
    if (toks.size() != degree + 1) throw ParseError(lineno, "expected " + std::to_string(degree) + " images");
    seen[s] = 1;
    for (std::size_t i = 1; i < toks.size(); ++i)
      perms[s].push_back(static_cast<Vertex>(detail::parse_u64(toks[i], lineno)));
  }
  if (!have_header) throw ParseError(lineno, "missing action header");
  for (std::size_t s = 0; s < labels.size(); ++s)
    if (!seen[s]) throw ParseError(lineno, "missing permutation for '" + labels[s] + "'");
  return PermAction(labels, perms);
}

inline PermAction read_action_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "io", "cannot open " + path.string());
  return parse_action(in);
}

inline void write_action(std::ostream& out, const PermAction& a) {
  out << "action degree=" << a.degree() << " labels=";
  for (std::size_t i = 0; i < a.labels().size(); ++i) out << (i ? "," : "") << a.labels()[i];
  out << "\n";
  for (std::size_t s = 0; s < a.generator_count(); ++s) {
    out << a.labels()[s];
    for (Vertex q : a.permutation(s)) out << " " << q;
    out << "\n";
  }
}

inline void write_action_file(const std::filesystem::path& path, const PermAction& a) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "io", "cannot write " + path.string());
  write_action(out, a);
}

// Generator symbols: "t" for rank one, then a, b, c, ...
inline std::vector<std::string> generator_labels(std::size_t rank) {
  if (rank == 1) return {"t"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < rank; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

}  // namespace gsq
