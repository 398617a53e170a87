#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gsq/graph_io.hpp"

namespace gsq {

// One edit of a labeled multigraph. Deletions name the exact directed edge removed.
struct Move {
  bool add = false;
  Vertex u = 0, v = 0;
  std::uint32_t label = 0;

  friend bool operator==(const Move&, const Move&) = default;
};

using MoveLog = std::vector<Move>;

// Applies a move; deletions remove the first matching edge. Returns false if absent.
inline bool apply_move(LabeledMultigraph& g, const Move& m) {
  if (m.add) {
    g.add_edge(m.u, m.v, m.label);
    return true;
  }
  const auto& es = g.edges();
  for (std::size_t i = 0; i < es.size(); ++i)
    if (es[i].source == m.u && es[i].target == m.v && es[i].label == m.label) {
      g.remove_edge_at(i);
      return true;
    }
  return false;
}

// Applies and records; deletions of absent edges are construction bugs.
inline void log_move(LabeledMultigraph& g, MoveLog& log, const Move& m) {
  ensure(apply_move(g, m), "deleting an edge that is not present");
  log.push_back(m);
}

inline LabeledMultigraph replay(LabeledMultigraph g, const MoveLog& log) {
  for (const auto& m : log)
    require(apply_move(g, m), "replay", "move log deletes a missing edge " + std::to_string(m.u) + " " + std::to_string(m.v));
  return g;
}

inline void write_moves(std::ostream& out, const LabeledMultigraph& g, const MoveLog& log) {
  for (const auto& m : log) out << (m.add ? "add " : "del ") << m.u << ' ' << m.v << ' ' << g.labels()[m.label] << '\n';
}

inline MoveLog parse_moves(std::istream& in, const LabeledMultigraph& g, std::size_t first_line = 1) {
  MoveLog log;
  std::string line;
  std::size_t lineno = first_line - 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    auto t = detail::split_ws(line);
    if (t.size() != 4 || (t[0] != "add" && t[0] != "del")) throw ParseError(lineno, "expected 'add|del <u> <v> <label>'");
    Move m;
    m.add = t[0] == "add";
    m.u = static_cast<Vertex>(detail::parse_u64(t[1], lineno));
    m.v = static_cast<Vertex>(detail::parse_u64(t[2], lineno));
    try {
      m.label = g.label_index(t[3]);
    } catch (const Error&) {
      throw ParseError(lineno, "unknown label '" + t[3] + "'");
    }
    log.push_back(m);
  }
  return log;
}

}  // namespace gsq
