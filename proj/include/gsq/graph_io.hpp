#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gsq/graph.hpp"

namespace gsq {

// Ordered finite truncation of a graph sequence.
struct GraphSequence {
  std::vector<LabeledMultigraph> graphs;
  std::vector<long> indices;
  std::string family;

  std::size_t size() const noexcept { return graphs.size(); }

  void push_back(LabeledMultigraph g, long index) {
    graphs.push_back(std::move(g));
    indices.push_back(index);
  }
};

// Vertex counts must be non-decreasing along the list.
inline void validate_sequence(const GraphSequence& seq) {
  require(seq.graphs.size() == seq.indices.size(), "sequence", "index/graph count mismatch");
  for (std::size_t i = 1; i < seq.graphs.size(); ++i)
    require(seq.graphs[i].vertex_count() >= seq.graphs[i - 1].vertex_count(), "monotone",
            "vertex counts decrease at position " + std::to_string(i));
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline bool skip_line(const std::string& line) {
  auto p = line.find_first_not_of(" \t\r");
  return p == std::string::npos || line[p] == '#';
}

inline std::uint64_t parse_u64(const std::string& s, std::size_t line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(line, "expected non-negative integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ParseError(line, "integer out of range '" + s + "'");
  }
}

// key=value lookup on header tokens.
inline std::string header_value(const std::vector<std::string>& toks, const std::string& key, std::size_t line) {
  for (const auto& t : toks)
    if (t.rfind(key + "=", 0) == 0) return t.substr(key.size() + 1);
  throw ParseError(line, "missing header field '" + key + "'");
}

}  // namespace detail

struct ParsedGraph {
  LabeledMultigraph graph;
  bool connected_required = false;
};

// Graph file:
//   graph <name> vertices=<n> degree_bound=<d> labels=<l1,l2,...> connected=<0|1>
//   e <u> <v> <label>
inline ParsedGraph parse_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  ParsedGraph out;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    auto toks = detail::split_ws(line);
    if (!have_header) {
      if (toks[0] != "graph" || toks.size() < 2) throw ParseError(lineno, "expected 'graph <name> ...' header");
      auto n = detail::parse_u64(detail::header_value(toks, "vertices", lineno), lineno);
      auto d = detail::parse_u64(detail::header_value(toks, "degree_bound", lineno), lineno);
      auto labels = detail::split(detail::header_value(toks, "labels", lineno), ',');
      for (const auto& l : labels)
        if (l.empty()) throw ParseError(lineno, "empty label in header");
      auto conn = detail::header_value(toks, "connected", lineno);
      if (conn != "0" && conn != "1") throw ParseError(lineno, "connected must be 0 or 1");
      if (d == 0) throw ParseError(lineno, "degree_bound must be positive");
      out.graph = LabeledMultigraph(toks[1], n, labels, d);
      out.connected_required = conn == "1";
      have_header = true;
      continue;
    }
    if (toks[0] != "e" || toks.size() != 4) throw ParseError(lineno, "expected 'e <u> <v> <label>'");
    auto u = detail::parse_u64(toks[1], lineno);
    auto v = detail::parse_u64(toks[2], lineno);
    if (u >= out.graph.vertex_count() || v >= out.graph.vertex_count())
      throw ParseError(lineno, "vertex id out of range (vertices=" + std::to_string(out.graph.vertex_count()) + ")");
    std::uint32_t label;
    try {
      label = out.graph.label_index(toks[3]);
    } catch (const Error&) {
      throw ParseError(lineno, "label '" + toks[3] + "' not declared in header");
    }
    out.graph.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v), label);
  }
  if (!have_header) throw ParseError(lineno, "missing graph header");
  return out;
}

// build_graph: parse, then check degree bound and (if the header demands it) connectivity.
inline LabeledMultigraph build_graph(const std::string& text) {
  std::istringstream in(text);
  auto parsed = parse_graph(in);
  validate_graph(parsed.graph, parsed.connected_required);
  return parsed.graph;
}

inline LabeledMultigraph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "io", "cannot open " + path.string());
  auto parsed = parse_graph(in);
  validate_graph(parsed.graph, parsed.connected_required);
  return parsed.graph;
}

inline void write_graph(std::ostream& out, const LabeledMultigraph& g) {
  const bool connected = is_connected(SimpleGraph(g));
  out << "graph " << g.name() << " vertices=" << g.vertex_count() << " degree_bound=" << g.degree_bound()
      << " labels=";
  for (std::size_t i = 0; i < g.labels().size(); ++i) out << (i ? "," : "") << g.labels()[i];
  out << " connected=" << (connected ? 1 : 0) << "\n";
  for (const auto& e : g.edges()) out << "e " << e.source << " " << e.target << " " << g.labels()[e.label] << "\n";
}

inline std::string graph_to_string(const LabeledMultigraph& g) {
  std::ostringstream out;
  write_graph(out, g);
  return out.str();
}

inline void write_graph_file(const std::filesystem::path& path, const LabeledMultigraph& g) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "io", "cannot write " + path.string());
  write_graph(out, g);
}

// Manifest: lines "<k> <path>", paths relative to the manifest's directory.
struct ManifestEntry {
  long index;
  std::filesystem::path path;
};

inline std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  require(static_cast<bool>(in), "io", "cannot open " + manifest.string());
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    auto toks = detail::split_ws(line);
    if (toks.size() != 2) throw ParseError(lineno, "expected '<k> <path>'");
    long k;
    try {
      std::size_t used = 0;
      k = std::stol(toks[0], &used);
      if (used != toks[0].size()) throw std::invalid_argument("k");
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad index '" + toks[0] + "'");
    }
    std::filesystem::path p = toks[1];
    if (p.is_relative()) p = manifest.parent_path() / p;
    out.push_back({k, p});
  }
  return out;
}

inline GraphSequence read_sequence(const std::filesystem::path& manifest) {
  GraphSequence seq;
  for (const auto& e : read_manifest(manifest)) seq.push_back(read_graph_file(e.path), e.index);
  if (!seq.graphs.empty()) seq.family = family_tag(seq.graphs.front()).family;
  validate_sequence(seq);
  return seq;
}

// Writes one graph file per entry plus `manifest.tsv`; returns the manifest path.
inline std::filesystem::path write_sequence(const std::filesystem::path& dir, const GraphSequence& seq,
                                            const std::string& stem = "graph") {
  std::filesystem::create_directories(dir);
  auto manifest = dir / "manifest.tsv";
  std::ofstream out(manifest);
  require(static_cast<bool>(out), "io", "cannot write " + manifest.string());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    auto name = stem + "_" + std::to_string(seq.indices[i]) + ".g";
    write_graph_file(dir / name, seq.graphs[i]);
    out << seq.indices[i] << " " << name << "\n";
  }
  return manifest;
}

}  // namespace gsq
