#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gsq/coarse.hpp"
#include "gsq/cost.hpp"
#include "gsq/folner.hpp"
#include "gsq/partition.hpp"
#include "gsq/witness.hpp"

// Certificate files are line-oriented text. The first line is
// `<kind> key=value ...`; referenced graphs and maps are stored next to the
// certificate and named by paths relative to it.

namespace gsq {

namespace cert {

namespace fs = std::filesystem;

inline std::map<std::string, std::string> header_fields(const std::vector<std::string>& toks, std::size_t line) {
  std::map<std::string, std::string> out;
  for (std::size_t i = 1; i < toks.size(); ++i) {
    auto eq = toks[i].find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key=value, got '" + toks[i] + "'");
    out[toks[i].substr(0, eq)] = toks[i].substr(eq + 1);
  }
  return out;
}

inline const std::string& field(const std::map<std::string, std::string>& f, const std::string& key) {
  auto it = f.find(key);
  if (it == f.end()) throw ParseError(1, "header lacks '" + key + "='");
  return it->second;
}

inline std::vector<std::vector<std::string>> read_lines(const fs::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "io", "cannot open " + path.string());
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::skip_line(line)) {
      out.emplace_back();
      continue;
    }
    out.push_back(detail::split_ws(line));
  }
  return out;
}

inline std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "io", "cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline fs::path resolve(const fs::path& cert, const std::string& rel) {
  fs::path p = rel;
  return p.is_relative() ? cert.parent_path() / p : p;
}

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  require(static_cast<bool>(out), "io", "cannot write " + path.string());
  out << text;
}

}  // namespace cert

// ---- partition ----

inline std::string partition_text(const PartitionCertificate& p, const std::string& graph_file) {
  std::ostringstream o;
  o << "partition graph=" << (p.graph.empty() ? "-" : p.graph) << " vertices=" << p.block.size()
    << " blocks=" << p.block_count << " K=" << p.K << " cut=" << p.cut.size() << " epsilon=" << to_string(p.epsilon);
  if (p.target) o << " target=" << to_string(*p.target);
  o << "\ngraph_file " << graph_file << "\n";
  for (Vertex v = 0; v < p.block.size(); ++v) o << "b " << v << " " << p.block[v] << "\n";
  for (auto [u, v] : p.cut) o << "c " << u << " " << v << "\n";
  return o.str();
}

inline void write_partition(const std::filesystem::path& path, const PartitionCertificate& p,
                            const std::string& graph_file) {
  cert::write_text(path, partition_text(p, graph_file));
}

struct LoadedPartition {
  PartitionCertificate cert;
  std::filesystem::path graph_file;
};

inline LoadedPartition read_partition(const std::filesystem::path& path) {
  auto lines = cert::read_lines(path);
  require(!lines.empty() && !lines[0].empty() && lines[0][0] == "partition", "parse", "not a partition certificate");
  auto f = cert::header_fields(lines[0], 1);
  LoadedPartition out;
  auto& p = out.cert;
  p.graph = cert::field(f, "graph");
  const auto n = detail::parse_u64(cert::field(f, "vertices"), 1);
  p.block_count = detail::parse_u64(cert::field(f, "blocks"), 1);
  p.K = detail::parse_u64(cert::field(f, "K"), 1);
  p.epsilon = parse_rational(cert::field(f, "epsilon"));
  if (f.count("target")) p.target = parse_rational(f.at("target"));
  p.block.assign(n, 0);
  std::vector<char> seen(n, 0);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& t = lines[i];
    if (t.empty()) continue;
    if (t[0] == "graph_file" && t.size() == 2) {
      out.graph_file = cert::resolve(path, t[1]);
    } else if (t[0] == "b" && t.size() == 3) {
      auto v = detail::parse_u64(t[1], i + 1);
      if (v >= n) throw ParseError(i + 1, "vertex out of range");
      p.block[v] = static_cast<std::uint32_t>(detail::parse_u64(t[2], i + 1));
      seen[v] = 1;
    } else if (t[0] == "c" && t.size() == 3) {
      p.cut.emplace_back(static_cast<Vertex>(detail::parse_u64(t[1], i + 1)),
                         static_cast<Vertex>(detail::parse_u64(t[2], i + 1)));
    } else {
      throw ParseError(i + 1, "unexpected line in partition certificate");
    }
  }
  require(std::all_of(seen.begin(), seen.end(), [](char c) { return c; }), "parse", "partition misses a vertex");
  require(!out.graph_file.empty(), "parse", "partition certificate has no graph_file");
  return out;
}

// ---- witness ----

inline std::string witness_text(const WitnessCertificate& w, const std::string& graph_file) {
  std::ostringstream o;
  o << "witness graph=" << (w.graph.empty() ? "-" : w.graph) << " vertices=" << w.xi.size() << " S=" << w.S
    << " epsilon=" << to_string(w.epsilon) << " alive=" << w.alive_count() << "\ngraph_file " << graph_file << "\n";
  if (!w.alive.empty()) {
    o << "dead";
    for (Vertex v = 0; v < w.alive.size(); ++v)
      if (!w.alive[v]) o << " " << v;
    o << "\n";
  }
  for (Vertex x = 0; x < w.xi.size(); ++x) {
    if (!w.is_alive(x)) continue;
    o << "xi " << x;
    for (const auto& [v, q] : w.xi[x]) o << " " << v << ":" << to_string(q);
    o << "\n";
  }
  return o.str();
}

inline void write_witness(const std::filesystem::path& path, const WitnessCertificate& w, const std::string& graph_file) {
  cert::write_text(path, witness_text(w, graph_file));
}

struct LoadedWitness {
  WitnessCertificate cert;
  std::filesystem::path graph_file;
};

inline LoadedWitness read_witness(const std::filesystem::path& path) {
  auto lines = cert::read_lines(path);
  require(!lines.empty() && !lines[0].empty() && lines[0][0] == "witness", "parse", "not a witness certificate");
  auto f = cert::header_fields(lines[0], 1);
  LoadedWitness out;
  auto& w = out.cert;
  w.graph = cert::field(f, "graph");
  const auto n = detail::parse_u64(cert::field(f, "vertices"), 1);
  w.S = static_cast<Distance>(detail::parse_u64(cert::field(f, "S"), 1));
  w.epsilon = parse_rational(cert::field(f, "epsilon"));
  w.xi.assign(n, {});
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& t = lines[i];
    if (t.empty()) continue;
    if (t[0] == "graph_file" && t.size() == 2) {
      out.graph_file = cert::resolve(path, t[1]);
    } else if (t[0] == "dead") {
      w.alive.assign(n, 1);
      for (std::size_t k = 1; k < t.size(); ++k) {
        auto v = detail::parse_u64(t[k], i + 1);
        if (v >= n) throw ParseError(i + 1, "vertex out of range");
        w.alive[v] = 0;
      }
    } else if (t[0] == "xi" && t.size() >= 2) {
      auto x = detail::parse_u64(t[1], i + 1);
      if (x >= n) throw ParseError(i + 1, "vertex out of range");
      for (std::size_t k = 2; k < t.size(); ++k) {
        auto colon = t[k].find(':');
        if (colon == std::string::npos) throw ParseError(i + 1, "expected <vertex>:<p/q>");
        auto v = detail::parse_u64(t[k].substr(0, colon), i + 1);
        if (v >= n) throw ParseError(i + 1, "vertex out of range");
        w.xi[x].emplace_back(static_cast<Vertex>(v), parse_rational(t[k].substr(colon + 1)));
      }
      require(std::is_sorted(w.xi[x].begin(), w.xi[x].end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; }),
              "parse", "xi entries must be sorted by vertex");
    } else {
      throw ParseError(i + 1, "unexpected line in witness certificate");
    }
  }
  require(!out.graph_file.empty(), "parse", "witness certificate has no graph_file");
  return out;
}

// ---- distortion ----

inline std::string distortion_text(const DistortionCertificate& c, const std::string& domain_file,
                                   const std::string& codomain_file, const std::string& map_file,
                                   std::int64_t bound) {
  std::ostringstream o;
  auto num = [](std::int64_t v) { return v == kUnbounded ? std::string("unbounded") : std::to_string(v); };
  o << "distortion kind=" << to_string(c.kind) << " bound=" << num(bound) << " constant=" << num(c.constant)
    << " pair_constant=" << num(c.pair_constant) << " worst=" << c.worst.x << "," << c.worst.y << " density_vertex="
    << c.density_vertex << " density_distance=" << c.density_distance << " exhaustive=" << (c.exhaustive ? 1 : 0)
    << "\ndomain_file " << domain_file << "\ncodomain_file " << codomain_file << "\nmap_file " << map_file << "\n";
  return o.str();
}

struct LoadedDistortion {
  MapKind kind;
  std::int64_t bound = 0, constant = 0, pair_constant = 0;
  Vertex density_vertex = 0;
  Distance density_distance = 0;
  bool exhaustive = true;
  std::filesystem::path domain, codomain, map;
};

inline LoadedDistortion read_distortion(const std::filesystem::path& path) {
  auto lines = cert::read_lines(path);
  require(!lines.empty() && !lines[0].empty() && lines[0][0] == "distortion", "parse", "not a distortion certificate");
  auto f = cert::header_fields(lines[0], 1);
  LoadedDistortion d;
  d.kind = parse_map_kind(cert::field(f, "kind"));
  auto as_int = [&](const std::string& k) {
    auto s = cert::field(f, k);
    return s == "unbounded" ? kUnbounded : detail::parse_int(s, s);
  };
  d.bound = as_int("bound");
  d.constant = as_int("constant");
  d.pair_constant = as_int("pair_constant");
  d.density_vertex = static_cast<Vertex>(detail::parse_u64(cert::field(f, "density_vertex"), 1));
  d.density_distance = static_cast<Distance>(detail::parse_u64(cert::field(f, "density_distance"), 1));
  d.exhaustive = cert::field(f, "exhaustive") == "1";
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& t = lines[i];
    if (t.empty()) continue;
    if (t.size() != 2) throw ParseError(i + 1, "expected '<key> <path>'");
    if (t[0] == "domain_file") d.domain = cert::resolve(path, t[1]);
    else if (t[0] == "codomain_file") d.codomain = cert::resolve(path, t[1]);
    else if (t[0] == "map_file") d.map = cert::resolve(path, t[1]);
    else throw ParseError(i + 1, "unexpected line in distortion certificate");
  }
  require(!d.domain.empty() && !d.codomain.empty() && !d.map.empty(), "parse", "distortion certificate misses a file");
  return d;
}

// ---- cost bound ----

inline std::string costbound_text(const CostRow& row, const std::string& method, std::int64_t L, std::int64_t bound,
                                  const std::string& input_file, const std::string& output_file,
                                  const std::string& moves_file) {
  std::ostringstream o;
  o << "costbound method=" << method << " L=" << L << " bound=" << bound << " index=" << row.index
    << " vertices=" << row.vertices << " edges_before=" << row.edges_before << " edges_after=" << row.edges_after
    << " ratio=" << to_string(row.ratio_after) << " measured=" << row.measured
    << " exhaustive=" << (row.exhaustive ? 1 : 0) << "\ninput_file " << input_file << "\noutput_file " << output_file
    << "\nmoves_file " << moves_file << "\n";
  return o.str();
}

struct LoadedCostBound {
  std::int64_t bound = 0, measured = 0;
  std::size_t edges_after = 0;
  Rational ratio;
  bool exhaustive = true;
  std::filesystem::path input, output, moves;
};

inline LoadedCostBound read_costbound(const std::filesystem::path& path) {
  auto lines = cert::read_lines(path);
  require(!lines.empty() && !lines[0].empty() && lines[0][0] == "costbound", "parse", "not a costbound certificate");
  auto f = cert::header_fields(lines[0], 1);
  LoadedCostBound c;
  c.bound = detail::parse_int(cert::field(f, "bound"), "bound");
  c.measured = detail::parse_int(cert::field(f, "measured"), "measured");
  c.edges_after = detail::parse_u64(cert::field(f, "edges_after"), 1);
  c.ratio = parse_rational(cert::field(f, "ratio"));
  c.exhaustive = cert::field(f, "exhaustive") == "1";
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& t = lines[i];
    if (t.empty()) continue;
    if (t.size() != 2) throw ParseError(i + 1, "expected '<key> <path>'");
    if (t[0] == "input_file") c.input = cert::resolve(path, t[1]);
    else if (t[0] == "output_file") c.output = cert::resolve(path, t[1]);
    else if (t[0] == "moves_file") c.moves = cert::resolve(path, t[1]);
    else throw ParseError(i + 1, "unexpected line in costbound certificate");
  }
  require(!c.input.empty() && !c.output.empty() && !c.moves.empty(), "parse", "costbound certificate misses a file");
  return c;
}

// ---- verify ----

struct VerifyResult {
  std::string kind;
  std::string summary;
};

// Dispatches on the first token of the file and recomputes every stored value.
inline VerifyResult verify_certificate(const std::filesystem::path& path) {
  auto lines = cert::read_lines(path);
  require(!lines.empty() && !lines[0].empty(), "parse", "empty certificate " + path.string());
  const auto kind = lines[0][0];
  VerifyResult r{kind, ""};
  if (kind == "partition") {
    auto p = read_partition(path);
    auto g = read_graph_file(p.graph_file);
    verify_partition(SimpleGraph(g), p.cert);
    r.summary = "K=" + std::to_string(p.cert.K) + " epsilon=" + to_string(p.cert.epsilon);
  } else if (kind == "witness") {
    auto w = read_witness(path);
    auto g = read_graph_file(w.graph_file);
    require(w.cert.xi.size() == g.vertex_count(), "certificate", "witness size differs from graph");
    verify_witness(SimpleGraph(g), w.cert);
    r.summary = "S=" + std::to_string(w.cert.S) + " epsilon=" + to_string(w.cert.epsilon);
  } else if (kind == "distortion") {
    auto d = read_distortion(path);
    auto dom = read_graph_file(d.domain), cod = read_graph_file(d.codomain);
    std::ifstream mf(d.map);
    require(static_cast<bool>(mf), "io", "cannot open " + d.map.string());
    auto image = parse_map(mf);
    require(d.exhaustive, "certificate", "only exhaustive distortion certificates re-verify");
    auto fresh = measure_distortion(dom, cod, image, d.kind);
    require(fresh.constant == d.constant && fresh.pair_constant == d.pair_constant &&
                fresh.density_distance == d.density_distance && fresh.density_vertex == d.density_vertex,
            "certificate", "recomputed distortion differs from the certificate");
    require(fresh.constant <= d.bound, "certificate", "measured constant exceeds the certified bound");
    r.summary = to_string(d.kind) + " constant=" + std::to_string(fresh.constant);
  } else if (kind == "costbound") {
    auto c = read_costbound(path);
    auto in = read_graph_file(c.input);
    std::ifstream mf(c.moves);
    require(static_cast<bool>(mf), "io", "cannot open " + c.moves.string());
    auto log = parse_moves(mf, in);
    auto replayed = replay(in, log);
    require(graph_to_string(replayed) == cert::slurp(c.output), "certificate", "move log does not replay to output");
    require(replayed.edge_count() == c.edges_after, "certificate", "edge count differs");
    require(Rational(static_cast<std::int64_t>(c.edges_after), static_cast<std::int64_t>(in.vertex_count())) == c.ratio,
            "certificate", "ratio differs");
    auto fresh = verify_identity(in, replayed, c.bound);
    require(fresh.constant == c.measured && fresh.exhaustive == c.exhaustive, "certificate",
            "recomputed bi-Lipschitz constant differs");
    r.summary = "ratio=" + to_string(c.ratio) + " measured=" + std::to_string(c.measured);
  } else {
    throw Error("parse", "unknown certificate kind '" + kind + "'");
  }
  return r;
}

}  // namespace gsq
