#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "gsq/families.hpp"
#include "gsq/moves.hpp"
#include "gsq/parallel.hpp"
#include "gsq/partition.hpp"

namespace gsq {

enum class MapKind { quasi_isometry, bilipschitz };

inline std::string to_string(MapKind k) { return k == MapKind::bilipschitz ? "bilipschitz" : "quasi_isometry"; }

inline MapKind parse_map_kind(const std::string& s) {
  if (s == "bilipschitz") return MapKind::bilipschitz;
  if (s == "quasi_isometry" || s == "qi") return MapKind::quasi_isometry;
  throw Error("kind", "unknown map kind '" + s + "'");
}

inline constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

struct PairWitness {
  Vertex x = 0, y = 0;
  Distance d_domain = 0, d_codomain = 0;
};

// Minimal integer constant of a vertex map, with the pair that forces it and
// the codomain vertex farthest from the image.
struct DistortionCertificate {
  MapKind kind = MapKind::bilipschitz;
  std::int64_t constant = 1;
  PairWitness worst;
  std::int64_t pair_constant = 1;
  Vertex density_vertex = 0;
  Distance density_distance = 0;
  bool exhaustive = true;
};

namespace detail {

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// Smallest A >= 1 with d/A - A <= d' <= A d + A.
inline std::int64_t qi_required(std::int64_t d, std::int64_t dp) {
  std::int64_t a = std::max<std::int64_t>(1, ceil_div(dp, d + 1));
  while (a * (dp + a) < d) ++a;
  return a;
}

// Smallest L >= 1 with d/L <= d' <= L d (x != y).
inline std::int64_t bilipschitz_required(std::int64_t d, std::int64_t dp) {
  if (dp == 0) return kUnbounded;
  return std::max<std::int64_t>({1, ceil_div(dp, d), ceil_div(d, dp)});
}

}  // namespace detail

// Exhaustive over all pairs when `sources` is empty, otherwise over pairs with
// one endpoint in `sources` (sampled verification for large graphs).
inline DistortionCertificate measure_distortion(const LabeledMultigraph& domain, const LabeledMultigraph& codomain,
                                                const std::vector<Vertex>& image, MapKind kind,
                                                std::vector<Vertex> sources = {}) {
  require(image.size() == domain.vertex_count(), "map", "image array length differs from domain size");
  for (Vertex v : image) require(v < codomain.vertex_count(), "map", "image vertex out of range");
  SimpleGraph dom(domain), cod(codomain);
  require(is_connected(dom) && is_connected(cod), "disconnected", "distortion needs connected graphs");
  DistortionCertificate c;
  c.kind = kind;
  c.exhaustive = sources.empty();
  if (sources.empty()) {
    sources.resize(domain.vertex_count());
    for (Vertex v = 0; v < sources.size(); ++v) sources[v] = v;
  }
  struct Slot {
    std::int64_t req = 0;
    PairWitness w;
  };
  std::vector<Slot> slots(sources.size());
  parallel_for(sources.size(), [&](std::size_t i) {
    Vertex x = sources[i];
    auto dd = bfs_distances(dom, x);
    auto dc = bfs_distances(cod, image[x]);
    Slot s;
    for (Vertex y = 0; y < domain.vertex_count(); ++y) {
      if (y == x || (c.exhaustive && y < x)) continue;
      auto d = static_cast<std::int64_t>(dd[y]), dp = static_cast<std::int64_t>(dc[image[y]]);
      auto req = kind == MapKind::bilipschitz ? detail::bilipschitz_required(d, dp) : detail::qi_required(d, dp);
      if (req > s.req) s = {req, {std::min(x, y), std::max(x, y), dd[y], dc[image[y]]}};
    }
    slots[i] = s;
  });
  c.pair_constant = 1;
  for (const auto& s : slots)
    if (s.req > c.pair_constant) {
      c.pair_constant = s.req;
      c.worst = s.w;
    }
  auto to_image = bfs_from_set(cod, image);
  for (Vertex v = 0; v < cod.vertex_count(); ++v)
    if (to_image[v] > c.density_distance) {
      c.density_distance = to_image[v];
      c.density_vertex = v;
    }
  c.constant = c.pair_constant;
  if (kind == MapKind::quasi_isometry) {
    c.constant = std::max<std::int64_t>(c.constant, c.density_distance);
  } else if (c.density_distance > 0 || domain.vertex_count() != codomain.vertex_count()) {
    c.constant = kUnbounded;  // a bi-Lipschitz map must be a bijection
  }
  return c;
}

inline DistortionCertificate verify_map(const LabeledMultigraph& domain, const LabeledMultigraph& codomain,
                                        const std::vector<Vertex>& image, MapKind kind, std::int64_t bound) {
  auto c = measure_distortion(domain, codomain, image, kind);
  if (c.constant <= bound) return c;
  if (c.pair_constant > bound)
    throw Error("violation", to_string(kind) + " bound " + std::to_string(bound) + " fails at pair (" +
                                 std::to_string(c.worst.x) + "," + std::to_string(c.worst.y) + "): d_domain=" +
                                 std::to_string(c.worst.d_domain) + " d_codomain=" + std::to_string(c.worst.d_codomain));
  throw Error("violation", to_string(kind) + " bound " + std::to_string(bound) + " fails density: codomain vertex " +
                               std::to_string(c.density_vertex) + " at distance " + std::to_string(c.density_distance) +
                               " from the image");
}

inline std::vector<Vertex> identity_map(std::size_t n) {
  std::vector<Vertex> id(n);
  for (Vertex v = 0; v < n; ++v) id[v] = v;
  return id;
}

// Identity-map bi-Lipschitz constant between two graphs on the same vertex set.
inline std::int64_t bilipschitz_constant(const LabeledMultigraph& a, const LabeledMultigraph& b) {
  require(a.vertex_count() == b.vertex_count(), "map", "graphs have different vertex sets");
  return measure_distortion(a, b, identity_map(a.vertex_count()), MapKind::bilipschitz).constant;
}

// VertexMap file: "map <n>" then one image id per line.
inline std::vector<Vertex> parse_map(std::istream& in) {
  std::string line;
  std::size_t lineno = 0, n = 0;
  bool header = false;
  std::vector<Vertex> image;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    auto t = detail::split_ws(line);
    if (!header) {
      if (t.size() != 2 || t[0] != "map") throw ParseError(lineno, "expected 'map <n>'");
      n = detail::parse_u64(t[1], lineno);
      header = true;
      continue;
    }
    if (t.size() != 1) throw ParseError(lineno, "expected one image id");
    image.push_back(static_cast<Vertex>(detail::parse_u64(t[0], lineno)));
  }
  if (!header) throw ParseError(lineno, "missing map header");
  if (image.size() != n) throw ParseError(lineno, "expected " + std::to_string(n) + " image ids");
  return image;
}

inline void write_map(std::ostream& out, const std::vector<Vertex>& image) {
  out << "map " << image.size() << "\n";
  for (Vertex v : image) out << v << "\n";
}

struct Terminal {
  Vertex terminal = 0;
  Vertex base = 0;
  friend bool operator==(const Terminal&, const Terminal&) = default;
};

struct StripResult {
  LabeledMultigraph graph;
  std::vector<Terminal> terminals;  // ids of the input graph
  std::vector<Vertex> kept;         // new id -> input id
};

// One pass: removes every degree-1 vertex of the simple view.
inline StripResult strip_terminals(const LabeledMultigraph& g) {
  SimpleGraph s(g);
  StripResult r;
  std::vector<char> terminal(g.vertex_count(), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (s.degree(v) == 1) {
      terminal[v] = 1;
      r.terminals.push_back({v, s.neighbors(v)[0]});
    }
  std::vector<Vertex> renumber(g.vertex_count(), static_cast<Vertex>(-1));
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (!terminal[v]) {
      renumber[v] = static_cast<Vertex>(r.kept.size());
      r.kept.push_back(v);
    }
  require(!r.kept.empty(), "empty", "stripping terminals leaves no vertices");
  for (const auto& t : r.terminals)
    require(!terminal[t.base], "degenerate", "terminal " + std::to_string(t.terminal) + " hangs on terminal " +
                                                 std::to_string(t.base));
  r.graph = LabeledMultigraph(g.name() + "_core", r.kept.size(), g.labels(), g.degree_bound());
  for (const auto& e : g.edges())
    if (!terminal[e.source] && !terminal[e.target]) r.graph.add_edge(renumber[e.source], renumber[e.target], e.label);
  return r;
}

struct NormalizeResult {
  LabeledMultigraph graph;
  MoveLog log;
  std::size_t type1_rounds = 0;
  std::size_t type3a_terminals = 0;
  std::size_t type3b_terminals = 0;
  std::int64_t reference_L = 1;  // identity reference -> input
  std::int64_t bound = 1;        // composed bound for input -> output
  DistortionCertificate certificate;
};

// Rewires h (bi-Lipschitz to `reference` by the identity) so that the only edges
// touching terminals of `reference` are (terminal, base).
inline NormalizeResult normalize_terminal_edges(const LabeledMultigraph& reference, const LabeledMultigraph& h,
                                                const std::vector<Terminal>& terminals) {
  const std::size_t n = h.vertex_count();
  require(reference.vertex_count() == n, "map", "reference and input have different vertex sets");
  SimpleGraph ref(reference);
  std::vector<char> is_term(n, 0);
  std::vector<Vertex> base(n, static_cast<Vertex>(-1));
  for (const auto& t : terminals) {
    require(t.terminal < n && t.base < n, "range", "terminal out of range");
    require(ref.degree(t.terminal) == 1 && ref.neighbors(t.terminal)[0] == t.base, "terminal",
            "vertex " + std::to_string(t.terminal) + " is not a terminal on base " + std::to_string(t.base));
    is_term[t.terminal] = 1;
    base[t.terminal] = t.base;
  }
  for (const auto& t : terminals) require(!is_term[t.base], "degenerate", "base vertex is itself a terminal");

  NormalizeResult r;
  r.reference_L = bilipschitz_constant(reference, h);
  require(r.reference_L != kUnbounded, "map", "input is not bi-Lipschitz to the reference");
  r.graph = h;
  auto& g = r.graph;
  auto smallest_internal_neighbor = [&](const SimpleGraph& s, Vertex v) {
    for (Vertex w : s.neighbors(v))
      if (!is_term[w]) return w;
    return static_cast<Vertex>(-1);
  };

  // Type 1: terminal-terminal edges re-hung on an internal neighbour, in rounds.
  for (;;) {
    auto snapshot = g.edges();
    bool any = false;
    for (const auto& e : snapshot) any = any || (is_term[e.source] && is_term[e.target]);
    if (!any) break;
    ++r.type1_rounds;
    require(static_cast<std::int64_t>(r.type1_rounds) <= r.reference_L, "budget",
            "terminal-terminal edges persist after " + std::to_string(r.reference_L) + " rounds");
    SimpleGraph s(g);
    std::size_t changed = 0;
    for (const auto& e : snapshot) {
      if (!is_term[e.source] || !is_term[e.target]) continue;
      if (e.source == e.target) {
        log_move(g, r.log, {false, e.source, e.target, e.label});
        ++changed;
        continue;
      }
      if (Vertex x = smallest_internal_neighbor(s, e.source); x != static_cast<Vertex>(-1)) {
        log_move(g, r.log, {false, e.source, e.target, e.label});
        log_move(g, r.log, {true, x, e.target, e.label});
        ++changed;
      } else if (Vertex x2 = smallest_internal_neighbor(s, e.target); x2 != static_cast<Vertex>(-1)) {
        log_move(g, r.log, {false, e.source, e.target, e.label});
        log_move(g, r.log, {true, e.source, x2, e.label});
        ++changed;
      }
    }
    ensure(changed > 0, "terminal cluster without internal neighbour (disconnected intermediate)");
  }

  // Type 3a: keep one internal neighbour (the base when adjacent) per terminal.
  for (const auto& t : terminals) {
    const Vertex y = t.terminal;
    std::vector<LabeledEdge> touching;
    for (const auto& e : g.edges())
      if (e.source == y || e.target == y) touching.push_back(e);
    if (touching.empty()) continue;
    Vertex keep = static_cast<Vertex>(-1);
    for (const auto& e : touching) {
      Vertex other = e.source == y ? e.target : e.source;
      if (other == t.base) keep = other;
    }
    if (keep == static_cast<Vertex>(-1)) {
      keep = std::numeric_limits<Vertex>::max();
      for (const auto& e : touching) keep = std::min(keep, e.source == y ? e.target : e.source);
    }
    bool kept_one = false, changed = false;
    for (const auto& e : touching) {
      Vertex other = e.source == y ? e.target : e.source;
      if (other == keep && !kept_one) {
        kept_one = true;
        continue;
      }
      log_move(g, r.log, {false, e.source, e.target, e.label});
      if (other != keep) {
        if (e.source == y) log_move(g, r.log, {true, keep, other, e.label});
        else log_move(g, r.log, {true, other, keep, e.label});
      }
      changed = true;
    }
    r.type3a_terminals += changed;
  }

  // Type 3b: a terminal hanging on a non-base vertex moves to its base.
  for (const auto& t : terminals) {
    const Vertex y = t.terminal;
    for (const auto& e : g.edges()) {
      if (e.source != y && e.target != y) continue;
      Vertex other = e.source == y ? e.target : e.source;
      if (other != t.base) {
        auto copy = e;
        log_move(g, r.log, {false, copy.source, copy.target, copy.label});
        if (copy.source == y) log_move(g, r.log, {true, y, t.base, copy.label});
        else log_move(g, r.log, {true, t.base, y, copy.label});
        ++r.type3b_terminals;
      }
      break;
    }
  }

  for (const auto& t : terminals) {
    std::size_t count = 0;
    for (const auto& e : g.edges())
      if (e.source == t.terminal || e.target == t.terminal) {
        ++count;
        ensure((e.source == t.base || e.target == t.base), "terminal still attached to a non-base vertex");
      }
    ensure(count == 1, "terminal " + std::to_string(t.terminal) + " does not have exactly its base edge");
  }
  g.set_degree_bound(std::max(h.degree_bound(), SimpleGraph(g).max_degree()));

  std::int64_t bound = 1;
  if (r.type1_rounds) bound *= 2 * r.reference_L;
  if (r.type3a_terminals) bound *= 2;
  if (r.type3b_terminals) bound *= r.reference_L;
  r.bound = bound;
  r.certificate = measure_distortion(h, g, identity_map(n), MapKind::bilipschitz);
  ensure(r.certificate.constant <= bound, "rewired graph is " + std::to_string(r.certificate.constant) +
                                              "-bi-Lipschitz, above the composed bound " + std::to_string(bound));
  ensure(replay(h, r.log).edges() == g.edges(), "move log does not replay to the output");
  return r;
}

struct InjectivizeResult {
  LabeledMultigraph h_prime;
  std::vector<Vertex> image;  // injective f'
  std::int64_t A = 1;         // quasi-isometry constant of f
  std::size_t fiber_cap = 0;  // max |B(x, A^2)| over the domain
  std::size_t added = 0;
};

// Adds |f^-1(y)| - 1 pendant vertices at every y and spreads each fiber over them.
inline InjectivizeResult injectivize(const LabeledMultigraph& domain, const LabeledMultigraph& codomain,
                                     const std::vector<Vertex>& image) {
  InjectivizeResult r;
  auto qi = measure_distortion(domain, codomain, image, MapKind::quasi_isometry);
  r.A = qi.constant;
  SimpleGraph dom(domain);
  const auto radius = static_cast<Distance>(std::min<std::int64_t>(r.A * r.A, kInfinity - 1));
  std::vector<std::size_t> ball_size(domain.vertex_count());
  parallel_for(domain.vertex_count(),
               [&](std::size_t x) { ball_size[x] = ball_vertices(dom, static_cast<Vertex>(x), radius).size(); });
  r.fiber_cap = *std::max_element(ball_size.begin(), ball_size.end());

  std::vector<std::vector<Vertex>> fibers(codomain.vertex_count());
  for (Vertex x = 0; x < domain.vertex_count(); ++x) fibers[image[x]].push_back(x);
  r.h_prime = codomain;
  r.h_prime.set_name(codomain.name() + "_inj");
  r.image = image;
  std::uint32_t pendant = 0;
  bool have_label = false;
  for (Vertex y = 0; y < codomain.vertex_count(); ++y) {
    const auto& fiber = fibers[y];
    if (fiber.size() < 2) continue;
    auto d = bfs_distances(dom, fiber[0]);
    for (Vertex x : fiber) ensure(d[x] <= radius, "fiber point outside B(x, A^2)");
    ensure(fiber.size() <= r.fiber_cap, "fiber larger than the ball-size bound");
    if (!have_label) {
      pendant = r.h_prime.add_label("pendant");
      have_label = true;
    }
    for (std::size_t i = 1; i < fiber.size(); ++i) {
      Vertex p = r.h_prime.add_vertex();
      r.h_prime.add_edge(y, p, pendant);
      r.image[fiber[i]] = p;
      ++r.added;
    }
  }
  r.h_prime.set_degree_bound(std::max(codomain.degree_bound(), SimpleGraph(r.h_prime).max_degree()));
  std::vector<char> hit(r.h_prime.vertex_count(), 0);
  for (Vertex v : r.image) {
    ensure(!hit[v], "f' is not injective");
    hit[v] = 1;
  }
  return r;
}

struct PushforwardResult {
  LabeledMultigraph h_second;
  Distance R = 0;           // max distance of a non-image vertex to the image
  std::int64_t A_prime = 1;  // quasi-isometry constant of f'
  std::int64_t bound = 1;    // max(A'(2R+1)+A'^2+2, A'(R+1)+A'^2+1, A'+A'^2)
  DistortionCertificate certificate;  // identity H' -> H''
};

// H'' on the vertices of H': G's edges carried by f', every non-image vertex
// hung on its nearest image point (smallest id on ties).
inline PushforwardResult pushforward_graph(const LabeledMultigraph& G, const std::vector<Vertex>& f,
                                           const LabeledMultigraph& h_prime) {
  require(f.size() == G.vertex_count(), "map", "image array length differs from domain size");
  std::vector<char> is_image(h_prime.vertex_count(), 0);
  for (Vertex v : f) {
    require(v < h_prime.vertex_count(), "map", "image vertex out of range");
    require(!is_image[v], "injective", "pushforward needs an injective map");
    is_image[v] = 1;
  }
  PushforwardResult r;
  r.A_prime = measure_distortion(G, h_prime, f, MapKind::quasi_isometry).constant;
  auto& h = r.h_second;
  h = LabeledMultigraph(h_prime.name() + "_push", h_prime.vertex_count(), G.labels(), G.degree_bound());
  for (const auto& e : G.edges()) h.add_edge(f[e.source], f[e.target], e.label);
  SimpleGraph hp(h_prime);
  std::uint32_t hang = 0;
  bool have_label = false;
  for (Vertex w = 0; w < h_prime.vertex_count(); ++w) {
    if (is_image[w]) continue;
    auto d = bfs_distances(hp, w);
    Vertex best = static_cast<Vertex>(-1);
    for (Vertex p = 0; p < h_prime.vertex_count(); ++p)
      if (is_image[p] && d[p] != kInfinity && (best == static_cast<Vertex>(-1) || d[p] < d[best])) best = p;
    require(best != static_cast<Vertex>(-1), "disconnected", "vertex " + std::to_string(w) + " cannot reach the image");
    r.R = std::max(r.R, d[best]);
    if (!have_label) {
      hang = h.add_label("hang");
      have_label = true;
    }
    h.add_edge(best, w, hang);
  }
  h.set_degree_bound(std::max<std::size_t>(1, SimpleGraph(h).max_degree()));
  const std::int64_t A = r.A_prime, R = r.R;
  r.bound = std::max({A * (2 * R + 1) + A * A + 2, A * (R + 1) + A * A + 1, A + A * A});
  r.certificate = measure_distortion(h_prime, h, identity_map(h.vertex_count()), MapKind::bilipschitz);
  ensure(r.certificate.constant <= r.bound, "H'' is " + std::to_string(r.certificate.constant) +
                                                "-bi-Lipschitz to H', above the bound " + std::to_string(r.bound));
  return r;
}

struct TransferResult {
  PartitionCertificate partition;
  std::int64_t L = 1;
  std::size_t d = 0;
  std::int64_t bound = 0;  // |cut| * (sum_{i=1..L} d^i)^2
};

// Same vertex partition on a bi-Lipschitz equivalent graph, recounted.
inline TransferResult transfer_partition(const PartitionCertificate& p, const LabeledMultigraph& G,
                                         const LabeledMultigraph& G2) {
  SimpleGraph s1(G), s2(G2);
  verify_partition(s1, p);
  TransferResult r;
  r.L = bilipschitz_constant(G, G2);
  require(r.L != kUnbounded, "map", "graphs are not bi-Lipschitz equivalent by the identity");
  r.d = std::max(s1.max_degree(), s2.max_degree());
  std::int64_t sum = 0, power = 1;
  for (std::int64_t i = 1; i <= r.L; ++i) {
    power *= static_cast<std::int64_t>(r.d);
    sum += power;
  }
  r.bound = static_cast<std::int64_t>(p.cut.size()) * sum * sum;
  r.partition = make_partition(s2, p.block, G2.name());
  ensure(static_cast<std::int64_t>(r.partition.cut.size()) <= r.bound,
         "transferred cut " + std::to_string(r.partition.cut.size()) + " exceeds inflation bound " +
             std::to_string(r.bound));
  return r;
}

}  // namespace gsq
