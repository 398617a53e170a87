#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "gsq/ball_code.hpp"
#include "gsq/families.hpp"
#include "gsq/group.hpp"
#include "gsq/parallel.hpp"
#include "gsq/rational.hpp"

namespace gsq {

struct LocalStatistic {
  std::size_t hits = 0;
  std::size_t total = 0;  // |V| in exact mode, sample count otherwise
  bool exact = true;
  Rational p() const { return total ? Rational(static_cast<std::int64_t>(hits), static_cast<std::int64_t>(total)) : Rational(0); }
};

// Per-vertex match flags of r-balls against a reference code.
inline std::vector<char> match_flags(const LabeledMultigraph& g, const BallCode& reference, Distance r) {
  BallExtractor balls(g);
  std::vector<char> hit(g.vertex_count(), 0);
  parallel_for(g.vertex_count(), [&](std::size_t v) { hit[v] = ball_matches(balls(static_cast<Vertex>(v), r), reference); });
  return hit;
}

inline LocalStatistic local_statistic(const LabeledMultigraph& g, const BallCode& reference, Distance r) {
  auto hit = match_flags(g, reference, r);
  LocalStatistic s;
  s.total = g.vertex_count();
  s.hits = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
  return s;
}

// Estimate from `count` uniform draws with replacement; never used in certificates.
inline LocalStatistic local_statistic_sample(const LabeledMultigraph& g, const BallCode& reference, Distance r,
                                             std::size_t count, std::uint64_t seed) {
  require(g.vertex_count() > 0, "empty", "cannot sample an empty graph");
  auto rng = seeded_rng(seed, 0);
  std::vector<Vertex> picks(count);
  for (auto& v : picks) v = static_cast<Vertex>(uniform_below(rng, g.vertex_count()));
  BallExtractor balls(g);
  std::vector<char> hit(count, 0);
  parallel_for(count, [&](std::size_t i) { hit[i] = ball_matches(balls(picks[i], r), reference); });
  LocalStatistic s;
  s.exact = false;
  s.total = count;
  s.hits = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
  return s;
}

inline BallCode oracle_code(const GroupOracle& oracle, Distance r) { return ball_code(cayley_ball(oracle, r)); }

// Vertices whose s-ball is not isomorphic to the oracle's s-ball, ascending.
inline std::vector<Vertex> bad_vertex_set(const LabeledMultigraph& g, const GroupOracle& oracle, Distance s) {
  auto hit = match_flags(g, oracle_code(oracle, s), s);
  std::vector<Vertex> bad;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (!hit[v]) bad.push_back(v);
  return bad;
}

// Number of vertices per distinct r-ball code.
inline std::map<BallCode, std::size_t> code_histogram(const LabeledMultigraph& g, Distance r) {
  BallExtractor balls(g);
  std::vector<BallCode> codes(g.vertex_count());
  parallel_for(g.vertex_count(), [&](std::size_t v) { codes[v] = ball_code(balls(static_cast<Vertex>(v), r)); });
  std::map<BallCode, std::size_t> hist;
  for (auto& c : codes) ++hist[c];
  return hist;
}

struct LocalStatRow {
  long index = 0;
  Distance radius = 0;
  std::size_t matching = 0;
  std::size_t vertices = 0;
  Rational p;
};

struct LocalStatReport {
  std::string group;
  std::vector<LocalStatRow> rows;      // index-major, radius 0..r_max
  std::vector<Distance> non_monotone;  // radii whose p_r drops somewhere along the indices
};

inline LocalStatReport bs_report(const GraphSequence& seq, const GroupOracle& oracle, Distance r_max) {
  LocalStatReport rep;
  rep.group = oracle.describe();
  std::vector<BallCode> refs;
  for (Distance r = 0; r <= r_max; ++r) refs.push_back(oracle_code(oracle, r));
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& g = seq.graphs[i];
    std::vector<char> prev;
    for (Distance r = 0; r <= r_max; ++r) {
      auto hit = match_flags(g, refs[r], r);
      // A mismatch at radius r persists at every larger radius.
      for (std::size_t v = 0; v < prev.size(); ++v)
        ensure(prev[v] || !hit[v], "ball statistic not monotone in r at vertex " + std::to_string(v));
      LocalStatRow row;
      row.index = seq.indices[i];
      row.radius = r;
      row.vertices = g.vertex_count();
      row.matching = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
      row.p = Rational(static_cast<std::int64_t>(row.matching), static_cast<std::int64_t>(row.vertices));
      rep.rows.push_back(row);
      prev = std::move(hit);
    }
  }
  const std::size_t per = r_max + 1;
  for (Distance r = 0; r <= r_max; ++r)
    for (std::size_t i = 1; i < seq.size(); ++i)
      if (rep.rows[i * per + r].p < rep.rows[(i - 1) * per + r].p) {
        rep.non_monotone.push_back(r);
        break;
      }
  return rep;
}

inline void write_bs_report(std::ostream& out, const LocalStatReport& rep) {
  out << "# index\tradius\tmatching\tvertices\tp\n";
  for (const auto& r : rep.rows)
    out << r.index << '\t' << r.radius << '\t' << r.matching << '\t' << r.vertices << '\t' << to_string(r.p) << '\n';
}

}  // namespace gsq
