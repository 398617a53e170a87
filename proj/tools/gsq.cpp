#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gsq/gsq.hpp"

namespace fs = std::filesystem;
using namespace gsq;

namespace {

fs::path g_out = ".";

// Writes `text` to <out>/<file> and echoes it on stdout.
void emit(const std::string& file, const std::string& text) {
  cert::write_text(g_out / file, text);
  std::cout << text;
}

void save_graph(const fs::path& path, const LabeledMultigraph& g) {
  cert::write_text(path, graph_to_string(g));
}

std::vector<Vertex> read_map_file(const fs::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "io", "cannot open " + path.string());
  return parse_map(in);
}

void write_map_file(const fs::path& path, const std::vector<Vertex>& image) {
  std::ostringstream o;
  write_map(o, image);
  cert::write_text(path, o.str());
}

void write_moves_file(const fs::path& path, const LabeledMultigraph& g, const MoveLog& log) {
  std::ostringstream o;
  write_moves(o, g, log);
  cert::write_text(path, o.str());
}

// A directory (holding manifest.tsv) or a manifest of `<k> <action file>` lines.
std::vector<PermAction> read_actions(const fs::path& where) {
  auto manifest = fs::is_directory(where) ? where / "manifest.tsv" : where;
  std::vector<PermAction> out;
  for (const auto& e : read_manifest(manifest)) out.push_back(read_action_file(e.path));
  require(!out.empty(), "empty", "no actions listed in " + manifest.string());
  return out;
}

void write_actions(const fs::path& dir, const std::vector<PermAction>& actions, const std::vector<long>& indices,
                   const std::string& stem) {
  fs::create_directories(dir);
  std::ostringstream manifest;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    auto name = stem + "_" + std::to_string(indices[i]) + ".act";
    write_action_file(dir / name, actions[i]);
    manifest << indices[i] << " " << name << "\n";
  }
  cert::write_text(dir / "manifest.tsv", manifest.str());
}

SubgroupPair load_pair(const fs::path& dir) {
  auto cosets = read_action_file(dir / "cosets.act");
  return subgroup_pair_sequence(cosets.generator_count(), cosets, read_actions(dir / "tower"));
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& t : detail::split(text, ','))
    if (!t.empty()) out.push_back(detail::parse_u64(t, 1));
  return out;
}

std::string ratio_table_text(const RatioTable& t) {
  std::ostringstream o;
  write_ratio_table(o, t);
  o << "# liminf_proxy\t" << to_string(t.liminf_proxy()) << "\ttail_window\t" << t.tail_window << "\n";
  return o.str();
}

std::string dist(Distance d) { return d == kInfinity ? "inf" : std::to_string(d); }

struct SequenceSource {
  std::string manifest, family, sizes;
  std::size_t rank = 2;
  std::uint64_t seed = 1;

  void attach(CLI::App* app) {
    app->add_option("--manifest", manifest, "sequence manifest (<k> <graph file> lines)");
    app->add_option("--family", family, "build a family instead of reading a manifest");
    app->add_option("--sizes", sizes, "comma-separated family sizes");
    app->add_option("--rank", rank, "random_schreier generator count");
    app->add_option("--seed", seed, "random_schreier seed");
  }

  GraphSequence load() const {
    if (!manifest.empty()) return read_sequence(manifest);
    require(!family.empty(), "param", "give --manifest or --family with --sizes");
    FamilyParams p;
    p.family = family;
    p.sizes = parse_sizes(sizes);
    p.rank = rank;
    p.seed = seed;
    return build_family(p).sequence;
  }
};

// Resolved configuration of the parsed subcommand chain, one `key=value` per line.
void echo_config(const CLI::App* a, const std::string& prefix, std::ostream& o) {
  for (const CLI::Option* opt : a->get_options()) {
    if (opt == a->get_help_ptr()) continue;
    std::string value;
    if (opt->count()) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    o << prefix << opt->get_single_name() << "=" << value << "\n";
  }
  for (const CLI::App* sub : a->get_subcommands()) {
    o << prefix << "subcommand=" << sub->get_name() << "\n";
    echo_config(sub, prefix + sub->get_name() + ".", o);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph sequences, coarse invariants and certificate-producing constructions"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  std::string out = ".";
  std::function<void()> run;

  auto add_out = [&](CLI::App* c, bool required = false) {
    auto* o = c->add_option("--out", out, "output directory");
    if (required) o->required();
  };

  // build
  auto* build = app.add_subcommand("build", "build a graph family and write it as a sequence");
  FamilyParams fam;
  std::string sizes_text, tower_path;
  build->add_option("--family", fam.family, "cycle|torus|sl2p|random_schreier|box_tower")->required();
  build->add_option("--sizes", sizes_text, "comma-separated sizes (primes for sl2p)");
  build->add_option("--rank", fam.rank, "random_schreier generator count");
  build->add_option("--seed", fam.seed, "random_schreier seed");
  build->add_option("--tower", tower_path, "box_tower actions (directory or manifest)");
  add_out(build, true);
  build->callback([&] {
    run = [&] {
      fam.sizes = parse_sizes(sizes_text);
      if (!tower_path.empty()) fam.tower = read_actions(tower_path);
      auto b = build_family(fam);
      write_sequence(g_out, b.sequence, fam.family);
      write_actions(g_out / "actions", b.actions, b.sequence.indices, fam.family);
      emit("build.tsv", ratio_table_text(edge_number_table(b.sequence, EdgeMode::multi)));
    };
  });

  // pair
  auto* pair_cmd = app.add_subcommand("pair", "subgroup pair over a quotient tower");
  std::string ambient;
  std::vector<std::string> subgroup;
  pair_cmd->add_option("--ambient", ambient, "ambient group, freeN or zN")->required();
  pair_cmd->add_option("--subgroup", subgroup, "coset-table FILE")->required()->expected(1, 2);
  pair_cmd->add_option("--tower", tower_path, "tower actions (directory or manifest)")->required();
  add_out(pair_cmd, true);
  pair_cmd->callback([&] {
    run = [&] {
      auto oracle = parse_group(ambient);
      require(subgroup.size() == 1 || subgroup[0] == "coset-table", "param",
              "--subgroup expects 'coset-table FILE'");
      auto cosets = read_action_file(subgroup.back());
      auto tower = read_actions(tower_path);
      auto pair = subgroup_pair_sequence(oracle.rank(), cosets, tower);
      write_action_file(g_out / "cosets.act", cosets);
      std::vector<long> idx;
      for (std::size_t k = 0; k < tower.size(); ++k) idx.push_back(static_cast<long>(k + 1));
      write_actions(g_out / "tower", tower, idx, "level");
      write_sequence(g_out / "gamma", pair.gamma_sequence, "gamma");
      write_sequence(g_out / "lambda", pair.lambda_sequence, "lambda");
      std::ostringstream gens;
      gens << "#label\tword\n";
      for (std::size_t i = 0; i < pair.subgroup_generators.size(); ++i)
        gens << pair.subgroup_labels[i] << "\t" << word_to_string(pair.subgroup_generators[i], pair.ambient_labels)
             << "\n";
      cert::write_text(g_out / "generators.tsv", gens.str());
      std::ostringstream o;
      o << "# ambient\t" << oracle.describe() << "\tindex\t" << pair.index << "\tsubgroup_rank\t"
        << pair.subgroup_generators.size() << "\n";
      o << "#index\tgamma_vertices\tlambda_vertices\tbase\n";
      for (std::size_t k = 0; k < pair.levels.size(); ++k)
        o << pair.gamma_sequence.indices[k] << "\t" << pair.levels[k].gamma.degree() << "\t"
          << pair.levels[k].lambda.degree() << "\t" << pair.levels[k].base.size() << "\n";
      emit("pair.tsv", o.str());
    };
  });

  // stats
  auto* stats = app.add_subcommand("stats", "edge-number table and per-graph invariants");
  std::string manifest, mode = "multi";
  bool invariants = false;
  stats->add_option("--manifest", manifest, "sequence manifest")->required();
  stats->add_option("--mode", mode, "simple|multi|multi_no_loops");
  stats->add_flag("--invariants", invariants, "also write girth, cycle space and Cheeger bounds");
  add_out(stats);
  stats->callback([&] {
    run = [&] {
      auto seq = read_sequence(manifest);
      emit("stats.tsv", ratio_table_text(edge_number_table(seq, parse_edge_mode(mode))));
      if (!invariants) return;
      std::ostringstream o;
      o << "#index\tvertices\tgirth_simple\tgirth_multi\tcycle_space_dim\tspectral_lower\tcheeger_exact\n";
      for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto& g = seq.graphs[i];
        SimpleGraph s(g);
        o << seq.indices[i] << "\t" << g.vertex_count() << "\t" << dist(girth(s)) << "\t"
          << dist(girth(g, GirthMode::multi)) << "\t" << cycle_space_dim(s) << "\t";
        if (is_connected(s) && g.vertex_count() > 1) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.9f", cheeger_spectral_lower(s).lower_bound);
          o << buf << "\t";
          o << (g.vertex_count() <= default_caps().cheeger ? to_string(cheeger_exact(s)) : "-") << "\n";
        } else {
          o << "-\t-\n";
        }
      }
      emit("invariants.tsv", o.str());
    };
  });

  // bs
  auto* bs = app.add_subcommand("bs", "Benjamini-Schramm local statistics against a Cayley ball");
  std::string group = "free2", bs_mode = "exact";
  Distance rmax = 2;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  bs->add_option("--manifest", manifest, "sequence manifest")->required();
  bs->add_option("--group", group, "freeN or zN");
  bs->add_option("--rmax", rmax, "largest radius");
  bs->add_option("--mode", bs_mode, "exact|sample");
  bs->add_option("--samples", samples, "draws per graph and radius in sample mode");
  bs->add_option("--seed", seed, "sampling seed");
  add_out(bs);
  bs->callback([&] {
    run = [&] {
      auto seq = read_sequence(manifest);
      auto oracle = parse_group(group);
      if (bs_mode == "exact") {
        auto rep = bs_report(seq, oracle, rmax);
        std::ostringstream o;
        o << "# group\t" << rep.group << "\n";
        write_bs_report(o, rep);
        for (auto r : rep.non_monotone) o << "# non_monotone_radius\t" << r << "\n";
        emit("bs.tsv", o.str());
        return;
      }
      require(bs_mode == "sample", "param", "unknown --mode '" + bs_mode + "' (exact|sample)");
      std::ostringstream o;
      o << "# group\t" << oracle.describe() << "\n#index\tradius\thits\tsamples\tp_estimate\n";
      for (std::size_t i = 0; i < seq.size(); ++i)
        for (Distance r = 0; r <= rmax; ++r) {
          auto s = local_statistic_sample(seq.graphs[i], oracle_code(oracle, r), r, samples, seed);
          o << seq.indices[i] << "\t" << r << "\t" << s.hits << "\t" << s.total << "\t" << to_string(s.p()) << "\n";
        }
      emit("bs.tsv", o.str());
    };
  });

  // coarse
  auto* coarse = app.add_subcommand("coarse", "coarse-map tools");
  coarse->require_subcommand(1);
  std::string domain, codomain, map_path, kind = "quasi_isometry", partition_path, graph_path;
  std::int64_t bound = 0;
  auto map_options = [&](CLI::App* c) {
    c->add_option("--domain", domain, "domain graph file")->required();
    c->add_option("--codomain", codomain, "codomain graph file")->required();
    c->add_option("--map", map_path, "vertex map file")->required();
    add_out(c);
  };
  auto* cverify = coarse->add_subcommand("verify", "measure a map's quasi-isometry or bi-Lipschitz constant");
  map_options(cverify);
  cverify->add_option("--kind", kind, "quasi_isometry|bilipschitz");
  cverify->add_option("--bound", bound, "required constant (0 = report only)");
  cverify->callback([&] {
    run = [&] {
      auto G = read_graph_file(domain), H = read_graph_file(codomain);
      auto f = read_map_file(map_path);
      auto k = parse_map_kind(kind);
      auto c = bound > 0 ? verify_map(G, H, f, k, bound) : measure_distortion(G, H, f, k);
      save_graph(g_out / "domain.g", G);
      save_graph(g_out / "codomain.g", H);
      write_map_file(g_out / "f.map", f);
      cert::write_text(g_out / "distortion.cert",
                       distortion_text(c, "domain.g", "codomain.g", "f.map", bound > 0 ? bound : c.constant));
      std::ostringstream o;
      o << "#kind\tconstant\tpair_constant\tworst_x\tworst_y\tdensity_vertex\tdensity_distance\texhaustive\n"
        << to_string(c.kind) << "\t" << c.constant << "\t" << c.pair_constant << "\t" << c.worst.x << "\t"
        << c.worst.y << "\t" << c.density_vertex << "\t" << c.density_distance << "\t" << c.exhaustive << "\n";
      emit("verify.tsv", o.str());
    };
  });
  auto* cinj = coarse->add_subcommand("injectivize", "hang fibres on pendants to make the map injective");
  map_options(cinj);
  cinj->callback([&] {
    run = [&] {
      auto G = read_graph_file(domain), H = read_graph_file(codomain);
      auto r = injectivize(G, H, read_map_file(map_path));
      save_graph(g_out / "domain.g", G);
      save_graph(g_out / "h_prime.g", r.h_prime);
      write_map_file(g_out / "f_prime.map", r.image);
      auto c = measure_distortion(G, r.h_prime, r.image, MapKind::quasi_isometry);
      cert::write_text(g_out / "distortion.cert", distortion_text(c, "domain.g", "h_prime.g", "f_prime.map", c.constant));
      std::ostringstream o;
      o << "#A\tfiber_cap\tadded\th_prime_vertices\tf_prime_constant\n"
        << r.A << "\t" << r.fiber_cap << "\t" << r.added << "\t" << r.h_prime.vertex_count() << "\t" << c.constant
        << "\n";
      emit("injectivize.tsv", o.str());
    };
  });
  auto* cpush = coarse->add_subcommand("pushforward", "rebuild the codomain from the domain's edges");
  map_options(cpush);
  cpush->callback([&] {
    run = [&] {
      auto G = read_graph_file(domain), Hp = read_graph_file(codomain);
      auto r = pushforward_graph(G, read_map_file(map_path), Hp);
      save_graph(g_out / "h_prime.g", Hp);
      save_graph(g_out / "h_second.g", r.h_second);
      write_map_file(g_out / "identity.map", identity_map(Hp.vertex_count()));
      cert::write_text(g_out / "distortion.cert",
                       distortion_text(r.certificate, "h_prime.g", "h_second.g", "identity.map", r.bound));
      std::ostringstream o;
      o << "#A_prime\tR\tbound\tmeasured\n"
        << r.A_prime << "\t" << r.R << "\t" << r.bound << "\t" << r.certificate.constant << "\n";
      emit("pushforward.tsv", o.str());
    };
  });
  auto* ctrans = coarse->add_subcommand("transfer", "carry a partition across an identity bi-Lipschitz map");
  ctrans->add_option("--partition", partition_path, "partition certificate")->required();
  ctrans->add_option("--graph", graph_path, "target graph on the same vertex set")->required();
  add_out(ctrans);
  ctrans->callback([&] {
    run = [&] {
      auto lp = read_partition(partition_path);
      auto G = read_graph_file(lp.graph_file), G2 = read_graph_file(graph_path);
      auto r = transfer_partition(lp.cert, G, G2);
      save_graph(g_out / "graph.g", G2);
      write_partition(g_out / "partition.cert", r.partition, "graph.g");
      std::ostringstream o;
      o << "#L\td\tcut_before\tcut_after\tbound\tepsilon\tK\n"
        << r.L << "\t" << r.d << "\t" << lp.cert.cut.size() << "\t" << r.partition.cut.size() << "\t" << r.bound
        << "\t" << to_string(r.partition.epsilon) << "\t" << r.partition.K << "\n";
      emit("transfer.tsv", o.str());
    };
  });

  // hyperfinite
  auto* hyper = app.add_subcommand("hyperfinite", "partition with cut fraction below eps");
  std::string eps_text, method = "exact";
  std::size_t block = 0, max_k = 0;
  hyper->add_option("--graph", graph_path, "graph file")->required();
  hyper->add_option("--eps", eps_text, "target epsilon (p/q or decimal)")->required();
  hyper->add_option("--method", method, "exact|blocks|carve");
  hyper->add_option("--block", block, "block side for --method blocks");
  hyper->add_option("--max-k", max_k, "largest K tried by --method exact (0 = |V|)");
  add_out(hyper);
  hyper->callback([&] {
    run = [&] {
      auto g = read_graph_file(graph_path);
      auto eps = parse_rational(eps_text);
      auto p = hyperfinite_partition(g, eps, parse_partition_method(method), block,
                                     max_k ? std::optional<std::size_t>(max_k) : std::nullopt);
      save_graph(g_out / "graph.g", g);
      write_partition(g_out / "partition.cert", p, "graph.g");
      std::ostringstream o;
      o << "#graph\tvertices\tblocks\tK\tcut\tepsilon\n"
        << g.name() << "\t" << g.vertex_count() << "\t" << p.block_count << "\t" << p.K << "\t" << p.cut.size() << "\t"
        << to_string(p.epsilon) << "\n";
      emit("hyperfinite.tsv", o.str());
    };
  });

  // witness
  auto* witness = app.add_subcommand("witness", "property-A witness, rerouting and peeling");
  std::string wmethod = "box", peel_text;
  std::size_t wsize = 2;
  std::vector<Vertex> remove;
  witness->add_option("--graph", graph_path, "graph file")->required();
  witness->add_option("--method", wmethod, "box (pushed Folner box on cycle_/torus_ graphs) | ball (uniform r-ball)");
  witness->add_option("--size", wsize, "box side or ball radius");
  witness->add_option("--remove", remove, "vertices to remove by rerouting")->delimiter(',');
  witness->add_option("--peel", peel_text, "peel a partition at this epsilon");
  add_out(witness);
  witness->callback([&] {
    run = [&] {
      auto g = read_graph_file(graph_path);
      SimpleGraph s(g);
      WitnessCertificate w;
      if (wmethod == "box") w = family_box_witness(g, wsize);
      else if (wmethod == "ball") w = uniform_ball_witness(s, static_cast<Distance>(wsize), g.name());
      else throw Error("param", "unknown witness method '" + wmethod + "' (box|ball)");
      save_graph(g_out / "graph.g", g);
      std::ostringstream o;
      o << "#stage\tS\tepsilon\talive\n" << "witness\t" << w.S << "\t" << to_string(w.epsilon) << "\t" << w.alive_count()
        << "\n";
      if (!peel_text.empty()) {
        auto pr = peel_partition(g, w, parse_rational(peel_text));
        write_partition(g_out / "partition.cert", pr.partition, "graph.g");
        o << "# peel\trounds\t" << pr.rounds << "\tK\t" << pr.partition.K << "\tball_bound\t" << pr.ball_bound
          << "\tepsilon\t" << to_string(pr.partition.epsilon) << "\tbound\t" << to_string(pr.bound) << "\n";
      }
      if (!remove.empty()) {
        w = reroute_witness(s, w, remove);
        o << "rerouted\t" << w.S << "\t" << to_string(w.epsilon) << "\t" << w.alive_count() << "\n";
      }
      write_witness(g_out / "witness.cert", w, "graph.g");
      emit("witness.tsv", o.str());
    };
  });

  // almost-a
  auto* almost = app.add_subcommand("almost-a", "almost-A witnesses along a sequence");
  std::string folner_eps = "1/2";
  std::size_t smax = 0;
  almost->add_option("--manifest", manifest, "sequence manifest")->required();
  almost->add_option("--group", group, "freeN or zN");
  almost->add_option("--folner-eps", folner_eps, "Folner ratio of the group-side set");
  almost->add_option("--smax", smax, "largest scheduled radius (0 = word radius of the Folner set)");
  add_out(almost);
  almost->callback([&] {
    run = [&] {
      auto seq = read_sequence(manifest);
      auto oracle = parse_group(group);
      auto F = folner_set(oracle, parse_rational(folner_eps));
      auto rep = almost_a_certify(seq, oracle, F, smax ? std::optional<std::size_t>(smax) : std::nullopt);
      write_sequence(g_out / "graphs", seq, "graph");
      std::ostringstream o;
      o << "# group\t" << rep.group << "\tfolner_size\t" << F.size() << "\tfolner_ratio\t" << to_string(rep.folner_ratio)
        << "\tfolner_radius\t" << rep.folner_radius << "\n";
      for (auto s : rep.undefined) o << "# undefined_radius\t" << s << "\n";
      o << "#index\ts\tremoved\tvertices\tfraction\tbranch\tS\tepsilon\n";
      for (const auto& row : rep.rows) {
        auto name = "witness_" + std::to_string(row.index) + ".cert";
        write_witness(g_out / name, row.witness, "graphs/graph_" + std::to_string(row.index) + ".g");
        o << row.index << "\t" << row.s << "\t" << row.removed.size() << "\t" << row.vertices << "\t"
          << to_string(row.fraction) << "\t" << row.branch << "\t" << row.witness.S << "\t"
          << to_string(row.witness.epsilon) << "\n";
      }
      emit("almost_a.tsv", o.str());
    };
  });

  // lift
  auto* lift = app.add_subcommand("lift", "lift a partition block to a group-side Folner set");
  LiftOptions lopt;
  std::string lift_eps, bad_limit;
  lift->add_option("--partition", partition_path, "partition certificate")->required();
  lift->add_option("--group", group, "freeN or zN");
  lift->add_option("--R", lopt.R, "Cayley-chart radius");
  lift->add_option("--eps", lift_eps, "required Folner ratio (default 4 x partition target)");
  lift->add_option("--bad-limit", bad_limit, "largest tolerated fraction of vertices without a chart");
  add_out(lift);
  lift->callback([&] {
    run = [&] {
      auto lp = read_partition(partition_path);
      auto g = read_graph_file(lp.graph_file);
      if (!lift_eps.empty()) lopt.eps = parse_rational(lift_eps);
      if (!bad_limit.empty()) lopt.bad_limit = parse_rational(bad_limit);
      auto oracle = parse_group(group);
      auto r = lift_partition_to_folner(g, lp.cert, oracle, lopt);
      std::ostringstream set;
      set << "#element\n";
      for (const auto& z : r.folner.elements) {
        for (std::size_t i = 0; i < z.size(); ++i) set << (i ? "," : "") << z[i];
        set << "\n";
      }
      cert::write_text(g_out / "folner.tsv", set.str());
      std::ostringstream o;
      o << "#block\troot\tblock_ratio\tthreshold\tfolner_size\tfolner_ratio\tbad_fraction\taveraging_bound\tnice_"
           "blocks\n"
        << r.block << "\t" << r.root << "\t" << to_string(r.ratio) << "\t" << to_string(r.threshold) << "\t"
        << r.folner.size() << "\t" << to_string(r.folner.ratio) << "\t" << to_string(r.bad_fraction) << "\t"
        << to_string(r.averaging_bound) << "\t" << r.nice_blocks << "\n";
      emit("lift.tsv", o.str());
    };
  });

  // glue
  auto* glue = app.add_subcommand("glue", "glue expanders onto box graphs at one vertex");
  std::string box_manifest, exp_manifest;
  glue->add_option("--box", box_manifest, "box sequence manifest")->required();
  glue->add_option("--expander", exp_manifest, "expander sequence manifest")->required();
  add_out(glue, true);
  glue->callback([&] {
    run = [&] {
      auto r = glue_expander(read_sequence(box_manifest), read_sequence(exp_manifest));
      write_sequence(g_out, r.sequence, "glued");
      std::ostringstream o;
      o << "#index\tbox_position\tbox_vertices\texpander_vertices\tratio\n";
      for (const auto& row : r.rows)
        o << row.index << "\t" << row.box_position << "\t" << row.box_vertices << "\t" << row.expander_vertices << "\t"
          << to_string(row.ratio) << "\n";
      emit("glue.tsv", o.str());
    };
  });

  // cost
  auto* cost = app.add_subcommand("cost", "edge-rewiring bounds on the cost");
  cost->require_subcommand(1);
  auto* thin = cost->add_subcommand("thin", "delete edges under an identity bi-Lipschitz bound");
  SequenceSource source;
  std::int64_t L = 2;
  std::string thin_method = "greedy";
  bool large_girth = false;
  source.attach(thin);
  thin->add_option("--L", L, "distance bound for deleted edges")->required();
  thin->add_option("--method", thin_method, "greedy|torus");
  thin->add_flag("--large-girth", large_girth, "use the edge number as the lower bound (girth must grow)");
  add_out(thin);
  thin->callback([&] {
    run = [&] {
      auto seq = source.load();
      require(thin_method == "greedy" || thin_method == "torus", "param",
              "unknown --method '" + thin_method + "' (greedy|torus)");
      auto cb = cost_over_sequence(seq, L, thin_method);
      const std::int64_t cert_bound = thin_method == "torus" ? L + 2 : L;
      std::ostringstream o;
      o << "# method\t" << cb.method << "\tL\t" << cb.L << "\n"
        << "#index\tvertices\tedges_before\tedges_after\tratio_before\tratio_after\tmeasured\texhaustive\n";
      for (std::size_t i = 0; i < cb.rows.size(); ++i) {
        const auto& row = cb.rows[i];
        const auto k = std::to_string(row.index);
        save_graph(g_out / "rows" / ("input_" + k + ".g"), seq.graphs[i]);
        save_graph(g_out / "rows" / ("output_" + k + ".g"), row.output);
        write_moves_file(g_out / "rows" / ("moves_" + k + ".txt"), seq.graphs[i], row.moves);
        cert::write_text(g_out / "rows" / ("costbound_" + k + ".cert"),
                         costbound_text(row, cb.method, cb.L, cert_bound, "input_" + k + ".g", "output_" + k + ".g",
                                        "moves_" + k + ".txt"));
        o << row.index << "\t" << row.vertices << "\t" << row.edges_before << "\t" << row.edges_after << "\t"
          << to_string(row.ratio_before) << "\t" << to_string(row.ratio_after) << "\t" << row.measured << "\t"
          << row.exhaustive << "\n";
      }
      auto ci = cost_interval(seq, large_girth, &cb);
      o << "#index\tvertices\tgirth\tlower\tupper\n";
      for (const auto& row : ci.rows)
        o << row.index << "\t" << row.vertices << "\t" << dist(row.girth) << "\t" << to_string(row.lower) << "\t"
          << to_string(row.upper) << "\n";
      o << "# cost_interval\t[" << to_string(ci.lower) << ", " << to_string(ci.upper) << "]\n";
      emit("cost_thin.tsv", o.str());
    };
  });
  auto* reduce = cost->add_subcommand("reduce", "base-copy reduction of a subgroup pair");
  std::string pair_dir;
  std::int64_t budget = 64;
  reduce->add_option("--pair", pair_dir, "directory written by `gsq pair`")->required();
  reduce->add_option("--budget", budget, "largest admissible R_max");
  add_out(reduce);
  reduce->callback([&] {
    run = [&] {
      auto pair = load_pair(pair_dir);
      std::ostringstream o;
      o << "#index\tvertices\tedges_before\tedges_after\tbase\tr_max\tphase1_deleted\tphase1_constant\tarcs\tmax_depth\n";
      for (std::size_t k = 0; k < pair.levels.size(); ++k) {
        auto r = base_copy_reduction(pair, k, budget);
        const auto dir = g_out / ("level_" + std::to_string(pair.gamma_sequence.indices[k]));
        save_graph(dir / "input.g", r.input);
        save_graph(dir / "output.g", r.output);
        MoveLog all = r.phase1;
        all.insert(all.end(), r.phase2.begin(), r.phase2.end());
        write_moves_file(dir / "moves.txt", r.input, all);
        Distance depth = 0;
        for (auto d : r.depth) depth = std::max(depth, d);
        o << pair.gamma_sequence.indices[k] << "\t" << r.input.vertex_count() << "\t" << r.input.edge_count() << "\t"
          << r.output.edge_count() << "\t" << r.base.size() << "\t" << r.r_max << "\t" << r.phase1.size() << "\t"
          << r.phase1_constant << "\t" << r.arcs << "\t" << depth << "\n";
      }
      emit("cost_reduce.tsv", o.str());
    };
  });
  auto* mult = cost->add_subcommand("mult", "check [Gamma:Lambda](e_Gamma - 1) = e_Lambda - 1 per index");
  std::string mult_mode = "multi";
  mult->add_option("--pair", pair_dir, "directory written by `gsq pair`")->required();
  mult->add_option("--mode", mult_mode, "simple|multi|multi_no_loops");
  add_out(mult);
  mult->callback([&] {
    run = [&] {
      auto pair = load_pair(pair_dir);
      auto rep = multiplicativity_check(pair, parse_edge_mode(mult_mode));
      std::ostringstream o;
      o << "# index\t" << rep.index << "\tmode\t" << to_string(rep.mode) << "\n"
        << "#index\tgamma_vertices\tlambda_vertices\te_gamma\te_lambda\tlhs\trhs\tholds\n";
      for (const auto& r : rep.rows)
        o << r.index << "\t" << r.gamma_vertices << "\t" << r.lambda_vertices << "\t" << to_string(r.e_gamma) << "\t"
          << to_string(r.e_lambda) << "\t" << to_string(r.lhs) << "\t" << to_string(r.rhs) << "\t"
          << (r.holds ? "yes" : "no") << "\n";
      emit("cost_mult.tsv", o.str());
      if (!rep.all_hold) throw Error("identity", "multiplicativity fails at some index");
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "re-verify a certificate file");
  std::string cert_path;
  verify->add_option("CERT", cert_path, "certificate file")->required();
  verify->callback([&] {
    run = [&] {
      auto r = verify_certificate(cert_path);
      std::cout << "ok\t" << r.kind << "\t" << r.summary << "\n";
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: usage: " << e.what() << "\n";
    return 1;
  }

  try {
    if (threads) set_thread_count(threads);
    g_out = out;
    if (!run) throw Error("usage", "no subcommand to run");
    fs::create_directories(g_out);
    std::ostringstream meta;
    echo_config(&app, "", meta);
    cert::write_text(g_out / "run.meta", meta.str());
    run();
  } catch (const Infeasible& e) {
    std::cerr << "error: " << e.reason() << ": " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.reason() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
