#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "gsq/certificates.hpp"
#include "gsq/hyperfinite.hpp"
#include "support.hpp"

using namespace gsq;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("gsq_cert_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void put(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST(Certificates, PartitionRoundTrip) {
  auto dir = scratch("partition");
  auto g = cycle(6);
  write_graph_file(dir / "c6.g", g);
  auto p = hyperfinite_exact(g, Rational(2, 5));
  write_partition(dir / "p.cert", p, "c6.g");
  auto back = read_partition(dir / "p.cert");
  EXPECT_EQ(back.cert.block, p.block);
  EXPECT_EQ(back.cert.cut, p.cut);
  EXPECT_EQ(back.cert.K, 3u);
  EXPECT_EQ(partition_text(back.cert, "c6.g"), partition_text(p, "c6.g"));
  EXPECT_EQ(verify_certificate(dir / "p.cert").kind, "partition");

  auto text = partition_text(p, "c6.g");
  text.replace(text.find("K=3"), 3, "K=2");
  put(dir / "bad.cert", text);
  EXPECT_THROW(verify_certificate(dir / "bad.cert"), Error);
}

TEST(Certificates, WitnessRoundTripWithDeadVertices) {
  auto dir = scratch("witness");
  auto g = cycle(12);
  write_graph_file(dir / "c12.g", g);
  auto w = uniform_ball_witness(SimpleGraph(g), 2, g.name());
  auto r = reroute_witness(SimpleGraph(g), w, {3, 7});
  write_witness(dir / "w.cert", r, "c12.g");
  auto back = read_witness(dir / "w.cert");
  EXPECT_EQ(back.cert.xi, r.xi);
  EXPECT_EQ(back.cert.alive, r.alive);
  EXPECT_EQ(back.cert.epsilon, r.epsilon);
  EXPECT_NO_THROW(verify_certificate(dir / "w.cert"));

  auto text = witness_text(r, "c12.g");
  text.replace(text.find("epsilon="), 8, "epsilon=1/1000 x=");
  put(dir / "bad.cert", text);
  EXPECT_THROW(verify_certificate(dir / "bad.cert"), Error);
}

TEST(Certificates, DistortionAndCostBound) {
  auto dir = scratch("maps");
  auto c8 = cycle(8), c4 = cycle(4);
  std::vector<Vertex> image(8);
  for (Vertex v = 0; v < 8; ++v) image[v] = v % 4;
  write_graph_file(dir / "c8.g", c8);
  write_graph_file(dir / "c4.g", c4);
  {
    std::ofstream m(dir / "f.map");
    write_map(m, image);
  }
  auto c = measure_distortion(c8, c4, image, MapKind::quasi_isometry);
  cert::write_text(dir / "d.cert", distortion_text(c, "c8.g", "c4.g", "f.map", c.constant));
  EXPECT_NO_THROW(verify_certificate(dir / "d.cert"));
  cert::write_text(dir / "tight.cert", distortion_text(c, "c8.g", "c4.g", "f.map", c.constant - 1));
  EXPECT_THROW(verify_certificate(dir / "tight.cert"), Error);

  auto t = torus(8);
  auto row = torus_thinning(t, 4);
  write_graph_file(dir / "in.g", t);
  write_graph_file(dir / "out.g", row.output);
  {
    std::ofstream m(dir / "moves.txt");
    write_moves(m, t, row.moves);
  }
  cert::write_text(dir / "c.cert", costbound_text(row, "torus", 4, 6, "in.g", "out.g", "moves.txt"));
  auto v = verify_certificate(dir / "c.cert");
  EXPECT_EQ(v.kind, "costbound");
  put(dir / "moves.txt", "");
  EXPECT_THROW(verify_certificate(dir / "c.cert"), Error);
}
