#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "polyfat/io.hpp"
#include "polyfat/sampling.hpp"

using namespace polyfat;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("polyfat_io_" + name)).string();
}

}  // namespace

TEST(PointsCsv, RoundTripIsExact) {
  Rng r(1);
  Sample s;
  for (int i = 0; i < 20; ++i) s.emplace_back(sample_unit_ball(3, r), i % 3 ? Label::Positive : Label::Negative);
  std::stringstream ss;
  io::write_points_csv(ss, s, 3);
  const Sample back = io::read_points_csv(ss);
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(back[i].x(), s[i].x());
    EXPECT_EQ(back[i].label(), s[i].label());
  }
}

TEST(PointsCsv, Errors) {
  std::stringstream ragged("x1,x2,label\n0.1,0.2,1\n0.3,-1\n");
  EXPECT_THROW(io::read_points_csv(ragged), Error);
  std::stringstream label("x1,x2,label\n0.1,0.2,2\n");
  EXPECT_THROW(io::read_points_csv(label), Error);
  std::stringstream word("x1,x2,label\n0.1,abc,1\n");
  EXPECT_THROW(io::read_points_csv(word), io::ParseError);
  EXPECT_THROW(io::read_points_csv(std::string("/nonexistent/points.csv")), Error);
}

TEST(ModelJson, RoundTrip) {
  Polytope p(2);
  p.add(Hyperplane(Vector{{3, 4}}, 0.5));
  p.add(Hyperplane(Vector{{-1, 0}}, 0.25));
  const auto path = temp_path("model.json");
  io::write_model(path, p, 0.2);
  const auto m = io::read_model(path);
  EXPECT_EQ(m.gamma, 0.2);
  ASSERT_EQ(m.polytope.size(), 2u);
  EXPECT_EQ(m.polytope[0].normal(), p[0].normal());
  EXPECT_EQ(m.polytope[0].offset(), p[0].offset());
  const auto j = io::model_to_json(p, 0.2);
  EXPECT_EQ(j.at("dim").get<int>(), 2);
  EXPECT_EQ(j.at("halfspaces").size(), 2u);
  EXPECT_THROW(io::model_from_json(io::json{{"dim", 2}}), io::ParseError);
  std::filesystem::remove(path);
}

TEST(JlJson, RoundTrip) {
  Rng r(2);
  const JlMap f = make_jl(5, 3, r);
  const JlMap g = io::jl_from_json(io::jl_to_json(f));
  EXPECT_EQ(f.matrix(), g.matrix());
  const auto j = io::jl_to_json(f);
  EXPECT_EQ(j.at("k").get<int>(), 3);
  EXPECT_EQ(j.at("d").get<int>(), 5);
  EXPECT_THROW(io::jl_from_json(io::json{{"k", 2}, {"d", 1}, {"m", {{1.0}}}}), io::ParseError);
}

TEST(MatrixCsv, Parse) {
  std::stringstream ss("# comment\n1,2\n\n3, 4\n");
  const auto m = io::read_matrix_csv(ss);
  ASSERT_EQ(m.rows(), 2);
  EXPECT_EQ(m(1, 1), 4.0);
  std::stringstream bad("1,2\n3\n");
  EXPECT_THROW(io::read_matrix_csv(bad), io::ParseError);
}

TEST(Edges, Formats) {
  std::stringstream ss("# square\n0 1\n1,2\n2 3 # last\n3 0\n");
  const Graph g = io::read_edges(ss);
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g.edges().size(), 4u);
  std::stringstream iso("n 6\n0 1\n");
  EXPECT_EQ(io::read_edges(iso).size(), 6u);
  std::stringstream bad("0 1 2\n");
  EXPECT_THROW(io::read_edges(bad), io::ParseError);
}
