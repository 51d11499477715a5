#include <gtest/gtest.h>

#include <charconv>
#include <filesystem>
#include <limits>

#include "smoothlearn/builtins.hpp"
#include "smoothlearn/io.hpp"

using namespace smoothlearn;

namespace {

const std::filesystem::path kSamples = SMOOTHLEARN_SAMPLES_DIR;

json load(const std::string& name) { return parse_json_text(read_file(kSamples / name), name); }

std::string message_of(const json& j) {
  try {
    parse_game(j);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Json, NormalFormRoundTrip) {
  const NormalFormGame g = random_game({3, 2, 2}, 11);
  const json j = to_json(g);
  const Game back = parse_game(parse_json_text(j.dump(), "memory"));
  const auto& nf = std::get<NormalFormGame>(back.backing());
  ASSERT_EQ(nf.actions(), g.actions());
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(nf.tensor(i), g.tensor(i));
}

TEST(Json, Samples) {
  const Game rps = parse_game(load("rps_bimatrix.json"));
  EXPECT_EQ(rps.num_players(), 2u);

  const Game pm = parse_game(load("polymatrix_triangle.json"));
  const auto& poly = std::get<PolymatrixGame>(pm.backing());
  EXPECT_EQ(poly.edges().size(), 4u);
  // Nested matrices are flattened row-major.
  EXPECT_EQ(poly.edges()[2].matrix, (Vec{0.2, 0.8, 0.5, 0.6, 0.1, 0.4}));
  const MixedProfile x({{1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0, 1.0}});
  const Vec u0 = poly.utility_vector(0, x);
  EXPECT_DOUBLE_EQ(u0[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(u0[1], 0.0);

  const Game gr = parse_game(load("graphical_ring.json"));
  const NormalFormGame dense = to_normal_form(gr);
  EXPECT_EQ(dense.num_profiles(), 16u);
  // Player 1 plays 0 while its neighbor (player 2) plays 1: table entry 0.2.
  EXPECT_DOUBLE_EQ(dense.utility(1, dense.index_of(std::vector<std::size_t>{1, 0, 1, 1})), 0.2);
}

TEST(Json, BayesianRoundTrip) {
  const json j = load("bayesian_claim.json");
  ASSERT_TRUE(is_bayesian(j));
  const BayesianGame bg = parse_bayesian(j);
  EXPECT_EQ(bg.types(), (std::vector<std::size_t>{2, 2}));
  EXPECT_DOUBLE_EQ(bg.utility(1, 1, 1), 2.0);
  const BayesianGame again = parse_bayesian(to_json(bg));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t v = 0; v < 2; ++v)
      for (std::size_t idx = 0; idx < 4; ++idx) EXPECT_EQ(again.utility(i, v, idx), bg.utility(i, v, idx));
  EXPECT_FALSE(is_bayesian(to_json(builtins::mp())));
}

TEST(Json, ErrorsNameTheField) {
  EXPECT_NE(message_of(json{{"players", 2}, {"actions", {2, 2}}}).find("'utilities'"), std::string::npos);
  EXPECT_NE(message_of(json{{"players", 3}, {"actions", {2, 2}}, {"utilities", json::array()}}).find("'actions'"),
            std::string::npos);
  EXPECT_NE(message_of(json{{"kind", "weird"}, {"players", 1}, {"actions", {2}}}).find("'kind'"), std::string::npos);
  json edge = load("polymatrix_triangle.json");
  edge["edges"][1].erase("to");
  EXPECT_NE(message_of(edge).find("edges[1].to"), std::string::npos);
  json bad_type = load("graphical_ring.json");
  bad_type["tables"][0][1] = "x";
  EXPECT_NE(message_of(bad_type).find("'tables'"), std::string::npos);
  json degree = load("graphical_ring.json");
  degree["degree"] = 0;
  EXPECT_THROW(parse_game(degree), Error);
  EXPECT_THROW(parse_json_text("{not json", "inline"), Error);
}

TEST(Format, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 123456789.125, std::numeric_limits<double>::denorm_min()}) {
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(2.0), "2");
}

TEST(Files, AtomicWriteReplacesContent) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "smoothlearn_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  EXPECT_EQ(read_file(path), "second");
  EXPECT_FALSE(std::filesystem::exists(dir / "out.txt.tmp"));
  EXPECT_THROW(read_file(dir / "missing.txt"), Error);
  EXPECT_THROW(write_file_atomic(dir / "no" / "such" / "dir.txt", "x"), Error);
  std::filesystem::remove_all(dir);
}
