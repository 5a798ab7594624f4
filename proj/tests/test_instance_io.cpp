#include <gtest/gtest.h>

#include <string>

#include "permbo/instance_io.hpp"

using permbo::ErrorKind;

namespace {

permbo::Error error_of(auto&& fn) {
  try {
    fn();
  } catch (const permbo::Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected permbo::Error";
  return permbo::Error(ErrorKind::InvalidArgument, "none");
}

}  // namespace

TEST(Qaplib, MinimalInstance) {
  const auto q = permbo::parse_qaplib("2\n\n0 1\n1 0\n\n0 3\n3 0\n");
  ASSERT_EQ(q.n, 2u);
  EXPECT_EQ(q.a, (permbo::Matrix{{0, 1}, {1, 0}}));
  EXPECT_EQ(q.b, (permbo::Matrix{{0, 3}, {3, 0}}));
  EXPECT_EQ(permbo::qap_cost(q, {1, 0}), 6.0);
}

TEST(Qaplib, WhitespaceLayoutDoesNotMatter) {
  const auto q = permbo::parse_qaplib("  2 0 1 1 0\t0 3 3 0");
  EXPECT_EQ(q.b[1][0], 3.0);
}

TEST(Qaplib, Errors) {
  EXPECT_EQ(error_of([] { permbo::parse_qaplib("2\n0 1\n1 0\n0 3\n"); }).kind(), ErrorKind::DimensionMismatch);
  EXPECT_EQ(error_of([] { permbo::parse_qaplib(""); }).kind(), ErrorKind::ParseError);
  const auto e = error_of([] { permbo::parse_qaplib("2\n0 1\n1 x\n0 3\n3 0\n"); });
  EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  EXPECT_EQ(error_of([] { permbo::parse_qaplib("0\n"); }).kind(), ErrorKind::ParseError);
  EXPECT_EQ(error_of([] { permbo::parse_qaplib("2.5\n"); }).kind(), ErrorKind::ParseError);
}

TEST(Tsplib, CoordinateInstance) {
  const auto t = permbo::parse_tsplib(
      "NAME : tri\nTYPE : TSP\nCOMMENT : three cities\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\n"
      "NODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n");
  ASSERT_EQ(t.n, 3u);
  EXPECT_EQ(t.dist[0][1], 3.0);
  EXPECT_EQ(t.dist[1][2], 5.0);
  EXPECT_EQ(permbo::tsp_cost(t, {0, 1, 2}), 12.0);
}

TEST(Tsplib, NodeIdsMayBeOutOfOrder) {
  const auto t = permbo::parse_tsplib(
      "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n3 0 4\n1 0 0\n2 3 0\n");
  EXPECT_EQ(t.coords[2].y, 4.0);
  EXPECT_EQ(t.dist[0][1], 3.0);
}

TEST(Tsplib, FullMatrix) {
  const auto t = permbo::parse_tsplib(
      "TYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\n"
      "EDGE_WEIGHT_SECTION\n0 1 1\n1 0 1\n1 1 0\nEOF\n");
  EXPECT_TRUE(t.coords.empty());
  EXPECT_EQ(permbo::tsp_cost(t, {2, 1, 0}), 3.0);
}

TEST(Tsplib, Errors) {
  const std::string asym =
      "DIMENSION: 2\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 1\n2 0\n";
  EXPECT_EQ(error_of([&] { permbo::parse_tsplib(asym); }).kind(), ErrorKind::ParseError);
  EXPECT_EQ(error_of([] { permbo::parse_tsplib("EDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n"); }).kind(),
            ErrorKind::ParseError);
  EXPECT_EQ(
      error_of([] { permbo::parse_tsplib("DIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n"); })
          .kind(),
      ErrorKind::DimensionMismatch);
  EXPECT_EQ(error_of([] { permbo::parse_tsplib("DIMENSION: 2\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n"); })
                .kind(),
            ErrorKind::ParseError);
  EXPECT_EQ(error_of([] { permbo::parse_tsplib("TYPE: ATSP\nDIMENSION: 2\n"); }).kind(), ErrorKind::ParseError);
  EXPECT_EQ(error_of([] { permbo::parse_tsplib("DIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\n"); }).kind(),
            ErrorKind::ParseError);
  EXPECT_EQ(error_of([] { permbo::parse_tsplib("DIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n1 1 1\n"); })
                .kind(),
            ErrorKind::ParseError);

  const auto bad = error_of([] {
    permbo::parse_tsplib("DIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 oops\n");
  });
  EXPECT_EQ(bad.kind(), ErrorKind::ParseError);
  EXPECT_NE(std::string(bad.what()).find("line 5"), std::string::npos) << bad.what();
}

TEST(Parsers, RandomBytesOnlyRaiseLibraryErrors) {
  permbo::Rng rng(31337);
  const std::string alphabet = "0123456789 .-+eE\n\t:ABCDEFGHIJKLMNOPQRSTUVWXYZ_";
  for (int t = 0; t < 3000; ++t) {
    std::string text;
    const auto len = permbo::uniform_below(rng, 200);
    for (std::size_t i = 0; i < len; ++i)
      text.push_back(t % 2 ? static_cast<char>(permbo::uniform_below(rng, 256))
                           : alphabet[permbo::uniform_below(rng, alphabet.size())]);
    if (t % 3 == 0) text = "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n" + text;
    for (auto parse : {+[](std::string_view s) { (void)permbo::parse_qaplib(s); },
                       +[](std::string_view s) { (void)permbo::parse_tsplib(s); }}) {
      try {
        parse(text);
      } catch (const permbo::Error&) {
      } catch (const std::exception& e) {
        FAIL() << "foreign exception " << e.what();
      }
    }
  }
}

TEST(ReadFile, MissingFileIsParseError) {
  EXPECT_EQ(error_of([] { permbo::read_file("/nonexistent/permbo/file.dat"); }).kind(), ErrorKind::ParseError);
}
