#include <gtest/gtest.h>

#include "reluinv/errors.hpp"
#include "reluinv/lp_format.hpp"

namespace reluinv {
namespace {

TEST(LpFormat, ParsesSectionsRowsAndBounds) {
  const LpFileModel m = parse_lp_file(R"(\ a comment
Maximize
 obj: 3 x + 2 y - z
Subject To
 c1: x + y <= 4
 c2: x + 3 y >= -2.5
 x - z = 0
Bounds
 -1 <= x <= 10
 y free
 z <= 5
 2 >= w
Binaries
 b
End
)");
  EXPECT_TRUE(m.maximize);
  ASSERT_EQ(m.variables, (std::vector<std::string>{"x", "y", "z", "w", "b"}));
  EXPECT_EQ(m.objective[m.var("x")], 3.0);
  EXPECT_EQ(m.objective[m.var("z")], -1.0);
  ASSERT_EQ(m.rows.size(), 3u);
  EXPECT_EQ(m.row_names, (std::vector<std::string>{"c1", "c2", "r2"}));
  EXPECT_EQ(m.rows[1].sense, RowSense::GreaterEqual);
  EXPECT_EQ(m.rows[1].rhs, -2.5);
  EXPECT_EQ(m.rows[1].coeffs[m.var("y")], 3.0);
  EXPECT_EQ(m.rows[2].sense, RowSense::Equal);
  EXPECT_EQ(m.lower[m.var("x")], -1.0);
  EXPECT_EQ(m.upper[m.var("x")], 10.0);
  EXPECT_EQ(m.lower[m.var("y")], -kInfinity);
  EXPECT_EQ(m.upper[m.var("z")], 5.0);
  EXPECT_EQ(m.lower[m.var("z")], 0.0);
  EXPECT_EQ(m.upper[m.var("w")], 2.0);
  EXPECT_EQ(m.binaries, (std::vector<std::size_t>{m.var("b")}));
  EXPECT_EQ(m.upper[m.var("b")], 1.0);
  EXPECT_EQ(m.comments, (std::vector<std::string>{"a comment"}));
}

TEST(LpFormat, ProgramSolvesAsMinimization) {
  const LpFileModel m = parse_lp_file(R"(Maximize
 obj: x + y
Subject To
 c: x + 2 y <= 4
Bounds
 x <= 3
End
)");
  const LPSolution s = solve(m.program());
  ASSERT_EQ(s.status, LPStatus::Optimal);
  EXPECT_NEAR(-s.objective, 3.5, 1e-9);
}

TEST(LpFormat, GluedOperatorsAndScientificNumbers) {
  const LpFileModel m = parse_lp_file("Minimize\n obj:\nSubject To\n r: 1e-05 x - 2.5E+2 y<=-3\nBounds\n x = 4\nEnd\n");
  EXPECT_EQ(m.rows[0].coeffs[m.var("x")], 1e-05);
  EXPECT_EQ(m.rows[0].coeffs[m.var("y")], -250.0);
  EXPECT_EQ(m.rows[0].rhs, -3.0);
  EXPECT_EQ(m.lower[m.var("x")], 4.0);
  EXPECT_EQ(m.upper[m.var("x")], 4.0);
  EXPECT_EQ(m.objective.size(), 2);
  EXPECT_TRUE(m.objective.isZero());
}

TEST(LpFormat, RejectsMalformedText) {
  EXPECT_THROW(parse_lp_file("Minimize\n obj: x\nSubject To\n c: x + y\nEnd\n"), InvalidInput);
  EXPECT_THROW(parse_lp_file("Minimize\n obj: x\n"), InvalidInput);
  EXPECT_THROW(parse_lp_file("x + y <= 3\nEnd\n"), InvalidInput);
  EXPECT_THROW(parse_lp_file("Minimize\n obj: x\nGenerals\n x\nEnd\n"), InvalidInput);
  EXPECT_THROW(parse_lp_file("Minimize\n obj: 2 3 x\nEnd\n"), InvalidInput);
  EXPECT_THROW(parse_lp_file("Minimize\n obj: x\nSubject To\n c: x <= abc\nEnd\n"), InvalidInput);
  const LpFileModel m = parse_lp_file("Minimize\n obj: x\nEnd\n");
  EXPECT_THROW(m.var("nope"), InvalidInput);
}

}  // namespace
}  // namespace reluinv
