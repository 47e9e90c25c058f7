#include <gtest/gtest.h>

#include <set>

#include "kohnert/diagram.hpp"
#include "kohnert/generators.hpp"
#include "kohnert/io.hpp"
#include "support.hpp"

namespace {

using namespace kohnert;

Diagram ghosted_key() {
  return Diagram::of({{1, 1}, {1, 2}, {1, 3}, {1, 4}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {3, 3}, {4, 1}, {5, 1}, {5, 2}},
                     {{2, 1}, {2, 4}, {3, 4}, {4, 2}, {4, 3}, {5, 3}});
}

TEST(Parse, AsciiTopLineIsHighestRow) {
  const Diagram d = parse_ascii("O.\nXO\n");
  EXPECT_EQ(d, Diagram::of({{2, 1}, {1, 2}}, {{1, 1}}));
}

TEST(Parse, EmptyTextIsEmptyDiagram) {
  EXPECT_TRUE(parse_ascii("").empty());
  EXPECT_TRUE(io::parse_diagram("").empty());
}

TEST(Parse, StructuredRecord) {
  const Diagram d = io::parse_diagram(R"({"cells":[[2,1],[2,2],[3,2]],"ghosts":[]})");
  EXPECT_EQ(d, Diagram::of({{2, 1}, {2, 2}, {3, 2}}));
}

TEST(Parse, FinalNewlineIsOptional) { EXPECT_EQ(parse_ascii("O.\n.O"), parse_ascii("O.\n.O\n")); }

TEST(Parse, RaggedLinesNameTheLine) {
  try {
    parse_ascii("OO\nO\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Parse, UnknownCharacter) { EXPECT_THROW(parse_ascii("O#\n"), ParseError); }

TEST(Parse, DuplicatePositionAcrossListsIsRejected) {
  EXPECT_THROW(io::parse_diagram(R"({"cells":[[1,1]],"ghosts":[[1,1]]})"), ParseError);
  EXPECT_THROW(io::parse_diagram(R"({"cells":[[0,1]]})"), ParseError);
  EXPECT_THROW(io::parse_diagram(R"({"cells":[[1,1]})"), ParseError);
}

TEST(Diagram, SecondCellAtAPositionIsRejected) {
  const Diagram d = Diagram::of({{1, 1}});
  EXPECT_THROW(d.with({{1, 1}, CellKind::ghost}), std::invalid_argument);
  EXPECT_THROW(Diagram::of({{0, 1}}), std::invalid_argument);
}

TEST(Render, Staircase) {
  EXPECT_EQ(render_ascii(Diagram::of({{1, 3}, {2, 1}, {2, 2}, {3, 1}})), "O..\nOO.\n..O\n");
  EXPECT_EQ(render_ascii(Diagram{}), "");
}

TEST(Render, RoundTripsEveryBoxDiagramWithGhostVariants) {
  // Each 3x3 diagram, plus the same cells with every other cell turned into a ghost.
  for (const Diagram& d : oracle::box_diagrams(3, 3, 9)) {
    EXPECT_EQ(parse_ascii(render_ascii(d)), d);
    std::vector<Cell> mixed;
    bool flip = false;
    for (Cell c : d.cells()) {
      if (flip) c.kind = CellKind::ghost;
      flip = !flip;
      mixed.push_back(c);
    }
    const Diagram g(mixed);
    EXPECT_EQ(parse_ascii(render_ascii(g)), g);
    EXPECT_EQ(io::diagram_from_json(io::to_json(g)), g);
  }
}

TEST(Rightmost, Examples) {
  EXPECT_EQ(rightmost_cells(Diagram::of({{2, 1}, {2, 2}, {3, 2}})), (std::vector<Position>{{2, 2}, {3, 2}}));
  // Row 1 ends in a ghost, so it contributes nothing; (2,2) has nothing to its right.
  EXPECT_EQ(rightmost_cells(Diagram::of({{2, 2}, {3, 2}}, {{1, 3}, {2, 1}})),
            (std::vector<Position>{{2, 2}, {3, 2}}));
  EXPECT_TRUE(rightmost_cells(Diagram{}).empty());
}

TEST(Rightmost, AgreesWithSetBuilderScan) {
  for (const Diagram& d : oracle::random_diagrams(200, 4, 5, 11)) {
    std::vector<Position> expect;
    for (const Cell& c : d.cells()) {
      bool right = true;
      for (const Cell& o : d.cells()) {
        if (o.pos.row == c.pos.row && o.pos.col > c.pos.col) right = false;
      }
      if (right && c.kind == CellKind::plain) expect.push_back(c.pos);
    }
    EXPECT_EQ(rightmost_cells(d), expect);
  }
}

TEST(GhostCells, Examples) {
  EXPECT_EQ(ghost_cells(Diagram::of({{2, 2}, {3, 2}}, {{1, 3}, {2, 1}})), (std::vector<Position>{{1, 3}, {2, 1}}));
  EXPECT_TRUE(ghost_cells(key_diagram({2, 1})).empty());
  EXPECT_EQ(ghost_cells(ghosted_key()).size(), 6u);
}

TEST(Weight, KeyDiagram) {
  const SignedMonomial m = weight(key_diagram({0, 1, 2, 2}));
  EXPECT_EQ(m.sign, 1);
  EXPECT_EQ(m.exponents, (std::map<int, int>{{2, 1}, {3, 2}, {4, 2}}));
  EXPECT_EQ(weight(Diagram{}), SignedMonomial{});
}

TEST(Weight, GhostedKeyDiagram) {
  const SignedMonomial m = weight(ghosted_key());
  EXPECT_EQ(m.sign, 1);
  EXPECT_EQ(m.exponents, (std::map<int, int>{{1, 4}, {2, 4}, {3, 4}, {4, 3}, {5, 3}}));
  EXPECT_EQ(m.total_degree(), 18);
}

TEST(Weight, TotalDegreeIsCellCount) {
  for (const Diagram& d : oracle::random_diagrams(100, 5, 5, 3)) {
    EXPECT_EQ(static_cast<std::size_t>(weight(d).total_degree()), d.size());
  }
  EXPECT_EQ(weight(Diagram::of({{2, 1}}, {{3, 1}})).sign, -1);
}

TEST(Flat, Examples) {
  EXPECT_EQ(flat(Diagram::of({{1, 3}, {3, 3}})), Diagram::of({{1, 1}, {3, 1}}));
  EXPECT_EQ(flat(Diagram::of({{1, 2}, {2, 5}})), Diagram::of({{1, 1}, {2, 2}}));
  EXPECT_THROW(flat(Diagram::of({}, {{1, 1}})), ContractViolation);
}

TEST(Flat, IdempotentAndKeepsColumnContents) {
  for (const Diagram& d : oracle::random_diagrams(100, 4, 6, 5)) {
    const Diagram f = flat(d);
    EXPECT_EQ(flat(f), f);
    const auto cols = d.nonempty_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      std::vector<int> before, after;
      for (const Cell& c : d.column(cols[i])) before.push_back(c.pos.row);
      for (const Cell& c : f.column(static_cast<int>(i) + 1)) after.push_back(c.pos.row);
      EXPECT_EQ(before, after);
    }
  }
}

TEST(Restrict, Examples) {
  const Diagram d = Diagram::of({{1, 1}, {1, 2}});
  EXPECT_EQ(restrict_columns(d, {2}), Diagram::of({{1, 2}}));
  EXPECT_EQ(restrict_columns(d, {1, 2}), d);
  EXPECT_TRUE(restrict_columns(d, {}).empty());
}

TEST(Restrict, NestedRestrictionIsIntersection) {
  for (const Diagram& d : oracle::random_diagrams(50, 4, 6, 9)) {
    const std::set<int> a{1, 2, 4, 5}, b{2, 3, 5};
    EXPECT_EQ(restrict_columns(restrict_columns(d, a), b), restrict_columns(d, {2, 5}));
  }
}

TEST(KeyClosure, Examples) {
  EXPECT_EQ(key_closure(Diagram::of({{2, 3}})), Diagram::of({{2, 1}, {2, 2}, {2, 3}}));
  const Diagram k = key_diagram({0, 3, 4, 2, 3});
  EXPECT_EQ(key_closure(k), k);
  // Rows 2, 4 and 5 end at columns 3, 4 and 6.
  const Diagram skew = Diagram::of({{2, 2}, {2, 3}, {4, 4}, {5, 4}, {5, 5}, {5, 6}});
  EXPECT_EQ(key_closure(skew), key_diagram({0, 3, 0, 4, 6}));
}

TEST(KeyClosure, ContainsAndIsIdempotent) {
  for (const Diagram& d : oracle::random_diagrams(100, 4, 5, 21)) {
    const Diagram k = key_closure(d);
    for (const Cell& c : d.cells()) EXPECT_TRUE(k.has_plain(c.pos));
    EXPECT_EQ(key_closure(k), k);
    EXPECT_TRUE(is_key_diagram(k));
  }
}

}  // namespace
