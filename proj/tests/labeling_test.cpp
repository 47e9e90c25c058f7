#include <gtest/gtest.h>

#include "kohnert/explorer.hpp"
#include "kohnert/generators.hpp"
#include "kohnert/labeling.hpp"
#include "support.hpp"

namespace {

using namespace kohnert;

const Diagram kLock = lock_diagram({0, 0, 3, 2, 3});

// A Kohnert-only descendant of kLock with its expected labels.
const std::map<Position, int> kT1Labels{{{1, 2}, 3}, {{1, 3}, 3}, {{2, 3}, 4}, {{3, 1}, 3},
                                        {{3, 2}, 4}, {{3, 3}, 5}, {{5, 1}, 5}, {{5, 2}, 5}};

Diagram t1() {
  std::vector<Position> cells;
  for (const auto& [p, l] : kT1Labels) cells.push_back(p);
  return Diagram::of(cells);
}

Diagram t2() {
  std::vector<Position> cells;
  for (const auto& [p, l] : kT1Labels) cells.push_back(p);
  return Diagram::of(cells, {{2, 2}, {4, 2}, {4, 3}});
}

MoveSequence path_to(const Diagram& start, const Diagram& target) {
  const ReachableSet r = enumerate_kkd(start);
  const auto i = r.find(target);
  if (!i) throw std::runtime_error("target not reachable");
  return r.path_to(*i);
}

TEST(LockLabels, EmptyPathLabelsRows) {
  const LabeledDiagram l = label_lock_path(kLock, {kLock, {}});
  for (const auto& [p, v] : l.labels) EXPECT_EQ(v, p.row);
  EXPECT_TRUE(is_lock_tableau(l, {0, 0, 3, 2, 3}));
}

TEST(LockLabels, KohnertOnlyDescendant) {
  const LabeledDiagram l = label_lock_path(kLock, path_to(kLock, t1()));
  EXPECT_EQ(l.labels, kT1Labels);
  EXPECT_TRUE(is_lock_tableau(l, {0, 0, 3, 2, 3}));
}

TEST(LockLabels, GhostsCarryLabelsOfTheirCells) {
  const LabeledDiagram l = label_lock_path(kLock, path_to(kLock, t2()));
  EXPECT_EQ(l.label({2, 2}), 3);
  EXPECT_EQ(l.label({4, 2}), 4);
  EXPECT_EQ(l.label({4, 3}), 5);
  for (const auto& [p, v] : kT1Labels) EXPECT_EQ(l.label(p), v);
}

TEST(LockLabels, PathMustReplayFromD) {
  MoveSequence bad{kLock, {MoveRecord{5, MoveKind::kohnert, {5, 3}, {1, 3}}}};
  EXPECT_THROW(label_lock_path(kLock, bad), std::invalid_argument);
  EXPECT_THROW(label_lock_path(kLock, {key_diagram({1}), {}}), std::invalid_argument);
  EXPECT_THROW(label_lock_path(key_diagram({1, 2}), {key_diagram({1, 2}), {}}), std::invalid_argument);
}

TEST(LockTableau, NegativeControl) {
  LabeledDiagram l{t1(), kT1Labels};
  EXPECT_TRUE(is_lock_tableau(l, {0, 0, 3, 2, 3}));
  // Swap the two labels of column 3 rows 2 and 3, so the column no longer increases upward.
  std::swap(l.labels[{2, 3}], l.labels[{3, 3}]);
  EXPECT_FALSE(is_lock_tableau(l, {0, 0, 3, 2, 3}));
  EXPECT_FALSE(is_lock_tableau({t1(), kT1Labels}, {0, 0, 3, 3, 2}));
}

TEST(LockTableau, ShapesAreExactlyKohnertOnlyClosure) {
  for (const auto& alpha : oracle::compositions(3, 4)) {
    const Diagram d = lock_diagram(alpha);
    const auto shapes = lock_tableau_shapes(alpha);
    const std::set<Diagram> expect = oracle::closure(d, oracle::Moves::kohnert_only);
    EXPECT_EQ(std::set<Diagram>(shapes.begin(), shapes.end()), expect) << render_ascii(d);
  }
}

TEST(GeneralLabels, EmptyPathAndSingleGhostMove) {
  const Diagram d = Diagram::of({{2, 1}});
  EXPECT_EQ(label_general_path(d, {d, {}}).labels, (std::map<Position, int>{{{2, 1}, 2}}));
  const auto [next, rec] = ghost_move(d, 2);
  const LabeledDiagram l = label_general_path(d, {d, {rec}});
  EXPECT_EQ(l.diagram, next);
  EXPECT_EQ(l.labels, (std::map<Position, int>{{{1, 1}, 2}, {{2, 1}, 2}}));
}

TEST(GeneralLabels, AgreeWithLockLabelsOnEveryMember) {
  for (const auto& alpha : oracle::compositions(3, 4)) {
    const Diagram d = lock_diagram(alpha);
    const ReachableSet r = enumerate_kkd(d);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const MoveSequence path = r.path_to(i);
      EXPECT_EQ(label_general_path(d, path), label_lock_path(d, path)) << render_ascii(r.member(i));
    }
  }
}

TEST(Colorp, SelectedLocks) {
  for (const WeakComposition& alpha : {WeakComposition{0, 0, 3, 2, 3}, WeakComposition{1}, WeakComposition{0, 2, 2}}) {
    const ColorpReport rep = check_colorp(lock_diagram(alpha));
    EXPECT_TRUE(rep.complete);
    for (const ClauseResult& c : rep.clauses) EXPECT_TRUE(c.pass) << c.name << ": " << c.counterexample;
  }
  EXPECT_THROW(check_colorp(key_diagram({1, 2})), std::invalid_argument);
}

TEST(Colorp, SmallLocksAllPass) {
  for (const auto& alpha : oracle::compositions(3, 4)) {
    const ColorpReport rep = check_colorp(lock_diagram(alpha));
    EXPECT_TRUE(rep.all_pass());
    EXPECT_EQ(rep.clauses.size(), 11u);
  }
}

}  // namespace
