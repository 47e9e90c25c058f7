#pragma once

// Cell labelings of diagrams reachable from a start diagram: the lock-tableau
// labeling of lock diagrams (extended to ghost cells), the recursive labeling
// defined for arbitrary start diagrams, and an exhaustive checker for the
// structural properties of the lock labeling.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kohnert/diagram.hpp"
#include "kohnert/explorer.hpp"
#include "kohnert/generators.hpp"
#include "kohnert/moves.hpp"

namespace kohnert {

struct LabeledDiagram {
  Diagram diagram;
  std::map<Position, int> labels;

  int label(Position p) const { return labels.at(p); }
  friend bool operator==(const LabeledDiagram&, const LabeledDiagram&) = default;
};

namespace detail {

inline Diagram replay_or_throw(const MoveSequence& path, const char* op) {
  const ReplayResult r = replay(path);
  if (!r.ok) {
    throw std::invalid_argument(std::string(op) + ": path does not replay at step " +
                                std::to_string(r.failed_step) + " (" + r.reason + ")");
  }
  return r.final;
}

}  // namespace detail

/// Labels forced on T by the lock tableau conditions: within a column, plain
/// cells take the rows of that column of D in increasing order, bottom to
/// top. A ghost cell copies the label of the highest plain cell below it.
inline LabeledDiagram lock_labels(const Diagram& lock, const Diagram& t) {
  LabeledDiagram out{t, {}};
  for (int col : t.nonempty_columns()) {
    std::vector<int> source;
    for (const Cell& c : lock.column(col)) source.push_back(c.pos.row);
    std::size_t next = 0;
    std::optional<int> below;
    for (const Cell& c : t.column(col)) {
      if (c.kind == CellKind::plain) {
        if (next >= source.size()) {
          throw std::invalid_argument("column " + std::to_string(col) +
                                      " holds more plain cells than the lock diagram");
        }
        below = source[next++];
        out.labels[c.pos] = *below;
      } else {
        if (!below) {
          throw std::invalid_argument("ghost cell " + to_string(c.pos) + " has no plain cell below it");
        }
        out.labels[c.pos] = *below;
      }
    }
    if (next != source.size()) {
      throw std::invalid_argument("column " + std::to_string(col) +
                                  " holds fewer plain cells than the lock diagram");
    }
  }
  return out;
}

/// Content 1^a1 2^a2 ... n^an plus the four tableau conditions: each j sits
/// once in every column from N-a_j+1 to N, entries in row r are at least r,
/// equal entries weakly descend left to right, and columns strictly decrease
/// going down.
inline bool is_lock_tableau(const LabeledDiagram& l, const WeakComposition& alpha) {
  require_ghost_free(l.diagram, "is_lock_tableau");
  require_composition(alpha);
  if (l.labels.size() != l.diagram.size()) return false;
  const int n = static_cast<int>(alpha.size());
  const int big_n = alpha.empty() ? 0 : *std::max_element(alpha.begin(), alpha.end());
  std::map<int, std::vector<Position>> by_label;
  for (const Cell& c : l.diagram.cells()) {
    const auto it = l.labels.find(c.pos);
    if (it == l.labels.end()) return false;
    const int v = it->second;
    if (v < 1 || v > n) return false;
    if (v < c.pos.row) return false;
    by_label[v].push_back(c.pos);
  }
  for (int j = 1; j <= n; ++j) {
    const int a = alpha[static_cast<std::size_t>(j - 1)];
    std::vector<Position>& cells = by_label[j];
    if (static_cast<int>(cells.size()) != a) return false;
    std::set<int> cols;
    for (Position p : cells) cols.insert(p.col);
    if (static_cast<int>(cols.size()) != a) return false;
    if (a > 0 && (*cols.begin() != big_n - a + 1 || *cols.rbegin() != big_n)) return false;
    std::sort(cells.begin(), cells.end(), [](Position x, Position y) { return x.col < y.col; });
    for (std::size_t i = 1; i < cells.size(); ++i) {
      if (cells[i].row > cells[i - 1].row) return false;
    }
  }
  for (int col : l.diagram.nonempty_columns()) {
    int prev = 0;
    for (const Cell& c : l.diagram.column(col)) {
      const int v = l.labels.at(c.pos);
      if (v <= prev) return false;
      prev = v;
    }
  }
  return true;
}

/// Labels of the diagram reached by path from a lock diagram. The plain
/// cells must form a lock tableau; std::logic_error otherwise.
inline LabeledDiagram label_lock_path(const Diagram& d, const MoveSequence& path) {
  const auto alpha = as_lock_diagram(d);
  if (!alpha) throw std::invalid_argument("label_lock_path: not a lock diagram");
  if (path.start != d) throw std::invalid_argument("label_lock_path: path does not start at D");
  const Diagram t = detail::replay_or_throw(path, "label_lock_path");
  LabeledDiagram out = lock_labels(d, t);

  LabeledDiagram plain{t.plain_part(), {}};
  for (const Cell& c : plain.diagram.cells()) plain.labels[c.pos] = out.labels.at(c.pos);
  if (!is_lock_tableau(plain, *alpha)) {
    throw std::logic_error("label_lock_path: plain cells of the reached diagram do not form a lock tableau");
  }
  return out;
}

/// One step of the recursive labeling. `before` labels the diagram the move
/// was applied to; `move` is the nontrivial move record.
inline std::map<Position, int> relabel_after_move(const std::map<Position, int>& before,
                                                  const MoveRecord& move) {
  const int rs = move.from.row;
  const int cs = move.from.col;
  const int k = move.from.row - move.to.row;
  std::map<Position, int> after = before;
  after.erase(move.from);
  for (int j = 1; j <= k; ++j) after[{rs - j, cs}] = before.at({rs - j + 1, cs});
  for (int j = 1; j < k; ++j) {
    const int bar = before.at({rs - j, cs});
    const int lifted = before.at({rs - j + 1, cs});
    for (auto it = before.lower_bound({rs - j, cs + 1}); it != before.end() && it->first.row == rs - j;
         ++it) {
      if (it->second <= bar) after[it->first] = lifted;
    }
  }
  if (move.kind == MoveKind::ghost) after[move.from] = before.at(move.from);
  return after;
}

/// Recursive labeling along a path: start cells are labeled by their rows,
/// and every move updates labels with relabel_after_move.
inline LabeledDiagram label_general_path(const Diagram& d, const MoveSequence& path) {
  require_ghost_free(d, "label_general_path");
  if (path.start != d) throw std::invalid_argument("label_general_path: path does not start at D");
  const Diagram t = detail::replay_or_throw(path, "label_general_path");
  std::map<Position, int> labels;
  for (const Cell& c : d.cells()) labels[c.pos] = c.pos.row;
  for (const MoveRecord& m : path.steps) labels = relabel_after_move(labels, m);
  return {t, std::move(labels)};
}

/// Every ghost-free diagram whose forced labeling is a lock tableau of
/// content alpha. Rows never exceed the length of alpha.
inline std::vector<Diagram> lock_tableau_shapes(const WeakComposition& alpha) {
  const Diagram lock = lock_diagram(alpha);
  const int n = static_cast<int>(alpha.size());
  const std::vector<int> cols = lock.nonempty_columns();
  std::vector<Diagram> out;
  std::vector<Cell> cells;
  std::function<void(std::size_t)> go = [&](std::size_t ci) {
    if (ci == cols.size()) {
      const Diagram t(cells);
      LabeledDiagram l = lock_labels(lock, t);
      if (is_lock_tableau(l, alpha)) out.push_back(t);
      return;
    }
    const int need = static_cast<int>(lock.column(cols[ci]).size());
    for (std::uint32_t m = 0; m < (std::uint32_t{1} << n); ++m) {
      if (std::popcount(m) != need) continue;
      const std::size_t mark = cells.size();
      for (int b = 0; b < n; ++b) {
        if (m >> b & 1u) cells.push_back({{b + 1, cols[ci]}, CellKind::plain});
      }
      go(ci + 1);
      cells.resize(mark);
    }
  };
  go(0);
  std::sort(out.begin(), out.end());
  return out;
}

struct ClauseResult {
  std::string name;
  bool pass = true;
  std::size_t checked = 0;
  std::string counterexample;
};

struct ColorpReport {
  bool complete = true;
  std::size_t members = 0;
  std::size_t edges = 0;
  std::vector<ClauseResult> clauses;

  bool all_pass() const {
    return complete && std::all_of(clauses.begin(), clauses.end(),
                                   [](const ClauseResult& c) { return c.pass; });
  }
  const ClauseResult& clause(std::string_view name) const {
    for (const auto& c : clauses) {
      if (c.name == name) return c;
    }
    throw std::out_of_range("no clause " + std::string(name));
  }
};

/// Evaluates the lock-labeling properties (a) to (i) over every member of
/// KKD(D), plus two consistency checks: "tableau" (plain labels form a lock
/// tableau) and "well-defined" (along every single-move edge the recursive
/// relabeling of the parent's labels equals the child's labels, so the
/// recursive labeling cannot depend on the path taken).
inline ColorpReport check_colorp(const Diagram& d, const SearchLimits& limits = {}) {
  const auto alpha = as_lock_diagram(d);
  if (!alpha) throw std::invalid_argument("check_colorp: not a lock diagram");
  const ReachableSet set = enumerate_kkd(d, limits);
  ColorpReport report;
  report.complete = set.complete();
  report.members = set.size();

  const char* names[] = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "tableau", "well-defined"};
  for (const char* n : names) report.clauses.push_back({n, true, 0, {}});
  auto clause = [&](std::size_t idx) -> ClauseResult& { return report.clauses[idx]; };
  auto fail = [&](std::size_t idx, const Diagram& t, const std::string& what) {
    ClauseResult& c = clause(idx);
    if (!c.pass) return;
    c.pass = false;
    c.counterexample = what + "\n" + render_ascii(t);
  };

  std::vector<LabeledDiagram> labeled;
  labeled.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) labeled.push_back(lock_labels(d, set.member(i)));

  for (std::size_t i = 0; i < set.size(); ++i) {
    const LabeledDiagram& l = labeled[i];
    const Diagram& t = l.diagram;
    std::vector<Cell> plain, ghosts;
    for (const Cell& c : t.cells()) (c.kind == CellKind::plain ? plain : ghosts).push_back(c);

    for (int col : d.nonempty_columns()) {
      ++clause(0).checked;
      std::set<int> want, got;
      for (const Cell& c : d.column(col)) want.insert(c.pos.row);
      for (const Cell& c : t.column(col)) {
        if (c.kind == CellKind::plain) got.insert(l.label(c.pos));
      }
      if (want != got) fail(0, t, "column " + std::to_string(col) + " label set differs");
    }
    for (const Cell& c : plain) {
      ++clause(1).checked;
      if (c.pos.row > l.label(c.pos)) fail(1, t, "label below row at " + to_string(c.pos));
    }
    for (const Cell& x : plain) {
      for (const Cell& y : plain) {
        if (x.pos.col == y.pos.col && x.pos.row < y.pos.row) {
          ++clause(2).checked;
          if (l.label(x.pos) >= l.label(y.pos)) {
            fail(2, t, "column order broken between " + to_string(x.pos) + " and " + to_string(y.pos));
          }
        }
        if (x.pos != y.pos && l.label(x.pos) == l.label(y.pos)) {
          ++clause(3).checked;
          if (x.pos.col == y.pos.col || (x.pos.col < y.pos.col && x.pos.row < y.pos.row)) {
            fail(3, t, "equal labels at " + to_string(x.pos) + " and " + to_string(y.pos));
          }
        }
      }
    }
    for (const Cell& g : ghosts) {
      ++clause(6).checked;
      if (g.pos.row > l.label(g.pos)) fail(6, t, "ghost label below row at " + to_string(g.pos));
      for (const Cell& h : ghosts) {
        if (g.pos.row == h.pos.row && g.pos.col < h.pos.col) {
          ++clause(7).checked;
          if (l.label(g.pos) >= l.label(h.pos)) {
            fail(7, t, "ghost row order broken in row " + std::to_string(g.pos.row));
          }
        }
        if (h.pos.row == g.pos.row + 1 && l.label(g.pos) < l.label(h.pos)) {
          ++clause(8).checked;
          if (!(g.pos.col < h.pos.col)) {
            fail(8, t, "ghosts " + to_string(g.pos) + " and " + to_string(h.pos) + " out of order");
          }
        }
      }
    }
    {
      ++clause(9).checked;
      LabeledDiagram p{t.plain_part(), {}};
      for (const Cell& c : plain) p.labels[c.pos] = l.label(c.pos);
      if (!is_lock_tableau(p, *alpha)) fail(9, t, "plain labels are not a lock tableau");
    }

    set.for_each_child(i, [&](std::size_t child, const MoveRecord& m) {
      ++report.edges;
      const LabeledDiagram& lc = labeled[child];
      for (const Cell& g : ghosts) {
        ++clause(4).checked;
        if (!lc.diagram.has_ghost(g.pos) || lc.label(g.pos) != l.label(g.pos)) {
          fail(4, lc.diagram, "ghost " + to_string(g.pos) + " not preserved by move at row " +
                                  std::to_string(m.row));
        }
      }
      if (m.kind == MoveKind::ghost) {
        ++clause(5).checked;
        if (lc.label(m.from) != l.label(m.from)) {
          fail(5, lc.diagram, "new ghost " + to_string(m.from) + " changed label");
        }
      }
      ++clause(10).checked;
      if (relabel_after_move(l.labels, m) != lc.labels) {
        fail(10, lc.diagram, "recursive relabeling disagrees after move at row " + std::to_string(m.row) +
                                 " (" + to_string(m.kind) + ")");
      }
    });
  }
  return report;
}

}  // namespace kohnert
