#pragma once

// Independent reference implementations used as oracles by the test suites.
// Nothing here calls into the move engine or the packed explorer: moves are
// re-derived from the definition on plain std::map grids.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "kohnert/diagram.hpp"
#include "kohnert/generators.hpp"

namespace oracle {

using kohnert::CellKind;
using kohnert::Diagram;
using kohnert::Position;
using kohnert::WeakComposition;

using Grid = std::map<Position, CellKind>;

inline Grid grid_of(const Diagram& d) {
  Grid g;
  for (const auto& c : d.cells()) g[c.pos] = c.kind;
  return g;
}

inline Diagram diagram_of(const Grid& g) {
  std::vector<kohnert::Cell> cells;
  for (const auto& [p, k] : g) cells.push_back({p, k});
  return Diagram(std::move(cells));
}

/// Move at row r read straight off the definition: the four triviality
/// conditions are checked one by one, in the order they are stated.
inline std::optional<Grid> move(const Grid& g, int r, bool ghost) {
  std::optional<Position> right;
  for (const auto& [p, k] : g) {
    if (p.row == r && (!right || p.col > right->col)) right = p;
  }
  if (!right) return std::nullopt;
  if (g.at(*right) == CellKind::ghost) return std::nullopt;
  const int c = right->col;
  int hat = 0;
  for (int rr = 1; rr < r; ++rr) {
    if (!g.contains({rr, c})) hat = rr;
  }
  if (hat == 0) return std::nullopt;
  for (int rs = hat + 1; rs < r; ++rs) {
    auto it = g.find({rs, c});
    if (it != g.end() && it->second == CellKind::ghost) return std::nullopt;
  }
  Grid out = g;
  out.erase(*right);
  out[{hat, c}] = CellKind::plain;
  if (ghost) out[*right] = CellKind::ghost;
  return out;
}

enum class Moves { both, ghost_only, kohnert_only };

/// Breadth-first closure over std::set<Diagram>.
inline std::set<Diagram> closure(const Diagram& start, Moves which) {
  std::set<Diagram> seen{start};
  std::deque<Diagram> queue{start};
  while (!queue.empty()) {
    const Diagram d = queue.front();
    queue.pop_front();
    const Grid g = grid_of(d);
    std::set<int> rows;
    for (const auto& [p, k] : g) rows.insert(p.row);
    for (int r : rows) {
      for (bool ghost : {false, true}) {
        if (ghost && which == Moves::kohnert_only) continue;
        if (!ghost && which == Moves::ghost_only) continue;
        if (auto next = move(g, r, ghost)) {
          Diagram nd = diagram_of(*next);
          if (seen.insert(nd).second) queue.push_back(std::move(nd));
        }
      }
    }
  }
  return seen;
}

inline std::size_t max_ghosts(const std::set<Diagram>& s) {
  std::size_t best = 0;
  for (const Diagram& d : s) best = std::max(best, d.ghost_count());
  return best;
}

/// Every weak composition with at most `parts` parts (exactly `parts` entries,
/// trailing zeros allowed) and total at most `total`.
inline std::vector<WeakComposition> compositions(int parts, int total) {
  std::vector<WeakComposition> out;
  WeakComposition cur(static_cast<std::size_t>(parts), 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i == cur.size()) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[i] = v;
      self(self, i + 1, left - v);
    }
    cur[i] = 0;
  };
  rec(rec, 0, total);
  return out;
}

/// Ghost-free diagrams in a rows x cols box with at most max_cells cells.
inline std::vector<Diagram> box_diagrams(int rows, int cols, int max_cells) {
  std::vector<Diagram> out;
  const int n = rows * cols;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > max_cells) continue;
    std::vector<Position> cells;
    for (int b = 0; b < n; ++b) {
      if (mask >> b & 1u) cells.push_back({b / cols + 1, b % cols + 1});
    }
    out.push_back(Diagram::of(cells));
  }
  return out;
}

/// Seeded family of random ghost-free diagrams in a rows x cols box.
inline std::vector<Diagram> random_diagrams(std::size_t count, int rows, int cols, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<Diagram> out;
  while (out.size() < count) {
    std::vector<Position> cells;
    for (int r = 1; r <= rows; ++r) {
      for (int c = 1; c <= cols; ++c) {
        if (coin(rng)) cells.push_back({r, c});
      }
    }
    out.push_back(Diagram::of(cells));
  }
  return out;
}

/// Snowflake count from a second, row-by-row scan: in each row, from the
/// top, the rightmost cell whose column has no cloud yet becomes a cloud.
inline std::size_t snowflakes(const Diagram& d) {
  std::set<int> used_cols;
  std::size_t flakes = 0;
  for (int r = d.max_row(); r >= 1; --r) {
    int best = 0;
    for (const auto& c : d.cells()) {
      if (c.pos.row == r && !used_cols.contains(c.pos.col)) best = std::max(best, c.pos.col);
    }
    if (best == 0) continue;
    used_cols.insert(best);
    for (int below = 1; below < r; ++below) {
      if (!d.occupied({below, best})) ++flakes;
    }
  }
  return flakes;
}

}  // namespace oracle
