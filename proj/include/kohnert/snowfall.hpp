#pragma once

// Decorated diagrams: snow(D) with dark clouds and snowflakes, the trimmed
// variant snow*(D), the labeled greedy variant, and the greedy reduction.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "kohnert/diagram.hpp"

namespace kohnert {

struct SnowDecoration {
  Diagram base;
  std::vector<Position> dark_clouds;  // sorted
  std::vector<Position> snowflakes;   // sorted
  std::map<Position, int> labels;     // only filled by ghost_snow

  std::size_t flake_count() const { return snowflakes.size(); }

  bool has_cloud_in_row(int r) const {
    return std::any_of(dark_clouds.begin(), dark_clouds.end(),
                       [r](Position p) { return p.row == r; });
  }
};

/// Working top to bottom, each row's rightmost cell with no dark cloud above
/// it in its column becomes a dark cloud; every empty position below a dark
/// cloud gets a snowflake.
inline SnowDecoration snow(const Diagram& d) {
  require_ghost_free(d, "snow");
  SnowDecoration out{d, {}, {}, {}};
  std::set<int> clouded_columns;
  const std::vector<int> rows = d.nonempty_rows();
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    const std::vector<Cell> cells = d.row(*it);
    for (auto c = cells.rbegin(); c != cells.rend(); ++c) {
      if (!clouded_columns.contains(c->pos.col)) {
        clouded_columns.insert(c->pos.col);
        out.dark_clouds.push_back(c->pos);
        break;
      }
    }
  }
  for (Position cloud : out.dark_clouds) {
    for (int r = 1; r < cloud.row; ++r) {
      if (!d.occupied({r, cloud.col})) out.snowflakes.push_back({r, cloud.col});
    }
  }
  std::sort(out.dark_clouds.begin(), out.dark_clouds.end());
  std::sort(out.snowflakes.begin(), out.snowflakes.end());
  return out;
}

inline std::size_t sf(const Diagram& d) { return snow(d).flake_count(); }

/// snow(D) without the snowflakes that sit in nonempty rows of D.
inline SnowDecoration snow_star(const Diagram& d) {
  SnowDecoration out = snow(d);
  const std::vector<int> rows = d.nonempty_rows();
  std::erase_if(out.snowflakes, [&](Position p) {
    return std::binary_search(rows.begin(), rows.end(), p.row);
  });
  return out;
}

inline std::size_t sf_star(const Diagram& d) { return snow_star(d).flake_count(); }

/// Labels each cell with the row it is guaranteed to stay weakly above under
/// ghost moves (1 when unconstrained), then places a snowflake at each empty
/// position (r, c) below some cell whose label is at most r. No dark clouds
/// are produced.
inline SnowDecoration ghost_snow(const Diagram& d) {
  require_ghost_free(d, "ghost_snow");
  SnowDecoration out{d, {}, {}, {}};
  const std::vector<int> cols = d.nonempty_columns();
  const std::size_t m = cols.size();

  std::vector<std::vector<int>> rows_of(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (const Cell& c : d.column(cols[i])) rows_of[i].push_back(c.pos.row);
  }

  std::set<int> later_rows;  // rows occupied in columns strictly right of i
  for (std::size_t k = m; k-- > 0;) {
    const int col = cols[k];
    if (k + 1 == m) {
      for (int r : rows_of[k]) out.labels[{r, col}] = 1;
    } else {
      std::set<int> used;
      std::vector<int> free_rows;
      for (int r : rows_of[k]) {
        if (later_rows.contains(r)) {
          out.labels[{r, col}] = r;
          used.insert(r);
        } else {
          free_rows.push_back(r);
        }
      }
      // Labels already taken anywhere in this column, including those of
      // cells lower down that are blocked by their row, are unavailable.
      for (auto it = free_rows.rbegin(); it != free_rows.rend(); ++it) {
        int label = 1;
        for (auto cand = later_rows.lower_bound(*it); cand != later_rows.begin();) {
          --cand;
          if (!used.contains(*cand)) {
            label = *cand;
            break;
          }
        }
        out.labels[{*it, col}] = label;
        if (label > 1) used.insert(label);
      }
    }
    later_rows.insert(rows_of[k].begin(), rows_of[k].end());
  }

  for (std::size_t k = 0; k < m; ++k) {
    const int col = cols[k];
    const int top = rows_of[k].back();
    for (int r = 1; r < top; ++r) {
      if (d.occupied({r, col})) continue;
      const bool flake = std::any_of(rows_of[k].begin(), rows_of[k].end(), [&](int above) {
        return above > r && out.labels.at({above, col}) <= r;
      });
      if (flake) out.snowflakes.push_back({r, col});
    }
  }
  std::sort(out.snowflakes.begin(), out.snowflakes.end());
  return out;
}

inline std::size_t sf_hat(const Diagram& d) { return ghost_snow(d).flake_count(); }

/// S(D): cells that are not rightmost and have no rightmost cell above them in
/// their column. These never move under ghost moves.
inline std::vector<Position> reduction_kernel(const Diagram& d) {
  require_ghost_free(d, "reduction_kernel");
  const std::vector<Position> right = rightmost_cells(d);
  std::map<int, int> highest_rightmost;  // column -> highest row of a rightmost cell
  for (Position p : right) {
    auto [it, inserted] = highest_rightmost.emplace(p.col, p.row);
    if (!inserted) it->second = std::max(it->second, p.row);
  }
  std::vector<Position> out;
  for (const Cell& c : d.cells()) {
    auto it = highest_rightmost.find(c.pos.col);
    if (it == highest_rightmost.end() || it->second < c.pos.row) out.push_back(c.pos);
  }
  return out;
}

/// f_D(T) = T minus S(D). The caller guarantees T is reachable from D by ghost
/// moves.
inline Diagram reduce(const Diagram& d, const Diagram& t) {
  const std::vector<Position> kernel = reduction_kernel(d);
  std::vector<Cell> cells;
  for (const Cell& c : t.cells()) {
    if (!std::binary_search(kernel.begin(), kernel.end(), c.pos)) cells.push_back(c);
  }
  return Diagram(std::move(cells));
}

}  // namespace kohnert
