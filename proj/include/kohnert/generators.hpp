#pragma once

// Diagram families (key, lock, skew, checkered) and the structural checks
// that decide which closed-form ghost count applies.

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kohnert/diagram.hpp"
#include "kohnert/snowfall.hpp"

namespace kohnert {

inline void require_composition(const WeakComposition& alpha) {
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("weak composition parts must be non-negative");
  }
}

/// Row i holds columns 1..alpha_i.
inline Diagram key_diagram(const WeakComposition& alpha) {
  require_composition(alpha);
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (int j = 1; j <= alpha[i]; ++j) {
      cells.push_back({{static_cast<int>(i) + 1, j}, CellKind::plain});
    }
  }
  return Diagram(std::move(cells));
}

/// Row i holds columns N-alpha_i+1..N with N = max(alpha).
inline Diagram lock_diagram(const WeakComposition& alpha) {
  require_composition(alpha);
  const int n = alpha.empty() ? 0 : *std::max_element(alpha.begin(), alpha.end());
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (int j = n - alpha[i] + 1; j <= n; ++j) {
      cells.push_back({{static_cast<int>(i) + 1, j}, CellKind::plain});
    }
  }
  return Diagram(std::move(cells));
}

inline Diagram skew_diagram(const WeakComposition& alpha) {
  require_composition(alpha);
  const std::size_t n = alpha.size();
  std::vector<int> shift(n, 0);
  // Rows k >= j move right when the previous nonempty row is longer than row j.
  for (std::size_t j = 0; j < n; ++j) {
    if (alpha[j] == 0) continue;
    for (std::size_t i = j; i-- > 0;) {
      if (alpha[i] > 0) {
        if (alpha[i] > alpha[j]) {
          for (std::size_t k = j; k < n; ++k) shift[k] += alpha[i] - alpha[j];
        }
        break;
      }
    }
  }
  int zeros_below = 0;
  std::vector<Cell> cells;
  for (std::size_t j = 0; j < n; ++j) {
    for (int c = 1; c <= alpha[j]; ++c) {
      cells.push_back({{static_cast<int>(j) + 1, c + shift[j] + zeros_below}, CellKind::plain});
    }
    if (alpha[j] == 0) ++zeros_below;
  }
  return Diagram(std::move(cells));
}

enum class Parity { even, odd };

inline Diagram checkered_diagram(int n, Parity parity) {
  if (n < 1) throw std::invalid_argument("checkered diagram size must be >= 1");
  std::vector<Cell> cells;
  for (int r = 1; r <= n; ++r) {
    for (int c = 1; c <= n; ++c) {
      const bool even = (r + c) % 2 == 0;
      if (even == (parity == Parity::even)) cells.push_back({{r, c}, CellKind::plain});
    }
  }
  return Diagram(std::move(cells));
}

/// Row counts for rows 1..max_row.
inline WeakComposition row_counts(const Diagram& d) {
  WeakComposition alpha(static_cast<std::size_t>(d.max_row()), 0);
  for (const Cell& c : d.cells()) ++alpha[static_cast<std::size_t>(c.pos.row - 1)];
  return alpha;
}

inline bool is_key_diagram(const Diagram& d) {
  return !d.has_ghosts() && key_closure(d) == d;
}

/// The composition of D when D is a lock diagram.
inline std::optional<WeakComposition> as_lock_diagram(const Diagram& d) {
  if (d.has_ghosts()) return std::nullopt;
  WeakComposition alpha = row_counts(d);
  if (lock_diagram(alpha) != d) return std::nullopt;
  return alpha;
}

struct SkewCheck {
  bool ok = true;
  /// First offending pair of rows; both entries equal for a gap inside a row.
  std::optional<std::pair<int, int>> violating_rows;
  std::string reason;

  explicit operator bool() const { return ok; }
};

inline SkewCheck is_generalized_skew(const Diagram& d) {
  require_ghost_free(d, "is_generalized_skew");
  const std::vector<int> rows = d.nonempty_rows();
  int prev_left = 0, prev_right = 0, prev_row = 0;
  for (int r : rows) {
    const std::vector<Cell> cells = d.row(r);
    const int left = cells.front().pos.col;
    const int right = cells.back().pos.col;
    if (right - left + 1 != static_cast<int>(cells.size())) {
      return {false, std::pair{r, r}, "row " + std::to_string(r) + " has a gap"};
    }
    if (prev_row != 0) {
      if (left < prev_left) {
        return {false, std::pair{prev_row, r},
                "leftmost column decreases from row " + std::to_string(prev_row) + " to row " +
                    std::to_string(r)};
      }
      if (right < prev_right) {
        return {false, std::pair{prev_row, r},
                "rightmost column decreases from row " + std::to_string(prev_row) + " to row " +
                    std::to_string(r)};
      }
    }
    prev_left = left;
    prev_right = right;
    prev_row = r;
  }
  return {};
}

/// Rows r_i (i = 1..n) with r_i > i that carry no dark cloud in snow(D).
inline std::vector<int> lock_cloudless_rows(const Diagram& d) {
  if (!as_lock_diagram(d)) throw ContractViolation("lockmain_qualifies: not a lock diagram");
  const SnowDecoration s = snow(d);
  const std::vector<int> rows = d.nonempty_rows();
  std::vector<int> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int r = rows[i];
    if (r > static_cast<int>(i) + 1 && !s.has_cloud_in_row(r)) out.push_back(r);
  }
  return out;
}

/// True when at most one row r_i > i of snow(D) lacks a dark cloud, which is
/// when the trimmed snowflake count snow*(D) gives the exact maximum.
inline bool lockmain_qualifies(const Diagram& d) { return lock_cloudless_rows(d).size() <= 1; }

using ColumnPartition = std::vector<std::set<int>>;

struct PartitionCheck {
  bool ok = true;
  std::size_t block = 0;  // index of the failing block
  char clause = 0;        // 'a', 'b' or 'c'
  std::string reason;

  explicit operator bool() const { return ok; }
};

/// Checks the three block conditions under which sf(D) bounds the maximum
/// ghost count from above: each flattened block is a key diagram or a
/// generalized skew diagram whose dark clouds match those of its key closure
/// (a); a column has a dark cloud in its block iff it has one in D (b); and the
/// D cloud sits weakly below the block cloud with no gap between them (c).
inline PartitionCheck verify_column_partition(const Diagram& d, const ColumnPartition& blocks) {
  require_ghost_free(d, "verify_column_partition");
  const std::vector<int> cols = d.nonempty_columns();
  std::set<int> seen;
  for (const auto& block : blocks) {
    if (block.empty()) throw std::invalid_argument("column partition has an empty block");
    for (int c : block) {
      if (!seen.insert(c).second) {
        throw std::invalid_argument("column " + std::to_string(c) + " appears in two blocks");
      }
    }
  }
  if (!std::equal(seen.begin(), seen.end(), cols.begin(), cols.end())) {
    throw std::invalid_argument("blocks must cover exactly the nonempty columns");
  }

  const SnowDecoration whole = snow(d);
  auto cloud_row = [](const SnowDecoration& s, int c) -> std::optional<int> {
    for (Position p : s.dark_clouds) {
      if (p.col == c) return p.row;
    }
    return std::nullopt;
  };

  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Diagram part = restrict_columns(d, blocks[i]);
    const Diagram flattened = flat(part);
    const bool key = is_key_diagram(flattened);
    const bool skew = is_generalized_skew(flattened).ok &&
                      snow(key_closure(flattened)).dark_clouds == snow(flattened).dark_clouds;
    if (!key && !skew) {
      return {false, i, 'a', "flattened block is neither key nor a matching generalized skew"};
    }
    const SnowDecoration local = snow(part);
    for (int c : blocks[i]) {
      const auto in_block = cloud_row(local, c);
      const auto in_whole = cloud_row(whole, c);
      if (in_block.has_value() != in_whole.has_value()) {
        return {false, i, 'b', "dark cloud presence differs in column " + std::to_string(c)};
      }
      if (!in_block) continue;
      if (*in_whole > *in_block) {
        return {false, i, 'c', "dark cloud of D lies above the block's in column " +
                                   std::to_string(c)};
      }
      for (int r = *in_whole; r <= *in_block; ++r) {
        if (!d.has_plain({r, c})) {
          return {false, i, 'c', "gap between dark clouds in column " + std::to_string(c)};
        }
      }
    }
  }
  return {};
}

}  // namespace kohnert
