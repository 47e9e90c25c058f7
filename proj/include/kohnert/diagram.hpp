#pragma once

// Diagrams: finite sets of cells in the first quadrant, each cell plain or
// ghost. Coordinates are 1-based, row 1 at the bottom, column 1 on the left.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kohnert {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation's documented precondition does not hold
/// (for example a ghost cell passed to an operation on ghost-free diagrams).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Position {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Position&, const Position&) = default;
};

inline std::string to_string(Position p) {
  return "(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")";
}

enum class CellKind : std::uint8_t { plain, ghost };

struct Cell {
  Position pos;
  CellKind kind = CellKind::plain;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

using WeakComposition = std::vector<int>;

/// Signed monomial (-1)^g * prod x_r^{e_r}; zero exponents are not stored.
struct SignedMonomial {
  int sign = 1;
  std::map<int, int> exponents;

  int total_degree() const {
    int d = 0;
    for (const auto& [row, e] : exponents) d += e;
    return d;
  }
  friend bool operator==(const SignedMonomial&, const SignedMonomial&) = default;
};

/// Immutable value type. Cells are kept sorted by (row, col, kind), which is
/// also the canonical order used for hashing and serialization.
class Diagram {
 public:
  Diagram() = default;

  explicit Diagram(std::vector<Cell> cells) : cells_(std::move(cells)) {
    std::sort(cells_.begin(), cells_.end());
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      const Position p = cells_[i].pos;
      if (p.row < 1 || p.col < 1) {
        throw std::invalid_argument("cell position must be 1-based: " + to_string(p));
      }
      if (i > 0 && cells_[i - 1].pos == p) {
        throw std::invalid_argument("duplicate cell at " + to_string(p));
      }
    }
  }

  /// Convenience constructor: plain cells followed by ghost cells.
  static Diagram of(std::initializer_list<Position> plain,
                    std::initializer_list<Position> ghosts = {}) {
    return of(std::vector<Position>(plain), std::vector<Position>(ghosts));
  }

  static Diagram of(const std::vector<Position>& plain,
                    const std::vector<Position>& ghosts = {}) {
    std::vector<Cell> cells;
    cells.reserve(plain.size() + ghosts.size());
    for (Position p : plain) cells.push_back({p, CellKind::plain});
    for (Position p : ghosts) cells.push_back({p, CellKind::ghost});
    return Diagram(std::move(cells));
  }

  const std::vector<Cell>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }
  std::size_t size() const { return cells_.size(); }

  std::optional<CellKind> at(Position p) const {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), p,
                               [](const Cell& c, Position q) { return c.pos < q; });
    if (it != cells_.end() && it->pos == p) return it->kind;
    return std::nullopt;
  }
  bool occupied(Position p) const { return at(p).has_value(); }
  bool has_plain(Position p) const { return at(p) == CellKind::plain; }
  bool has_ghost(Position p) const { return at(p) == CellKind::ghost; }

  std::size_t ghost_count() const {
    return static_cast<std::size_t>(std::count_if(
        cells_.begin(), cells_.end(), [](const Cell& c) { return c.kind == CellKind::ghost; }));
  }
  std::size_t plain_count() const { return cells_.size() - ghost_count(); }
  bool has_ghosts() const { return ghost_count() > 0; }

  int max_row() const { return cells_.empty() ? 0 : cells_.back().pos.row; }
  int max_col() const {
    int m = 0;
    for (const Cell& c : cells_) m = std::max(m, c.pos.col);
    return m;
  }

  std::vector<int> nonempty_rows() const {
    std::vector<int> rows;
    for (const Cell& c : cells_) {
      if (rows.empty() || rows.back() != c.pos.row) rows.push_back(c.pos.row);
    }
    return rows;
  }

  std::vector<int> nonempty_columns() const {
    std::set<int> cols;
    for (const Cell& c : cells_) cols.insert(c.pos.col);
    return {cols.begin(), cols.end()};
  }

  /// Cells of row r, ordered by column.
  std::vector<Cell> row(int r) const {
    auto lo = std::lower_bound(cells_.begin(), cells_.end(), Position{r, 0},
                               [](const Cell& c, Position q) { return c.pos < q; });
    std::vector<Cell> out;
    for (auto it = lo; it != cells_.end() && it->pos.row == r; ++it) out.push_back(*it);
    return out;
  }

  /// Cells of column c, ordered by row.
  std::vector<Cell> column(int c) const {
    std::vector<Cell> out;
    for (const Cell& cell : cells_) {
      if (cell.pos.col == c) out.push_back(cell);
    }
    return out;
  }

  /// Rightmost cell (of either kind) in row r.
  std::optional<Cell> rightmost_in_row(int r) const {
    auto hi = std::lower_bound(cells_.begin(), cells_.end(), Position{r + 1, 0},
                               [](const Cell& c, Position q) { return c.pos < q; });
    if (hi == cells_.begin()) return std::nullopt;
    --hi;
    if (hi->pos.row != r) return std::nullopt;
    return *hi;
  }

  Diagram with(Cell cell) const {
    std::vector<Cell> cells = cells_;
    cells.push_back(cell);
    return Diagram(std::move(cells));
  }

  Diagram without(Position p) const {
    std::vector<Cell> cells;
    cells.reserve(cells_.size());
    for (const Cell& c : cells_) {
      if (c.pos != p) cells.push_back(c);
    }
    Diagram d;
    d.cells_ = std::move(cells);
    return d;
  }

  /// Ghost-free copy keeping only the plain cells.
  Diagram plain_part() const {
    Diagram d;
    for (const Cell& c : cells_) {
      if (c.kind == CellKind::plain) d.cells_.push_back(c);
    }
    return d;
  }

  std::vector<Position> positions() const {
    std::vector<Position> out;
    out.reserve(cells_.size());
    for (const Cell& c : cells_) out.push_back(c.pos);
    return out;
  }

  friend bool operator==(const Diagram&, const Diagram&) = default;
  friend auto operator<=>(const Diagram& a, const Diagram& b) { return a.cells_ <=> b.cells_; }

 private:
  std::vector<Cell> cells_;
};

struct DiagramHash {
  std::size_t operator()(const Diagram& d) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (const Cell& c : d.cells()) {
      const std::uint64_t v = (static_cast<std::uint64_t>(c.pos.row) << 33) ^
                              (static_cast<std::uint64_t>(c.pos.col) << 1) ^
                              static_cast<std::uint64_t>(c.kind);
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

inline void require_ghost_free(const Diagram& d, std::string_view op) {
  if (d.has_ghosts()) {
    throw ContractViolation(std::string(op) + ": diagram must not contain ghost cells");
  }
}

// ---------------------------------------------------------------------------
// ASCII grid: lines top to bottom, '.' empty, 'O' plain, 'X' ghost.

inline std::string render_ascii(const Diagram& d) {
  const int rows = d.max_row();
  const int cols = d.max_col();
  std::string out;
  out.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols + 1));
  for (int r = rows; r >= 1; --r) {
    for (int c = 1; c <= cols; ++c) {
      const auto k = d.at({r, c});
      out.push_back(!k ? '.' : (*k == CellKind::ghost ? 'X' : 'O'));
    }
    out.push_back('\n');
  }
  return out;
}

inline Diagram parse_ascii(std::string_view text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  if (std::all_of(lines.begin(), lines.end(), [](const std::string& l) { return l.empty(); })) {
    return {};
  }
  const std::size_t width = lines.front().size();
  std::vector<Cell> cells;
  const int nrows = static_cast<int>(lines.size());
  for (int i = 0; i < nrows; ++i) {
    const std::string& line = lines[static_cast<std::size_t>(i)];
    if (line.size() != width) {
      throw ParseError("line " + std::to_string(i + 1) + ": expected " + std::to_string(width) +
                       " characters, found " + std::to_string(line.size()));
    }
    const int row = nrows - i;
    for (std::size_t j = 0; j < line.size(); ++j) {
      const int col = static_cast<int>(j) + 1;
      switch (line[j]) {
        case '.': break;
        case 'O': cells.push_back({{row, col}, CellKind::plain}); break;
        case 'X': cells.push_back({{row, col}, CellKind::ghost}); break;
        default:
          throw ParseError("line " + std::to_string(i + 1) + ", column " + std::to_string(col) +
                           ": unknown character '" + std::string(1, line[j]) + "'");
      }
    }
  }
  return Diagram(std::move(cells));
}

// ---------------------------------------------------------------------------
// Derived sets.

/// R(D): plain cells with no cell of either kind further right in their row.
inline std::vector<Position> rightmost_cells(const Diagram& d) {
  std::vector<Position> out;
  for (int r : d.nonempty_rows()) {
    const auto cell = d.rightmost_in_row(r);
    if (cell && cell->kind == CellKind::plain) out.push_back(cell->pos);
  }
  return out;
}

inline std::vector<Position> ghost_cells(const Diagram& d) {
  std::vector<Position> out;
  for (const Cell& c : d.cells()) {
    if (c.kind == CellKind::ghost) out.push_back(c.pos);
  }
  return out;
}

inline SignedMonomial weight(const Diagram& d) {
  SignedMonomial m;
  m.sign = (d.ghost_count() % 2 == 0) ? 1 : -1;
  for (const Cell& c : d.cells()) ++m.exponents[c.pos.row];
  return m;
}

/// Left-justifies the nonempty columns.
inline Diagram flat(const Diagram& d) {
  require_ghost_free(d, "flat");
  const std::vector<int> cols = d.nonempty_columns();
  std::vector<Cell> cells;
  cells.reserve(d.size());
  for (const Cell& c : d.cells()) {
    const auto idx = std::lower_bound(cols.begin(), cols.end(), c.pos.col) - cols.begin();
    cells.push_back({{c.pos.row, static_cast<int>(idx) + 1}, c.kind});
  }
  return Diagram(std::move(cells));
}

inline Diagram restrict_columns(const Diagram& d, const std::set<int>& columns) {
  std::vector<Cell> cells;
  for (const Cell& c : d.cells()) {
    if (columns.contains(c.pos.col)) cells.push_back(c);
  }
  return Diagram(std::move(cells));
}

/// Key(D): every row filled from column 1 out to its rightmost cell.
inline Diagram key_closure(const Diagram& d) {
  require_ghost_free(d, "key_closure");
  std::vector<Cell> cells;
  for (int r : d.nonempty_rows()) {
    const int right = d.rightmost_in_row(r)->pos.col;
    for (int c = 1; c <= right; ++c) cells.push_back({{r, c}, CellKind::plain});
  }
  return Diagram(std::move(cells));
}

}  // namespace kohnert

template <>
struct std::hash<kohnert::Diagram> : kohnert::DiagramHash {};
