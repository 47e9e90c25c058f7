#pragma once

// Kohnert and ghost moves. A move at row r takes the rightmost cell of the
// row down to the highest empty position below it in the same column; a ghost
// move additionally leaves a ghost cell behind. Moves that cannot fire are
// identities (trivial), not errors.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kohnert/diagram.hpp"

namespace kohnert {

enum class MoveKind : std::uint8_t { kohnert, ghost };

inline std::string to_string(MoveKind k) { return k == MoveKind::kohnert ? "kohnert" : "ghost"; }

inline MoveKind parse_move_kind(std::string_view s) {
  if (s == "kohnert") return MoveKind::kohnert;
  if (s == "ghost") return MoveKind::ghost;
  throw std::invalid_argument("unknown move kind '" + std::string(s) + "'");
}

/// from == to iff the move was trivial. For an empty row both are (row, 0).
struct MoveRecord {
  int row = 0;
  MoveKind kind = MoveKind::kohnert;
  Position from;
  Position to;

  bool trivial() const { return from == to; }
  friend bool operator==(const MoveRecord&, const MoveRecord&) = default;
};

struct MoveSequence {
  Diagram start;
  std::vector<MoveRecord> steps;
};

namespace detail {

/// Target row of a move at row r, or nullopt when the move is trivial.
inline std::optional<std::pair<Position, int>> move_target(const Diagram& d, int r) {
  const auto cell = d.rightmost_in_row(r);
  if (!cell || cell->kind == CellKind::ghost) return std::nullopt;
  const int c = cell->pos.col;
  int target = 0;
  for (int below = r - 1; below >= 1; --below) {
    if (!d.occupied({below, c})) {
      target = below;
      break;
    }
  }
  if (target == 0) return std::nullopt;
  // Every position strictly between target and r is occupied, so a ghost
  // anywhere in that range sits between the cell and its landing spot.
  for (int between = target + 1; between < r; ++between) {
    if (d.has_ghost({between, c})) return std::nullopt;
  }
  return std::pair{cell->pos, target};
}

}  // namespace detail

inline std::pair<Diagram, MoveRecord> apply_move(const Diagram& d, int r, MoveKind kind) {
  if (r < 1) throw std::invalid_argument("move row must be >= 1, got " + std::to_string(r));
  const auto target = detail::move_target(d, r);
  if (!target) {
    const auto cell = d.rightmost_in_row(r);
    const Position at = cell ? cell->pos : Position{r, 0};
    return {d, MoveRecord{r, kind, at, at}};
  }
  const auto [from, to_row] = *target;
  const Position to{to_row, from.col};
  std::vector<Cell> cells;
  cells.reserve(d.size() + 1);
  for (const Cell& c : d.cells()) {
    if (c.pos != from) cells.push_back(c);
  }
  cells.push_back({to, CellKind::plain});
  if (kind == MoveKind::ghost) cells.push_back({from, CellKind::ghost});
  return {Diagram(std::move(cells)), MoveRecord{r, kind, from, to}};
}

inline std::pair<Diagram, MoveRecord> kohnert_move(const Diagram& d, int r) {
  return apply_move(d, r, MoveKind::kohnert);
}

inline std::pair<Diagram, MoveRecord> ghost_move(const Diagram& d, int r) {
  return apply_move(d, r, MoveKind::ghost);
}

/// Nontrivial moves in ascending row order, Kohnert before ghost.
inline std::vector<MoveRecord> legal_moves(const Diagram& d) {
  std::vector<MoveRecord> out;
  for (int r : d.nonempty_rows()) {
    const auto target = detail::move_target(d, r);
    if (!target) continue;
    const Position to{target->second, target->first.col};
    out.push_back({r, MoveKind::kohnert, target->first, to});
    out.push_back({r, MoveKind::ghost, target->first, to});
  }
  return out;
}

struct ReplayResult {
  Diagram final;
  bool ok = true;
  std::size_t failed_step = 0;
  std::string reason;
};

/// Replays steps from the start diagram, checking each recorded from/to and
/// that no step is trivial.
inline ReplayResult replay(const MoveSequence& seq) {
  ReplayResult res{seq.start, true, 0, {}};
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    const MoveRecord& want = seq.steps[i];
    if (want.row < 1) {
      return {res.final, false, i, "step " + std::to_string(i) + ": row must be >= 1"};
    }
    auto [next, got] = apply_move(res.final, want.row, want.kind);
    if (got.trivial()) {
      return {res.final, false, i, "step " + std::to_string(i) + ": move is trivial"};
    }
    if (got != want) {
      return {res.final, false, i,
              "step " + std::to_string(i) + ": recorded " + to_string(want.from) + "->" +
                  to_string(want.to) + " but replay gives " + to_string(got.from) + "->" +
                  to_string(got.to)};
    }
    res.final = std::move(next);
  }
  return res;
}

}  // namespace kohnert
