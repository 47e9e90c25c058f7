#pragma once

// Constructive move sequences reaching the maximum ghost count for the
// diagram families where a closed form is known, and certificate replay.
//
// Every solver checks its own output against the corresponding snowflake
// count before returning and throws std::logic_error on a mismatch.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kohnert/diagram.hpp"
#include "kohnert/explorer.hpp"
#include "kohnert/generators.hpp"
#include "kohnert/moves.hpp"
#include "kohnert/snowfall.hpp"

namespace kohnert {

struct Certificate {
  MoveSequence moves;
  std::size_t claimed_ghosts = 0;

  const Diagram& start() const { return moves.start; }
};

struct CertificateCheck {
  Diagram final;
  std::size_t ghosts = 0;
  bool ok = true;
  std::optional<std::size_t> failed_step;
  std::string reason;
};

inline CertificateCheck verify_certificate(const Certificate& cert) {
  const ReplayResult r = replay(cert.moves);
  CertificateCheck out{r.final, r.final.ghost_count(), r.ok, std::nullopt, r.reason};
  if (!r.ok) {
    out.failed_step = r.failed_step;
    return out;
  }
  if (out.ghosts != cert.claimed_ghosts) {
    out.ok = false;
    out.reason = "final diagram has " + std::to_string(out.ghosts) + " ghost cells, certificate claims " +
                 std::to_string(cert.claimed_ghosts);
  }
  return out;
}

namespace detail {

/// Appends nontrivial moves to a growing sequence. Trivial moves are dropped
/// so the recorded sequence always replays cleanly.
class MoveRecorder {
 public:
  explicit MoveRecorder(Diagram start) : seq_{start, {}}, current_(std::move(start)) {}

  void apply(int row, MoveKind kind) {
    auto [next, rec] = apply_move(current_, row, kind);
    if (rec.trivial()) return;
    seq_.steps.push_back(rec);
    current_ = std::move(next);
  }

  void repeat(int row, MoveKind kind, int times) {
    for (int i = 0; i < times; ++i) apply(row, kind);
  }

  const Diagram& current() const { return current_; }

  Certificate finish(std::size_t expected, const char* solver, const char* formula) {
    const std::size_t got = current_.ghost_count();
    if (got != expected) {
      throw std::logic_error(std::string(solver) + ": construction produced " + std::to_string(got) +
                             " ghost cells but " + formula + " = " + std::to_string(expected));
    }
    return {std::move(seq_), got};
  }

 private:
  MoveSequence seq_;
  Diagram current_;
};

inline Diagram plain_in_columns(const Diagram& d, const std::set<int>& cols) {
  std::vector<Cell> cells;
  for (const Cell& c : d.cells()) {
    if (c.kind == CellKind::plain && cols.contains(c.pos.col)) cells.push_back(c);
  }
  return Diagram(std::move(cells));
}

}  // namespace detail

/// Works through the columns carrying dark clouds from left to right. For the
/// leftmost one, every row from just above its lowest empty block down to row
/// 2 gets N-1 Kohnert moves and one ghost move, where N is the number of cells
/// of the lowest occupied row in that column and to its right. The remaining
/// columns form a smaller generalized skew diagram and are handled the same
/// way.
inline Certificate solve_generalized_skew(const Diagram& d) {
  if (d.has_ghosts() || !is_generalized_skew(d)) {
    throw std::invalid_argument("solve_generalized_skew: diagram is not a generalized skew diagram");
  }
  detail::MoveRecorder rec(d);
  const std::vector<int> all = d.nonempty_columns();
  std::set<int> active(all.begin(), all.end());
  while (!active.empty()) {
    const Diagram part = detail::plain_in_columns(rec.current(), active);
    const SnowDecoration s = snow(part);
    if (s.dark_clouds.empty()) break;
    Position cloud = s.dark_clouds.front();
    for (Position p : s.dark_clouds) {
      if (p.col < cloud.col) cloud = p;
    }
    int hat = 0;
    for (int r = cloud.row - 1; r >= 1; --r) {
      if (!part.occupied({r, cloud.col})) {
        hat = r;
        break;
      }
    }
    if (hat > 0) {
      int n = 0;
      for (const Cell& c : part.row(hat + 1)) {
        if (c.pos.col >= cloud.col) ++n;
      }
      for (int r = hat + 1; r >= 2; --r) {
        rec.repeat(r, MoveKind::kohnert, n - 1);
        rec.apply(r, MoveKind::ghost);
      }
    }
    std::erase_if(active, [&](int c) { return c <= cloud.col; });
  }
  return rec.finish(sf(d), "solve_generalized_skew", "sf");
}

/// Key diagrams have no direct construction here: the certificate is the
/// shortest witness path found by exhaustive search, checked against sf.
inline Certificate solve_key(const Diagram& d, const SearchLimits& limits = {}) {
  if (!is_key_diagram(d)) throw std::invalid_argument("solve_key: not a key diagram");
  const MaxGResult r = maxg_brute(d, limits);
  if (!r.exact) throw std::runtime_error("solve_key: search limit reached before the enumeration finished");
  if (r.count != sf(d)) {
    throw std::logic_error("solve_key: search found " + std::to_string(r.count) + " ghost cells but sf = " +
                           std::to_string(sf(d)));
  }
  return {r.path, r.count};
}

/// Follows the nonempty rows r_i with r_i > i in increasing order. Each such
/// row is walked down to row i+1, and at every stop it gets a block of
/// Kohnert moves followed by one ghost move (or only Kohnert moves for the
/// single row without a dark cloud).
inline Certificate solve_lock(const Diagram& d) {
  if (!as_lock_diagram(d)) throw std::invalid_argument("solve_lock: not a lock diagram");
  if (!lockmain_qualifies(d)) {
    throw std::invalid_argument("solve_lock: more than one row r_i > i lacks a dark cloud");
  }
  const std::vector<int> rows = d.nonempty_rows();
  const int n = static_cast<int>(rows.size());
  const SnowDecoration s = snow(d);
  std::optional<int> k;  // 1-based index of the cloudless row, if any
  for (int i = 1; i <= n; ++i) {
    const int r = rows[static_cast<std::size_t>(i - 1)];
    if (r > i && !s.has_cloud_in_row(r)) k = i;
  }
  int ell = n + 1;
  for (int i = 1; i <= n; ++i) {
    if (rows[static_cast<std::size_t>(i - 1)] > i) {
      ell = i;
      break;
    }
  }

  detail::MoveRecorder rec(d);
  for (int i = ell; i <= n; ++i) {
    const int ri = rows[static_cast<std::size_t>(i - 1)];
    const int mi = static_cast<int>(d.row(ri).size());
    for (int rho = ri; rho >= i + 1; --rho) {
      if (k && i < *k) {
        rec.repeat(rho, MoveKind::kohnert, n - i - 1);
        rec.apply(rho, MoveKind::ghost);
      } else if (k && i == *k) {
        rec.repeat(rho, MoveKind::kohnert, std::min(mi, n - i));
      } else {
        rec.repeat(rho, MoveKind::kohnert, n - i);
        rec.apply(rho, MoveKind::ghost);
      }
    }
  }
  return rec.finish(sf_star(d), "solve_lock", "snow* flake count");
}

/// Ghost moves only, one column at a time from left to right. Within a
/// column, repeatedly move the highest cell that is rightmost in its row
/// (ignoring the column's own ghosts) until that move has nowhere to go.
inline Certificate solve_greedy(const Diagram& d) {
  require_ghost_free(d, "solve_greedy");
  detail::MoveRecorder rec(d);
  for (int col : d.nonempty_columns()) {
    for (;;) {
      std::vector<Cell> view;
      for (const Cell& c : rec.current().cells()) {
        if (!(c.pos.col == col && c.kind == CellKind::ghost)) view.push_back(c);
      }
      const Diagram without_own_ghosts(std::move(view));
      std::optional<int> top;
      for (Position p : rightmost_cells(without_own_ghosts)) {
        if (p.col == col) top = p.row;
      }
      if (!top) break;
      const std::size_t before = rec.current().ghost_count();
      rec.apply(*top, MoveKind::ghost);
      if (rec.current().ghost_count() == before) break;
    }
  }
  return rec.finish(sf_hat(d), "solve_greedy", "greedy snowflake count");
}

enum class Strategy : std::uint8_t { automatic, key, skew, lock, greedy };

inline Strategy parse_strategy(std::string_view s) {
  if (s == "auto") return Strategy::automatic;
  if (s == "key") return Strategy::key;
  if (s == "skew") return Strategy::skew;
  if (s == "lock") return Strategy::lock;
  if (s == "greedy") return Strategy::greedy;
  throw std::invalid_argument("unknown strategy '" + std::string(s) + "'");
}

/// The solver whose certificate is known to reach MaxG, falling back to the
/// ghost-only greedy construction (which reaches the ghost-only maximum).
inline Certificate solve(const Diagram& d, Strategy strategy = Strategy::automatic,
                         const SearchLimits& limits = {}) {
  switch (strategy) {
    case Strategy::key: return solve_key(d, limits);
    case Strategy::skew: return solve_generalized_skew(d);
    case Strategy::lock: return solve_lock(d);
    case Strategy::greedy: return solve_greedy(d);
    case Strategy::automatic: break;
  }
  require_ghost_free(d, "solve");
  if (is_generalized_skew(d)) return solve_generalized_skew(d);
  if (is_key_diagram(d)) return solve_key(d, limits);
  if (as_lock_diagram(d) && lockmain_qualifies(d)) return solve_lock(d);
  return solve_greedy(d);
}

}  // namespace kohnert
