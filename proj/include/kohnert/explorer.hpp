#pragma once

// Exhaustive enumeration of the diagrams reachable under K-Kohnert moves
// (KKD), ghost moves only (GKD) or Kohnert moves only (KD), with brute-force
// maxima, witness paths and Lascoux polynomial assembly.
//
// Cells never change column, so a state is stored as one (plain, ghost) pair
// of row bitmasks per nonempty column of the start diagram. Rows never exceed
// the start diagram's highest row.

#include <bit>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kohnert/diagram.hpp"
#include "kohnert/generators.hpp"
#include "kohnert/moves.hpp"
#include "kohnert/snowfall.hpp"

namespace kohnert {

struct SearchLimits {
  std::size_t max_states = 5'000'000;
  double max_seconds = 300.0;
};

enum class MoveSet : std::uint8_t { kkd, gkd, kd };

enum class SearchStatus : std::uint8_t { complete, state_limit, time_limit };

inline std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::complete: return "complete";
    case SearchStatus::state_limit: return "state-limit";
    case SearchStatus::time_limit: return "time-limit";
  }
  return "unknown";
}

namespace detail {

constexpr int kMaxPackedRows = 63;

struct PackedMove {
  int row;
  MoveKind kind;
  std::uint16_t column_index;
  int to_row;
};

class PackedLayout {
 public:
  PackedLayout() = default;
  explicit PackedLayout(const Diagram& start)
      : columns_(start.nonempty_columns()), rows_(start.max_row()) {
    if (rows_ > kMaxPackedRows) {
      throw std::invalid_argument("enumeration supports at most " +
                                  std::to_string(kMaxPackedRows) + " rows");
    }
  }

  std::size_t words() const { return 2 * columns_.size(); }
  const std::vector<int>& columns() const { return columns_; }

  void pack(const Diagram& d, std::uint64_t* out) const {
    std::fill(out, out + words(), 0);
    for (const Cell& c : d.cells()) {
      const auto it = std::lower_bound(columns_.begin(), columns_.end(), c.pos.col);
      if (it == columns_.end() || *it != c.pos.col || c.pos.row > rows_) {
        throw std::invalid_argument("cell " + to_string(c.pos) + " outside the packed layout");
      }
      const std::size_t j = static_cast<std::size_t>(it - columns_.begin());
      out[2 * j + (c.kind == CellKind::ghost ? 1 : 0)] |= std::uint64_t{1} << (c.pos.row - 1);
    }
  }

  Diagram unpack(const std::uint64_t* in) const {
    std::vector<Cell> cells;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      for (int kind = 0; kind < 2; ++kind) {
        std::uint64_t bits = in[2 * j + static_cast<std::size_t>(kind)];
        while (bits) {
          const int b = std::countr_zero(bits);
          bits &= bits - 1;
          cells.push_back({{b + 1, columns_[j]}, kind ? CellKind::ghost : CellKind::plain});
        }
      }
    }
    return Diagram(std::move(cells));
  }

  /// Calls f(PackedMove, const uint64_t* child) for each nontrivial move
  /// allowed by the move set, in ascending row order, Kohnert before ghost.
  template <class F>
  void expand(const std::uint64_t* state, MoveSet moves, std::uint64_t* scratch, F&& f) const {
    const std::size_t ncols = columns_.size();
    std::uint64_t rows_mask = 0;
    for (std::size_t j = 0; j < ncols; ++j) rows_mask |= state[2 * j] | state[2 * j + 1];
    while (rows_mask) {
      const int b = std::countr_zero(rows_mask);
      rows_mask &= rows_mask - 1;
      const std::uint64_t bit = std::uint64_t{1} << b;
      std::size_t j = ncols;
      while (j-- > 0) {
        if ((state[2 * j] | state[2 * j + 1]) & bit) break;
      }
      const std::uint64_t plain = state[2 * j];
      const std::uint64_t ghost = state[2 * j + 1];
      if (ghost & bit) continue;
      const std::uint64_t below = bit - 1;
      const std::uint64_t free = ~(plain | ghost) & below;
      if (!free) continue;
      const int t = 63 - std::countl_zero(free);
      const std::uint64_t between = below & ~((std::uint64_t{2} << t) - 1);
      if (ghost & between) continue;
      for (int k = 0; k < 2; ++k) {
        const MoveKind kind = k ? MoveKind::ghost : MoveKind::kohnert;
        if (kind == MoveKind::ghost && moves == MoveSet::kd) continue;
        if (kind == MoveKind::kohnert && moves == MoveSet::gkd) continue;
        std::copy(state, state + words(), scratch);
        scratch[2 * j] = (plain & ~bit) | (std::uint64_t{1} << t);
        if (kind == MoveKind::ghost) scratch[2 * j + 1] = ghost | bit;
        f(PackedMove{b + 1, kind, static_cast<std::uint16_t>(j), t + 1},
          static_cast<const std::uint64_t*>(scratch));
      }
    }
  }

  MoveRecord record(const PackedMove& m) const {
    const int col = columns_[m.column_index];
    return {m.row, m.kind, {m.row, col}, {m.to_row, col}};
  }

 private:
  std::vector<int> columns_;
  int rows_ = 0;
};

inline std::uint64_t hash_words(const std::uint64_t* w, std::size_t n) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ n;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t x = w[i] + 0x9e3779b97f4a7c15ULL * (i + 1);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    h = (h ^ x) * 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return h;
}

struct Link {
  std::uint32_t parent;
  PackedMove move;
};

/// States are appended to a flat arena; an open-addressing table of state
/// indices provides dedup.
class StateStore {
 public:
  explicit StateStore(std::size_t stride) : stride_(stride), slots_(1024, kEmpty) {}

  std::size_t size() const { return count_; }
  std::size_t stride() const { return stride_; }
  const std::uint64_t* state(std::size_t i) const { return arena_.data() + i * stride_; }

  std::optional<std::size_t> find(const std::uint64_t* w) const {
    const std::uint64_t h = hash_words(w, stride_);
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t s = h & mask;; s = (s + 1) & mask) {
      const std::uint32_t idx = slots_[s];
      if (idx == kEmpty) return std::nullopt;
      if (std::equal(w, w + stride_, state(idx))) return idx;
    }
  }

  /// Returns (index, inserted).
  std::pair<std::size_t, bool> insert(const std::uint64_t* w) {
    if ((count_ + 1) * 2 > slots_.size()) grow();
    const std::uint64_t h = hash_words(w, stride_);
    const std::size_t mask = slots_.size() - 1;
    std::size_t s = h & mask;
    for (;; s = (s + 1) & mask) {
      const std::uint32_t idx = slots_[s];
      if (idx == kEmpty) break;
      if (std::equal(w, w + stride_, state(idx))) return {idx, false};
    }
    arena_.insert(arena_.end(), w, w + stride_);
    slots_[s] = static_cast<std::uint32_t>(count_);
    return {count_++, true};
  }

 private:
  static constexpr std::uint32_t kEmpty = 0xffffffffu;

  void grow() {
    std::vector<std::uint32_t> next(slots_.size() * 2, kEmpty);
    const std::size_t mask = next.size() - 1;
    for (std::size_t i = 0; i < count_; ++i) {
      std::size_t s = hash_words(state(i), stride_) & mask;
      while (next[s] != kEmpty) s = (s + 1) & mask;
      next[s] = static_cast<std::uint32_t>(i);
    }
    slots_.swap(next);
  }

  std::size_t stride_;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> arena_;
  std::vector<std::uint32_t> slots_;
};

}  // namespace detail

/// Closure of a start diagram under a move set. Members are numbered in
/// breadth-first discovery order; member 0 is the start diagram. Cheap to
/// copy (shared, immutable storage).
class ReachableSet {
 public:
  const Diagram& start() const { return impl_->start; }
  MoveSet move_set() const { return impl_->moves; }
  SearchStatus status() const { return impl_->status; }
  bool complete() const { return impl_->status == SearchStatus::complete; }
  std::size_t size() const { return impl_->store.size(); }

  Diagram member(std::size_t i) const { return impl_->layout.unpack(impl_->store.state(i)); }

  std::vector<Diagram> members() const {
    std::vector<Diagram> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(member(i));
    return out;
  }

  std::size_t ghost_count(std::size_t i) const {
    const std::uint64_t* w = impl_->store.state(i);
    std::size_t g = 0;
    for (std::size_t j = 1; j < impl_->store.stride(); j += 2) {
      g += static_cast<std::size_t>(std::popcount(w[j]));
    }
    return g;
  }

  std::optional<std::size_t> find(const Diagram& d) const {
    std::vector<std::uint64_t> w(impl_->layout.words());
    try {
      impl_->layout.pack(d, w.data());
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
    return impl_->store.find(w.data());
  }

  bool contains(const Diagram& d) const { return find(d).has_value(); }

  /// Move that first discovered member i (none for the start).
  std::optional<std::pair<std::size_t, MoveRecord>> discovered_by(std::size_t i) const {
    if (i == 0) return std::nullopt;
    const detail::Link& l = impl_->links[i];
    return std::pair{static_cast<std::size_t>(l.parent), impl_->layout.record(l.move)};
  }

  /// Replayable move sequence from the start to member i along first-discovery
  /// parents (a shortest path).
  MoveSequence path_to(std::size_t i) const {
    std::vector<MoveRecord> steps;
    while (i != 0) {
      const detail::Link& l = impl_->links[i];
      steps.push_back(impl_->layout.record(l.move));
      i = l.parent;
    }
    std::reverse(steps.begin(), steps.end());
    return {start(), std::move(steps)};
  }

  /// Calls f(child_index, MoveRecord) for each nontrivial move out of member
  /// i whose result is a member.
  template <class F>
  void for_each_child(std::size_t i, F&& f) const {
    std::vector<std::uint64_t> scratch(impl_->layout.words());
    impl_->layout.expand(impl_->store.state(i), impl_->moves, scratch.data(),
                         [&](const detail::PackedMove& m, const std::uint64_t* child) {
                           if (auto idx = impl_->store.find(child)) f(*idx, impl_->layout.record(m));
                         });
  }

 private:
  struct Impl {
    Diagram start;
    MoveSet moves;
    detail::PackedLayout layout;
    detail::StateStore store;
    std::vector<detail::Link> links;
    SearchStatus status = SearchStatus::complete;
  };
  std::shared_ptr<const Impl> impl_;

  friend ReachableSet enumerate(const Diagram&, MoveSet, const SearchLimits&);
};

inline ReachableSet enumerate(const Diagram& start, MoveSet moves, const SearchLimits& limits) {
  if (limits.max_states == 0 || !(limits.max_seconds > 0)) {
    throw std::invalid_argument("search limits must be positive");
  }
  if (moves != MoveSet::kkd) require_ghost_free(start, "enumerate");
  using clock = std::chrono::steady_clock;
  const auto deadline =
      clock::now() + std::chrono::duration_cast<clock::duration>(
                         std::chrono::duration<double>(limits.max_seconds));

  detail::PackedLayout layout(start);
  auto impl = std::make_shared<ReachableSet::Impl>(
      ReachableSet::Impl{start, moves, layout, detail::StateStore(layout.words()), {}, {}});
  std::vector<std::uint64_t> cur(layout.words()), scratch(layout.words());
  layout.pack(start, cur.data());
  impl->store.insert(cur.data());
  impl->links.push_back({0, {}});

  for (std::size_t i = 0; i < impl->store.size(); ++i) {
    if ((i & 1023) == 1023 && clock::now() > deadline) {
      impl->status = SearchStatus::time_limit;
      break;
    }
    // The arena may reallocate while children are inserted.
    std::copy(impl->store.state(i), impl->store.state(i) + layout.words(), cur.begin());
    bool full = false;
    layout.expand(cur.data(), moves, scratch.data(),
                  [&](const detail::PackedMove& m, const std::uint64_t* child) {
                    if (full) return;
                    if (impl->store.size() >= limits.max_states && !impl->store.find(child)) {
                      full = true;
                      return;
                    }
                    if (impl->store.insert(child).second) {
                      impl->links.push_back({static_cast<std::uint32_t>(i), m});
                    }
                  });
    if (full) {
      impl->status = SearchStatus::state_limit;
      break;
    }
  }
  ReachableSet out;
  out.impl_ = std::move(impl);
  return out;
}

inline ReachableSet enumerate_kkd(const Diagram& d, const SearchLimits& limits = {}) {
  return enumerate(d, MoveSet::kkd, limits);
}

inline ReachableSet enumerate_gkd(const Diagram& d, const SearchLimits& limits = {}) {
  require_ghost_free(d, "enumerate_gkd");
  return enumerate(d, MoveSet::gkd, limits);
}

inline ReachableSet enumerate_kd(const Diagram& d, const SearchLimits& limits = {}) {
  return enumerate(d, MoveSet::kd, limits);
}

struct CoverEdge {
  std::size_t parent;
  std::size_t child;
  MoveRecord move;
};

/// Single-move edges between distinct members, one per (parent, child) pair.
inline std::vector<CoverEdge> cover_relations(const ReachableSet& set) {
  if (!set.complete()) throw std::invalid_argument("cover_relations needs a complete enumeration");
  std::vector<CoverEdge> out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const std::size_t first = out.size();
    set.for_each_child(i, [&](std::size_t child, const MoveRecord& m) {
      if (child == i) return;
      for (std::size_t e = first; e < out.size(); ++e) {
        if (out[e].child == child) return;
      }
      out.push_back({i, child, m});
    });
  }
  return out;
}

struct MaxGResult {
  std::size_t count = 0;
  bool exact = true;  // false: enumeration hit a limit, count is a lower bound
  Diagram witness;
  MoveSequence path;
  std::size_t states = 0;
};

inline MaxGResult best_of(const ReachableSet& set) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < set.size(); ++i) {
    if (set.ghost_count(i) > set.ghost_count(best)) best = i;
  }
  return {set.ghost_count(best), set.complete(), set.member(best), set.path_to(best), set.size()};
}

inline MaxGResult maxg_brute(const Diagram& d, const SearchLimits& limits = {}) {
  return best_of(enumerate_kkd(d, limits));
}

inline MaxGResult maxg_hat_brute(const Diagram& d, const SearchLimits& limits = {}) {
  return best_of(enumerate_gkd(d, limits));
}

enum class MaxGMethod : std::uint8_t { automatic, brute, theorem };

struct MaxGValue {
  std::size_t count = 0;
  std::string method;  // "theorem:key", "theorem:generalized-skew", "theorem:lock" or "brute"
  bool exact = true;
};

/// Closed-form value when a snowflake formula is known to be exact, else
/// brute force.
inline MaxGValue maxg(const Diagram& d, const SearchLimits& limits = {},
                      MaxGMethod method = MaxGMethod::automatic) {
  require_ghost_free(d, "maxg");
  if (method != MaxGMethod::brute) {
    if (is_key_diagram(d)) return {sf(d), "theorem:key", true};
    if (is_generalized_skew(d)) return {sf(d), "theorem:generalized-skew", true};
    if (as_lock_diagram(d) && lockmain_qualifies(d)) return {sf_star(d), "theorem:lock", true};
    if (method == MaxGMethod::theorem) {
      throw std::invalid_argument("no closed-form result applies to this diagram");
    }
  }
  const MaxGResult r = maxg_brute(d, limits);
  return {r.count, "brute", r.exact};
}

/// Sum of signed weights; exponents are dense over rows 1..n.
struct SignedPolynomial {
  std::map<std::vector<int>, long long> terms;

  void add(const std::vector<int>& exponents, long long coeff) {
    auto& c = terms[exponents];
    c += coeff;
    if (c == 0) terms.erase(exponents);
  }

  static int degree(const std::vector<int>& e) {
    int s = 0;
    for (int x : e) s += x;
    return s;
  }
  int min_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms) d = (d < 0) ? degree(e) : std::min(d, degree(e));
    return d;
  }
  int max_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms) d = std::max(d, degree(e));
    return d;
  }
  friend bool operator==(const SignedPolynomial&, const SignedPolynomial&) = default;
};

inline SignedPolynomial lascoux_polynomial(const WeakComposition& alpha,
                                           const SearchLimits& limits = {}) {
  const ReachableSet set = enumerate_kkd(key_diagram(alpha), limits);
  if (!set.complete()) {
    throw std::runtime_error("lascoux: enumeration incomplete (" + to_string(set.status()) + ")");
  }
  SignedPolynomial p;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const SignedMonomial m = weight(set.member(i));
    std::vector<int> e(alpha.size(), 0);
    for (const auto& [row, exp] : m.exponents) e[static_cast<std::size_t>(row - 1)] = exp;
    p.add(e, m.sign);
  }
  return p;
}

struct ProbeCounterexample {
  Diagram diagram;
  std::size_t maxg = 0;
  std::size_t sf = 0;
};

struct ProbeReport {
  int rows = 0, cols = 0, max_cells = 0;
  std::size_t checked = 0;
  std::vector<Diagram> skipped;
  std::vector<ProbeCounterexample> counterexamples;
};

/// Checks MaxG(D) <= sf(D) over every ghost-free diagram in a rows x cols box
/// with at most max_cells cells. Reports; does not assert.
inline ProbeReport conjecture_probe(int rows, int cols, int max_cells,
                                    const SearchLimits& limits = {}) {
  if (rows < 1 || cols < 1 || rows * cols > 30) {
    throw std::invalid_argument("probe box must be between 1x1 and 30 cells");
  }
  ProbeReport report{rows, cols, max_cells, 0, {}, {}};
  const int n = rows * cols;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    if (std::popcount(mask) > max_cells) continue;
    std::vector<Position> cells;
    for (int b = 0; b < n; ++b) {
      if (mask >> b & 1u) cells.push_back({b / cols + 1, b % cols + 1});
    }
    const Diagram d = Diagram::of(cells);
    const MaxGResult r = maxg_brute(d, limits);
    if (!r.exact) {
      report.skipped.push_back(d);
      continue;
    }
    ++report.checked;
    const std::size_t flakes = sf(d);
    if (r.count > flakes) report.counterexamples.push_back({d, r.count, flakes});
  }
  return report;
}

}  // namespace kohnert
