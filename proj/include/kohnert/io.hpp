#pragma once

// JSON records for diagrams, moves, decorations, certificates, polynomials
// and labeled diagrams, plus the ASCII rendering of decorations.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kohnert/diagram.hpp"
#include "kohnert/explorer.hpp"
#include "kohnert/labeling.hpp"
#include "kohnert/moves.hpp"
#include "kohnert/snowfall.hpp"
#include "kohnert/solvers.hpp"

namespace kohnert::io {

using json = nlohmann::json;

inline json to_json(Position p) { return json::array({p.row, p.col}); }

inline json to_json(const std::vector<Position>& ps) {
  json out = json::array();
  for (Position p : ps) out.push_back(to_json(p));
  return out;
}

inline json to_json(const Diagram& d) {
  json cells = json::array();
  json ghosts = json::array();
  for (const Cell& c : d.cells()) (c.kind == CellKind::plain ? cells : ghosts).push_back(to_json(c.pos));
  return {{"cells", std::move(cells)}, {"ghosts", std::move(ghosts)}};
}

inline Position position_from_json(const json& j, std::string_view where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ParseError(std::string(where) + ": expected [row, col], got " + j.dump());
  }
  const Position p{j[0].get<int>(), j[1].get<int>()};
  if (p.row < 1 || p.col < 1) {
    throw ParseError(std::string(where) + ": position " + to_string(p) + " must be 1-based");
  }
  return p;
}

inline Diagram diagram_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("diagram record must be a JSON object");
  std::vector<Cell> cells;
  std::set<Position> seen;
  for (const char* key : {"cells", "ghosts"}) {
    if (!j.contains(key)) continue;
    const json& list = j.at(key);
    if (!list.is_array()) throw ParseError(std::string("\"") + key + "\" must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
      const Position p = position_from_json(list[i], where);
      if (!seen.insert(p).second) throw ParseError(where + ": duplicate position " + to_string(p));
      cells.push_back({p, key[0] == 'g' ? CellKind::ghost : CellKind::plain});
    }
  }
  return Diagram(std::move(cells));
}

/// Accepts either a structured record (text starting with '{') or an ASCII
/// grid.
inline Diagram parse_diagram(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '{') {
    json j;
    try {
      j = json::parse(text.substr(i));
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    return diagram_from_json(j);
  }
  return parse_ascii(text);
}

inline json to_json(const MoveRecord& m) {
  return {{"row", m.row}, {"kind", to_string(m.kind)}, {"from", to_json(m.from)}, {"to", to_json(m.to)}};
}

inline MoveRecord move_from_json(const json& j) {
  if (!j.is_object() || !j.contains("row") || !j.contains("kind")) {
    throw ParseError("move record needs \"row\" and \"kind\"");
  }
  if (!j["row"].is_number_integer() || !j["kind"].is_string()) {
    throw ParseError("move record: \"row\" must be an integer and \"kind\" a string");
  }
  MoveRecord m;
  m.row = j["row"].get<int>();
  try {
    m.kind = parse_move_kind(j["kind"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  // from/to may be omitted; a row-0 column marks an empty row.
  auto loose = [](const json& p) {
    if (!p.is_array() || p.size() != 2) throw ParseError("move endpoint must be [row, col]");
    return Position{p[0].get<int>(), p[1].get<int>()};
  };
  if (j.contains("from")) m.from = loose(j["from"]);
  if (j.contains("to")) m.to = loose(j["to"]);
  return m;
}

inline json to_json(const MoveSequence& s) {
  json steps = json::array();
  for (const MoveRecord& m : s.steps) steps.push_back(to_json(m));
  return {{"start", to_json(s.start)}, {"steps", std::move(steps)}};
}

inline json to_json(const SnowDecoration& s) {
  json labels = json::array();
  for (const auto& [p, l] : s.labels) labels.push_back({p.row, p.col, l});
  return {{"base", to_json(s.base)},
          {"dark", to_json(s.dark_clouds)},
          {"flakes", to_json(s.snowflakes)},
          {"labels", std::move(labels)},
          {"flake_count", s.flake_count()}};
}

/// Grid with 'O' plain, 'X' ghost, '●' dark cloud, '*' snowflake, '.' empty.
inline std::string render_decoration_ascii(const SnowDecoration& s) {
  int rows = s.base.max_row();
  int cols = s.base.max_col();
  for (Position p : s.snowflakes) {
    rows = std::max(rows, p.row);
    cols = std::max(cols, p.col);
  }
  const std::set<Position> clouds(s.dark_clouds.begin(), s.dark_clouds.end());
  const std::set<Position> flakes(s.snowflakes.begin(), s.snowflakes.end());
  std::string out;
  for (int r = rows; r >= 1; --r) {
    for (int c = 1; c <= cols; ++c) {
      const Position p{r, c};
      if (clouds.contains(p)) {
        out += "●";
      } else if (flakes.contains(p)) {
        out += '*';
      } else if (const auto k = s.base.at(p)) {
        out += (*k == CellKind::ghost ? 'X' : 'O');
      } else {
        out += '.';
      }
    }
    out += '\n';
  }
  return out;
}

inline json to_json(const Certificate& c) {
  json steps = json::array();
  for (const MoveRecord& m : c.moves.steps) steps.push_back(to_json(m));
  return {{"start", to_json(c.moves.start)}, {"steps", std::move(steps)}, {"claimed_ghosts", c.claimed_ghosts}};
}

inline Certificate certificate_from_json(const json& j) {
  if (!j.is_object() || !j.contains("start") || !j.contains("steps") || !j.contains("claimed_ghosts")) {
    throw ParseError("certificate needs \"start\", \"steps\" and \"claimed_ghosts\"");
  }
  Certificate c;
  c.moves.start = diagram_from_json(j["start"]);
  if (!j["steps"].is_array()) throw ParseError("\"steps\" must be an array");
  for (const json& s : j["steps"]) c.moves.steps.push_back(move_from_json(s));
  if (!j["claimed_ghosts"].is_number_unsigned()) throw ParseError("\"claimed_ghosts\" must be a count");
  c.claimed_ghosts = j["claimed_ghosts"].get<std::size_t>();
  return c;
}

inline json to_json(const SignedPolynomial& p) {
  json out = json::array();
  for (const auto& [e, c] : p.terms) out.push_back({{"coeff", c}, {"exponents", e}});
  return out;
}

/// Human-readable form, e.g. "x2 + x1 - x1*x2".
inline std::string render_polynomial(const SignedPolynomial& p) {
  if (p.terms.empty()) return "0";
  std::vector<std::pair<std::vector<int>, long long>> terms(p.terms.begin(), p.terms.end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    return SignedPolynomial::degree(a.first) < SignedPolynomial::degree(b.first);
  });
  std::string out;
  for (const auto& [e, c] : terms) {
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += "x" + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    const long long mag = c < 0 ? -c : c;
    std::string coeff = (mag == 1 && !mono.empty()) ? "" : std::to_string(mag);
    if (!coeff.empty() && !mono.empty()) coeff += '*';
    if (out.empty()) {
      out = (c < 0 ? "-" : "") + coeff + mono;
    } else {
      out += (c < 0 ? " - " : " + ") + coeff + mono;
    }
  }
  return out;
}

inline json to_json(const LabeledDiagram& l) {
  json cells = json::array();
  for (const Cell& c : l.diagram.cells()) {
    cells.push_back({c.pos.row, c.pos.col, l.labels.at(c.pos),
                     c.kind == CellKind::ghost ? "ghost" : "plain"});
  }
  return {{"cells", std::move(cells)}};
}

inline json to_json(const ProbeReport& r) {
  json ce = json::array();
  for (const auto& c : r.counterexamples) {
    ce.push_back({{"diagram", to_json(c.diagram)}, {"maxg", c.maxg}, {"sf", c.sf}});
  }
  json skipped = json::array();
  for (const Diagram& d : r.skipped) skipped.push_back(to_json(d));
  return {{"rows", r.rows},         {"cols", r.cols},        {"max_cells", r.max_cells},
          {"checked", r.checked},   {"skipped", skipped},    {"counterexamples", ce}};
}

inline json to_json(const ColorpReport& r) {
  json clauses = json::array();
  for (const auto& c : r.clauses) {
    clauses.push_back(
        {{"clause", c.name}, {"pass", c.pass}, {"checked", c.checked}, {"counterexample", c.counterexample}});
  }
  return {{"complete", r.complete}, {"members", r.members}, {"edges", r.edges}, {"clauses", clauses}};
}

}  // namespace kohnert::io
