#pragma once

// Command-line front end. run() takes its arguments and streams explicitly so
// it can be driven from tests; tools/kkohnert.cpp is a thin main().

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kohnert/diagram.hpp"
#include "kohnert/explorer.hpp"
#include "kohnert/generators.hpp"
#include "kohnert/io.hpp"
#include "kohnert/labeling.hpp"
#include "kohnert/service.hpp"
#include "kohnert/snowfall.hpp"
#include "kohnert/solvers.hpp"

namespace kohnert::cli {

using json = nlohmann::json;

/// "states=N,seconds=S"; either part may be omitted.
inline SearchLimits parse_limits(const std::string& text) {
  SearchLimits limits;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("limits: expected key=value, got '" + part + "'");
    const std::string key = part.substr(0, eq);
    const std::string value = part.substr(eq + 1);
    if (key != "states" && key != "seconds") throw std::invalid_argument("limits: unknown key '" + key + "'");
    std::size_t used = 0;
    try {
      if (key == "states") {
        if (!value.empty() && value[0] == '-') throw std::out_of_range(value);
        limits.max_states = std::stoull(value, &used);
      } else {
        limits.max_seconds = std::stod(value, &used);
      }
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw std::invalid_argument("limits: bad value for " + key + ": '" + value + "'");
    }
  }
  if (limits.max_states == 0 || !(limits.max_seconds > 0)) {
    throw std::invalid_argument("limits must be positive");
  }
  return limits;
}

inline WeakComposition parse_alpha(const std::string& text) {
  WeakComposition alpha;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("--alpha: '" + part + "' is not an integer");
    }
    if (used != part.size()) throw std::invalid_argument("--alpha: '" + part + "' is not an integer");
    alpha.push_back(v);
  }
  require_composition(alpha);
  return alpha;
}

inline Diagram diagram_of_family(const std::string& family, const WeakComposition& alpha) {
  if (family == "key") return key_diagram(alpha);
  if (family == "lock") return lock_diagram(alpha);
  if (family == "skew") return skew_diagram(alpha);
  throw std::invalid_argument("unknown family '" + family + "' (expected key, lock or skew)");
}

namespace detail {

struct Input {
  std::string diagram;
  std::string file;
  std::string alpha;
  std::string family = "key";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--diagram", diagram, "Diagram as a JSON record or ASCII grid");
    cmd->add_option("--input", file, "Read the diagram from a file");
    cmd->add_option("--alpha", alpha, "Weak composition, e.g. 0,3,4,2,3");
    cmd->add_option("--family", family, "Family used with --alpha: key, lock or skew");
  }
};

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

inline Diagram load(const Input& in, std::istream& stdin_stream) {
  if (!in.alpha.empty()) return diagram_of_family(in.family, parse_alpha(in.alpha));
  if (!in.file.empty()) return io::parse_diagram(read_file(in.file));
  if (!in.diagram.empty()) return io::parse_diagram(in.diagram);
  const std::string text{std::istreambuf_iterator<char>(stdin_stream), std::istreambuf_iterator<char>()};
  if (blank(text)) throw std::runtime_error("no diagram given (use --diagram, --input, --alpha or stdin)");
  return io::parse_diagram(text);
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kohnert diagrams, ghost moves and snowflake counts", "kkohnert"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format;
  std::string limits_text;
  app.add_option("--format", format, "Output format: json or ascii (count for enumerate)");
  app.add_option("--limits", limits_text, "Search limits, e.g. states=5000000,seconds=300");

  detail::Input input;
  std::string method = "auto", moves = "kkd", strategy = "auto", member, report_path, host = "127.0.0.1";
  std::string parity = "even", state_file, family_pos;
  int size = 1, rows = 3, cols = 3, cells = 5, port = 8080;
  bool edges = false;

  auto* gen = app.add_subcommand("gen", "Generate a key, lock, skew or checkered diagram");
  gen->add_option("family", family_pos, "key, lock, skew or checkered")->required();
  gen->add_option("--alpha", input.alpha, "Weak composition");
  gen->add_option("--size", size, "Checkered diagram size");
  gen->add_option("--parity", parity, "Checkered parity: even or odd");

  auto* show = app.add_subcommand("show", "Parse a diagram and print it");
  input.add_to(show);
  auto* snow_cmd = app.add_subcommand("snow", "Dark clouds and snowflakes");
  input.add_to(snow_cmd);
  auto* snowstar = app.add_subcommand("snowstar", "Snowflakes outside nonempty rows");
  input.add_to(snowstar);
  auto* ghostsnow = app.add_subcommand("ghostsnow", "Labeled snowflakes for ghost moves only");
  input.add_to(ghostsnow);

  auto* maxg_cmd = app.add_subcommand("maxg", "Maximum ghost count under K-Kohnert moves");
  input.add_to(maxg_cmd);
  maxg_cmd->add_option("--method", method, "auto, brute or theorem");
  auto* maxghat = app.add_subcommand("maxghat", "Maximum ghost count under ghost moves only");
  input.add_to(maxghat);
  maxghat->add_option("--method", method, "auto, brute or theorem");

  auto* enumerate_cmd = app.add_subcommand("enumerate", "List every reachable diagram");
  input.add_to(enumerate_cmd);
  enumerate_cmd->add_option("--moves", moves, "kkd, gkd or kd");
  enumerate_cmd->add_flag("--edges", edges, "Include single-move edges");

  auto* lascoux = app.add_subcommand("lascoux", "Lascoux polynomial of a weak composition");
  lascoux->add_option("--alpha", input.alpha, "Weak composition")->required();

  auto* solve_cmd = app.add_subcommand("solve", "Move sequence reaching the maximum ghost count");
  input.add_to(solve_cmd);
  solve_cmd->add_option("--strategy", strategy, "auto, key, skew, lock or greedy");

  auto* verify = app.add_subcommand("verify", "Replay a certificate");
  verify->add_option("--input", input.file, "Certificate file (stdin when omitted)");

  auto* reduce_cmd = app.add_subcommand("reduce", "Remove the cells that ghost moves never disturb");
  input.add_to(reduce_cmd);
  reduce_cmd->add_option("--member", member, "Diagram reached by ghost moves to reduce (default: D)");

  auto* colorp = app.add_subcommand("colorp", "Check the lock labeling properties");
  colorp->add_option("--alpha", input.alpha, "Weak composition of the lock diagram")->required();

  auto* probe = app.add_subcommand("probe", "Search a box for MaxG > sf");
  probe->add_option("--rows", rows, "Box height");
  probe->add_option("--cols", cols, "Box width");
  probe->add_option("--cells", cells, "Maximum number of cells");
  probe->add_option("--report", report_path, "Write the JSON report to this file");

  auto* serve = app.add_subcommand("serve", "Run the puzzle HTTP service");
  serve->add_option("--port", port, "Port (0 picks a free one)");
  serve->add_option("--host", host, "Address to bind");
  serve->add_option("--state-file", state_file, "Snapshot sessions to this JSON file");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  auto want = [&](const char* fallback) { return format.empty() ? std::string(fallback) : format; };
  auto check_format = [&](std::initializer_list<const char*> allowed, const std::string& f) {
    for (const char* a : allowed) {
      if (f == a) return;
    }
    throw std::invalid_argument("unsupported --format '" + f + "' for this command");
  };

  try {
    const SearchLimits limits = limits_text.empty() ? SearchLimits{} : parse_limits(limits_text);

    auto emit_diagram = [&](const Diagram& d, const std::string& f) {
      check_format({"json", "ascii"}, f);
      if (f == "json") {
        out << io::to_json(d).dump() << '\n';
      } else {
        out << render_ascii(d);
      }
    };
    auto emit_decoration = [&](const SnowDecoration& s) {
      const std::string f = want("json");
      check_format({"json", "ascii"}, f);
      if (f == "json") {
        out << io::to_json(s).dump() << '\n';
      } else {
        out << io::render_decoration_ascii(s) << "snowflakes: " << s.flake_count() << '\n';
      }
    };

    if (gen->parsed()) {
      Diagram d;
      if (family_pos == "checkered") {
        if (parity != "even" && parity != "odd") throw std::invalid_argument("--parity must be even or odd");
        d = checkered_diagram(size, parity == "even" ? Parity::even : Parity::odd);
      } else {
        d = diagram_of_family(family_pos, parse_alpha(input.alpha));
      }
      emit_diagram(d, want("json"));
    } else if (show->parsed()) {
      emit_diagram(detail::load(input, in), want("ascii"));
    } else if (snow_cmd->parsed()) {
      emit_decoration(snow(detail::load(input, in)));
    } else if (snowstar->parsed()) {
      emit_decoration(snow_star(detail::load(input, in)));
    } else if (ghostsnow->parsed()) {
      emit_decoration(ghost_snow(detail::load(input, in)));
    } else if (maxg_cmd->parsed()) {
      const Diagram d = detail::load(input, in);
      const std::string f = want("ascii");
      check_format({"json", "ascii"}, f);
      MaxGMethod m = MaxGMethod::automatic;
      if (method == "brute") {
        m = MaxGMethod::brute;
      } else if (method == "theorem") {
        m = MaxGMethod::theorem;
      } else if (method != "auto") {
        throw std::invalid_argument("--method must be auto, brute or theorem");
      }
      json j;
      MaxGValue v;
      if (d.has_ghosts()) {
        if (m == MaxGMethod::theorem) throw std::invalid_argument("no closed form applies to diagrams with ghosts");
        const MaxGResult r = maxg_brute(d, limits);
        v = {r.count, "brute", r.exact};
        j["witness"] = io::to_json(r.path);
      } else {
        v = maxg(d, limits, m);
      }
      if (f == "json") {
        j["count"] = v.count;
        j["method"] = v.method;
        j["exact"] = v.exact;
        out << j.dump() << '\n';
      } else {
        out << v.count << (v.exact ? "" : " (lower bound: search limit reached)") << '\n';
      }
    } else if (maxghat->parsed()) {
      const Diagram d = detail::load(input, in);
      const std::string f = want("ascii");
      check_format({"json", "ascii"}, f);
      json j;
      if (method == "auto" || method == "theorem") {
        j = {{"count", sf_hat(d)}, {"method", "theorem:greedy"}, {"exact", true}};
      } else if (method == "brute") {
        const MaxGResult r = maxg_hat_brute(d, limits);
        j = {{"count", r.count}, {"method", "brute"}, {"exact", r.exact}, {"witness", io::to_json(r.path)}};
      } else {
        throw std::invalid_argument("--method must be auto, brute or theorem");
      }
      if (f == "json") {
        out << j.dump() << '\n';
      } else {
        out << j["count"].get<std::size_t>() << (j["exact"].get<bool>() ? "" : " (lower bound)") << '\n';
      }
    } else if (enumerate_cmd->parsed()) {
      const Diagram d = detail::load(input, in);
      MoveSet ms;
      if (moves == "kkd") {
        ms = MoveSet::kkd;
      } else if (moves == "gkd") {
        ms = MoveSet::gkd;
      } else if (moves == "kd") {
        ms = MoveSet::kd;
      } else {
        throw std::invalid_argument("--moves must be kkd, gkd or kd");
      }
      const ReachableSet set = enumerate(d, ms, limits);
      const std::string f = want("json");
      check_format({"json", "count"}, f);
      if (f == "count") {
        out << set.size();
        if (!set.complete()) out << " (incomplete: " << to_string(set.status()) << ")";
        out << '\n';
      } else {
        json members = json::array();
        for (std::size_t i = 0; i < set.size(); ++i) members.push_back(io::to_json(set.member(i)));
        json j{{"complete", set.complete()},
               {"status", to_string(set.status())},
               {"count", set.size()},
               {"members", std::move(members)}};
        if (edges && set.complete()) {
          json e = json::array();
          for (const CoverEdge& c : cover_relations(set)) {
            e.push_back({{"parent", c.parent}, {"child", c.child}, {"move", io::to_json(c.move)}});
          }
          j["edges"] = std::move(e);
        }
        out << j.dump() << '\n';
      }
      if (!set.complete()) err << "warning: enumeration stopped early (" << to_string(set.status()) << ")\n";
    } else if (lascoux->parsed()) {
      const SignedPolynomial p = lascoux_polynomial(parse_alpha(input.alpha), limits);
      const std::string f = want("json");
      check_format({"json", "ascii"}, f);
      if (f == "json") {
        out << io::to_json(p).dump() << '\n';
      } else {
        out << io::render_polynomial(p) << '\n';
      }
    } else if (solve_cmd->parsed()) {
      const Certificate c = solve(detail::load(input, in), parse_strategy(strategy), limits);
      const std::string f = want("json");
      check_format({"json", "ascii"}, f);
      if (f == "json") {
        out << io::to_json(c).dump() << '\n';
      } else {
        for (const MoveRecord& m : c.moves.steps) {
          out << to_string(m.kind) << ' ' << m.row << ": " << to_string(m.from) << " -> " << to_string(m.to)
              << '\n';
        }
        out << "ghosts: " << c.claimed_ghosts << '\n';
      }
    } else if (verify->parsed()) {
      const std::string text = input.file.empty()
                                   ? std::string{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}
                                   : detail::read_file(input.file);
      json j;
      try {
        j = json::parse(text);
      } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed certificate: ") + e.what());
      }
      const CertificateCheck r = verify_certificate(io::certificate_from_json(j));
      if (r.ok) {
        out << "ok: " << r.ghosts << " ghost cells\n";
        return 0;
      }
      out << "FAILED";
      if (r.failed_step) out << " at step " << *r.failed_step;
      out << ": " << r.reason << '\n';
      return 1;
    } else if (reduce_cmd->parsed()) {
      const Diagram d = detail::load(input, in);
      const Diagram t = member.empty() ? d : io::parse_diagram(member);
      emit_diagram(reduce(d, t), want("json"));
    } else if (colorp->parsed()) {
      const ColorpReport r = check_colorp(lock_diagram(parse_alpha(input.alpha)), limits);
      const std::string f = want("ascii");
      check_format({"json", "ascii"}, f);
      if (f == "json") {
        out << io::to_json(r).dump() << '\n';
      } else {
        out << r.members << " diagrams, " << r.edges << " edges" << (r.complete ? "" : " (incomplete)") << '\n';
        for (const ClauseResult& c : r.clauses) {
          out << "(" << c.name << ") " << (c.pass ? "pass" : "FAIL") << ", " << c.checked << " checks\n";
          if (!c.pass) out << c.counterexample;
        }
      }
      return r.all_pass() ? 0 : 1;
    } else if (probe->parsed()) {
      const ProbeReport r = conjecture_probe(rows, cols, cells, limits);
      if (!report_path.empty()) {
        std::ofstream f(report_path);
        if (!f) throw std::runtime_error("cannot write " + report_path);
        f << io::to_json(r).dump(2) << '\n';
      }
      const std::string f = want("ascii");
      check_format({"json", "ascii"}, f);
      if (f == "json") {
        out << io::to_json(r).dump() << '\n';
      } else {
        out << rows << "x" << cols << " box, at most " << cells << " cells: " << r.checked << " checked, "
            << r.skipped.size() << " skipped, " << r.counterexamples.size() << " counterexamples\n";
        for (const auto& c : r.counterexamples) {
          out << "MaxG " << c.maxg << " > sf " << c.sf << ":\n" << render_ascii(c.diagram);
        }
      }
    } else if (serve->parsed()) {
      service::ServiceOptions opts{limits, std::nullopt};
      if (!state_file.empty()) opts.state_file = state_file;
      service::PuzzleService svc(opts);
      httplib::Server svr;
      svc.mount(svr);
      const int bound = port == 0 ? svr.bind_to_any_port(host) : (svr.bind_to_port(host, port) ? port : -1);
      if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
      out << "listening on http://" << host << ':' << bound << std::endl;
      svr.listen_after_bind();
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace kohnert::cli
