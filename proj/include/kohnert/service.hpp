#pragma once

// HTTP/JSON puzzle service. A session holds a start diagram, the moves played
// so far and the target ghost count. Targets that need a brute-force search
// are computed on a background thread and reported as pending until ready.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "kohnert/explorer.hpp"
#include "kohnert/io.hpp"
#include "kohnert/solvers.hpp"

namespace kohnert::service {

using json = nlohmann::json;

struct ServiceOptions {
  SearchLimits limits;
  std::optional<std::filesystem::path> state_file;
};

enum class TargetStatus { ready, pending, unknown };

inline std::string to_string(TargetStatus s) {
  switch (s) {
    case TargetStatus::ready: return "ready";
    case TargetStatus::pending: return "pending";
    case TargetStatus::unknown: return "unknown";
  }
  return "unknown";
}

struct Session {
  std::string id;
  Diagram start;
  Diagram current;
  std::vector<MoveRecord> history;
  std::optional<std::size_t> target;
  TargetStatus status = TargetStatus::pending;
  std::string method;
  std::vector<MoveRecord> plan;  // from start; reaches the target when ready
  std::mutex mu;
};

struct Response {
  int status = 200;
  json body;
};

class PuzzleService {
 public:
  explicit PuzzleService(ServiceOptions opts = {}) : opts_(std::move(opts)) { load(); }

  PuzzleService(const PuzzleService&) = delete;
  PuzzleService& operator=(const PuzzleService&) = delete;

  ~PuzzleService() { wait_idle(); }

  /// Blocks until every background target computation has finished.
  void wait_idle() {
    std::vector<std::thread> jobs;
    {
      std::lock_guard lk(jobs_mu_);
      jobs.swap(jobs_);
    }
    for (auto& t : jobs) t.join();
  }

  Response create(const json& body) {
    Diagram start;
    try {
      start = diagram_from_request(body);
    } catch (const std::exception& e) {
      return error(400, e.what());
    }
    if (start.max_row() > detail::kMaxPackedRows) {
      return error(400, "diagrams may use at most " + std::to_string(detail::kMaxPackedRows) + " rows");
    }
    auto s = std::make_shared<Session>();
    s->id = new_id();
    s->start = start;
    s->current = start;
    {
      std::lock_guard lk(store_mu_);
      sessions_[s->id] = s;
    }
    schedule_target(s);
    Response r{201, {}};
    {
      std::lock_guard lk(s->mu);
      r.body = state_json(*s);
    }
    save();
    return r;
  }

  Response get(const std::string& id) {
    auto s = find(id);
    if (!s) return not_found(id);
    std::lock_guard lk(s->mu);
    return {200, state_json(*s)};
  }

  Response remove(const std::string& id) {
    {
      std::lock_guard lk(store_mu_);
      if (sessions_.erase(id) == 0) return not_found(id);
    }
    save();
    return {204, nullptr};
  }

  Response move(const std::string& id, const json& body) {
    auto s = find(id);
    if (!s) return not_found(id);
    if (!body.is_object() || !body.contains("row") || !body.contains("kind") ||
        !body["row"].is_number_integer() || !body["kind"].is_string()) {
      return error(400, "move body must be {\"row\": <integer>, \"kind\": \"kohnert\"|\"ghost\"}");
    }
    const int row = body["row"].get<int>();
    if (row < 1) return error(400, "row must be >= 1");
    MoveKind kind;
    try {
      kind = parse_move_kind(body["kind"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      return error(400, e.what());
    }
    Response r;
    {
      std::lock_guard lk(s->mu);
      auto [next, rec] = apply_move(s->current, row, kind);
      if (!rec.trivial()) {
        s->history.push_back(rec);
        s->current = std::move(next);
      }
      r.body = state_json(*s);
      r.body["trivial"] = rec.trivial();
      r.body["move"] = io::to_json(rec);
    }
    save();
    return r;
  }

  Response undo(const std::string& id) {
    auto s = find(id);
    if (!s) return not_found(id);
    Response r;
    {
      std::lock_guard lk(s->mu);
      if (s->history.empty()) return error(409, "nothing to undo");
      s->history.pop_back();
      s->current = replay({s->start, s->history}).final;
      r.body = state_json(*s);
    }
    save();
    return r;
  }

  Response hint(const std::string& id) {
    auto s = find(id);
    if (!s) return not_found(id);
    std::lock_guard lk(s->mu);
    if (s->status == TargetStatus::pending) return {202, {{"status", "pending"}}};
    if (!s->target) return error(409, "target unknown: the search limit was reached");
    if (s->current.ghost_count() >= *s->target) return {204, nullptr};

    const bool on_plan = s->history.size() < s->plan.size() &&
                         std::equal(s->history.begin(), s->history.end(), s->plan.begin());
    if (on_plan) return {200, {{"move", io::to_json(s->plan[s->history.size()])}, {"source", "plan"}}};

    const MaxGResult best = maxg_brute(s->current, opts_.limits);
    if (!best.exact) return error(409, "search limit reached while looking for a hint");
    if (best.count < *s->target || best.path.steps.empty()) {
      return error(409, "the target is no longer reachable from this position; undo to continue");
    }
    s->plan = s->history;
    s->plan.insert(s->plan.end(), best.path.steps.begin(), best.path.steps.end());
    return {200, {{"move", io::to_json(best.path.steps.front())}, {"source", "search"}}};
  }

  Response snow_of_start(const std::string& id) {
    auto s = find(id);
    if (!s) return not_found(id);
    std::lock_guard lk(s->mu);
    if (s->start.has_ghosts()) return error(409, "snow decorations need a ghost-free start diagram");
    return {200, io::to_json(snow(s->start))};
  }

  /// Registers the endpoints on an httplib server.
  void mount(httplib::Server& svr) {
    const std::string sid = R"(/sessions/([0-9a-f]+))";
    svr.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    svr.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      with_body(req, res, [&](const json& b) { return create(b); });
    });
    svr.Get(sid, [this](const httplib::Request& req, httplib::Response& res) {
      send(res, get(req.matches[1]));
    });
    svr.Delete(sid, [this](const httplib::Request& req, httplib::Response& res) {
      send(res, remove(req.matches[1]));
    });
    svr.Post(sid + "/move", [this](const httplib::Request& req, httplib::Response& res) {
      with_body(req, res, [&](const json& b) { return move(req.matches[1], b); });
    });
    svr.Post(sid + "/undo", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, undo(req.matches[1]));
    });
    svr.Get(sid + "/hint", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, hint(req.matches[1]));
    });
    svr.Get(sid + "/snow", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, snow_of_start(req.matches[1]));
    });
    svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      send(res, error(500, what));
    });
  }

 private:
  static Response error(int status, const std::string& msg) { return {status, {{"error", msg}}}; }
  static Response not_found(const std::string& id) { return error(404, "unknown session '" + id + "'"); }

  static void send(httplib::Response& res, const Response& r) {
    res.status = r.status;
    if (r.status != 204) res.set_content(r.body.dump(), "application/json");
  }

  template <class F>
  static void with_body(const httplib::Request& req, httplib::Response& res, F&& f) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::parse_error& e) {
      send(res, error(400, std::string("malformed JSON body: ") + e.what()));
      return;
    }
    send(res, f(body));
  }

  static Diagram diagram_from_request(const json& body) {
    if (!body.is_object()) throw ParseError("request body must be a JSON object");
    if (body.contains("diagram")) {
      const json& d = body["diagram"];
      if (d.is_string()) return io::parse_diagram(d.get<std::string>());
      return io::diagram_from_json(d);
    }
    if (!body.contains("cells") && !body.contains("ghosts")) {
      throw ParseError("request body needs a \"diagram\" record");
    }
    return io::diagram_from_json(body);
  }

  static json state_json(const Session& s) {
    json legal = json::array();
    for (const MoveRecord& m : legal_moves(s.current)) legal.push_back(io::to_json(m));
    json history = json::array();
    for (const MoveRecord& m : s.history) history.push_back(io::to_json(m));
    const std::size_t ghosts = s.current.ghost_count();
    return {{"id", s.id},
            {"start", io::to_json(s.start)},
            {"current", io::to_json(s.current)},
            {"history", std::move(history)},
            {"ghosts", ghosts},
            {"target", s.target ? json(*s.target) : json(nullptr)},
            {"target_status", to_string(s.status)},
            {"method", s.method},
            {"solved", s.target.has_value() && ghosts >= *s.target},
            {"legal_moves", std::move(legal)}};
  }

  std::shared_ptr<Session> find(const std::string& id) {
    std::lock_guard lk(store_mu_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  std::string new_id() {
    std::lock_guard lk(rng_mu_);
    std::uniform_int_distribution<std::uint64_t> dist;
    std::ostringstream os;
    os << std::hex << dist(rng_);
    return os.str();
  }

  /// Closed-form targets are set immediately; everything else is searched
  /// off the request path.
  void schedule_target(const std::shared_ptr<Session>& s) {
    const Diagram start = s->start;
    if (!start.has_ghosts()) {
      std::optional<Certificate> cert;
      std::string method;
      if (is_generalized_skew(start)) {
        cert = solve_generalized_skew(start);
        method = is_key_diagram(start) ? "theorem:key" : "theorem:generalized-skew";
      } else if (as_lock_diagram(start) && lockmain_qualifies(start)) {
        cert = solve_lock(start);
        method = "theorem:lock";
      }
      if (!cert && is_key_diagram(start)) {
        // The target is known in closed form; hints search from the current
        // position on demand.
        std::lock_guard lk(s->mu);
        s->target = sf(start);
        s->method = "theorem:key";
        s->status = TargetStatus::ready;
        return;
      }
      if (cert) {
        std::lock_guard lk(s->mu);
        s->target = cert->claimed_ghosts;
        s->plan = cert->moves.steps;
        s->method = method;
        s->status = TargetStatus::ready;
        return;
      }
    }
    {
      std::lock_guard lk(s->mu);
      s->status = TargetStatus::pending;
      s->method = "brute";
    }
    std::lock_guard lk(jobs_mu_);
    jobs_.emplace_back([this, s, start] {
      std::optional<MaxGResult> r;
      try {
        r = maxg_brute(start, opts_.limits);
      } catch (const std::exception&) {
      }
      {
        std::lock_guard slk(s->mu);
        if (r && r->exact) {
          s->target = r->count;
          s->plan = r->path.steps;
          s->status = TargetStatus::ready;
        } else {
          s->status = TargetStatus::unknown;
        }
      }
      save();
    });
  }

  // Snapshot persistence: one JSON file rewritten after every mutation.

  void save() {
    if (!opts_.state_file) return;
    std::vector<std::shared_ptr<Session>> all;
    {
      std::lock_guard lk(store_mu_);
      for (const auto& [id, s] : sessions_) all.push_back(s);
    }
    json sessions = json::array();
    for (const auto& s : all) {
      std::lock_guard lk(s->mu);
      json plan = json::array();
      for (const MoveRecord& m : s->plan) plan.push_back(io::to_json(m));
      json history = json::array();
      for (const MoveRecord& m : s->history) history.push_back(io::to_json(m));
      sessions.push_back({{"id", s->id},
                          {"start", io::to_json(s->start)},
                          {"history", history},
                          {"target", s->target ? json(*s->target) : json(nullptr)},
                          {"target_status", to_string(s->status)},
                          {"method", s->method},
                          {"plan", plan}});
    }
    std::lock_guard lk(file_mu_);
    const auto tmp = opts_.state_file->string() + ".tmp";
    {
      std::ofstream f(tmp);
      f << json{{"sessions", sessions}}.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, *opts_.state_file);
  }

  void load() {
    if (!opts_.state_file || !std::filesystem::exists(*opts_.state_file)) return;
    std::ifstream f(*opts_.state_file);
    json root;
    try {
      root = json::parse(f);
    } catch (const json::parse_error& e) {
      throw std::runtime_error("cannot read state file " + opts_.state_file->string() + ": " + e.what());
    }
    for (const json& j : root.value("sessions", json::array())) {
      auto s = std::make_shared<Session>();
      s->id = j.at("id").get<std::string>();
      s->start = io::diagram_from_json(j.at("start"));
      for (const json& m : j.at("history")) s->history.push_back(io::move_from_json(m));
      const ReplayResult r = replay({s->start, s->history});
      if (!r.ok) throw std::runtime_error("state file: session " + s->id + " does not replay: " + r.reason);
      s->current = r.final;
      for (const json& m : j.value("plan", json::array())) s->plan.push_back(io::move_from_json(m));
      s->method = j.value("method", "");
      const std::string status = j.value("target_status", "pending");
      sessions_[s->id] = s;
      if (status == "ready" && j.at("target").is_number_unsigned()) {
        s->target = j["target"].get<std::size_t>();
        s->status = TargetStatus::ready;
      } else if (status == "unknown") {
        s->status = TargetStatus::unknown;
      } else {
        schedule_target(s);
      }
    }
  }

  ServiceOptions opts_;
  std::mutex store_mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex jobs_mu_;
  std::vector<std::thread> jobs_;
  std::mutex file_mu_;
  std::mutex rng_mu_;
  std::mt19937_64 rng_{std::random_device{}()};
};

}  // namespace kohnert::service
