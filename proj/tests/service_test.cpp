#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <thread>

#include <httplib.h>

#include "kohnert/io.hpp"
#include "kohnert/service.hpp"

namespace {

using namespace kohnert;
using json = nlohmann::json;

// Runs a PuzzleService behind a real HTTP server on a free local port.
class ServiceFixture : public ::testing::Test {
 protected:
  void start(service::ServiceOptions opts = {}) {
    svc_ = std::make_unique<service::PuzzleService>(std::move(opts));
    svc_->mount(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
    if (svc_) svc_->wait_idle();
  }

  json post(const std::string& path, const json& body, int expect) {
    auto res = client_->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res);
    if (!res) return nullptr;
    EXPECT_EQ(res->status, expect) << path << ": " << res->body;
    return res->body.empty() ? json(nullptr) : json::parse(res->body);
  }

  std::pair<int, json> get(const std::string& path) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    if (!res) return {0, nullptr};
    return {res->status, res->body.empty() ? json(nullptr) : json::parse(res->body)};
  }

  std::string create(const Diagram& d) {
    const json body = post("/sessions", {{"diagram", io::to_json(d)}}, 201);
    return body["id"].get<std::string>();
  }

  json wait_ready(const std::string& id) {
    for (int i = 0; i < 500; ++i) {
      auto [status, body] = get("/sessions/" + id);
      if (body["target_status"] != "pending") return body;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ADD_FAILURE() << "target never became ready";
    return nullptr;
  }

  // Follows /hint until it answers 204; returns the final state.
  json follow_hints(const std::string& id) {
    for (int step = 0; step < 200; ++step) {
      auto [status, hint] = get("/sessions/" + id + "/hint");
      if (status == 204) return get("/sessions/" + id).second;
      EXPECT_EQ(status, 200) << hint.dump();
      if (status != 200) return nullptr;
      post("/sessions/" + id + "/move", {{"row", hint["move"]["row"]}, {"kind", hint["move"]["kind"]}}, 200);
    }
    ADD_FAILURE() << "hints did not converge";
    return nullptr;
  }

  httplib::Server server_;
  std::unique_ptr<service::PuzzleService> svc_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(ServiceFixture, CreateReportsKeyTarget) {
  start();
  const json s = post("/sessions", {{"diagram", io::to_json(key_diagram({0, 1, 2, 2}))}}, 201);
  EXPECT_EQ(s["target"], sf(key_diagram({0, 1, 2, 2})));
  EXPECT_EQ(s["target_status"], "ready");
  EXPECT_EQ(s["method"], "theorem:key");
  EXPECT_EQ(s["legal_moves"].size(), 6u);
  EXPECT_EQ(io::diagram_from_json(s["current"]), key_diagram({0, 1, 2, 2}));
}

TEST_F(ServiceFixture, GhostMoveLeavesGhostAndTrivialMoveIsRecorded) {
  start();
  const std::string id = create(key_diagram({0, 1, 2, 2}));
  const json s = post("/sessions/" + id + "/move", {{"row", 3}, {"kind", "ghost"}}, 200);
  EXPECT_FALSE(s["trivial"].get<bool>());
  EXPECT_EQ(io::diagram_from_json(s["current"]), Diagram::of({{2, 1}, {3, 1}, {4, 1}, {4, 2}, {2, 2}}, {{3, 2}}));
  EXPECT_EQ(s["ghosts"], 1);

  const json t = post("/sessions/" + id + "/move", {{"row", 1}, {"kind", "kohnert"}}, 200);
  EXPECT_TRUE(t["trivial"].get<bool>());
  EXPECT_EQ(t["history"].size(), 1u);
}

TEST_F(ServiceFixture, StateMatchesReplayOfHistory) {
  start();
  const std::string id = create(key_diagram({0, 2, 1, 2}));
  post("/sessions/" + id + "/move", {{"row", 4}, {"kind", "kohnert"}}, 200);
  post("/sessions/" + id + "/move", {{"row", 3}, {"kind", "ghost"}}, 200);
  const json s = get("/sessions/" + id).second;
  MoveSequence seq{io::diagram_from_json(s["start"]), {}};
  for (const json& m : s["history"]) seq.steps.push_back(io::move_from_json(m));
  const ReplayResult r = replay(seq);
  ASSERT_TRUE(r.ok);
  EXPECT_EQ(r.final, io::diagram_from_json(s["current"]));
}

TEST_F(ServiceFixture, Errors) {
  start();
  EXPECT_EQ(get("/sessions/abc123").first, 404);
  post("/sessions", json::parse(R"({"diagram":{"cells":[[0,1]]}})"), 400);
  post("/sessions", json::parse(R"({"nothing":1})"), 400);
  auto raw = client_->Post("/sessions", "{not json", "application/json");
  ASSERT_TRUE(raw);
  EXPECT_EQ(raw->status, 400);

  const std::string id = create(key_diagram({0, 1, 2}));
  post("/sessions/" + id + "/move", {{"row", 0}, {"kind", "ghost"}}, 400);
  post("/sessions/" + id + "/move", {{"row", 2}, {"kind", "sideways"}}, 400);
  post("/sessions/" + id + "/move", {{"row", "2"}}, 400);
  post("/sessions/ffff/move", {{"row", 2}, {"kind", "ghost"}}, 404);
  post("/sessions/" + id + "/undo", json::object(), 409);
}

TEST_F(ServiceFixture, UndoRestoresPreviousState) {
  start();
  const std::string id = create(key_diagram({0, 1, 2, 2}));
  post("/sessions/" + id + "/move", {{"row", 3}, {"kind", "ghost"}}, 200);
  const json s = post("/sessions/" + id + "/undo", json::object(), 200);
  EXPECT_EQ(io::diagram_from_json(s["current"]), key_diagram({0, 1, 2, 2}));
  EXPECT_TRUE(s["history"].empty());
}

TEST_F(ServiceFixture, HintsReachTargetForKeyDiagrams) {
  start();
  for (const WeakComposition& alpha : {WeakComposition{0, 1, 2, 2}, WeakComposition{0, 3, 4, 2, 3}}) {
    const std::string id = create(key_diagram(alpha));
    const json done = follow_hints(id);
    ASSERT_FALSE(done.is_null());
    EXPECT_EQ(done["ghosts"], sf(key_diagram(alpha)));
    EXPECT_TRUE(done["solved"].get<bool>());
    EXPECT_EQ(get("/sessions/" + id + "/hint").first, 204);
  }
}

TEST_F(ServiceFixture, HintsRecoverAfterLeavingThePlan) {
  start();
  const Diagram d = lock_diagram({0, 4, 0, 2, 3, 2, 1});
  const std::string id = create(d);
  EXPECT_EQ(get("/sessions/" + id).second["method"], "theorem:lock");
  // A first move that the lock schedule does not start with.
  post("/sessions/" + id + "/move", {{"row", 7}, {"kind", "kohnert"}}, 200);
  auto [status, hint] = get("/sessions/" + id + "/hint");
  if (status == 200) {
    const json done = follow_hints(id);
    EXPECT_EQ(done["ghosts"], 7);
  } else {
    EXPECT_EQ(status, 409);
  }
}

TEST_F(ServiceFixture, BruteForceTargetsArriveAsynchronously) {
  start();
  const std::string id = create(Diagram::of({{3, 1}, {2, 2}}));
  const json s = wait_ready(id);
  EXPECT_EQ(s["target"], 2);
  EXPECT_EQ(s["method"], "brute");
  EXPECT_EQ(follow_hints(id)["ghosts"], 2);
}

TEST_F(ServiceFixture, UnknownTargetWhenSearchLimitHit) {
  start({{10, 300}, std::nullopt});
  const std::string id = create(Diagram::of({{5, 1}, {5, 2}, {4, 3}, {3, 1}, {2, 3}, {1, 2}}));
  const json s = wait_ready(id);
  EXPECT_EQ(s["target_status"], "unknown");
  EXPECT_TRUE(s["target"].is_null());
  EXPECT_EQ(get("/sessions/" + id + "/hint").first, 409);
}

TEST_F(ServiceFixture, SnowOfStartAndDelete) {
  start();
  const std::string id = create(key_diagram({0, 3, 4, 2, 3}));
  auto [status, snow] = get("/sessions/" + id + "/snow");
  EXPECT_EQ(status, 200);
  EXPECT_EQ(snow["flake_count"], 6);
  auto res = client_->Delete("/sessions/" + id);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 204);
  EXPECT_EQ(get("/sessions/" + id).first, 404);
  res = client_->Delete("/sessions/" + id);
  EXPECT_EQ(res->status, 404);
}

TEST(ServicePersistence, SessionsSurviveRestart) {
  const auto path = std::filesystem::temp_directory_path() / "kohnert_service_state.json";
  std::filesystem::remove(path);
  std::string id;
  {
    service::PuzzleService svc({{}, path});
    const service::Response r = svc.create({{"diagram", io::to_json(key_diagram({0, 1, 2, 2}))}});
    ASSERT_EQ(r.status, 201);
    id = r.body["id"].get<std::string>();
    EXPECT_EQ(svc.move(id, {{"row", 3}, {"kind", "ghost"}}).status, 200);
  }
  service::PuzzleService again({{}, path});
  const service::Response r = again.get(id);
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["history"].size(), 1u);
  EXPECT_EQ(r.body["ghosts"], 1);
  EXPECT_EQ(r.body["target_status"], "ready");
  std::filesystem::remove(path);
}

}  // namespace
