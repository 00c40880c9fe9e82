#pragma once

// Shared fixtures for the service tests and the acceptance harness.

#include <chrono>
#include <filesystem>
#include <random>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "cyclerank/gateway.hpp"
#include "cyclerank/orchestrator.hpp"

namespace support {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("cyclerank-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }

private:
  fs::path path_;
};

inline cyclerank::ServiceConfig config_for(const fs::path& dir, unsigned workers = 2) {
  cyclerank::ServiceConfig c;
  c.data_dir = dir;
  c.workers = workers;
  return c;
}

inline std::string toy_path() { return std::string(CYCLERANK_DATA_DIR) + "/toy_wiki.csv"; }

/// Three-query comparison on the toy graph: CycleRank from "Fake news",
/// global PageRank and PPR from "Fake news", both with alpha 0.3.
inline nlohmann::json comparison_set(const std::string& dataset) {
  return nlohmann::json::parse(R"({"queries":[
    {"dataset_id":")" + dataset + R"(","algorithm":"cyclerank","source":"Fake news",
     "parameters":{"K":3,"sigma":"exponential"},"top_k":10},
    {"dataset_id":")" + dataset + R"(","algorithm":"pagerank",
     "parameters":{"alpha":0.3},"top_k":10},
    {"dataset_id":")" + dataset + R"(","algorithm":"personalized_pagerank","source":"Fake news",
     "parameters":{"alpha":0.3},"top_k":10}]})");
}

/// API server on an ephemeral localhost port, serving in a background thread.
class TestServer {
public:
  explicit TestServer(cyclerank::Orchestrator& orch) {
    cyclerank::mount_api(server_, orch);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~TestServer() {
    server_.stop();
    thread_.join();
  }
  TestServer(const TestServer&) = delete;
  TestServer& operator=(const TestServer&) = delete;

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(10, 0);
    return c;
  }

private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

/// Polls GET status until done or the deadline passes.
inline bool poll_until_done(httplib::Client& c, const std::string& id,
                            std::chrono::milliseconds limit = std::chrono::seconds(10)) {
  const auto deadline = std::chrono::steady_clock::now() + limit;
  while (std::chrono::steady_clock::now() < deadline) {
    auto res = c.Get("/api/querysets/" + id + "/status");
    if (res && res->status == 200 && nlohmann::json::parse(res->body).at("done").get<bool>())
      return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  return false;
}

}  // namespace support
