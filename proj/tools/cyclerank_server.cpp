// Task service: HTTP gateway, scheduler and worker pool over a datastore
// directory. See include/cyclerank/gateway.hpp for the routes.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "cyclerank/gateway.hpp"
#include "cyclerank/orchestrator.hpp"

namespace {
httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyclerank task service"};

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "cyclerank-data";
  unsigned workers = 2;
  unsigned cycle_threads = 1;
  std::size_t upload_mb = 64;
  std::string preload_dir, static_dir;

  app.add_option("--host", host, "listen address")->envname("CYCLERANK_HOST");
  app.add_option("--port", port, "listen port")->envname("CYCLERANK_PORT");
  app.add_option("--data-dir", data_dir, "datastore directory")->envname("CYCLERANK_DATA_DIR");
  app.add_option("--workers,-w", workers, "concurrent tasks")->envname("CYCLERANK_WORKERS");
  app.add_option("--cycle-threads", cycle_threads, "threads per CycleRank enumeration")
      ->envname("CYCLERANK_CYCLE_THREADS");
  app.add_option("--upload-limit-mb", upload_mb, "maximum dataset upload size")
      ->envname("CYCLERANK_UPLOAD_LIMIT_MB");
  app.add_option("--preload", preload_dir, "directory of graph files to register at start")
      ->envname("CYCLERANK_PRELOAD");
  app.add_option("--static-dir", static_dir, "serve a dashboard build from this directory")
      ->envname("CYCLERANK_STATIC_DIR");
  CLI11_PARSE(app, argc, argv);

  try {
    cyclerank::ServiceConfig config;
    config.data_dir = data_dir;
    config.workers = workers;
    config.cycle_threads = cycle_threads;
    config.upload_limit = upload_mb << 20;
    cyclerank::Orchestrator orch(config);
    if (!preload_dir.empty()) {
      const auto added = orch.preload(preload_dir);
      std::cerr << "preloaded " << added << " dataset(s) from " << preload_dir << '\n';
    }

    httplib::Server server;
    cyclerank::mount_api(server, orch);
    if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) {
      std::cerr << "error: cannot serve " << static_dir << '\n';
      return 1;
    }

    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "listening on http://" << host << ':' << port << " with " << workers
              << " worker(s), data in " << data_dir << '\n';
    if (!server.listen(host, port)) {
      std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
