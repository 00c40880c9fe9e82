#pragma once

// Task service core: query-set registry, FIFO scheduler feeding a pool of
// workers, per-dataset graph cache, and persistence through the Datastore.
// The HTTP gateway in gateway.hpp is a thin layer over this class.

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <exception>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stop_token>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cyclerank/datastore.hpp"
#include "cyclerank/error.hpp"
#include "cyclerank/graph.hpp"
#include "cyclerank/io.hpp"
#include "cyclerank/query.hpp"

namespace cyclerank {

enum class TaskStatus { queued, running, completed, failed };

inline std::string_view status_name(TaskStatus s) {
  switch (s) {
    case TaskStatus::queued: return "queued";
    case TaskStatus::running: return "running";
    case TaskStatus::completed: return "completed";
    case TaskStatus::failed: return "failed";
  }
  return "?";
}

inline TaskStatus parse_status(std::string_view s) {
  if (s == "queued") return TaskStatus::queued;
  if (s == "running") return TaskStatus::running;
  if (s == "completed") return TaskStatus::completed;
  if (s == "failed") return TaskStatus::failed;
  throw InvalidInput("unknown task status '" + std::string(s) + "'");
}

inline bool is_terminal(TaskStatus s) {
  return s == TaskStatus::completed || s == TaskStatus::failed;
}

struct TaskTimings {
  std::string enqueued_at;
  std::optional<std::string> started_at;
  std::optional<std::string> finished_at;
};

struct TaskRecord {
  std::string query_set_id;
  std::size_t local_id = 0;
  Query query;
  TaskStatus status = TaskStatus::queued;
  // Present iff status == completed.
  std::optional<std::vector<RankedEntry>> result;
  std::string log;
  TaskTimings timings;
};

inline nlohmann::json to_json(const TaskRecord& r) {
  auto opt = [](const std::optional<std::string>& s) {
    return s ? nlohmann::json(*s) : nlohmann::json(nullptr);
  };
  nlohmann::json result = nullptr;
  if (r.result) {
    result = nlohmann::json::array();
    for (const auto& e : *r.result) result.push_back(to_json(e));
  }
  return {
      {"query_set_id", r.query_set_id},
      {"local_id", r.local_id},
      {"query", to_json(r.query)},
      {"status", std::string(status_name(r.status))},
      {"result", result},
      {"log", r.log},
      {"timings",
       {{"enqueued_at", r.timings.enqueued_at},
        {"started_at", opt(r.timings.started_at)},
        {"finished_at", opt(r.timings.finished_at)}}},
  };
}

inline TaskRecord record_from_json(const nlohmann::json& j) {
  auto opt = [](const nlohmann::json& v) -> std::optional<std::string> {
    if (v.is_null()) return std::nullopt;
    return v.get<std::string>();
  };
  TaskRecord r;
  r.query_set_id = j.at("query_set_id").get<std::string>();
  r.local_id = j.at("local_id").get<std::size_t>();
  r.query = query_from_json(j.at("query"));
  r.status = parse_status(j.at("status").get<std::string>());
  if (!j.at("result").is_null()) {
    r.result.emplace();
    for (const auto& e : j["result"]) r.result->push_back(entry_from_json(e));
  }
  r.log = j.at("log").get<std::string>();
  const auto& t = j.at("timings");
  r.timings.enqueued_at = t.at("enqueued_at").get<std::string>();
  r.timings.started_at = opt(t.at("started_at"));
  r.timings.finished_at = opt(t.at("finished_at"));
  return r;
}

/// Rejected query set. local_id is empty for set-level problems.
struct QueryProblem {
  std::optional<std::size_t> local_id;
  std::string message;
};

class SubmissionError : public InvalidInput {
public:
  explicit SubmissionError(std::vector<QueryProblem> problems)
      : InvalidInput(summarize(problems)), problems_(std::move(problems)) {}

  const std::vector<QueryProblem>& problems() const noexcept { return problems_; }

private:
  static std::string summarize(const std::vector<QueryProblem>& ps) {
    std::string out = "query set rejected";
    for (const auto& p : ps) {
      out += p.local_id ? "; query " + std::to_string(*p.local_id) + ": " : "; ";
      out += p.message;
    }
    return out;
  }

  std::vector<QueryProblem> problems_;
};

class ConflictError : public Error {
public:
  using Error::Error;
};

class PayloadTooLarge : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

struct ServiceConfig {
  fs::path data_dir = "cyclerank-data";
  unsigned workers = 2;
  std::size_t upload_limit = 64u << 20;
  // Workers per CycleRank enumeration.
  unsigned cycle_threads = 1;
  // Invoked on the worker thread before each task runs. Test seam: may
  // sleep or throw.
  std::function<void(const Query&)> before_task;
};

class Orchestrator {
public:
  explicit Orchestrator(ServiceConfig config) : config_(std::move(config)), store_(config_.data_dir) {
    if (config_.workers < 1) throw InvalidInput("worker count must be at least 1");
    for (auto& info : store_.load_datasets()) datasets_.emplace(info.dataset_id, info);
    recover();
    workers_.reserve(config_.workers);
    for (unsigned w = 0; w < config_.workers; ++w)
      workers_.emplace_back([this, w](std::stop_token stop) { worker_loop(stop, w); });
  }

  // Running tasks finish; queued tasks stay queued on disk and resume on the
  // next start.
  ~Orchestrator() {
    for (auto& w : workers_) w.request_stop();
    work_cv_.notify_all();
    workers_.clear();
  }

  Orchestrator(const Orchestrator&) = delete;
  Orchestrator& operator=(const Orchestrator&) = delete;

  const ServiceConfig& config() const noexcept { return config_; }

  /// Accepts {"queries": [...]} or a bare array of queries. Returns the new
  /// query set id without waiting for any task.
  std::string submit_query_set(const nlohmann::json& body) {
    const nlohmann::json* list = &body;
    if (body.is_object()) {
      if (!body.contains("queries")) throw SubmissionError({{std::nullopt, "missing 'queries'"}});
      list = &body["queries"];
    }
    if (!list->is_array()) throw SubmissionError({{std::nullopt, "'queries' must be an array"}});

    std::vector<Query> queries;
    std::vector<QueryProblem> problems;
    for (std::size_t i = 0; i < list->size(); ++i) {
      try {
        queries.push_back(query_from_json((*list)[i]));
      } catch (const InvalidInput& e) {
        problems.push_back({i, e.what()});
        queries.emplace_back();
      }
    }
    return submit(std::move(queries), std::move(problems));
  }

  std::string submit_query_set(std::vector<Query> queries) { return submit(std::move(queries), {}); }

  nlohmann::json get_status(const std::string& id) const {
    std::lock_guard lk(mu_);
    const auto& set = find_set(id);
    nlohmann::json tasks = nlohmann::json::array();
    bool done = true;
    for (const auto& [local, rec] : set.tasks) {
      tasks.push_back({{"local_id", local}, {"status", std::string(status_name(rec.status))}});
      done = done && is_terminal(rec.status);
    }
    return {{"id", id}, {"tasks", tasks}, {"done", done}};
  }

  /// Full task views. Once every task is terminal the payload never changes.
  nlohmann::json get_results(const std::string& id) const {
    std::lock_guard lk(mu_);
    const auto& set = find_set(id);
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& [local, rec] : set.tasks) {
      auto view = to_json(rec);
      view.erase("query_set_id");
      tasks.push_back(std::move(view));
    }
    return {{"id", id}, {"created_at", set.created_at}, {"tasks", tasks}};
  }

  nlohmann::json get_query_set(const std::string& id) const {
    std::lock_guard lk(mu_);
    return query_set_view(id, find_set(id));
  }

  nlohmann::json delete_query(const std::string& id, std::size_t local_id) {
    std::lock_guard lk(mu_);
    auto& set = find_set(id);
    auto it = set.tasks.find(local_id);
    if (it == set.tasks.end())
      throw NotFoundError(std::to_string(local_id), "query set " + id + " has no query " +
                                                        std::to_string(local_id));
    drop_task(id, set, it);
    return query_set_view(id, set);
  }

  nlohmann::json clear_query_set(const std::string& id) {
    std::lock_guard lk(mu_);
    auto& set = find_set(id);
    while (!set.tasks.empty()) drop_task(id, set, set.tasks.begin());
    return query_set_view(id, set);
  }

  std::vector<DatasetInfo> list_datasets() const {
    std::lock_guard lk(mu_);
    std::vector<DatasetInfo> out;
    for (const auto& [id, info] : datasets_) out.push_back(info);
    return out;
  }

  /// Parses eagerly; the dataset is visible only once fully persisted.
  DatasetInfo upload_dataset(const std::string& name, Format format, std::string_view payload,
                             DatasetOrigin origin = DatasetOrigin::uploaded) {
    if (payload.size() > config_.upload_limit)
      throw PayloadTooLarge("payload of " + std::to_string(payload.size()) +
                            " bytes exceeds the upload limit of " +
                            std::to_string(config_.upload_limit));
    if (!valid_dataset_id(name))
      throw InvalidInput("dataset name '" + name + "' must be 1-64 characters of [A-Za-z0-9._-]");
    {
      std::lock_guard lk(mu_);
      if (datasets_.contains(name) || uploading_.contains(name))
        throw ConflictError("dataset '" + name + "' already exists");
      uploading_.insert(name);
    }
    try {
      const Graph g = build_graph(parse(payload, format));
      DatasetInfo info{name, name, format, g.node_count(), g.edge_count(), origin};
      store_.save_dataset(info, payload, g);
      std::lock_guard lk(mu_);
      uploading_.erase(name);
      datasets_.emplace(name, info);
      return info;
    } catch (...) {
      std::lock_guard lk(mu_);
      uploading_.erase(name);
      throw;
    }
  }

  /// Registers every graph file in dir (by extension) that is not already
  /// present. Returns how many were added.
  std::size_t preload(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::size_t added = 0;
    for (const auto& path : files) {
      Format f;
      try {
        f = format_from_extension(path.string());
      } catch (const InvalidInput&) {
        continue;
      }
      const auto id = path.stem().string();
      {
        std::lock_guard lk(mu_);
        if (datasets_.contains(id)) continue;
      }
      upload_dataset(id, f, read_file(path.string()), DatasetOrigin::preloaded);
      ++added;
    }
    return added;
  }

  /// Blocks until no task is queued or running.
  void wait_idle() {
    std::unique_lock lk(mu_);
    idle_cv_.wait(lk, [&] { return queue_.empty() && running_ == 0; });
  }

  /// Number of graph loads from the datastore since start.
  std::size_t graph_loads() const {
    std::lock_guard lk(cache_mu_);
    return graph_loads_;
  }

private:
  using Clock = std::chrono::steady_clock;

  struct QuerySetState {
    std::string created_at;
    std::map<std::size_t, TaskRecord> tasks;
  };

  struct TaskKey {
    std::string set_id;
    std::size_t local_id;
  };

  std::string submit(std::vector<Query> queries, std::vector<QueryProblem> problems) {
    if (queries.empty()) throw SubmissionError({{std::nullopt, "query set is empty"}});

    std::unique_lock lk(mu_);
    std::vector<bool> bad(queries.size(), false);
    for (const auto& p : problems)
      if (p.local_id) bad[*p.local_id] = true;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      if (bad[i]) continue;
      if (!datasets_.contains(queries[i].dataset_id))
        problems.push_back({i, "unknown dataset '" + queries[i].dataset_id + "'"});
      for (auto& msg : queries[i].problems()) problems.push_back({i, std::move(msg)});
    }
    if (!problems.empty()) {
      std::stable_sort(problems.begin(), problems.end(),
                       [](const auto& a, const auto& b) { return a.local_id < b.local_id; });
      throw SubmissionError(std::move(problems));
    }

    std::string id;
    do id = make_uuid();
    while (sets_.contains(id));

    auto& set = sets_[id];
    set.created_at = now_timestamp();
    store_.save_query_set(id, {{"id", id}, {"created_at", set.created_at},
                               {"query_count", queries.size()}});
    for (std::size_t i = 0; i < queries.size(); ++i) {
      TaskRecord rec;
      rec.query_set_id = id;
      rec.local_id = i;
      rec.query = queries[i].normalized();
      rec.timings.enqueued_at = set.created_at;
      append_log(rec, "queued " + std::string(algorithm_name(rec.query.algorithm)) + " on '" +
                          rec.query.dataset_id + "' (" + rec.query.describe_parameters() + ")");
      persist(rec);
      set.tasks.emplace(i, std::move(rec));
      queue_.push_back({id, i});
    }
    lk.unlock();
    work_cv_.notify_all();
    return id;
  }

  // Reloads persisted sets. Interrupted tasks fail; queued ones re-enter the
  // queue in their original order.
  void recover() {
    std::vector<std::pair<std::string, TaskKey>> pending;
    for (const auto& header : store_.load_query_sets()) {
      const auto id = header.at("id").get<std::string>();
      auto& set = sets_[id];
      set.created_at = header.at("created_at").get<std::string>();
      for (const auto& j : store_.load_tasks(id)) {
        auto rec = record_from_json(j);
        if (rec.status == TaskStatus::running) {
          rec.status = TaskStatus::failed;
          rec.timings.finished_at = now_timestamp();
          append_log(rec, "error: interrupted by service restart");
          persist(rec);
        } else if (rec.status == TaskStatus::queued) {
          pending.push_back({rec.timings.enqueued_at, {id, rec.local_id}});
        }
        const auto local = rec.local_id;
        set.tasks.emplace(local, std::move(rec));
      }
    }
    std::sort(pending.begin(), pending.end(), [](const auto& a, const auto& b) {
      return std::tie(a.first, a.second.set_id, a.second.local_id) <
             std::tie(b.first, b.second.set_id, b.second.local_id);
    });
    for (auto& [when, key] : pending) queue_.push_back(std::move(key));
  }

  void worker_loop(std::stop_token stop, unsigned worker) {
    for (;;) {
      TaskKey key;
      Query query;
      std::stop_token task_stop;
      {
        std::unique_lock lk(mu_);
        work_cv_.wait(lk, stop, [&] { return !queue_.empty(); });
        if (stop.stop_requested()) return;
        key = std::move(queue_.front());
        queue_.pop_front();
        TaskRecord* rec = find_record(key);
        if (!rec || rec->status != TaskStatus::queued) {
          notify_if_idle();
          continue;
        }
        TaskRecord next = *rec;
        next.status = TaskStatus::running;
        next.timings.started_at = now_timestamp();
        append_log(next, "started on worker " + std::to_string(worker));
        persist(next);
        *rec = std::move(next);
        query = rec->query;
        ++running_;
        task_stop = cancel_[key.set_id][key.local_id].get_token();
      }

      std::vector<std::string> lines;
      std::optional<std::vector<RankedEntry>> result;
      std::string error;
      try {
        if (config_.before_task) config_.before_task(query);
        auto graph = graph_for(query.dataset_id, lines);
        const auto t0 = Clock::now();
        auto outcome = execute(*graph, query, task_stop, {.prune = true, .threads = config_.cycle_threads});
        lines.push_back(outcome.summary);
        lines.push_back("computed in " + millis_since(t0) + " ms");
        result = std::move(outcome.entries);
      } catch (const std::exception& e) {
        error = e.what();
      } catch (...) {
        error = "unknown failure";
      }

      std::lock_guard lk(mu_);
      --running_;
      if (auto s = cancel_.find(key.set_id); s != cancel_.end()) {
        s->second.erase(key.local_id);
        if (s->second.empty()) cancel_.erase(s);
      }
      if (TaskRecord* rec = find_record(key)) {
        TaskRecord next = *rec;
        for (const auto& line : lines) append_log(next, line);
        if (result) {
          next.result = std::move(result);
          next.status = TaskStatus::completed;
          append_log(next, "completed");
        } else {
          next.status = TaskStatus::failed;
          append_log(next, "error: " + error);
        }
        next.timings.finished_at = now_timestamp();
        persist(next);
        *rec = std::move(next);
      }
      notify_if_idle();
    }
  }

  // Loads each dataset's graph at most once per process.
  std::shared_ptr<const Graph> graph_for(const std::string& dataset_id,
                                         std::vector<std::string>& log) {
    std::shared_future<std::shared_ptr<const Graph>> fut;
    std::promise<std::shared_ptr<const Graph>> promise;
    bool loader = false;
    {
      std::lock_guard lk(cache_mu_);
      auto it = graph_cache_.find(dataset_id);
      if (it == graph_cache_.end()) {
        fut = promise.get_future().share();
        graph_cache_.emplace(dataset_id, fut);
        loader = true;
        ++graph_loads_;
      } else {
        fut = it->second;
      }
    }
    if (!loader) {
      auto g = fut.get();
      log.push_back("graph '" + dataset_id + "' served from memory cache");
      return g;
    }
    const auto t0 = Clock::now();
    try {
      auto g = std::make_shared<const Graph>(store_.load_graph(dataset_id));
      promise.set_value(g);
      log.push_back("graph '" + dataset_id + "' loaded from datastore in " + millis_since(t0) +
                    " ms");
      return g;
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard lk(cache_mu_);
      graph_cache_.erase(dataset_id);
      throw;
    }
  }

  static std::string millis_since(Clock::time_point t0) {
    const auto us = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", static_cast<double>(us) / 1000.0);
    return buf;
  }

  static void append_log(TaskRecord& rec, const std::string& line) {
    rec.log += "[" + now_timestamp() + "] " + line + "\n";
  }

  void persist(const TaskRecord& rec) const {
    store_.save_task(rec.query_set_id, rec.local_id, to_json(rec), rec.log);
  }

  QuerySetState& find_set(const std::string& id) {
    auto it = sets_.find(id);
    if (it == sets_.end()) throw NotFoundError(id, "unknown query set '" + id + "'");
    return it->second;
  }
  const QuerySetState& find_set(const std::string& id) const {
    return const_cast<Orchestrator*>(this)->find_set(id);
  }

  TaskRecord* find_record(const TaskKey& key) {
    auto s = sets_.find(key.set_id);
    if (s == sets_.end()) return nullptr;
    auto t = s->second.tasks.find(key.local_id);
    return t == s->second.tasks.end() ? nullptr : &t->second;
  }

  // Requires mu_. A running task is asked to stop; its result is discarded.
  void drop_task(const std::string& id, QuerySetState& set,
                 std::map<std::size_t, TaskRecord>::iterator it) {
    if (auto s = cancel_.find(id); s != cancel_.end())
      if (auto c = s->second.find(it->first); c != s->second.end()) c->second.request_stop();
    store_.remove_task(id, it->first);
    set.tasks.erase(it);
  }

  nlohmann::json query_set_view(const std::string& id, const QuerySetState& set) const {
    nlohmann::json queries = nlohmann::json::array();
    for (const auto& [local, rec] : set.tasks) {
      auto q = to_json(rec.query);
      q["local_id"] = local;
      queries.push_back(std::move(q));
    }
    return {{"id", id}, {"created_at", set.created_at}, {"queries", queries}};
  }

  void notify_if_idle() {
    if (queue_.empty() && running_ == 0) idle_cv_.notify_all();
  }

  ServiceConfig config_;
  Datastore store_;

  mutable std::mutex mu_;
  std::condition_variable_any work_cv_;
  std::condition_variable idle_cv_;
  std::map<std::string, QuerySetState> sets_;
  std::map<std::string, DatasetInfo> datasets_;
  std::set<std::string> uploading_;
  std::deque<TaskKey> queue_;
  std::map<std::string, std::map<std::size_t, std::stop_source>> cancel_;
  std::size_t running_ = 0;

  mutable std::mutex cache_mu_;
  std::map<std::string, std::shared_future<std::shared_ptr<const Graph>>> graph_cache_;
  std::size_t graph_loads_ = 0;

  // Last member: joined first on destruction.
  std::vector<std::jthread> workers_;
};

}  // namespace cyclerank
