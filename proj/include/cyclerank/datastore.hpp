#pragma once

// On-disk datastore for the task service. Layout under the root:
//
//   datasets/<id>/info.json       DatasetInfo
//   datasets/<id>/original.<ext>  file as uploaded
//   datasets/<id>/graph.bin       binary graph cache
//   querysets/<uuid>.json         query set header and queries
//   results/<uuid>/<local>.json   one task record per query
//   logs/<uuid>/<local>.log       task log text
//
// Every file is replaced by write-then-rename, so readers never observe a
// partial write.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstddef>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cyclerank/error.hpp"
#include "cyclerank/graph.hpp"
#include "cyclerank/io.hpp"

namespace cyclerank {

namespace fs = std::filesystem;

enum class DatasetOrigin { preloaded, uploaded };

struct DatasetInfo {
  std::string dataset_id;
  std::string display_name;
  Format format = Format::edgelist;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  DatasetOrigin origin = DatasetOrigin::uploaded;
};

inline nlohmann::json to_json(const DatasetInfo& d) {
  return {
      {"dataset_id", d.dataset_id},
      {"display_name", d.display_name},
      {"format", std::string(format_name(d.format))},
      {"node_count", d.node_count},
      {"edge_count", d.edge_count},
      {"origin", d.origin == DatasetOrigin::preloaded ? "preloaded" : "uploaded"},
  };
}

inline DatasetInfo dataset_from_json(const nlohmann::json& j) {
  DatasetInfo d;
  d.dataset_id = j.at("dataset_id").get<std::string>();
  d.display_name = j.at("display_name").get<std::string>();
  d.format = parse_format(j.at("format").get<std::string>());
  d.node_count = j.at("node_count").get<std::size_t>();
  d.edge_count = j.at("edge_count").get<std::size_t>();
  d.origin = j.at("origin").get<std::string>() == "preloaded" ? DatasetOrigin::preloaded
                                                              : DatasetOrigin::uploaded;
  return d;
}

/// Dataset ids double as directory names: 1-64 of [A-Za-z0-9._-], not
/// starting with a dot.
inline bool valid_dataset_id(std::string_view id) {
  if (id.empty() || id.size() > 64 || id.front() == '.') return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

/// Milliseconds since the Unix epoch rendered as ISO 8601 UTC.
inline std::string iso_timestamp(std::int64_t millis) {
  const std::time_t secs = static_cast<std::time_t>(millis / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(millis % 1000));
  return buf;
}

inline std::string now_timestamp() {
  using namespace std::chrono;
  return iso_timestamp(
      duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count());
}

/// Random RFC 4122 version 4 UUID.
inline std::string make_uuid() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::uniform_int_distribution<std::uint64_t> dist;
  std::uint64_t hi = dist(rng), lo = dist(rng);
  hi = (hi & 0xFFFFFFFFFFFF0FFFull) | 0x0000000000004000ull;
  lo = (lo & 0x3FFFFFFFFFFFFFFFull) | 0x8000000000000000ull;
  char buf[37];
  std::snprintf(buf, sizeof buf, "%08x-%04x-%04x-%04x-%012llx",
                static_cast<unsigned>(hi >> 32), static_cast<unsigned>((hi >> 16) & 0xFFFF),
                static_cast<unsigned>(hi & 0xFFFF), static_cast<unsigned>(lo >> 48),
                static_cast<unsigned long long>(lo & 0xFFFFFFFFFFFFull));
  return buf;
}

inline bool looks_like_uuid(std::string_view s) {
  if (s.size() != 36) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (i == 8 || i == 13 || i == 18 || i == 23) {
      if (c != '-') return false;
    } else if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
      return false;
    }
  }
  return true;
}

class Datastore {
public:
  explicit Datastore(fs::path root) : root_(std::move(root)) {
    for (auto sub : {"datasets", "querysets", "results", "logs"}) fs::create_directories(root_ / sub);
  }

  const fs::path& root() const noexcept { return root_; }

  static void write_atomic(const fs::path& path, std::string_view bytes) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      out.flush();
      if (!out) throw Error("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
  }

  static nlohmann::json read_json(const fs::path& path) {
    return nlohmann::json::parse(read_file(path.string()));
  }

  // Datasets

  bool has_dataset(const std::string& id) const {
    return fs::exists(root_ / "datasets" / id / "info.json");
  }

  void save_dataset(const DatasetInfo& info, std::string_view original, const Graph& g) const {
    const auto dir = root_ / "datasets" / info.dataset_id;
    write_atomic(dir / ("original." + std::string(format_name(info.format))), original);
    std::ostringstream bin;
    write_binary(g, bin);
    write_atomic(dir / "graph.bin", bin.str());
    // info.json last: its presence marks the dataset complete.
    write_atomic(dir / "info.json", to_json(info).dump(2));
  }

  std::vector<DatasetInfo> load_datasets() const {
    std::vector<DatasetInfo> out;
    for (const auto& entry : fs::directory_iterator(root_ / "datasets")) {
      const auto info = entry.path() / "info.json";
      if (entry.is_directory() && fs::exists(info)) out.push_back(dataset_from_json(read_json(info)));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.dataset_id < b.dataset_id; });
    return out;
  }

  Graph load_graph(const std::string& id) const {
    std::ifstream in(root_ / "datasets" / id / "graph.bin", std::ios::binary);
    if (!in) throw NotFoundError(id, "no graph cache for dataset '" + id + "'");
    return read_binary(in);
  }

  // Query sets and task records

  void save_query_set(const std::string& id, const nlohmann::json& header) const {
    write_atomic(root_ / "querysets" / (id + ".json"), header.dump(2));
  }

  std::vector<nlohmann::json> load_query_sets() const {
    std::vector<nlohmann::json> out;
    for (const auto& entry : fs::directory_iterator(root_ / "querysets"))
      if (entry.path().extension() == ".json") out.push_back(read_json(entry.path()));
    return out;
  }

  void save_task(const std::string& set_id, std::size_t local_id, const nlohmann::json& record,
                 const std::string& log) const {
    const auto name = std::to_string(local_id);
    write_atomic(root_ / "logs" / set_id / (name + ".log"), log);
    write_atomic(root_ / "results" / set_id / (name + ".json"), record.dump(2));
  }

  std::vector<nlohmann::json> load_tasks(const std::string& set_id) const {
    std::vector<nlohmann::json> out;
    const auto dir = root_ / "results" / set_id;
    if (!fs::exists(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.path().extension() == ".json") out.push_back(read_json(entry.path()));
    return out;
  }

  void remove_task(const std::string& set_id, std::size_t local_id) const {
    const auto name = std::to_string(local_id);
    fs::remove(root_ / "results" / set_id / (name + ".json"));
    fs::remove(root_ / "logs" / set_id / (name + ".log"));
  }

private:
  fs::path root_;
};

}  // namespace cyclerank
