#pragma once

// HTTP/JSON front of the Orchestrator.
//
//   POST   /api/querysets                           submit, 202 + status
//   GET    /api/querysets/:id                       query set
//   GET    /api/querysets/:id/status                per-task status
//   GET    /api/querysets/:id/results               per-task records
//   DELETE /api/querysets/:id                       clear every query
//   DELETE /api/querysets/:id/queries/:local_id     drop one query
//   GET    /api/datasets                            dataset list
//   POST   /api/datasets                            multipart: name, format, file

#include <string>

#include <httplib.h>
#include <json.hpp>

#include "cyclerank/error.hpp"
#include "cyclerank/orchestrator.hpp"

namespace cyclerank {

namespace detail {

inline void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, int status, const nlohmann::json& id,
                       const std::string& message) {
  send_json(res, status, {{"id", id}, {"error", message}});
}

// Maps library exceptions onto HTTP statuses.
template <typename Fn>
void guarded(httplib::Response& res, const nlohmann::json& id, Fn&& fn) {
  try {
    fn();
  } catch (const SubmissionError& e) {
    nlohmann::json errors = nlohmann::json::array();
    for (const auto& p : e.problems()) {
      errors.push_back({{"local_id", p.local_id ? nlohmann::json(*p.local_id) : nlohmann::json(nullptr)},
                        {"message", p.message}});
    }
    send_json(res, 400, {{"id", id}, {"error", e.what()}, {"errors", errors}});
  } catch (const NotFoundError& e) {
    send_error(res, 404, id, e.what());
  } catch (const ConflictError& e) {
    send_error(res, 409, id, e.what());
  } catch (const PayloadTooLarge& e) {
    send_error(res, 413, id, e.what());
  } catch (const ParseError& e) {
    nlohmann::json body{{"id", id}, {"error", e.what()}, {"line", e.line()}};
    send_json(res, 400, body);
  } catch (const InvalidInput& e) {
    send_error(res, 400, id, e.what());
  } catch (const nlohmann::json::exception& e) {
    send_error(res, 400, id, std::string("malformed JSON: ") + e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, id, e.what());
  }
}

inline std::size_t parse_local_id(const std::string& s) {
  std::uint64_t v = 0;
  if (!detail::parse_uint(s, v)) throw NotFoundError(s, "no query with local id '" + s + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace detail

/// Registers the API routes on `server`. The orchestrator must outlive it.
inline void mount_api(httplib::Server& server, Orchestrator& orch) {
  using httplib::Request;
  using httplib::Response;
  using nlohmann::json;

  server.set_payload_max_length(orch.config().upload_limit + (1u << 20));
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(/api/.*)", [](const Request&, Response& res) { res.status = 204; });

  server.Post("/api/querysets", [&orch](const Request& req, Response& res) {
    detail::guarded(res, nullptr, [&] {
      const auto id = orch.submit_query_set(json::parse(req.body));
      detail::send_json(res, 202, orch.get_status(id));
    });
  });

  server.Get("/api/querysets/:id", [&orch](const Request& req, Response& res) {
    const auto& id = req.path_params.at("id");
    detail::guarded(res, id, [&] { detail::send_json(res, 200, orch.get_query_set(id)); });
  });

  server.Get("/api/querysets/:id/status", [&orch](const Request& req, Response& res) {
    const auto& id = req.path_params.at("id");
    detail::guarded(res, id, [&] { detail::send_json(res, 200, orch.get_status(id)); });
  });

  server.Get("/api/querysets/:id/results", [&orch](const Request& req, Response& res) {
    const auto& id = req.path_params.at("id");
    detail::guarded(res, id, [&] { detail::send_json(res, 200, orch.get_results(id)); });
  });

  server.Delete("/api/querysets/:id", [&orch](const Request& req, Response& res) {
    const auto& id = req.path_params.at("id");
    detail::guarded(res, id, [&] { detail::send_json(res, 200, orch.clear_query_set(id)); });
  });

  server.Delete("/api/querysets/:id/queries/:local_id", [&orch](const Request& req, Response& res) {
    const auto& id = req.path_params.at("id");
    detail::guarded(res, id, [&] {
      const auto local = detail::parse_local_id(req.path_params.at("local_id"));
      detail::send_json(res, 200, orch.delete_query(id, local));
    });
  });

  server.Get("/api/datasets", [&orch](const Request&, Response& res) {
    detail::guarded(res, nullptr, [&] {
      json list = json::array();
      for (const auto& d : orch.list_datasets()) list.push_back(to_json(d));
      detail::send_json(res, 200, {{"id", nullptr}, {"datasets", list}});
    });
  });

  server.Post("/api/datasets", [&orch](const Request& req, Response& res) {
    detail::guarded(res, nullptr, [&] {
      for (const char* field : {"name", "format", "file"})
        if (!req.has_file(field))
          throw InvalidInput(std::string("missing multipart field '") + field + "'");
      const auto info = orch.upload_dataset(req.get_file_value("name").content,
                                            parse_format(req.get_file_value("format").content),
                                            req.get_file_value("file").content);
      auto body = to_json(info);
      body["id"] = nullptr;
      detail::send_json(res, 201, body);
    });
  });
}

}  // namespace cyclerank
