#include "cpm/service/http_api.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <functional>

#include "cpm/error.hpp"
#include "cpm/export.hpp"
#include "cpm/filtering.hpp"
#include "cpm/service/errors.hpp"
#include "cpm/xes.hpp"

namespace cpm::service {
namespace {

constexpr const char* kJson = "application/json";

class BadRequest : public Error {
public:
  using Error::Error;
  const char* code() const noexcept override { return "bad_request"; }
};

Json error_body(std::string_view code, std::string_view message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

int status_for(const Error& e) {
  if (dynamic_cast<const NotFoundError*>(&e)) return 404;
  if (dynamic_cast<const ConflictError*>(&e)) return 409;
  if (dynamic_cast<const ValidationError*>(&e)) return 422;
  return 400;
}

// Runs a handler and turns library errors into JSON error responses.
// `ingestion_route` reports every library error other than 404 as 400.
void guarded(httplib::Response& res, const std::function<void()>& body, bool ingestion_route = false) {
  try {
    body();
  } catch (const Error& e) {
    int status = status_for(e);
    if (ingestion_route && status != 404) status = 400;
    send_json(res, status, error_body(e.code(), e.what()));
  } catch (const Json::exception& e) {
    send_json(res, 400, error_body("bad_request", std::string("invalid JSON: ") + e.what()));
  }
}

Json parse_body(const httplib::Request& req) {
  Json body = Json::parse(req.body, nullptr, false);
  if (body.is_discarded()) throw BadRequest("request body is not valid JSON");
  if (!body.is_object()) throw BadRequest("request body must be a JSON object");
  return body;
}

std::size_t index_field(const Json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || !it->is_number_integer())
    throw BadRequest(std::string("'") + key + "' must be an integer");
  const auto v = it->get<long long>();
  if (v < 0) throw ConflictError(std::string("'") + key + "' must not be negative");
  return static_cast<std::size_t>(v);
}

Metric metric_param(const httplib::Request& req) {
  return Metric::parse(req.has_param("metric") ? req.get_param_value("metric") : "frequency");
}

const ComparisonResult& require_result(const ComparisonSession& s) {
  if (!s.result) throw ConflictError("session '" + s.session_id + "' has no active pair");
  return *s.result;
}

CsvMapping mapping_from_form(const httplib::Request& req) {
  CsvMapping mapping;
  if (req.has_file("mapping")) {
    const Json j = Json::parse(req.get_file_value("mapping").content, nullptr, false);
    if (j.is_discarded()) throw BadRequest("'mapping' is not valid JSON");
    mapping = csv_mapping_from_json(j);
  }
  const auto field = [&](const char* key, std::string& target) {
    if (req.has_file(key)) target = req.get_file_value(key).content;
  };
  field("case_column", mapping.case_column);
  field("activity_column", mapping.activity_column);
  field("timestamp_column", mapping.timestamp_column);
  field("timestamp_format", mapping.timestamp_format);
  return mapping;
}

void send_download(httplib::Response& res, const std::string& body, const char* content_type,
                   const std::string& file_name) {
  res.status = 200;
  res.set_header("Content-Disposition", "attachment; filename=\"" + file_name + "\"");
  res.set_content(body, content_type);
}

}  // namespace

void HttpApi::install(httplib::Server& server, std::size_t max_upload_bytes) {
  server.set_payload_max_length(max_upload_bytes);

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404) send_json(res, 404, error_body("not_found", "no such route"));
    else if (res.status == 413) send_json(res, 413, error_body("payload_too_large", "request body exceeds the upload limit"));
    else send_json(res, res.status, error_body("http_error", "HTTP " + std::to_string(res.status)));
  });
  server.set_exception_handler([](const httplib::Request& req, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "unknown error";
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    spdlog::error("{} {}: {}", req.method, req.path, what);
    send_json(res, 500, error_body("internal_error", what));
  });
  server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    spdlog::debug("{} {} -> {}", req.method, req.path, res.status);
  });

  server.Get("/api/logs", [this](const httplib::Request&, httplib::Response& res) {
    Json out = Json::array();
    for (const auto& e : logs_.list()) out.push_back(entry_to_json(e));
    send_json(res, 200, out);
  });

  server.Post("/api/logs", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(
        res,
        [&] {
          if (!req.is_multipart_form_data() || !req.has_file("file"))
            throw BadRequest("expected multipart/form-data with a 'file' part");
          const auto& file = req.get_file_value("file");
          const std::string explicit_format = req.has_file("format") ? req.get_file_value("format").content : "";
          const auto format = detect_format(explicit_format, file.filename);
          if (!format) throw BadRequest("cannot tell the log format; name the file .xes/.csv or send 'format'");
          const CsvMapping mapping = *format == LogFormat::Csv ? mapping_from_form(req) : CsvMapping{};
          const std::string name = file.filename.empty() ? "upload." + std::string(to_string(*format)) : file.filename;
          const auto result = logs_.add(name, file.content, *format, mapping);
          send_json(res, result.created ? 201 : 200, entry_to_json(result.entry));
        },
        true);
  });

  server.Get("/api/logs/:id", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto entry = logs_.entry(req.path_params.at("id"));
      if (!entry) throw NotFoundError("unknown log '" + req.path_params.at("id") + "'");
      send_json(res, 200, entry_to_json(*entry));
    });
  });

  server.Get("/api/logs/:id/schema", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto log = logs_.log(req.path_params.at("id"));
      send_json(res, 200, filter_options_to_json(describe_filter_options(*log)));
    });
  });

  server.Get("/api/sessions", [this](const httplib::Request&, httplib::Response& res) {
    Json out = Json::array();
    for (const auto& s : sessions_.list()) out.push_back(session_to_json(*s));
    send_json(res, 200, out);
  });

  server.Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const Json body = parse_body(req);
      if (!body.contains("log_id") || !body["log_id"].is_string()) throw BadRequest("'log_id' must be a string");
      send_json(res, 201, session_to_json(*sessions_.create(body["log_id"].get<std::string>())));
    });
  });

  server.Get("/api/sessions/:id", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, session_to_json(*sessions_.get(req.path_params.at("id")))); });
  });

  server.Post("/api/sessions/:id/slices", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const Json body = parse_body(req);
      std::string label;
      if (const auto it = body.find("label"); it != body.end()) {
        if (!it->is_string()) throw BadRequest("'label' must be a string");
        label = it->get<std::string>();
      }
      const Json filter_json = body.contains("filter") ? body["filter"] : body;
      FilterSpec filter = filter_from_json(filter_json);
      if (label.empty()) label = filter.describe();
      const auto [session, index] = sessions_.add_slice(req.path_params.at("id"), label, std::move(filter));
      Json out = slice_to_json(session->slices[index].slice);
      out["index"] = index;
      out["session_id"] = session->session_id;
      send_json(res, 201, out);
    });
  });

  server.Put("/api/sessions/:id/active_pair", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const Json body = parse_body(req);
      const auto session = sessions_.set_active_pair(req.path_params.at("id"), index_field(body, "left_index"),
                                                     index_field(body, "right_index"));
      send_json(res, 200, session_to_json(*session));
    });
  });

  server.Get("/api/sessions/:id/comparison", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const Metric metric = metric_param(req);
      const auto session = sessions_.get(req.path_params.at("id"));
      Json out = comparison_to_json(require_result(*session), metric);
      out["session_id"] = session->session_id;
      out["active_pair"] = {{"left_index", session->active_pair->first}, {"right_index", session->active_pair->second}};
      send_json(res, 200, out);
    });
  });

  server.Get("/api/sessions/:id/export", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string kind = req.has_param("kind") ? req.get_param_value("kind") : "";
      const Metric metric = metric_param(req);
      const auto session = sessions_.get(req.path_params.at("id"));
      const ComparisonResult& result = require_result(*session);
      const auto& left = session->slices[session->active_pair->first];
      const auto& right = session->slices[session->active_pair->second];
      const std::string stem = "comparison-" + session->session_id;

      if (kind == "report") {
        send_download(res, export_comparison_report(result, metric), "text/html; charset=utf-8", stem + ".html");
      } else if (kind == "dot_left" || kind == "dot_right") {
        const Side side = kind == "dot_left" ? Side::Left : Side::Right;
        const Dfg& dfg = side == Side::Left ? result.left.dfg : result.right.dfg;
        send_download(res, export_dot(dfg, metric, highlight_classes(result, side)), "text/vnd.graphviz",
                      stem + "-" + std::string(to_string(side)) + ".dot");
      } else if (kind == "variants_left" || kind == "variants_right") {
        const auto& s = kind == "variants_left" ? left : right;
        send_download(res, export_variants_csv(*s.filtered_log), "text/csv; charset=utf-8",
                      stem + (kind == "variants_left" ? "-left" : "-right") + "-variants.csv");
      } else if (kind == "log_left" || kind == "log_right") {
        const auto& s = kind == "log_left" ? left : right;
        send_download(res, write_xes(*s.filtered_log), "application/xml",
                      stem + (kind == "log_left" ? "-left" : "-right") + ".xes");
      } else {
        throw ValidationError("unknown export kind '" + kind +
                              "' (expected report, dot_left, dot_right, variants_left, variants_right, log_left or "
                              "log_right)");
      }
    });
  });
}

}  // namespace cpm::service
