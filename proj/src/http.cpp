// Copyright 2026 The clx authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clx/http.hpp"

#include <charconv>
#include <functional>

#include "httplib.h"

namespace clx {

namespace {

using nlohmann::json;

void send_json(httplib::Response& res, const json& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(-1, ' ', false, json::error_handler_t::replace) + "\n",
                  "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& detail) {
  send_json(res, json{{"error", code}, {"detail", detail}}, status);
}

using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

Handler guarded(Handler h) {
  return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
    try {
      h(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e.status(), e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "bad_json", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

std::size_t parse_count(const std::string& text, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ServiceError(400, "bad_parameter", std::string(what) + " must be a non-negative integer");
  return v;
}

std::optional<std::size_t> count_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return parse_count(req.get_param_value(name), name);
}

json json_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw ServiceError(400, "bad_json", e.what());
  }
}

std::size_t json_count(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_unsigned())
    throw ServiceError(400, "bad_request", std::string(key) + " must be a non-negative integer");
  return j[key].get<std::size_t>();
}

}  // namespace

void register_routes(httplib::Server& server, SessionService& service) {
  server.Post("/sessions", guarded([&](const httplib::Request& req, httplib::Response& res) {
                std::optional<std::string> column;
                if (req.has_param("column")) column = req.get_param_value("column");
                send_json(res,
                          service.create_from_payload(req.body, req.get_header_value("Content-Type"),
                                                      column),
                          201);
              }));

  server.Get(R"(/sessions/([^/]+)/hierarchy)",
             guarded([&](const httplib::Request& req, httplib::Response& res) {
               send_json(res, service.hierarchy(req.matches[1]));
             }));

  server.Post(R"(/sessions/([^/]+)/target)",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                const json body = json_body(req);
                if (body.contains("cluster")) {
                  send_json(res, service.label_cluster(req.matches[1], json_count(body, "cluster")));
                } else if (body.contains("pattern") && body["pattern"].is_string()) {
                  send_json(res, service.label_pattern(req.matches[1],
                                                       body["pattern"].get<std::string>()));
                } else {
                  throw ServiceError(400, "bad_request", "body needs cluster or pattern");
                }
              }));

  server.Get(R"(/sessions/([^/]+)/program)",
             guarded([&](const httplib::Request& req, httplib::Response& res) {
               send_json(res, service.program(req.matches[1]));
             }));

  server.Get(R"(/sessions/([^/]+)/preview)",
             guarded([&](const httplib::Request& req, httplib::Response& res) {
               send_json(res, service.preview(req.matches[1], count_param(req, "branch"),
                                              count_param(req, "limit")));
             }));

  server.Post(R"(/sessions/([^/]+)/repair)",
              guarded([&](const httplib::Request& req, httplib::Response& res) {
                const json body = json_body(req);
                if (!body.contains("source") || !body["source"].is_string())
                  throw ServiceError(400, "bad_request", "body needs source pattern text");
                send_json(res, service.repair(req.matches[1], body["source"].get<std::string>(),
                                              json_count(body, "index")));
              }));

  server.Get(R"(/sessions/([^/]+)/export)",
             guarded([&](const httplib::Request& req, httplib::Response& res) {
               if (!req.has_param("format"))
                 throw ServiceError(400, "bad_parameter", "format is required");
               auto doc = service.export_document(req.matches[1], req.get_param_value("format"));
               res.set_content(std::move(doc.body), doc.content_type);
             }));

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    send_error(res, res.status, res.status == 404 ? "not_found" : "error",
               httplib::status_message(res.status));
  });
}

std::pair<std::string, int> parse_listen(const std::string& listen) {
  std::string host = "127.0.0.1";
  std::string port = listen;
  if (const auto colon = listen.rfind(':'); colon != std::string::npos) {
    if (colon > 0) host = listen.substr(0, colon);
    port = listen.substr(colon + 1);
  }
  int p = 0;
  const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), p);
  if (port.empty() || ec != std::errc() || ptr != port.data() + port.size() || p < 0 || p > 65535)
    throw std::invalid_argument("bad listen address '" + listen + "'");
  return {host, p};
}

bool serve(SessionService& service, const std::string& listen, std::ostream& log) {
  const auto [host, port] = parse_listen(listen);
  httplib::Server server;
  register_routes(server, service);
  if (!server.bind_to_port(host, port)) return false;
  log << "listening on " << host << ":" << port << std::endl;
  return server.listen_after_bind();
}

}  // namespace clx
