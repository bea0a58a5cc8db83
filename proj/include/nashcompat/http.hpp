#pragma once

// HTTP binding for SessionService.
//
//   POST /api/sessions                 create; body optional {"form", "weighted"}
//   GET  /api/sessions/:token/form     form for the token's partner
//   POST /api/sessions/:token/answers  submit answers once
//   GET  /api/sessions/:token/report   joint report, 202 until both submitted

#include <string>

// Eigen first: httplib pulls in <resolv.h>, whose _res macro breaks Eigen.
#include "nashcompat/documents.hpp"
#include "nashcompat/session.hpp"

#include <httplib.h>

namespace nashcompat::service {

inline void send(httplib::Response& res, const Reply& reply) {
  res.status = reply.status;
  res.set_content(doc::dump(reply.body), "application/json");
}

inline void mount(httplib::Server& server, SessionService& service) {
  auto parse_body = [](const httplib::Request& req) -> std::optional<json> {
    if (req.body.empty()) return json::object();
    try {
      return doc::parse_text(req.body);
    } catch (const ValidationError&) {
      return std::nullopt;
    }
  };
  auto bad_json = [](httplib::Response& res) {
    send(res, {kBadRequest, json{{"error", "body is not valid JSON"}}});
  };

  server.Post("/api/sessions", [&service, parse_body, bad_json](const httplib::Request& req,
                                                                httplib::Response& res) {
    auto body = parse_body(req);
    if (!body) return bad_json(res);
    send(res, service.create_session(*body));
  });
  server.Get("/api/sessions/:token/form",
             [&service](const httplib::Request& req, httplib::Response& res) {
               send(res, service.fetch_form(req.path_params.at("token")));
             });
  server.Post("/api/sessions/:token/answers", [&service, parse_body, bad_json](
                                                  const httplib::Request& req,
                                                  httplib::Response& res) {
    auto body = parse_body(req);
    if (!body) return bad_json(res);
    send(res, service.submit(req.path_params.at("token"), *body));
  });
  server.Get("/api/sessions/:token/report",
             [&service](const httplib::Request& req, httplib::Response& res) {
               send(res, service.fetch_report(req.path_params.at("token")));
             });
}

}  // namespace nashcompat::service
