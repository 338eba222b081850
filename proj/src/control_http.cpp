// Copyright 2026 The mrsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <httplib.h>

#include "mrsim/control.hpp"

namespace mrsim {
namespace {

constexpr const char* kJson = "application/json";

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

std::optional<std::int64_t> parse_int(const std::string& s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string sse_frame(const FeedEvent& e) {
  return "id: " + std::to_string(e.seq) + "\nevent: " + e.kind + "\ndata: " + Json(e).dump() +
         "\n\n";
}

}  // namespace

std::unique_ptr<httplib::Server> make_http_server(ControlSession& session) {
  auto server = std::make_unique<httplib::Server>();

  server->Post("/commands", [&session](const httplib::Request& req, httplib::Response& res) {
    Json doc = Json::parse(req.body, nullptr, false);
    if (doc.is_discarded()) {
      reply(res, 400, Json{{"errors", {"body is not valid JSON"}}});
      return;
    }
    Command cmd;
    if (auto errors = parse_command(doc, cmd); !errors.empty()) {
      reply(res, 400, Json{{"errors", errors}});
      return;
    }
    const CommandResult r = session.submit(cmd);
    reply(res, r.accepted ? 200 : 422, r);
  });

  server->Get("/state", [&session](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, *session.state());
  });

  server->Get("/metrics", [&session](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::int64_t> from, to;
    for (auto [name, slot] : {std::pair{"from", &from}, std::pair{"to", &to}}) {
      if (!req.has_param(name)) continue;
      *slot = parse_int(req.get_param_value(name));
      if (!*slot || **slot < 0) {
        reply(res, 400, Json{{"errors", {std::string(name) + " must be a non-negative integer"}}});
        return;
      }
    }
    if (from && to && *from > *to) {
      reply(res, 400, Json{{"errors", {"from must not exceed to"}}});
      return;
    }
    reply(res, 200, session.metrics(from, to));
  });

  server->Get("/events", [&session](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::uint64_t> since;
    std::string raw;
    if (req.has_param("since")) {
      raw = req.get_param_value("since");
    } else if (req.has_header("Last-Event-ID")) {
      raw = req.get_header_value("Last-Event-ID");
    }
    if (!raw.empty()) {
      auto v = parse_int(raw);
      if (!v || *v < 0) {
        reply(res, 400, Json{{"errors", {"since must be a non-negative integer"}}});
        return;
      }
      since = static_cast<std::uint64_t>(*v);
    }
    const bool follow = req.has_param("follow") && req.get_param_value("follow") == "1";
    res.set_header("Cache-Control", "no-cache");

    if (!follow) {
      std::string body;
      for (const auto& e : session.events_since(since)) body += sse_frame(e);
      res.set_content(body, "text/event-stream");
      return;
    }

    auto cursor = std::make_shared<std::optional<std::uint64_t>>(since);
    res.set_chunked_content_provider(
        "text/event-stream", [&session, cursor](std::size_t, httplib::DataSink& sink) {
          auto batch = session.events_since(*cursor, 512);
          for (const auto& e : batch) {
            const std::string frame = sse_frame(e);
            if (!sink.write(frame.data(), frame.size())) return false;
            *cursor = e.seq;
          }
          if (!batch.empty()) return true;
          if (session.stopped()) {
            sink.done();
            return true;
          }
          if (!session.wait_for_events(cursor->value_or(0), std::chrono::milliseconds(500))) {
            static constexpr std::string_view keepalive = ": keepalive\n\n";
            return sink.write(keepalive.data(), keepalive.size());
          }
          return true;
        });
  });

  return server;
}

}  // namespace mrsim
