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

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mrsim/command.hpp"
#include "mrsim/simulation.hpp"

namespace httplib {
class Server;
}

namespace mrsim {

/// One entry of the live feed. Sequence numbers start at 1 and never repeat.
struct FeedEvent {
  std::uint64_t seq = 0;
  std::string kind;  // envelope, transition, dead_letter, tick, ack
  Json body;
};

void to_json(Json& j, const FeedEvent& e);

struct SessionOptions {
  /// Simulated units per wall-clock second while free-running.
  double pace = 2.0;
  /// Oldest feed events are dropped beyond this many.
  std::size_t retention = 100000;
};

/// Interactive session around one Simulation. A worker thread owns the
/// simulation and applies commands in arrival order; readers only see
/// published copies, so queries never block on a long run.
class ControlSession {
 public:
  explicit ControlSession(const Scenario& scenario, SessionOptions options = {});
  ~ControlSession();

  ControlSession(const ControlSession&) = delete;
  ControlSession& operator=(const ControlSession&) = delete;

  /// Queues the command and waits until the worker has applied it.
  CommandResult submit(const Command& cmd);

  /// Latest published state document.
  std::shared_ptr<const Json> state() const;

  /// Finalized tick samples in [from, to), clipped to what is finalized.
  Json metrics(std::optional<std::int64_t> from, std::optional<std::int64_t> to) const;

  /// Feed events after `since`. A cursor that is unknown (ahead of the feed,
  /// or older than the retained window) restarts from the oldest retained event.
  std::vector<FeedEvent> events_since(std::optional<std::uint64_t> since,
                                      std::size_t limit = SIZE_MAX) const;
  std::uint64_t latest_seq() const;
  /// Blocks until an event newer than `after` exists, the timeout expires or the
  /// session stops. Returns true when there is something to read.
  bool wait_for_events(std::uint64_t after, std::chrono::milliseconds timeout) const;

  /// Runs `fn` against the simulation while the worker is not touching it.
  void inspect(const std::function<void(const Simulation&)>& fn) const;

  bool running() const;
  bool stopped() const;
  void stop();

 private:
  struct Pending {
    Command cmd;
    std::promise<CommandResult> done;
  };
  struct Published {
    Json state;
    std::vector<TickSample> finalized;
  };

  void worker();
  CommandResult handle(const Command& cmd);
  void advance(SimTime to);
  void publish();
  void push_feed(std::string kind, Json body);

  std::unique_ptr<Simulation> sim_;
  SessionOptions options_;
  // Held by the worker while it changes the simulation.
  mutable std::mutex sim_mu_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Pending> inbox_;
  bool stopping_ = false;
  bool free_run_ = false;

  mutable std::mutex pub_mu_;
  std::shared_ptr<const Published> published_;

  mutable std::mutex feed_mu_;
  mutable std::condition_variable feed_cv_;
  std::deque<FeedEvent> feed_;
  std::uint64_t next_seq_ = 1;
  std::int64_t ticks_announced_ = 0;

  std::thread thread_;
};

/// HTTP front end: POST /commands, GET /state, GET /metrics?from=&to=,
/// GET /events?since=&follow=0|1 (server-sent events).
std::unique_ptr<httplib::Server> make_http_server(ControlSession& session);

}  // namespace mrsim
