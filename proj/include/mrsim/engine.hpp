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

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mrsim/domain.hpp"

namespace mrsim {

enum class RngStreamId { Requests, Churn, PlannerTie, TaskDuration };

std::string_view to_string(RngStreamId id);

/// A named random stream whose sequence depends only on (master seed, name).
///
/// Bounded draws use rejection sampling over the raw 64-bit output rather than
/// std::uniform_int_distribution, whose mapping is implementation-defined, so
/// traces are identical across standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view name);

  /// Uniform integer in [lo, hi]. Throws std::invalid_argument if lo > hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform real in [0, 1).
  double uniform_unit();

 private:
  std::mt19937_64 gen_;
};

/// Identifies a scheduled event for cancellation. Default-constructed handles
/// refer to nothing.
struct EventHandle {
  std::uint64_t seq = 0;
  SimTime fire_at = 0;
  bool valid() const { return seq != 0; }
};

struct DeliveredEvent {
  SimTime fire_at = 0;
  std::uint64_t seq = 0;
  std::string target;
  std::string summary;
};

/// Renders one event-trace line: fire_at, seq, target, summary separated by tabs.
std::string format_trace_line(const DeliveredEvent& ev);

/// Single-threaded discrete-event scheduler. Events are totally ordered by
/// (fire_at, seq); seq is the insertion counter, so same-time events fire in
/// the order they were scheduled.
class Engine {
 public:
  using Action = std::function<void()>;

  explicit Engine(std::uint64_t master_seed);

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  SimTime now() const { return now_; }

  /// Throws std::invalid_argument when `at` lies in the past.
  EventHandle schedule(SimTime at, std::string target, std::string summary, Action action);

  /// True iff the event was still pending and has now been removed.
  bool cancel(EventHandle handle);

  /// Delivers every pending event with fire_at <= t, including ones scheduled
  /// while running, then sets now() to t. Returns the number delivered.
  std::size_t run_until(SimTime t);

  std::size_t pending() const { return queue_.size(); }
  std::uint64_t master_seed() const { return master_seed_; }

  RngStream& stream(RngStreamId id);
  std::int64_t draw(RngStreamId id, std::int64_t lo, std::int64_t hi) {
    return stream(id).uniform_int(lo, hi);
  }

  /// Called after each delivery, in delivery order.
  void set_observer(std::function<void(const DeliveredEvent&)> observer) {
    observer_ = std::move(observer);
  }

  const std::vector<DeliveredEvent>& trace() const { return trace_; }
  std::string trace_text() const;

 private:
  struct Pending {
    std::string target;
    std::string summary;
    Action action;
  };
  using Key = std::pair<SimTime, std::uint64_t>;

  std::uint64_t master_seed_;
  SimTime now_ = 0;
  bool running_ = false;
  std::uint64_t next_seq_ = 1;
  std::map<Key, Pending> queue_;
  std::unordered_map<std::uint64_t, SimTime> live_;
  std::vector<RngStream> streams_;
  std::vector<DeliveredEvent> trace_;
  std::function<void(const DeliveredEvent&)> observer_;
};

}  // namespace mrsim
