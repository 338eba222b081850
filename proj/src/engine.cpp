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

#include "mrsim/engine.hpp"

#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace mrsim {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr RngStreamId kAllStreams[] = {RngStreamId::Requests, RngStreamId::Churn,
                                       RngStreamId::PlannerTie, RngStreamId::TaskDuration};

}  // namespace

std::string_view to_string(RngStreamId id) {
  switch (id) {
    case RngStreamId::Requests:
      return "requests";
    case RngStreamId::Churn:
      return "churn";
    case RngStreamId::PlannerTie:
      return "planner_tie";
    case RngStreamId::TaskDuration:
      return "task_duration";
  }
  return "?";
}

RngStream::RngStream(std::uint64_t master_seed, std::string_view name) {
  const std::uint64_t h = fnv1a(name);
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32), static_cast<std::uint32_t>(h),
                    static_cast<std::uint32_t>(h >> 32)};
  gen_.seed(seq);
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("empty draw range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) {
    return static_cast<std::int64_t>(gen_());
  }
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = gen_();
  while (x >= limit) x = gen_();
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % range);
}

double RngStream::uniform_unit() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

std::string format_trace_line(const DeliveredEvent& ev) {
  return fmt::format("{}\t{}\t{}\t{}", ev.fire_at, ev.seq, ev.target, ev.summary);
}

Engine::Engine(std::uint64_t master_seed) : master_seed_(master_seed) {
  for (auto id : kAllStreams) streams_.emplace_back(master_seed, to_string(id));
}

EventHandle Engine::schedule(SimTime at, std::string target, std::string summary,
                             Action action) {
  if (at < now_) {
    throw std::invalid_argument(fmt::format("cannot schedule at t={} before now={}", at, now_));
  }
  const std::uint64_t seq = next_seq_++;
  queue_.emplace(Key{at, seq}, Pending{std::move(target), std::move(summary), std::move(action)});
  live_.emplace(seq, at);
  return EventHandle{seq, at};
}

bool Engine::cancel(EventHandle handle) {
  auto it = live_.find(handle.seq);
  if (it == live_.end()) return false;
  queue_.erase(Key{it->second, it->first});
  live_.erase(it);
  return true;
}

std::size_t Engine::run_until(SimTime t) {
  if (t < now_) {
    throw std::invalid_argument(fmt::format("cannot run back to t={} from now={}", t, now_));
  }
  if (running_) throw std::logic_error("run_until called from inside an event");
  running_ = true;
  struct Reset {
    bool& flag;
    ~Reset() { flag = false; }
  } reset{running_};
  std::size_t delivered = 0;
  while (!queue_.empty() && queue_.begin()->first.first <= t) {
    auto node = queue_.extract(queue_.begin());
    live_.erase(node.key().second);
    now_ = node.key().first;
    Pending& ev = node.mapped();
    trace_.push_back(DeliveredEvent{node.key().first, node.key().second, std::move(ev.target),
                                    std::move(ev.summary)});
    ++delivered;
    if (observer_) observer_(trace_.back());
    if (ev.action) ev.action();
  }
  now_ = t;
  return delivered;
}

RngStream& Engine::stream(RngStreamId id) { return streams_.at(static_cast<std::size_t>(id)); }

std::string Engine::trace_text() const {
  std::string out;
  for (const auto& ev : trace_) {
    out += format_trace_line(ev);
    out += '\n';
  }
  return out;
}

}  // namespace mrsim
