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

#include "mrsim/control.hpp"

#include <algorithm>
#include <exception>

namespace mrsim {

void to_json(Json& j, const FeedEvent& e) {
  j = Json{{"seq", e.seq}, {"kind", e.kind}, {"body", e.body}};
}

ControlSession::ControlSession(const Scenario& scenario, SessionOptions options)
    : sim_(std::make_unique<Simulation>(scenario)), options_(options) {
  if (options_.pace <= 0) options_.pace = 1.0;
  if (options_.retention == 0) options_.retention = 1;
  sim_->set_feed_observer([this](const FeedItem& item) { push_feed(item.kind, item.body); });
  publish();
  thread_ = std::thread([this] { worker(); });
}

ControlSession::~ControlSession() { stop(); }

void ControlSession::stop() {
  {
    std::lock_guard lk(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  feed_cv_.notify_all();
  if (thread_.joinable() && thread_.get_id() != std::this_thread::get_id()) thread_.join();
}

void ControlSession::inspect(const std::function<void(const Simulation&)>& fn) const {
  std::lock_guard lk(sim_mu_);
  fn(*sim_);
}

bool ControlSession::stopped() const {
  std::lock_guard lk(mu_);
  return stopping_;
}

bool ControlSession::running() const {
  std::lock_guard lk(mu_);
  return free_run_;
}

CommandResult ControlSession::submit(const Command& cmd) {
  std::future<CommandResult> result;
  {
    std::lock_guard lk(mu_);
    if (stopping_) {
      return CommandResult{false, cmd.id, 0, "session stopped"};
    }
    inbox_.push_back(Pending{cmd, {}});
    result = inbox_.back().done.get_future();
  }
  cv_.notify_all();
  return result.get();
}

void ControlSession::worker() {
  using clock = std::chrono::steady_clock;
  const auto period = std::chrono::duration_cast<clock::duration>(
      std::chrono::duration<double>(1.0 / options_.pace));
  auto next_step = clock::now() + period;

  std::unique_lock lk(mu_);
  while (true) {
    auto ready = [this] { return stopping_ || !inbox_.empty(); };
    if (free_run_) {
      cv_.wait_until(lk, next_step, ready);
    } else {
      cv_.wait(lk, ready);
    }
    if (stopping_) break;

    if (!inbox_.empty()) {
      Pending p = std::move(inbox_.front());
      inbox_.pop_front();
      const bool was_running = free_run_;
      lk.unlock();
      CommandResult r;
      {
        std::lock_guard sim_lock(sim_mu_);
        r = handle(p.cmd);
      }
      p.done.set_value(std::move(r));
      lk.lock();
      if (free_run_ && !was_running) next_step = clock::now() + period;
      continue;
    }
    if (free_run_ && clock::now() >= next_step) {
      lk.unlock();
      {
        std::lock_guard sim_lock(sim_mu_);
        advance(sim_->now() + 1);
        publish();
      }
      lk.lock();
      next_step += period;
    }
  }
  for (auto& p : inbox_) p.done.set_value(CommandResult{false, p.cmd.id, 0, "session stopped"});
  inbox_.clear();
}

CommandResult ControlSession::handle(const Command& cmd) {
  CommandResult r{true, cmd.id, sim_->now(), {}};
  try {
    switch (cmd.kind) {
      case CommandKind::StepClock:
        if (cmd.units <= 0) {
          r = {false, cmd.id, sim_->now(), "units must be positive"};
        } else {
          advance(sim_->now() + cmd.units);
          r.applied_at = sim_->now();
        }
        break;
      case CommandKind::RunClock:
        if (cmd.until) {
          if (*cmd.until < sim_->now()) {
            r = {false, cmd.id, sim_->now(), "until lies before the current time"};
          } else {
            advance(*cmd.until);
            r.applied_at = sim_->now();
            std::lock_guard lk(mu_);
            free_run_ = false;
          }
        } else {
          std::lock_guard lk(mu_);
          free_run_ = true;
          r.detail = "running";
        }
        break;
      case CommandKind::PauseClock: {
        std::lock_guard lk(mu_);
        free_run_ = false;
        r.detail = "paused";
        break;
      }
      default:
        r = sim_->apply(cmd);
    }
  } catch (const std::exception& e) {
    r = {false, cmd.id, sim_->now(), e.what()};
  }
  Json ack = r;
  ack["kind"] = std::string(to_string(cmd.kind));
  push_feed("ack", std::move(ack));
  publish();
  return r;
}

void ControlSession::advance(SimTime to) {
  sim_->advance_to(to);
  const std::int64_t finalized = sim_->finalized_ticks();
  if (finalized <= ticks_announced_) return;
  const auto series = sim_->series(finalized);
  for (std::int64_t k = ticks_announced_; k < finalized; ++k) {
    push_feed("tick", series[static_cast<std::size_t>(k)]);
  }
  ticks_announced_ = finalized;
}

void ControlSession::publish() {
  auto pub = std::make_shared<Published>();
  pub->state = sim_->snapshot();
  {
    std::lock_guard lk(mu_);
    pub->state["running"] = free_run_;
  }
  pub->finalized = sim_->series(sim_->finalized_ticks());
  std::lock_guard lk(pub_mu_);
  published_ = std::move(pub);
}

std::shared_ptr<const Json> ControlSession::state() const {
  std::lock_guard lk(pub_mu_);
  return {published_, &published_->state};
}

Json ControlSession::metrics(std::optional<std::int64_t> from,
                             std::optional<std::int64_t> to) const {
  std::shared_ptr<const Published> pub;
  {
    std::lock_guard lk(pub_mu_);
    pub = published_;
  }
  const auto n = static_cast<std::int64_t>(pub->finalized.size());
  const std::int64_t lo = std::clamp<std::int64_t>(from.value_or(0), 0, n);
  const std::int64_t hi = std::clamp<std::int64_t>(to.value_or(n), lo, n);
  Json ticks = Json::array();
  for (std::int64_t k = lo; k < hi; ++k) {
    const TickSample& s = pub->finalized[static_cast<std::size_t>(k)];
    Json row = s;
    const Rates rt = rates(s);
    row["throughput"] = throughput(s);
    row["success_rate"] = rt.success ? Json(*rt.success) : Json(nullptr);
    row["failure_rate"] = rt.failure ? Json(*rt.failure) : Json(nullptr);
    ticks.push_back(std::move(row));
  }
  return Json{{"from", lo}, {"to", hi}, {"finalized_ticks", n}, {"ticks", ticks}};
}

void ControlSession::push_feed(std::string kind, Json body) {
  {
    std::lock_guard lk(feed_mu_);
    feed_.push_back(FeedEvent{next_seq_++, std::move(kind), std::move(body)});
    while (feed_.size() > options_.retention) feed_.pop_front();
  }
  feed_cv_.notify_all();
}

std::vector<FeedEvent> ControlSession::events_since(std::optional<std::uint64_t> since,
                                                    std::size_t limit) const {
  std::lock_guard lk(feed_mu_);
  std::vector<FeedEvent> out;
  if (feed_.empty()) return out;
  const std::uint64_t earliest = feed_.front().seq;
  const std::uint64_t latest = feed_.back().seq;
  std::uint64_t first = earliest;
  if (since && *since <= latest && *since + 1 >= earliest) first = *since + 1;
  for (auto it = feed_.begin() + static_cast<std::ptrdiff_t>(first - earliest);
       it != feed_.end() && out.size() < limit; ++it) {
    out.push_back(*it);
  }
  return out;
}

std::uint64_t ControlSession::latest_seq() const {
  std::lock_guard lk(feed_mu_);
  return next_seq_ - 1;
}

bool ControlSession::wait_for_events(std::uint64_t after, std::chrono::milliseconds timeout) const {
  std::unique_lock lk(feed_mu_);
  return feed_cv_.wait_for(lk, timeout, [&] { return next_seq_ - 1 > after || stopped(); }) &&
         next_seq_ - 1 > after;
}

}  // namespace mrsim
