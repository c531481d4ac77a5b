#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rcw/error.hpp"
#include "rcw/random.hpp"

namespace rcw {

template <class Payload>
struct Envelope {
  NodeId src;
  NodeId dst;
  Payload payload;
};

struct RunStats {
  std::uint64_t rounds = 0;
  std::uint64_t messages = 0;
};

template <class Payload>
class SimEngine;

// Handed to a task while it runs; sends are delivered in the next round.
template <class Payload>
class Outbox {
 public:
  NodeId self() const noexcept { return self_; }
  std::uint64_t round() const noexcept { return engine_.round(); }
  void send(NodeId dst, Payload payload) { engine_.enqueue(self_, dst, std::move(payload)); }

 private:
  friend class SimEngine<Payload>;
  Outbox(SimEngine<Payload>& engine, NodeId self) : engine_(engine), self_(self) {}

  SimEngine<Payload>& engine_;
  NodeId self_;
};

template <class Payload>
class NodeTask {
 public:
  virtual ~NodeTask() = default;
  virtual void on_start(Outbox<Payload>&) {}
  virtual void on_message(const Envelope<Payload>& message, Outbox<Payload>& out) = 0;
  // A task may keep the engine running without messages in flight.
  virtual bool wants_continuation() const { return false; }
  virtual void on_idle_round(Outbox<Payload>&) {}
};

// Synchronous rounds. Every task starts in round 0; a message sent during
// round t is delivered during round t+1. Messages of one ordered (src,dst)
// pair keep their send order; the order across pairs is a function of the
// seed and the round.
template <class Payload>
class SimEngine {
 public:
  using KindFn = std::function<std::string_view(const Payload&)>;

  // `links[x]` lists the nodes x may send to (sorted); a node may also send
  // to itself.
  SimEngine(std::vector<std::vector<NodeId>> links, std::uint64_t seed)
      : links_(std::move(links)), tasks_(links_.size()), seed_(seed) {}

  std::size_t size() const noexcept { return tasks_.size(); }

  void set_task(NodeId node, std::unique_ptr<NodeTask<Payload>> task) {
    tasks_.at(node) = std::move(task);
  }
  NodeTask<Payload>& task(NodeId node) { return *tasks_.at(node); }
  const NodeTask<Payload>& task(NodeId node) const { return *tasks_.at(node); }

  // Trace lines: `round,src,dst,payload_kind`, one per delivered message.
  void set_trace(std::ostream* sink, KindFn kind) {
    trace_ = sink;
    kind_ = std::move(kind);
  }

  std::uint64_t round() const noexcept { return round_; }
  const RunStats& stats() const noexcept { return stats_; }

  RunStats run_until_quiescent(std::uint64_t max_rounds) {
    if (!started_) {
      started_ = true;
      for (NodeId x = 0; x < tasks_.size(); ++x) {
        if (!tasks_[x]) continue;
        Outbox<Payload> out(*this, x);
        tasks_[x]->on_start(out);
      }
    }
    while (!pending_.empty() || any_continuation()) {
      if (round_ >= max_rounds) {
        fail(ErrorCode::RoundLimitExceeded,
             "no quiescence after " + std::to_string(max_rounds) + " rounds");
      }
      ++round_;
      stats_.rounds = round_;
      std::vector<Envelope<Payload>> batch;
      batch.swap(pending_);
      order_batch(batch);
      for (const auto& message : batch) {
        if (trace_) {
          *trace_ << round_ << ',' << message.src << ',' << message.dst << ','
                  << (kind_ ? kind_(message.payload) : std::string_view("msg")) << '\n';
        }
        auto& task = tasks_.at(message.dst);
        if (!task) continue;
        Outbox<Payload> out(*this, message.dst);
        task->on_message(message, out);
      }
      for (NodeId x = 0; x < tasks_.size(); ++x) {
        if (tasks_[x] && tasks_[x]->wants_continuation()) {
          Outbox<Payload> out(*this, x);
          tasks_[x]->on_idle_round(out);
        }
      }
    }
    return stats_;
  }

 private:
  friend class Outbox<Payload>;

  void enqueue(NodeId src, NodeId dst, Payload payload) {
    if (src != dst) {
      const auto& allowed = links_.at(src);
      if (!std::binary_search(allowed.begin(), allowed.end(), dst)) {
        fail(ErrorCode::InvalidArgument,
             "node " + std::to_string(src) + " has no link to " + std::to_string(dst));
      }
    }
    ++stats_.messages;
    pending_.push_back(Envelope<Payload>{src, dst, std::move(payload)});
  }

  bool any_continuation() const {
    return std::any_of(tasks_.begin(), tasks_.end(),
                       [](const auto& t) { return t && t->wants_continuation(); });
  }

  void order_batch(std::vector<Envelope<Payload>>& batch) const {
    const std::uint64_t round_key = mix64(seed_ ^ mix64(round_));
    auto key = [round_key](const Envelope<Payload>& e) {
      return mix64(round_key ^ ((static_cast<std::uint64_t>(e.src) << 32) | e.dst));
    };
    std::stable_sort(batch.begin(), batch.end(),
                     [&](const auto& a, const auto& b) { return key(a) < key(b); });
  }

  std::vector<std::vector<NodeId>> links_;
  std::vector<std::unique_ptr<NodeTask<Payload>>> tasks_;
  std::vector<Envelope<Payload>> pending_;
  std::uint64_t seed_;
  std::uint64_t round_ = 0;
  RunStats stats_;
  bool started_ = false;
  std::ostream* trace_ = nullptr;
  KindFn kind_;
};

}  // namespace rcw
