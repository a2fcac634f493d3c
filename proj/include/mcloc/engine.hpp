#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "mcloc/types.hpp"

namespace mcloc {

enum class EventKind : std::uint8_t {
  NodeArrivedAtWaypoint,
  CodeMigration,
  RequestArrival,
  ChainCheckTick,
  ServerReelectionTick,
  MessageDelivery,
  TimerExpiry,
};

std::string_view to_string(EventKind kind);

struct TraceEntry {
  SimTime time;
  std::uint64_t sequence;
  EventKind kind;

  bool operator==(const TraceEntry&) const = default;
};

/// Single-threaded discrete-event engine. Events with equal fire times run
/// in the order they were scheduled.
class Engine {
 public:
  using Handler = std::function<void()>;

  Engine() = default;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  SimTime now() const { return now_; }

  /// Throws SimError if `at` lies before the current clock or is NaN.
  void schedule(SimTime at, EventKind kind, Handler handler);
  void schedule_in(SimTime delay, EventKind kind, Handler handler) {
    schedule(now_ + delay, kind, std::move(handler));
  }

  /// Executes every event with fire time <= t_end, then sets the clock to t_end.
  void run_until(SimTime t_end);

  std::size_t pending() const { return heap_.size(); }
  std::uint64_t executed() const { return executed_; }
  std::uint64_t scheduled() const { return next_sequence_; }

  void enable_trace(bool on) { tracing_ = on; }
  const std::vector<TraceEntry>& trace() const { return trace_; }

 private:
  struct Event {
    SimTime fire_at;
    std::uint64_t sequence;
    EventKind kind;
    Handler handler;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.sequence > b.sequence;
    }
  };

  SimTime now_ = 0.0;
  std::uint64_t next_sequence_ = 0;
  std::uint64_t executed_ = 0;
  std::vector<Event> heap_;  // min-heap under Later
  bool tracing_ = false;
  std::vector<TraceEntry> trace_;
};

}  // namespace mcloc
