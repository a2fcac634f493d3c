#include "mcloc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mcloc {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::NodeArrivedAtWaypoint:
      return "NodeArrivedAtWaypoint";
    case EventKind::CodeMigration:
      return "CodeMigration";
    case EventKind::RequestArrival:
      return "RequestArrival";
    case EventKind::ChainCheckTick:
      return "ChainCheckTick";
    case EventKind::ServerReelectionTick:
      return "ServerReelectionTick";
    case EventKind::MessageDelivery:
      return "MessageDelivery";
    case EventKind::TimerExpiry:
      return "TimerExpiry";
  }
  return "?";
}

void Engine::schedule(SimTime at, EventKind kind, Handler handler) {
  if (std::isnan(at)) throw SimError("schedule: NaN fire time");
  if (at < now_) {
    throw SimError("schedule: fire time " + std::to_string(at) + " is before clock " +
                   std::to_string(now_));
  }
  heap_.push_back(Event{at, next_sequence_++, kind, std::move(handler)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
}

void Engine::run_until(SimTime t_end) {
  if (std::isnan(t_end) || t_end < now_) throw SimError("run_until: target time is in the past");
  while (!heap_.empty() && heap_.front().fire_at <= t_end) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Event ev = std::move(heap_.back());
    heap_.pop_back();
    now_ = ev.fire_at;
    if (tracing_) trace_.push_back(TraceEntry{ev.fire_at, ev.sequence, ev.kind});
    ++executed_;
    ev.handler();
  }
  now_ = t_end;
}

}  // namespace mcloc
