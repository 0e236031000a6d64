#include "coexsim/engine.hpp"

#include <ostream>

namespace coexsim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
  case EventKind::LteOn: return "lte-on";
  case EventKind::LteOff: return "lte-off";
  case EventKind::BackoffSlot: return "backoff-slot";
  case EventKind::TxEnd: return "tx-end";
  case EventKind::AckTimeout: return "ack-timeout";
  case EventKind::CcaSample: return "cca-sample";
  case EventKind::RunEnd: return "run-end";
  }
  return "unknown";
}

Engine::Engine(std::uint64_t master_seed) : master_seed_(master_seed) {}

NodeId Engine::add_node(std::string name, Handler handler) {
  nodes_.push_back({std::move(name), std::move(handler)});
  return static_cast<NodeId>(nodes_.size() - 1);
}

EventHandle Engine::schedule(SimTime at, NodeId target, EventKind kind,
                             std::int64_t arg) {
  if (at < now_) {
    throw SimulationError("event " + std::string(to_string(kind)) +
                          " scheduled at " + std::to_string(at.count()) +
                          " ns, before current time " +
                          std::to_string(now_.count()) + " ns");
  }
  if (target >= nodes_.size()) {
    throw SimulationError("event targets unknown node " +
                          std::to_string(target));
  }
  const std::uint64_t seq = status_.size();
  status_.push_back(Status::Pending);
  queue_.push(Event{at, seq, target, kind, arg});
  return EventHandle(seq);
}

bool Engine::cancel(EventHandle &handle) {
  if (!handle.valid() || handle.seq_ >= status_.size()) return false;
  auto &status = status_[handle.seq_];
  handle = EventHandle{};
  if (status != Status::Pending) return false;
  status = Status::Cancelled;
  return true;
}

void Engine::run_until(SimTime t_end) {
  if (t_end < now_) {
    throw SimulationError("run_until target lies in the past");
  }
  while (!queue_.empty() && queue_.top().fire_time <= t_end) {
    const Event ev = queue_.top();
    queue_.pop();
    auto &status = status_[ev.seq];
    if (status == Status::Cancelled) continue;
    status = Status::Fired;
    now_ = ev.fire_time;
    ++dispatched_;
    if (trace_ != nullptr) {
      *trace_ << ev.fire_time.count() << ' ' << to_string(ev.kind) << ' '
              << nodes_[ev.target].name << ' ' << ev.arg << '\n';
    }
    nodes_[ev.target].handler(ev);
  }
  now_ = t_end;
}

} // namespace coexsim
