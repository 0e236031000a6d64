#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coexsim/rng.hpp"

namespace coexsim {

/// Simulation clock: integer nanoseconds since the start of the run.
using SimTime = std::chrono::nanoseconds;
using Duration = std::chrono::nanoseconds;

using NodeId = std::uint32_t;

enum class EventKind : std::uint8_t {
  LteOn,
  LteOff,
  BackoffSlot,
  TxEnd,
  AckTimeout,
  CcaSample,
  RunEnd,
};

std::string_view to_string(EventKind kind);

struct Event {
  SimTime fire_time{};
  std::uint64_t seq = 0;
  NodeId target = 0;
  EventKind kind = EventKind::RunEnd;
  std::int64_t arg = 0;
};

class EventHandle {
public:
  EventHandle() = default;
  bool valid() const { return seq_ != kInvalid; }

private:
  friend class Engine;
  static constexpr std::uint64_t kInvalid = ~std::uint64_t{0};
  explicit EventHandle(std::uint64_t seq) : seq_(seq) {}
  std::uint64_t seq_ = kInvalid;
};

class SimulationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Single-threaded discrete-event core. Events fire in (fire_time, seq)
/// order; seq is the insertion counter, so simultaneous events keep the
/// order in which they were scheduled.
class Engine {
public:
  using Handler = std::function<void(const Event &)>;

  explicit Engine(std::uint64_t master_seed);

  NodeId add_node(std::string name, Handler handler);
  const std::string &node_name(NodeId id) const { return nodes_.at(id).name; }

  /// Throws SimulationError if `at` lies before the current clock.
  EventHandle schedule(SimTime at, NodeId target, EventKind kind,
                       std::int64_t arg = 0);
  EventHandle schedule_in(Duration delay, NodeId target, EventKind kind,
                          std::int64_t arg = 0) {
    return schedule(now_ + delay, target, kind, arg);
  }

  /// True iff the event was still pending; it will then never fire.
  bool cancel(EventHandle &handle);

  void run_until(SimTime t_end);

  SimTime now() const { return now_; }
  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t dispatched() const { return dispatched_; }

  RngStream rng_stream(std::string_view label) const {
    return RngStream(master_seed_, label);
  }

  /// Writes one `time_ns kind node arg` line per dispatched event.
  void set_trace(std::ostream *sink) { trace_ = sink; }

private:
  enum class Status : std::uint8_t { Pending, Fired, Cancelled };

  struct Later {
    bool operator()(const Event &a, const Event &b) const {
      if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
      return a.seq > b.seq;
    }
  };

  struct Node {
    std::string name;
    Handler handler;
  };

  std::uint64_t master_seed_;
  SimTime now_{0};
  std::uint64_t dispatched_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::vector<Status> status_;
  std::vector<Node> nodes_;
  std::ostream *trace_ = nullptr;
};

} // namespace coexsim
