#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gcbha {

/// Sentinel for "no winning agent" in consensus vectors.
inline constexpr int kNoAgent = -1;

struct GridPoint {
  int x = 0;
  int y = 0;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

struct GridPointHash {
  std::size_t operator()(const GridPoint& p) const noexcept {
    return std::hash<std::int64_t>{}((std::int64_t(p.x) << 32) ^ std::uint32_t(p.y));
  }
};

/// Pickup-and-delivery task. Demand and value are in shared demand/score
/// units; times are continuous time units.
struct Task {
  int id = 0;
  GridPoint position_start;
  GridPoint position_end;
  double time_start = 0.0;
  double time_end = 0.0;
  double request = 0.0;
  int cargo_type = 0;
  double value = 0.0;
};

struct Agent {
  int id = 0;
  GridPoint position;
  double capacity = 0.0;
  int cargo_type = 0;
  double velocity = 1.0;
};

enum class TargetKind { Pickup, Delivery };

/// One stop in an agent's execution queue. Carries the owning task's time
/// window and value so the planner and scorer need no task lookup.
struct Target {
  GridPoint position;
  TargetKind kind = TargetKind::Pickup;
  int task_id = 0;
  double time_start = 0.0;
  double time_end = 0.0;
  double value = 0.0;

  friend bool operator==(const Target&, const Target&) = default;
};

struct OrderedTargetQueue {
  int agent_id = 0;
  std::vector<Target> targets;

  friend bool operator==(const OrderedTargetQueue&, const OrderedTargetQueue&) = default;
};

/// Per-agent consensus substrate: winning-bid vector y, winning-agent
/// vector z, per-agent information timestamps t, and the ordered bundle.
struct BidState {
  int agent_id = 0;
  std::vector<std::uint8_t> x;  // assignment indicators, one per task
  std::vector<double> y;        // highest known bid per task
  std::vector<int> z;           // believed winner per task, kNoAgent if none
  std::vector<int> t;           // latest information round per agent
  std::vector<int> bundle;      // task ids in insertion order
  double bundle_request = 0.0;

  BidState() = default;
  BidState(int agent, std::size_t task_count, std::size_t agent_count)
      : agent_id(agent),
        x(task_count, 0),
        y(task_count, 0.0),
        z(task_count, kNoAgent),
        t(agent_count, 0) {}
};

/// A clustered group of tasks and the surrogate meta-task auctioned in
/// their place.
struct TaskGroup {
  int group_id = 0;
  std::vector<int> member_ids;
  Task meta_task;
};

struct Violation {
  std::string what;
};

}  // namespace gcbha
