#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gcbha/domain.hpp"
#include "gcbha/geometry.hpp"

namespace gcbha {

/// One simulation interval of an agent: the cells traversed between
/// integer timesteps t and t+1. cells.front() is the position at t,
/// cells.back() the position at t+1; waiting keeps a single cell.
struct PathInterval {
  std::vector<GridPoint> cells;
};

struct TimedPath {
  int agent_id = 0;
  int start_time = 0;
  std::vector<PathInterval> intervals;  // intervals[k] covers timestep start_time+k

  GridPoint position_at(int t) const {
    if (intervals.empty()) return {};
    if (t <= start_time) return intervals.front().cells.front();
    const std::size_t k = std::size_t(t - start_time);
    if (k > intervals.size()) return intervals.back().cells.back();
    return intervals[k - 1].cells.back();
  }

  int end_time() const { return start_time + int(intervals.size()); }

  /// Unit moves traversed (path length in cells).
  long long length() const {
    long long total = 0;
    for (const auto& iv : intervals) total += static_cast<long long>(iv.cells.size()) - 1;
    return total;
  }
};

namespace detail {

struct CellTimeKey {
  int t;
  GridPoint cell;
  friend bool operator==(const CellTimeKey&, const CellTimeKey&) = default;
};
struct CellTimeHash {
  std::size_t operator()(const CellTimeKey& k) const noexcept {
    return GridPointHash{}(k.cell) * 1000003u + std::size_t(std::uint32_t(k.t));
  }
};
struct EdgeKey {
  int t;
  GridPoint from;
  GridPoint to;
  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
};
struct EdgeHash {
  std::size_t operator()(const EdgeKey& k) const noexcept {
    return (GridPointHash{}(k.from) * 31 + GridPointHash{}(k.to)) * 1000003u +
           std::size_t(std::uint32_t(k.t));
  }
};

}  // namespace detail

/// Space-time claims of already-committed paths: vertex occupancy at
/// integer timesteps, cells passed mid-interval, directed unit moves, and
/// open-ended parking claims for agents idle at a target.
class ReservationTable {
 public:
  void claim_vertex(int t, GridPoint cell, int agent) {
    vertices_.emplace(detail::CellTimeKey{t, cell}, agent);
    note_cell(t, cell, agent);
  }
  void claim_pass(int t, GridPoint cell, int agent) {
    passes_.emplace(detail::CellTimeKey{t, cell}, agent);
    note_cell(t, cell, agent);
  }
  void claim_edge(int t, GridPoint from, GridPoint to, int agent) {
    edges_.emplace(detail::EdgeKey{t, from, to}, agent);
  }
  /// Agent parks at `cell` from timestep `from` onward.
  void park(GridPoint cell, int from, int agent) {
    parked_[agent] = Parked{cell, from, std::numeric_limits<int>::max()};
  }
  /// Close the agent's parking claim at timestep `until` (inclusive).
  void unpark(int agent, int until) {
    auto it = parked_.find(agent);
    if (it != parked_.end()) it->second.until = until;
  }

  bool vertex_blocked(int t, GridPoint cell, int self) const {
    auto range = vertices_.equal_range({t, cell});
    for (auto it = range.first; it != range.second; ++it)
      if (it->second != self) return true;
    return parked_blocked(t, t, cell, self);
  }
  bool pass_blocked(int t, GridPoint cell, int self) const {
    auto range = passes_.equal_range({t, cell});
    for (auto it = range.first; it != range.second; ++it)
      if (it->second != self) return true;
    return false;
  }
  bool edge_blocked(int t, GridPoint from, GridPoint to, int self) const {
    auto range = edges_.equal_range({t, from, to});
    for (auto it = range.first; it != range.second; ++it)
      if (it->second != self) return true;
    return false;
  }
  bool parked_blocked(int t_lo, int t_hi, GridPoint cell, int self) const {
    for (const auto& [agent, p] : parked_) {
      if (agent == self) continue;
      if (p.cell == cell && p.from <= t_hi && t_lo <= p.until) return true;
    }
    return false;
  }
  /// Agent holding an open-ended parking claim on `cell`, or kNoAgent.
  int parked_owner(GridPoint cell, int self) const {
    for (const auto& [agent, p] : parked_)
      if (agent != self && p.cell == cell && p.until == std::numeric_limits<int>::max())
        return agent;
    return kNoAgent;
  }
  /// True when no other agent has any claim on `cell` at or after `t`;
  /// required before an agent may end a leg (and occupy the cell
  /// open-endedly) there.
  bool goal_clear_after(int t, GridPoint cell, int self) const {
    auto it = cell_last_.find(cell);
    if (it != cell_last_.end())
      for (const auto& [agent, tmax] : it->second)
        if (agent != self && tmax >= t) return false;
    for (const auto& [agent, p] : parked_) {
      if (agent == self) continue;
      if (p.cell == cell && p.until >= t) return false;
    }
    return true;
  }

  /// Commit every claim of one interval: the arrival vertex, mid cells as
  /// passes, and each directed unit move.
  void commit_interval(int t, const PathInterval& iv, int agent) {
    claim_vertex(t + 1, iv.cells.back(), agent);
    for (std::size_t c = 1; c + 1 < iv.cells.size(); ++c) claim_pass(t, iv.cells[c], agent);
    for (std::size_t c = 0; c + 1 < iv.cells.size(); ++c)
      claim_edge(t, iv.cells[c], iv.cells[c + 1], agent);
  }

 private:
  struct Parked {
    GridPoint cell;
    int from;
    int until;
  };
  void note_cell(int t, GridPoint cell, int agent) {
    auto& last = cell_last_[cell][agent];
    last = std::max(last, t);
  }
  std::unordered_map<GridPoint, std::unordered_map<int, int>, GridPointHash> cell_last_;
  std::unordered_multimap<detail::CellTimeKey, int, detail::CellTimeHash> vertices_;
  std::unordered_multimap<detail::CellTimeKey, int, detail::CellTimeHash> passes_;
  std::unordered_multimap<detail::EdgeKey, int, detail::EdgeHash> edges_;
  std::map<int, Parked> parked_;
};

struct PlanFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

/// All micro-paths of up to `velocity` unit moves from `from`, admissible
/// against the reservation table at interval `t`. Move order is fixed
/// (wait, +x, -x, +y, -y recursion) so planning is deterministic.
inline void enumerate_moves(const WarehouseLayout& layout, const ReservationTable& res,
                            int self, int t, int velocity, std::vector<GridPoint>& prefix,
                            std::vector<PathInterval>& out) {
  const GridPoint cur = prefix.back();
  if (int(prefix.size()) - 1 < velocity) {
    const GridPoint nb[4] = {
        {cur.x + 1, cur.y}, {cur.x - 1, cur.y}, {cur.x, cur.y + 1}, {cur.x, cur.y - 1}};
    for (const auto& q : nb) {
      if (!layout.is_aisle(q)) continue;
      if (res.edge_blocked(t, q, cur, self)) continue;  // swap
      prefix.push_back(q);
      out.push_back({prefix});
      enumerate_moves(layout, res, self, t, velocity, prefix, out);
      prefix.pop_back();
    }
  }
}

inline bool interval_admissible(const ReservationTable& res, int self, int t,
                                const PathInterval& iv) {
  const GridPoint end = iv.cells.back();
  if (res.vertex_blocked(t + 1, end, self)) return false;
  if (res.pass_blocked(t, end, self)) return false;
  // The agent still occupies its departure cell for part of the interval.
  if (res.pass_blocked(t, iv.cells.front(), self)) return false;
  for (std::size_t c = 1; c + 1 < iv.cells.size(); ++c) {
    const GridPoint mid = iv.cells[c];
    if (res.vertex_blocked(t, mid, self) || res.vertex_blocked(t + 1, mid, self)) return false;
    if (res.pass_blocked(t, mid, self)) return false;
  }
  return true;
}

}  // namespace detail

/// Time-expanded A* for one agent leg against the reservation table.
/// Heuristic is the BFS distance field from the goal divided by velocity.
inline std::optional<TimedPath> plan_leg(const Agent& agent, GridPoint start, int start_time,
                                         GridPoint goal, const WarehouseLayout& layout,
                                         const ReservationTable& reservations, int horizon) {
  if (!layout.is_aisle(start) || !layout.is_aisle(goal)) return std::nullopt;
  // A goal parked open-endedly by someone else can never satisfy the
  // clear-after-arrival condition; fail fast instead of exhausting the
  // time-expanded search.
  if (reservations.parked_owner(goal, agent.id) != kNoAgent) return std::nullopt;
  const auto goal_field = bfs_field(goal, layout);
  auto h = [&](GridPoint p) {
    const int d = goal_field[std::size_t(p.y) * layout.width + p.x];
    if (d == kUnreachable) return std::numeric_limits<double>::infinity();
    return double(d) / agent.velocity;
  };
  if (!std::isfinite(h(start))) return std::nullopt;

  struct Node {
    double f;
    int t;
    GridPoint cell;
    std::uint64_t order;  // FIFO tie-break for determinism
    bool operator>(const Node& o) const {
      if (f != o.f) return f > o.f;
      if (t != o.t) return t > o.t;
      if (cell != o.cell) return o.cell < cell;
      return order > o.order;
    }
  };
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;
  std::unordered_map<detail::CellTimeKey, std::pair<detail::CellTimeKey, PathInterval>,
                     detail::CellTimeHash>
      parent;
  std::unordered_set<detail::CellTimeKey, detail::CellTimeHash> closed;
  std::uint64_t counter = 0;
  const int velocity = std::max(1, int(std::llround(agent.velocity)));

  open.push({h(start), start_time, start, counter++});
  parent.emplace(detail::CellTimeKey{start_time, start},
                 std::make_pair(detail::CellTimeKey{start_time, start}, PathInterval{}));

  while (!open.empty()) {
    const Node node = open.top();
    open.pop();
    const detail::CellTimeKey key{node.t, node.cell};
    if (closed.contains(key)) continue;
    closed.insert(key);

    // Arrival ends the leg and occupies the goal open-endedly, so it is
    // only acceptable when no other claim touches the goal afterwards.
    if (node.cell == goal && reservations.goal_clear_after(node.t, goal, agent.id)) {
      TimedPath path;
      path.agent_id = agent.id;
      detail::CellTimeKey cur = key;
      std::vector<PathInterval> rev;
      while (!(cur.t == start_time && cur.cell == start)) {
        const auto& [prev, iv] = parent.at(cur);
        rev.push_back(iv);
        cur = prev;
      }
      path.start_time = start_time;
      path.intervals.assign(rev.rbegin(), rev.rend());
      return path;
    }
    if (node.t - start_time >= horizon) continue;

    // Candidate intervals: wait in place, or up to `velocity` unit moves.
    std::vector<PathInterval> candidates;
    candidates.push_back({{node.cell, node.cell}});
    std::vector<GridPoint> prefix{node.cell};
    detail::enumerate_moves(layout, reservations, agent.id, node.t, velocity, prefix,
                            candidates);
    for (auto& iv : candidates) {
      if (iv.cells.size() == 2 && iv.cells[0] == iv.cells[1]) {
        // waiting: only the vertex claim matters
        if (reservations.vertex_blocked(node.t + 1, node.cell, agent.id)) continue;
        if (reservations.pass_blocked(node.t, node.cell, agent.id)) continue;
      } else if (!detail::interval_admissible(reservations, agent.id, node.t, iv)) {
        continue;
      }
      const detail::CellTimeKey next{node.t + 1, iv.cells.back()};
      if (closed.contains(next) || parent.contains(next)) continue;
      const double hn = h(iv.cells.back());
      if (!std::isfinite(hn)) continue;
      parent.emplace(next, std::make_pair(key, iv));
      open.push({double(next.t - start_time) + hn, next.t, next.cell, counter++});
    }
  }
  return std::nullopt;
}

struct EpisodeResult {
  std::vector<TimedPath> paths;  // one per agent, full episode timeline
  std::vector<long long> actual_length;      // per agent, cells traversed
  std::vector<std::vector<long long>> leg_lengths;  // per agent, per leg
  int makespan = 0;
  int replan_invocations = 0;  // arrival-triggered replans (initial legs excluded)
  int legs_planned = 0;
  int retries = 0;
};

namespace detail {

struct AgentExec {
  std::size_t next_target = 0;
  GridPoint pos;
  int time = 0;       // timestep at which the agent is ready to move
  int park_from = 0;  // first timestep of the current parking claim
};

}  // namespace detail

/// Full lifelong episode: prioritized planning, then arrival-triggered
/// single-agent replanning with all other committed paths standing as
/// constraints. Agents still in transit keep their reservations; an agent
/// replanned before reaching its current target would start offset by its
/// remaining travel time, which the per-arrival scheme realizes implicitly
/// (each agent replans exactly at its own arrival timestep). An agent that
/// completes its final target is removed from the grid (disappear-at-target
/// convention), so shared delivery cells never block forever. When a leg
/// cannot be planned the agent idles and retries after the next event that
/// changes the reservation table (retry cap applies per leg).
inline EpisodeResult run_episode(const std::vector<Agent>& agents,
                                 const std::vector<OrderedTargetQueue>& queues,
                                 const WarehouseLayout& layout, bool enforce_windows = true,
                                 int retry_cap = 10) {
  const std::size_t n = agents.size();
  if (queues.size() != n) throw std::invalid_argument("run_episode: queue count mismatch");
  const int horizon = 4 * (layout.width + layout.height);

  // Priority: descending velocity, then ascending id.
  std::vector<std::size_t> priority(n);
  for (std::size_t i = 0; i < n; ++i) priority[i] = i;
  std::sort(priority.begin(), priority.end(), [&](std::size_t a, std::size_t b) {
    if (agents[a].velocity != agents[b].velocity)
      return agents[a].velocity > agents[b].velocity;
    return agents[a].id < agents[b].id;
  });

  EpisodeResult result;
  result.paths.resize(n);
  result.actual_length.assign(n, 0);
  result.leg_lengths.resize(n);

  ReservationTable res;
  std::vector<detail::AgentExec> exec(n);
  std::vector<int> attempts(n, 0);
  std::vector<int> blocked_waits(n, 0);
  std::vector<int> relocations(n, 0);
  std::vector<bool> pending(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    exec[i].pos = agents[i].position;
    result.paths[i].agent_id = agents[i].id;
    result.paths[i].start_time = 0;
    pending[i] = !queues[i].targets.empty();
    if (pending[i]) {
      res.claim_vertex(0, agents[i].position, agents[i].id);
      res.park(agents[i].position, 0, agents[i].id);
    }
  }

  // Waits between legs become explicit vertex claims: a later park() call
  // replaces the agent's open-ended claim, so elapsed idle time must stay
  // reserved on its own.
  auto append_wait_until = [&](std::size_t i, int t) {
    auto& path = result.paths[i];
    while (path.end_time() < t) {
      res.claim_vertex(path.end_time() + 1, exec[i].pos, agents[i].id);
      path.intervals.push_back({{exec[i].pos, exec[i].pos}});
    }
  };

  auto try_plan_leg = [&](std::size_t i) -> bool {
    const auto& queue = queues[i].targets;
    const Target& target = queue[exec[i].next_target];
    const int depart = exec[i].time;
    res.unpark(agents[i].id, depart);
    auto leg =
        plan_leg(agents[i], exec[i].pos, depart, target.position, layout, res, horizon);
    if (!leg) {
      // Keep the full claim since arrival; it was truncated by unpark above.
      res.park(exec[i].pos, exec[i].park_from, agents[i].id);
      return false;
    }
    append_wait_until(i, depart);
    for (std::size_t k = 0; k < leg->intervals.size(); ++k) {
      res.commit_interval(depart + int(k), leg->intervals[k], agents[i].id);
      result.paths[i].intervals.push_back(leg->intervals[k]);
    }
    const long long len = leg->length();
    result.actual_length[i] += len;
    result.leg_lengths[i].push_back(len);
    exec[i].pos = target.position;
    int arrive = leg->end_time();
    if (enforce_windows && target.kind == TargetKind::Pickup) {
      const int window_open = int(std::ceil(target.time_start));
      arrive = std::max(arrive, window_open);
    }
    exec[i].time = arrive;
    ++exec[i].next_target;
    ++result.legs_planned;
    if (exec[i].next_target >= queue.size()) {
      pending[i] = false;  // finished: leaves the grid, no further claims
    } else {
      res.park(target.position, leg->end_time(), agents[i].id);
      exec[i].park_from = leg->end_time();
    }
    return true;
  };

  auto index_of = [&](int agent_id) {
    for (std::size_t i = 0; i < n; ++i)
      if (agents[i].id == agent_id) return i;
    return n;
  };

  // Step aside: move the agent to the nearest free aisle cell nobody still
  // needs, breaking parked-goal cycles. Does not advance the target queue.
  auto relocate = [&](std::size_t i) -> bool {
    std::unordered_set<GridPoint, GridPointHash> needed;
    for (std::size_t a = 0; a < n; ++a)
      if (pending[a])
        for (std::size_t k = exec[a].next_target; k < queues[a].targets.size(); ++k)
          needed.insert(queues[a].targets[k].position);
    const auto field = bfs_field(exec[i].pos, layout);
    std::vector<std::pair<int, GridPoint>> candidates;
    for (int y = 0; y < layout.height; ++y)
      for (int x = 0; x < layout.width; ++x) {
        const GridPoint q{x, y};
        if (!layout.is_aisle(q) || q == exec[i].pos) continue;
        const int d = field[std::size_t(y) * layout.width + x];
        if (d == kUnreachable || needed.contains(q)) continue;
        if (res.parked_owner(q, agents[i].id) != kNoAgent) continue;
        candidates.push_back({d, q});
      }
    std::sort(candidates.begin(), candidates.end());
    int tried = 0;
    for (const auto& [d, q] : candidates) {
      if (++tried > 20) break;
      const int depart = exec[i].time;
      res.unpark(agents[i].id, depart);
      auto leg = plan_leg(agents[i], exec[i].pos, depart, q, layout, res, horizon);
      if (!leg) {
        res.park(exec[i].pos, exec[i].park_from, agents[i].id);
        continue;
      }
      append_wait_until(i, depart);
      for (std::size_t k = 0; k < leg->intervals.size(); ++k) {
        res.commit_interval(depart + int(k), leg->intervals[k], agents[i].id);
        result.paths[i].intervals.push_back(leg->intervals[k]);
      }
      result.actual_length[i] += leg->length();
      exec[i].pos = q;
      exec[i].time = leg->end_time();
      res.park(q, leg->end_time(), agents[i].id);
      exec[i].park_from = leg->end_time();
      return true;
    }
    return false;
  };

  // Event loop: process the earliest ready agent, ties broken by planning
  // priority (at t=0 this is exactly the initial prioritized pass).
  while (true) {
    std::size_t chosen = n;
    for (std::size_t i : priority) {
      if (!pending[i]) continue;
      if (chosen == n || exec[i].time < exec[chosen].time) chosen = i;
    }
    if (chosen == n) break;
    const bool first_leg = exec[chosen].next_target == 0;
    if (try_plan_leg(chosen)) {
      attempts[chosen] = 0;
      blocked_waits[chosen] = 0;
      if (!first_leg) ++result.replan_invocations;
      continue;
    }
    const auto& target = queues[chosen].targets[exec[chosen].next_target];
    const int blocker_id = res.parked_owner(target.position, agents[chosen].id);
    if (blocker_id != kNoAgent) {
      const std::size_t b = index_of(blocker_id);
      // Walk the chain of parked blockers; if it loops back to this agent,
      // waiting can never resolve it and the agent must step aside.
      bool self_in_cycle = false;
      {
        std::vector<bool> seen(n, false);
        seen[chosen] = true;
        std::size_t cur = b;
        while (cur != n && pending[cur] && !seen[cur]) {
          seen[cur] = true;
          const int next = res.parked_owner(
              queues[cur].targets[exec[cur].next_target].position, agents[cur].id);
          if (next == agents[chosen].id) {
            self_in_cycle = true;
            break;
          }
          cur = next == kNoAgent ? n : index_of(next);
        }
      }
      if (!self_in_cycle && b != n && pending[b] &&
          ++blocked_waits[chosen] <= retry_cap * int(n)) {
        // Wait until just after the blocker's next planning event. These
        // waits are bounded separately from ordinary retries because each
        // one tracks real progress of another agent.
        exec[chosen].time = std::max(exec[chosen].time + 1, exec[b].time + 1);
        ++result.retries;
        continue;
      }
      if (relocations[chosen] < retry_cap && relocate(chosen)) {
        ++relocations[chosen];
        ++result.retries;
        continue;
      }
    }
    if (++attempts[chosen] > retry_cap)
      throw PlanFailure("run_episode: agent " + std::to_string(agents[chosen].id) +
                        " found no path to (" + std::to_string(target.position.x) + "," +
                        std::to_string(target.position.y) + ")");
    // Idle at least one step, up to the next reservation-changing event:
    // a retry before the table changes would fail identically.
    int next_event = std::numeric_limits<int>::max();
    for (std::size_t i : priority)
      if (i != chosen && pending[i] && exec[i].time > exec[chosen].time)
        next_event = std::min(next_event, exec[i].time);
    exec[chosen].time = next_event == std::numeric_limits<int>::max()
                            ? exec[chosen].time + 1
                            : next_event;
    ++result.retries;
  }

  for (std::size_t i = 0; i < n; ++i)
    result.makespan = std::max(result.makespan, result.paths[i].end_time());
  return result;
}

/// Standalone one-time prioritized planning of every agent's next (first)
/// target; exposed for the non-lifelong comparison path.
inline std::vector<TimedPath> plan_all(const std::vector<Agent>& agents,
                                       const std::vector<OrderedTargetQueue>& queues,
                                       const WarehouseLayout& layout) {
  std::vector<OrderedTargetQueue> first_only(queues.size());
  for (std::size_t i = 0; i < queues.size(); ++i) {
    first_only[i].agent_id = queues[i].agent_id;
    if (!queues[i].targets.empty()) first_only[i].targets = {queues[i].targets.front()};
  }
  return run_episode(agents, first_only, layout, false).paths;
}

/// Post-hoc conflict validator over committed episode paths: vertex
/// collisions, unit-move edge swaps, and mid-interval cell overlaps.
inline std::vector<Violation> validate_paths(const std::vector<TimedPath>& paths,
                                             const WarehouseLayout& layout) {
  std::vector<Violation> out;
  auto add = [&](std::string msg) { out.push_back({std::move(msg)}); };

  for (const auto& p : paths) {
    for (std::size_t k = 0; k < p.intervals.size(); ++k) {
      const auto& cells = p.intervals[k].cells;
      if (cells.size() < 2) add("agent " + std::to_string(p.agent_id) + ": malformed interval");
      for (const auto& c : cells)
        if (!layout.is_aisle(c))
          add("agent " + std::to_string(p.agent_id) + ": step occupies a shelf cell");
      for (std::size_t c = 0; c + 1 < cells.size(); ++c)
        if (cells[c] != cells[c + 1] && manhattan_cost(cells[c], cells[c + 1]) != 1)
          add("agent " + std::to_string(p.agent_id) + ": non-adjacent unit move");
      if (k + 1 < p.intervals.size() && cells.back() != p.intervals[k + 1].cells.front())
        add("agent " + std::to_string(p.agent_id) + ": discontinuous path");
    }
  }

  for (std::size_t a = 0; a < paths.size(); ++a)
    for (std::size_t b = a + 1; b < paths.size(); ++b) {
      const auto& pa = paths[a];
      const auto& pb = paths[b];
      // Agents exist on the grid only while their paths are active
      // (disappear-at-target); compare the overlap window only.
      const int t0 = std::max(pa.start_time, pb.start_time);
      const int t1 = std::min(pa.end_time(), pb.end_time());
      for (int t = t0; t < t1; ++t) {
        const auto name = "agents " + std::to_string(pa.agent_id) + "/" +
                          std::to_string(pb.agent_id) + " at t=" + std::to_string(t);
        auto interval_of = [&](const TimedPath& p) -> PathInterval {
          return p.intervals[std::size_t(t - p.start_time)];
        };
        const PathInterval ia = interval_of(pa);
        const PathInterval ib = interval_of(pb);
        if (ia.cells.front() == ib.cells.front()) add("vertex collision: " + name);
        if (ia.cells.back() == ib.cells.back()) add("vertex collision: " + name);
        // edge swaps
        for (std::size_t ca = 0; ca + 1 < ia.cells.size(); ++ca)
          for (std::size_t cb = 0; cb + 1 < ib.cells.size(); ++cb)
            if (ia.cells[ca] == ib.cells[cb + 1] && ia.cells[ca + 1] == ib.cells[cb] &&
                ia.cells[ca] != ia.cells[ca + 1])
              add("edge swap: " + name);
        // mid-interval overlaps
        auto mids = [](const PathInterval& iv) {
          std::vector<GridPoint> m(iv.cells.begin() + 1, iv.cells.end() - 1);
          return m;
        };
        auto touches = [](const PathInterval& iv, GridPoint c) {
          return std::find(iv.cells.begin(), iv.cells.end(), c) != iv.cells.end();
        };
        for (const auto& c : mids(ia))
          if (touches(ib, c)) add("passing collision: " + name);
        for (const auto& c : mids(ib))
          if (touches(ia, c)) add("passing collision: " + name);
      }
    }
  return out;
}

}  // namespace gcbha
