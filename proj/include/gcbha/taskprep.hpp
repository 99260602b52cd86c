#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gcbha/domain.hpp"
#include "gcbha/geometry.hpp"

namespace gcbha {

struct GroupingConfig {
  double request_group = 50.0;  // group demand cap
};

/// Splits every task whose demand exceeds the largest agent capacity into
/// chunks of the smallest capacity plus a remainder chunk. The original
/// task keeps its id with the remainder demand; extra chunks get fresh
/// sequential ids appended to the list. All other fields are copied.
inline std::vector<Task> decompose(const std::vector<Task>& tasks,
                                   const std::vector<Agent>& agents) {
  if (agents.empty()) throw std::invalid_argument("decompose: no agents");
  double min_cap = std::numeric_limits<double>::infinity();
  double max_cap = 0.0;
  for (const auto& a : agents) {
    min_cap = std::min(min_cap, a.capacity);
    max_cap = std::max(max_cap, a.capacity);
  }
  if (min_cap <= 0) throw std::invalid_argument("decompose: non-positive agent capacity");

  std::vector<Task> out = tasks;
  int next_id = int(tasks.size());
  for (std::size_t k = 0; k < tasks.size(); ++k) {  // appending invalidates refs
    if (out[k].request <= max_cap) continue;
    const int chunks = int(std::ceil(out[k].request / min_cap));
    out[k].request -= double(chunks - 1) * min_cap;
    for (int i = 0; i < chunks - 1; ++i) {
      Task sub = out[k];
      sub.id = next_id++;
      sub.request = min_cap;
      out.push_back(sub);
    }
  }
  return out;
}

namespace detail {

inline GridPoint pickup_centroid(const std::vector<Task>& tasks,
                                 const WarehouseLayout& layout) {
  double sx = 0, sy = 0;
  for (const auto& t : tasks) {
    sx += t.position_start.x;
    sy += t.position_start.y;
  }
  return snap_to_aisle(sx / double(tasks.size()), sy / double(tasks.size()), layout);
}

inline GridPoint delivery_centroid(const std::vector<Task>& tasks,
                                   const WarehouseLayout& layout) {
  double sx = 0, sy = 0;
  for (const auto& t : tasks) {
    sx += t.position_end.x;
    sy += t.position_end.y;
  }
  return snap_to_aisle(sx / double(tasks.size()), sy / double(tasks.size()), layout);
}

}  // namespace detail

/// Sum of standalone pickup-to-delivery costs over a task set.
inline double single_task_cycle(const std::vector<Task>& tasks,
                                const WarehouseLayout& layout) {
  double total = 0.0;
  for (const auto& t : tasks)
    total += warehouse_cost(t.position_start, t.position_end, layout);
  return total;
}

/// Greedy nearest-neighbor tour over the pickup/delivery pairs of a task
/// set, respecting pickup-before-delivery. Starts at the lowest-id task's
/// pickup; ties break by lower task id, pickup before delivery.
inline double all_tasks_cycle(const std::vector<Task>& tasks, const WarehouseLayout& layout) {
  if (tasks.empty()) return 0.0;
  std::vector<const Task*> order(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) order[i] = &tasks[i];
  std::sort(order.begin(), order.end(),
            [](const Task* a, const Task* b) { return a->id < b->id; });

  std::vector<bool> picked(order.size(), false), delivered(order.size(), false);
  GridPoint pos = order[0]->position_start;
  picked[0] = true;
  double total = 0.0;
  for (std::size_t visited = 1; visited < 2 * order.size(); ++visited) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    bool best_pick = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (!picked[i]) {
        const double c = warehouse_cost(pos, order[i]->position_start, layout);
        if (c < best) {
          best = c;
          best_i = i;
          best_pick = true;
        }
      } else if (!delivered[i]) {
        // strict less keeps the pickup-first, lower-id tie-break from the
        // scan order
        const double c = warehouse_cost(pos, order[i]->position_end, layout);
        if (c < best) {
          best = c;
          best_i = i;
          best_pick = false;
        }
      }
    }
    total += best;
    if (best_pick) {
      picked[best_i] = true;
      pos = order[best_i]->position_start;
    } else {
      delivered[best_i] = true;
      pos = order[best_i]->position_end;
    }
  }
  return total;
}

/// Nearest unassigned same-type task whose demand fits the remaining group
/// capacity, measured from the centroid of the group's pickups.
inline std::optional<std::size_t> nearest_task(const std::vector<Task>& group,
                                               const std::vector<Task>& unassigned,
                                               double remaining_cap,
                                               const WarehouseLayout& layout) {
  const GridPoint from = detail::pickup_centroid(group, layout);
  const int type = group.front().cargo_type;
  std::optional<std::size_t> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < unassigned.size(); ++i) {
    const Task& cand = unassigned[i];
    if (cand.cargo_type != type || cand.request > remaining_cap) continue;
    const double c = warehouse_cost(from, cand.position_start, layout);
    if (c < best_cost || (c == best_cost && best && cand.id < unassigned[*best].id)) {
      best_cost = c;
      best = i;
    }
  }
  return best;
}

struct GroupSplit {
  std::vector<Task> group;      // A_min
  std::vector<Task> remainder;  // the unassigned rest
};

/// One clustering step: for each seed task, greedily accrete nearby
/// same-type tasks under the demand cap, keeping the split that minimizes
/// tour-cost(group) + standalone-cost(rest). Falls back to the lowest-id
/// singleton when no merge improves the baseline.
inline GroupSplit nearest_group(const std::vector<Task>& unassigned, double request_group,
                                const WarehouseLayout& layout) {
  if (unassigned.empty()) throw std::invalid_argument("nearest_group: no tasks");
  std::vector<Task> tasks = unassigned;
  std::sort(tasks.begin(), tasks.end(),
            [](const Task& a, const Task& b) { return a.id < b.id; });

  // Standalone costs are independent of the split; keep the rest-side sum
  // by subtraction instead of rescanning the remainder each step.
  std::vector<double> standalone(tasks.size());
  double standalone_sum = 0.0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    standalone[i] = warehouse_cost(tasks[i].position_start, tasks[i].position_end, layout);
    standalone_sum += standalone[i];
  }

  double cost_min = standalone_sum;
  std::vector<bool> best_mask(tasks.size(), false);
  best_mask[0] = true;

  for (std::size_t seed = 0; seed < tasks.size(); ++seed) {
    std::vector<bool> mask(tasks.size(), false);
    mask[seed] = true;
    std::vector<Task> group{tasks[seed]};
    std::vector<Task> rest;
    rest.reserve(tasks.size() - 1);
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (i != seed) rest.push_back(tasks[i]);
    double rest_standalone = standalone_sum - standalone[seed];
    double total = tasks[seed].request;
    while (total < request_group) {
      auto next = nearest_task(group, rest, request_group - total, layout);
      if (!next) break;
      const Task cand = rest[*next];
      total += cand.request;
      group.push_back(cand);
      rest.erase(rest.begin() + std::ptrdiff_t(*next));
      for (std::size_t i = 0; i < tasks.size(); ++i)
        if (tasks[i].id == cand.id) {
          mask[i] = true;
          rest_standalone -= standalone[i];
        }
      const double cost = all_tasks_cycle(group, layout) + rest_standalone;
      if (cost < cost_min) {
        cost_min = cost;
        best_mask = mask;
      }
    }
  }
  GroupSplit out;
  for (std::size_t i = 0; i < tasks.size(); ++i)
    (best_mask[i] ? out.group : out.remainder).push_back(tasks[i]);
  return out;
}

struct GroupingResult {
  std::vector<Task> meta_tasks;    // one surrogate per group, ids 0..G-1
  std::vector<TaskGroup> groups;   // meta id -> member tasks
};

/// Partitions tasks into demand-capped, type-pure groups by repeated
/// nearest_group calls and emits one auctionable meta-task per group:
/// summed demand and value, earliest member time window, snapped centroid
/// pickup/delivery positions.
inline GroupingResult group(const std::vector<Task>& tasks, const GroupingConfig& config,
                            const WarehouseLayout& layout) {
  GroupingResult result;
  std::vector<Task> remaining = tasks;
  std::sort(remaining.begin(), remaining.end(),
            [](const Task& a, const Task& b) { return a.id < b.id; });

  std::vector<std::vector<Task>> member_sets;
  while (!remaining.empty()) {
    // A task at or above the cap can never accrete; peel it off directly.
    auto split = nearest_group(remaining, config.request_group, layout);
    member_sets.push_back(std::move(split.group));
    remaining = std::move(split.remainder);
  }

  for (std::size_t g = 0; g < member_sets.size(); ++g) {
    auto& members = member_sets[g];
    std::sort(members.begin(), members.end(),
              [](const Task& a, const Task& b) { return a.id < b.id; });
    Task meta;
    meta.id = int(g);
    meta.cargo_type = members.front().cargo_type;
    meta.request = 0.0;
    meta.value = 0.0;
    meta.time_start = std::numeric_limits<double>::infinity();
    meta.time_end = std::numeric_limits<double>::infinity();
    for (const auto& m : members) {
      meta.request += m.request;
      meta.value += m.value;
      meta.time_start = std::min(meta.time_start, m.time_start);
      meta.time_end = std::min(meta.time_end, m.time_end);
    }
    meta.position_start = detail::pickup_centroid(members, layout);
    meta.position_end = detail::delivery_centroid(members, layout);
    if (meta.position_end == meta.position_start) {
      // Surrogate positions must stay a valid pickup-delivery pair; move
      // the delivery to the closest distinct aisle cell.
      const GridPoint p = meta.position_start;
      for (int r = 1; r < layout.width + layout.height; ++r) {
        GridPoint found{-1, -1};
        for (int dy = -r; dy <= r && found.x < 0; ++dy)
          for (int dx = -r; dx <= r; ++dx) {
            if (std::abs(dx) + std::abs(dy) != r) continue;
            GridPoint q{p.x + dx, p.y + dy};
            if (layout.is_aisle(q)) {
              found = q;
              break;
            }
          }
        if (found.x >= 0) {
          meta.position_end = found;
          break;
        }
      }
    }
    TaskGroup tg;
    tg.group_id = int(g);
    for (const auto& m : members) tg.member_ids.push_back(m.id);
    tg.meta_task = meta;
    result.meta_tasks.push_back(meta);
    result.groups.push_back(std::move(tg));
  }
  return result;
}

}  // namespace gcbha
