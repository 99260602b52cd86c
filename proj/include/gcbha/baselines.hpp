#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "gcbha/auction.hpp"
#include "gcbha/netsim.hpp"
#include "gcbha/scenario.hpp"
#include "gcbha/scoring.hpp"
#include "gcbha/taskprep.hpp"

namespace gcbha {

enum class AllocatorKind { Gcbha, Cbga, Central, TaPriority };

inline std::string allocator_name(AllocatorKind kind) {
  switch (kind) {
    case AllocatorKind::Gcbha: return "gcbha";
    case AllocatorKind::Cbga: return "cbga";
    case AllocatorKind::Central: return "central";
    case AllocatorKind::TaPriority: return "ta-priority";
  }
  return "?";
}

struct AllocationResult {
  std::vector<OrderedTargetQueue> queues;  // one per agent, agent order
  std::vector<double> predicted_length;    // estimator cells per agent
  double predicted_total = 0.0;
  double total_score = 0.0;  // sum of per-agent ordered-sequence scores
  std::vector<int> unassigned;  // task ids left without an owner
  int consensus_rounds = 0;
  long long messages = 0;
};

namespace detail {

inline void finalize_metrics(AllocationResult& result, const std::vector<Agent>& agents,
                             const ScoreParams& params, const WarehouseLayout& layout) {
  result.predicted_length.assign(agents.size(), 0.0);
  result.predicted_total = 0.0;
  result.total_score = 0.0;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    GridPoint pos = agents[i].position;
    double len = 0.0;
    for (const auto& tg : result.queues[i].targets) {
      len += travel_cost(pos, tg.position, layout, params.cost_model);
      pos = tg.position;
    }
    result.predicted_length[i] = len;
    result.predicted_total += len;
    result.total_score += target_sequence_score(agents[i], result.queues[i].targets, params,
                                                layout);
  }
}

inline std::vector<TaskGroup> singleton_groups(const std::vector<Task>& tasks) {
  std::vector<Task> sorted = tasks;
  std::sort(sorted.begin(), sorted.end(),
            [](const Task& a, const Task& b) { return a.id < b.id; });
  std::vector<TaskGroup> groups;
  for (std::size_t g = 0; g < sorted.size(); ++g) {
    Task meta = sorted[g];
    meta.id = int(g);
    groups.push_back({int(g), {sorted[g].id}, meta});
  }
  return groups;
}

inline AllocationResult consensus_allocate(const std::vector<Agent>& agents,
                                           const std::vector<Task>& decomposed,
                                           const std::vector<TaskGroup>& groups,
                                           const CommGraph& graph, const ScoreParams& params,
                                           const WarehouseLayout& layout) {
  std::vector<Task> meta;
  meta.reserve(groups.size());
  for (const auto& g : groups) meta.push_back(g.meta_task);

  auto consensus = run_consensus(agents, meta, graph, params, layout);

  AllocationResult result;
  result.consensus_rounds = consensus.rounds;
  result.messages = consensus.messages;
  std::vector<bool> owned(meta.size(), false);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& st = consensus.states[i];
    result.queues.push_back(
        unpack_and_sort(st.bundle, groups, decomposed, agents[i], params, layout));
    for (int j : st.bundle) owned[std::size_t(j)] = true;
  }
  for (std::size_t j = 0; j < meta.size(); ++j)
    if (!owned[j])
      for (int member : groups[j].member_ids) result.unassigned.push_back(member);
  std::sort(result.unassigned.begin(), result.unassigned.end());
  detail::finalize_metrics(result, agents, params, layout);
  return result;
}

}  // namespace detail

/// Full pipeline: decomposition, clustering-based grouping, consensus
/// auction over meta-tasks, then per-agent unpack and sort.
inline AllocationResult gcbha_allocate(const std::vector<Agent>& agents,
                                       const std::vector<Task>& tasks, const CommGraph& graph,
                                       const ScoreParams& params, const GroupingConfig& config,
                                       const WarehouseLayout& layout) {
  const auto decomposed = decompose(tasks, agents);
  const auto grouping = group(decomposed, config, layout);
  return detail::consensus_allocate(agents, decomposed, grouping.groups, graph, params,
                                    layout);
}

/// Identical pipeline with grouping disabled: every task is its own
/// auction item.
inline AllocationResult cbga_allocate(const std::vector<Agent>& agents,
                                      const std::vector<Task>& tasks, const CommGraph& graph,
                                      const ScoreParams& params, const WarehouseLayout& layout) {
  const auto decomposed = decompose(tasks, agents);
  const auto groups = detail::singleton_groups(decomposed);
  return detail::consensus_allocate(agents, decomposed, groups, graph, params, layout);
}

/// Centralized nearest-feasible-task greedy: repeatedly commit the
/// (agent, task) pair with the smallest estimator cost from the agent's
/// queue tail to the task pickup, subject to capacity, cargo type, and
/// time-window feasibility. Ties go to the lower agent id, then task id.
inline AllocationResult central_allocate(const std::vector<Agent>& agents,
                                         const std::vector<Task>& tasks,
                                         const ScoreParams& params,
                                         const WarehouseLayout& layout) {
  const auto decomposed = decompose(tasks, agents);

  struct Tail {
    GridPoint pos;
    double time = 0.0;
    double remaining = 0.0;
  };
  std::vector<Tail> tails;
  for (const auto& a : agents) tails.push_back({a.position, 0.0, a.capacity});

  AllocationResult result;
  for (const auto& a : agents) result.queues.push_back({a.id, {}});
  std::vector<bool> taken(decomposed.size(), false);

  while (true) {
    double best_cost = std::numeric_limits<double>::infinity();
    std::size_t best_agent = 0, best_task = 0;
    bool found = false;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      for (std::size_t j = 0; j < decomposed.size(); ++j) {
        if (taken[j]) continue;
        const Task& task = decomposed[j];
        const Agent& agent = agents[i];
        if (task.cargo_type != agent.cargo_type) continue;
        if (task.request > tails[i].remaining) continue;
        const double to_pick =
            travel_cost(tails[i].pos, task.position_start, layout, params.cost_model);
        const double carry =
            travel_cost(task.position_start, task.position_end, layout, params.cost_model);
        const double arrival =
            std::max(tails[i].time + to_pick / agent.velocity, task.time_start);
        if (arrival + carry / agent.velocity > task.time_end) continue;
        if (to_pick < best_cost) {
          best_cost = to_pick;
          best_agent = i;
          best_task = j;
          found = true;
        }
      }
    }
    if (!found) break;
    const Task& task = decomposed[best_task];
    const Agent& agent = agents[best_agent];
    auto& tail = tails[best_agent];
    const double to_pick =
        travel_cost(tail.pos, task.position_start, layout, params.cost_model);
    const double carry =
        travel_cost(task.position_start, task.position_end, layout, params.cost_model);
    const double arrival = std::max(tail.time + to_pick / agent.velocity, task.time_start);
    tail.time = arrival + carry / agent.velocity;
    tail.pos = task.position_end;
    tail.remaining -= task.request;
    taken[best_task] = true;
    auto& targets = result.queues[best_agent].targets;
    targets.push_back({task.position_start, TargetKind::Pickup, task.id, task.time_start,
                       task.time_end, task.value});
    targets.push_back({task.position_end, TargetKind::Delivery, task.id, task.time_start,
                       task.time_end, task.value});
  }
  for (std::size_t j = 0; j < decomposed.size(); ++j)
    if (!taken[j]) result.unassigned.push_back(decomposed[j].id);
  std::sort(result.unassigned.begin(), result.unassigned.end());
  detail::finalize_metrics(result, agents, params, layout);
  return result;
}

/// Priority round-robin: agents in ascending id order each claim their
/// nearest feasible unclaimed task (capacity and cargo type only; time
/// windows are ignored by design), repeating until no agent can take more.
inline AllocationResult ta_priority_allocate(const std::vector<Agent>& agents,
                                             const std::vector<Task>& tasks,
                                             const ScoreParams& params,
                                             const WarehouseLayout& layout) {
  const auto decomposed = decompose(tasks, agents);

  struct Tail {
    GridPoint pos;
    double remaining = 0.0;
  };
  std::vector<Tail> tails;
  for (const auto& a : agents) tails.push_back({a.position, a.capacity});

  std::vector<std::size_t> order(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return agents[a].id < agents[b].id; });

  AllocationResult result;
  for (const auto& a : agents) result.queues.push_back({a.id, {}});
  std::vector<bool> taken(decomposed.size(), false);

  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i : order) {
      double best_cost = std::numeric_limits<double>::infinity();
      std::size_t best_task = 0;
      bool found = false;
      for (std::size_t j = 0; j < decomposed.size(); ++j) {
        if (taken[j]) continue;
        const Task& task = decomposed[j];
        if (task.cargo_type != agents[i].cargo_type) continue;
        if (task.request > tails[i].remaining) continue;
        const double c =
            travel_cost(tails[i].pos, task.position_start, layout, params.cost_model);
        if (c < best_cost) {
          best_cost = c;
          best_task = j;
          found = true;
        }
      }
      if (!found) continue;
      const Task& task = decomposed[best_task];
      taken[best_task] = true;
      tails[i].pos = task.position_end;
      tails[i].remaining -= task.request;
      auto& targets = result.queues[i].targets;
      targets.push_back({task.position_start, TargetKind::Pickup, task.id, task.time_start,
                         task.time_end, task.value});
      targets.push_back({task.position_end, TargetKind::Delivery, task.id, task.time_start,
                         task.time_end, task.value});
      progress = true;
    }
  }
  for (std::size_t j = 0; j < decomposed.size(); ++j)
    if (!taken[j]) result.unassigned.push_back(decomposed[j].id);
  std::sort(result.unassigned.begin(), result.unassigned.end());
  detail::finalize_metrics(result, agents, params, layout);
  return result;
}

/// Allocator dispatch shared by the CLI and the benchmark harness.
inline AllocationResult allocate(AllocatorKind kind, const Scenario& scenario,
                                 const CommGraph& graph, const ScoreParams& params,
                                 const GroupingConfig& config) {
  switch (kind) {
    case AllocatorKind::Gcbha:
      return gcbha_allocate(scenario.agents, scenario.tasks, graph, params, config,
                            scenario.layout);
    case AllocatorKind::Cbga:
      return cbga_allocate(scenario.agents, scenario.tasks, graph, params, scenario.layout);
    case AllocatorKind::Central:
      return central_allocate(scenario.agents, scenario.tasks, params, scenario.layout);
    case AllocatorKind::TaPriority:
      return ta_priority_allocate(scenario.agents, scenario.tasks, params, scenario.layout);
  }
  throw std::invalid_argument("allocate: unknown allocator");
}

}  // namespace gcbha
