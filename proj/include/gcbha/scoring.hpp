#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "gcbha/domain.hpp"
#include "gcbha/geometry.hpp"

namespace gcbha {

enum class CostModel { Warehouse, Euclidean, Manhattan };

struct ScoreParams {
  double lambda = 0.1;  // in (0,1]
  CostModel cost_model = CostModel::Warehouse;
  // Literal reading of the published insertion-score exponent: elapsed
  // time divided by velocity together with the distance term, no waiting
  // clamp at the pickup. Off by default (dimensionally inconsistent).
  bool literal_formula = false;
};

inline double travel_cost(GridPoint a, GridPoint b, const WarehouseLayout& layout,
                          CostModel model) {
  switch (model) {
    case CostModel::Warehouse:
      return warehouse_cost(a, b, layout);
    case CostModel::Euclidean:
      return euclidean_cost(a, b);
    case CostModel::Manhattan:
      return manhattan_cost(a, b);
  }
  return 0.0;
}

/// Position and completion time of the last queue entry before an
/// insertion point (agent start and time 0 for an empty prefix).
struct QueuePrefixEnd {
  GridPoint position;
  double time = 0.0;
};

/// Time-discounted reward for appending one task after the given prefix:
/// value * exp(-lambda * arrival_at_pickup) * ln(lambda * slack + 1),
/// where slack is the margin to the deadline after delivery. Returns
/// nullopt when the deadline cannot be met (infeasible insertion point).
inline std::optional<double> insertion_score(const Agent& agent, const Task& task,
                                             const QueuePrefixEnd& prev,
                                             const ScoreParams& params,
                                             const WarehouseLayout& layout) {
  const double to_pick =
      travel_cost(prev.position, task.position_start, layout, params.cost_model);
  const double carry =
      travel_cost(task.position_start, task.position_end, layout, params.cost_model);
  if (params.literal_formula) {
    const double exponent = (to_pick + prev.time - task.time_start) / agent.velocity;
    const double slack =
        task.time_end - carry / agent.velocity - to_pick / agent.velocity - prev.time;
    if (slack < 0) return std::nullopt;
    return task.value * std::exp(-params.lambda * exponent) *
           std::log(params.lambda * slack + 1.0);
  }
  const double arrival_pick =
      std::max(prev.time + to_pick / agent.velocity, task.time_start);
  const double slack = task.time_end - (arrival_pick + carry / agent.velocity);
  if (slack < 0) return std::nullopt;
  return task.value * std::exp(-params.lambda * arrival_pick) *
         std::log(params.lambda * slack + 1.0);
}

/// Completion time of a task started after the given prefix (arrival at
/// the delivery location, waiting at the pickup until the window opens).
inline double task_completion_time(const Agent& agent, const Task& task,
                                   const QueuePrefixEnd& prev, const ScoreParams& params,
                                   const WarehouseLayout& layout) {
  const double to_pick =
      travel_cost(prev.position, task.position_start, layout, params.cost_model);
  const double carry =
      travel_cost(task.position_start, task.position_end, layout, params.cost_model);
  const double arrival_pick =
      std::max(prev.time + to_pick / agent.velocity, task.time_start);
  return arrival_pick + carry / agent.velocity;
}

/// Total score of an ordered bundle, re-deriving each entry's prefix from
/// scratch. nullopt if any entry misses its deadline.
inline std::optional<double> bundle_score(const Agent& agent, const std::vector<Task>& bundle,
                                          const ScoreParams& params,
                                          const WarehouseLayout& layout) {
  QueuePrefixEnd prev{agent.position, 0.0};
  double total = 0.0;
  for (const auto& task : bundle) {
    auto s = insertion_score(agent, task, prev, params, layout);
    if (!s) return std::nullopt;
    total += *s;
    prev = {task.position_end, task_completion_time(agent, task, prev, params, layout)};
  }
  return total;
}

struct Insertion {
  std::size_t index = 0;
  double marginal = 0.0;  // total score gain over the bundle without the task
  double total = 0.0;     // total bundle score after insertion
};

/// Evaluates inserting the task at every index, rescoring all downstream
/// entries, and returns the index maximizing the total bundle score.
/// Ties break toward the smallest index. nullopt when no index keeps the
/// whole bundle feasible.
inline std::optional<Insertion> best_insertion(const Agent& agent, const Task& task,
                                               const std::vector<Task>& bundle,
                                               const ScoreParams& params,
                                               const WarehouseLayout& layout) {
  const auto before = bundle_score(agent, bundle, params, layout);
  if (!before) return std::nullopt;
  std::optional<Insertion> best;
  std::vector<Task> trial;
  trial.reserve(bundle.size() + 1);
  for (std::size_t i = 0; i <= bundle.size(); ++i) {
    trial.assign(bundle.begin(), bundle.end());
    trial.insert(trial.begin() + std::ptrdiff_t(i), task);
    auto after = bundle_score(agent, trial, params, layout);
    if (!after) continue;
    if (!best || *after > best->total) best = Insertion{i, *after - *before, *after};
  }
  return best;
}

/// Eq.-11-style score for reaching one target after the previous one was
/// completed at order_time.
inline double position_score(const Agent& agent, GridPoint prev_pos, double order_time,
                             GridPoint target, double value, const ScoreParams& params,
                             const WarehouseLayout& layout) {
  const double travel =
      travel_cost(prev_pos, target, layout, params.cost_model) / agent.velocity;
  return value * std::exp(-params.lambda * (travel + order_time));
}

/// Total score of an ordered target sequence, times accumulating as pure
/// travel (no window clamp; the sort objective treats time as continuous).
inline double target_sequence_score(const Agent& agent, const std::vector<Target>& seq,
                                    const ScoreParams& params,
                                    const WarehouseLayout& layout) {
  GridPoint pos = agent.position;
  double time = 0.0;
  double total = 0.0;
  for (const auto& tg : seq) {
    const double travel = travel_cost(pos, tg.position, layout, params.cost_model) /
                          agent.velocity;
    total += tg.value * std::exp(-params.lambda * (travel + time));
    time += travel;
    pos = tg.position;
  }
  return total;
}

}  // namespace gcbha
