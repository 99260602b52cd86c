#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gcbha/domain.hpp"
#include "gcbha/scoring.hpp"
#include "gcbha/taskprep.hpp"

namespace gcbha {

enum class ConsensusActionKind { Update, Reset, Leave };

struct ConsensusAction {
  ConsensusActionKind kind = ConsensusActionKind::Leave;
  int task_index = 0;
};

namespace detail {

/// Bid comparison with the deterministic tie rule: equal bids go to the
/// lower agent id.
inline bool outbids(double y_new, int id_new, double y_old, int id_old) {
  if (y_new > y_old) return true;
  return y_new == y_old && id_new != kNoAgent && (id_old == kNoAgent || id_new < id_old);
}

inline std::vector<Task> bundle_tasks(const BidState& state, const std::vector<Task>& tasks) {
  std::vector<Task> out;
  out.reserve(state.bundle.size());
  for (int id : state.bundle) out.push_back(tasks[std::size_t(id)]);
  return out;
}

}  // namespace detail

/// Greedy bundle construction: while capacity remains, bid on the eligible
/// task with the highest marginal insertion score that strictly beats the
/// currently known winning bid, and insert it at its best index.
/// Score ties between tasks break toward the lower task id.
inline void build_bundle(const Agent& agent, BidState& state, const std::vector<Task>& tasks,
                         const ScoreParams& params, const WarehouseLayout& layout) {
  while (true) {
    auto current = detail::bundle_tasks(state, tasks);
    std::optional<Insertion> best_ins;
    int best_task = -1;
    for (const auto& task : tasks) {
      const auto j = std::size_t(task.id);
      if (state.x[j]) continue;
      if (task.cargo_type != agent.cargo_type) continue;
      if (state.bundle_request + task.request > agent.capacity) continue;
      auto ins = best_insertion(agent, task, current, params, layout);
      if (!ins) continue;
      if (!(ins->marginal > state.y[j])) continue;  // strict bid filter
      if (!best_ins || ins->marginal > best_ins->marginal) {
        best_ins = ins;
        best_task = task.id;
      }
    }
    if (best_task < 0) break;
    state.bundle.insert(state.bundle.begin() + std::ptrdiff_t(best_ins->index), best_task);
    state.x[std::size_t(best_task)] = 1;
    state.y[std::size_t(best_task)] = best_ins->marginal;
    state.z[std::size_t(best_task)] = agent.id;
    state.bundle_request += tasks[std::size_t(best_task)].request;
  }
}

/// Removes the given task and every later bundle entry. Removed entries
/// whose winner vector still names this agent get their (y,z) cleared so
/// stale scores never drive later decisions. No-op when the task is not
/// in the bundle.
inline void release_from(BidState& state, int task_id, const std::vector<Task>& tasks) {
  auto it = std::find(state.bundle.begin(), state.bundle.end(), task_id);
  if (it == state.bundle.end()) return;
  for (auto rm = it; rm != state.bundle.end(); ++rm) {
    const auto j = std::size_t(*rm);
    state.x[j] = 0;
    state.bundle_request -= tasks[j].request;
    if (state.z[j] == state.agent_id) {
      state.y[j] = 0.0;
      state.z[j] = kNoAgent;
    }
  }
  state.bundle.erase(it, state.bundle.end());
}

/// Pairwise consensus between a receiver and an immutable snapshot of a
/// sender's state: per-task action table dispatched on the two believed
/// winners, third-party disputes settled by information timestamps.
/// Returns the indices whose (y,z) changed.
inline std::vector<int> resolve(BidState& receiver, const BidState& sender, int sender_id,
                                int now) {
  const int i = receiver.agent_id;
  const int k = sender_id;
  const std::size_t m = receiver.y.size();
  const int n_agents = int(receiver.t.size());
  std::vector<int> modified;

  auto valid = [&](int id) { return id == kNoAgent || (id >= 0 && id < n_agents); };

  for (std::size_t j = 0; j < m; ++j) {
    const int zs = sender.z[j];
    const int zr = receiver.z[j];
    if (!valid(zs) || !valid(zr))
      throw std::runtime_error("resolve: winner vector names an unknown agent");

    ConsensusActionKind action = ConsensusActionKind::Leave;
    const double yk = sender.y[j];
    const double yi = receiver.y[j];
    auto newer = [&](int about) { return sender.t[std::size_t(about)] > receiver.t[std::size_t(about)]; };

    if (zs == k) {
      if (zr == i) {
        if (detail::outbids(yk, k, yi, i)) action = ConsensusActionKind::Update;
      } else if (zr == k) {
        action = ConsensusActionKind::Update;
      } else if (zr == kNoAgent) {
        action = ConsensusActionKind::Update;
      } else {  // third party
        if (newer(zr) || detail::outbids(yk, k, yi, zr)) action = ConsensusActionKind::Update;
      }
    } else if (zs == i) {
      if (zr == i) {
        action = ConsensusActionKind::Leave;
      } else if (zr == k) {
        action = ConsensusActionKind::Reset;
      } else if (zr == kNoAgent) {
        action = ConsensusActionKind::Leave;
      } else {
        if (newer(zr)) action = ConsensusActionKind::Reset;
      }
    } else if (zs == kNoAgent) {
      if (zr == i) {
        action = ConsensusActionKind::Leave;
      } else if (zr == k) {
        action = ConsensusActionKind::Update;
      } else if (zr == kNoAgent) {
        action = ConsensusActionKind::Leave;
      } else {
        if (newer(zr)) action = ConsensusActionKind::Update;
      }
    } else {  // sender believes a third party zs
      if (zr == i) {
        if (newer(zs) && detail::outbids(yk, zs, yi, i)) action = ConsensusActionKind::Update;
      } else if (zr == k) {
        action = newer(zs) ? ConsensusActionKind::Update : ConsensusActionKind::Reset;
      } else if (zr == zs) {
        if (newer(zs)) action = ConsensusActionKind::Update;
      } else if (zr == kNoAgent) {
        if (newer(zs)) action = ConsensusActionKind::Update;
      } else {  // receiver believes a different third party zr
        // Evaluated top to bottom, first match wins.
        if (newer(zs) && newer(zr))
          action = ConsensusActionKind::Update;
        else if (newer(zs) && detail::outbids(yk, zs, yi, zr))
          action = ConsensusActionKind::Update;
        else if (newer(zr) && receiver.t[std::size_t(zs)] > sender.t[std::size_t(zs)])
          action = ConsensusActionKind::Reset;
      }
    }

    if (action == ConsensusActionKind::Update) {
      if (receiver.y[j] != yk || receiver.z[j] != zs) {
        receiver.y[j] = yk;
        receiver.z[j] = zs;
        modified.push_back(int(j));
      }
    } else if (action == ConsensusActionKind::Reset) {
      if (receiver.y[j] != 0.0 || receiver.z[j] != kNoAgent) {
        receiver.y[j] = 0.0;
        receiver.z[j] = kNoAgent;
        modified.push_back(int(j));
      }
    }
  }

  // Refresh information timestamps: elementwise max with the sender's
  // view, the sender itself pinned to the current round.
  for (int a = 0; a < n_agents; ++a) {
    if (a == k)
      receiver.t[std::size_t(a)] = now;
    else if (a != i)
      receiver.t[std::size_t(a)] =
          std::max(receiver.t[std::size_t(a)], sender.t[std::size_t(a)]);
  }
  return modified;
}

/// Expands won meta-tasks into their member tasks and greedily builds the
/// ordered target queue: each iteration inserts the placeable target with
/// the highest resulting sequence score at its best index, keeping every
/// pickup ahead of its delivery. Ties break toward the lower task id,
/// pickup first, then the smaller index.
inline OrderedTargetQueue unpack_and_sort(const std::vector<int>& bundle,
                                          const std::vector<TaskGroup>& group_list,
                                          const std::vector<Task>& original_tasks,
                                          const Agent& agent, const ScoreParams& params,
                                          const WarehouseLayout& layout) {
  std::vector<Task> members;
  for (int meta_id : bundle) {
    if (meta_id < 0 || std::size_t(meta_id) >= group_list.size())
      throw std::runtime_error("unpack_and_sort: unknown group id " + std::to_string(meta_id));
    for (int member : group_list[std::size_t(meta_id)].member_ids) {
      auto it = std::find_if(original_tasks.begin(), original_tasks.end(),
                             [member](const Task& t) { return t.id == member; });
      if (it == original_tasks.end())
        throw std::runtime_error("unpack_and_sort: group references unknown task " +
                                 std::to_string(member));
      members.push_back(*it);
    }
  }
  std::sort(members.begin(), members.end(),
            [](const Task& a, const Task& b) { return a.id < b.id; });

  struct Entry {
    Target target;
    bool placed = false;
  };
  std::vector<Entry> pool;
  for (const auto& task : members) {
    pool.push_back({{task.position_start, TargetKind::Pickup, task.id, task.time_start,
                     task.time_end, task.value},
                    false});
    pool.push_back({{task.position_end, TargetKind::Delivery, task.id, task.time_start,
                     task.time_end, task.value},
                    false});
  }

  OrderedTargetQueue queue{agent.id, {}};
  auto pickup_index = [&](int task_id) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < queue.targets.size(); ++i)
      if (queue.targets[i].task_id == task_id && queue.targets[i].kind == TargetKind::Pickup)
        return i;
    return std::nullopt;
  };

  for (std::size_t placed = 0; placed < pool.size(); ++placed) {
    double best_total = -std::numeric_limits<double>::infinity();
    std::size_t best_entry = 0, best_index = 0;
    bool found = false;
    for (std::size_t e = 0; e < pool.size(); ++e) {
      if (pool[e].placed) continue;
      const Target& tg = pool[e].target;
      std::size_t min_index = 0;
      if (tg.kind == TargetKind::Delivery) {
        auto pi = pickup_index(tg.task_id);
        if (!pi) continue;  // pickup not placed yet
        min_index = *pi + 1;
      }
      for (std::size_t idx = min_index; idx <= queue.targets.size(); ++idx) {
        std::vector<Target> trial = queue.targets;
        trial.insert(trial.begin() + std::ptrdiff_t(idx), tg);
        const double total = target_sequence_score(agent, trial, params, layout);
        if (!found || total > best_total) {
          found = true;
          best_total = total;
          best_entry = e;
          best_index = idx;
        }
      }
    }
    if (!found) break;  // defensive: every pool always has a placeable start
    queue.targets.insert(queue.targets.begin() + std::ptrdiff_t(best_index),
                         pool[best_entry].target);
    pool[best_entry].placed = true;
  }
  return queue;
}

}  // namespace gcbha
