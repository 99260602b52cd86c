#pragma once

#include <string>
#include <vector>

#include "gcbha/domain.hpp"
#include "gcbha/geometry.hpp"

namespace gcbha {

struct Scenario {
  WarehouseLayout layout;
  std::vector<Agent> agents;
  std::vector<Task> tasks;
  std::uint64_t seed = 0;
};

/// Checks every Task/Agent invariant plus layout membership. Violations
/// are data, not failures: an empty list means the scenario is well formed.
inline std::vector<Violation> validate_scenario(const std::vector<Agent>& agents,
                                                const std::vector<Task>& tasks,
                                                const WarehouseLayout& layout) {
  std::vector<Violation> out;
  auto add = [&](std::string msg) { out.push_back({std::move(msg)}); };

  for (const auto& a : agents) {
    const std::string who = "agent " + std::to_string(a.id);
    if (a.capacity <= 0) add(who + ": capacity must be positive");
    if (a.velocity <= 0) add(who + ": velocity must be positive");
    if (!layout.is_aisle(a.position)) add(who + ": position is not a traversable aisle cell");
  }
  for (const auto& t : tasks) {
    const std::string who = "task " + std::to_string(t.id);
    if (!(t.time_start < t.time_end)) add(who + ": time_start must precede time_end");
    if (t.position_start == t.position_end)
      add(who + ": pickup and delivery locations must differ");
    if (t.request <= 0) add(who + ": request must be positive");
    if (t.value < 0) add(who + ": value must be non-negative");
    if (!layout.is_aisle(t.position_start))
      add(who + ": pickup is not a traversable aisle cell");
    if (!layout.is_aisle(t.position_end))
      add(who + ": delivery is not a traversable aisle cell");
  }
  return out;
}

inline std::vector<Violation> validate_scenario(const Scenario& s) {
  return validate_scenario(s.agents, s.tasks, s.layout);
}

}  // namespace gcbha
