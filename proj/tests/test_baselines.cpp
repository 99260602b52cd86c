#include <doctest.h>

#include <algorithm>
#include <map>

#include "gcbha/baselines.hpp"
#include "gcbha/bench.hpp"

using namespace gcbha;

namespace {

ScenarioConfig small_config(int tasks, int agents) {
  ScenarioConfig c;
  c.map_width = 40;
  c.map_height = 40;
  c.shelf_length = 5;
  c.n_tasks = tasks;
  c.n_agents = agents;
  return c;
}

ScoreParams warehouse_params() { return {}; }

void check_queue_invariants(const AllocationResult& res, const Scenario& s) {
  REQUIRE(res.queues.size() == s.agents.size());
  const auto decomposed = decompose(s.tasks, s.agents);
  std::map<int, int> owner;  // task id -> agent id
  for (std::size_t i = 0; i < res.queues.size(); ++i) {
    CHECK(res.queues[i].agent_id == s.agents[i].id);
    std::map<int, std::size_t> pick_at;
    double load = 0.0;
    for (std::size_t k = 0; k < res.queues[i].targets.size(); ++k) {
      const auto& tg = res.queues[i].targets[k];
      if (tg.kind == TargetKind::Pickup) {
        CHECK(!pick_at.contains(tg.task_id));
        pick_at[tg.task_id] = k;
        CHECK(!owner.contains(tg.task_id));
        owner[tg.task_id] = s.agents[i].id;
        for (const auto& t : decomposed)
          if (t.id == tg.task_id) {
            load += t.request;
            CHECK(t.cargo_type == s.agents[i].cargo_type);
          }
      } else {
        REQUIRE(pick_at.contains(tg.task_id));
        CHECK(pick_at[tg.task_id] < k);
      }
    }
    CHECK(load <= s.agents[i].capacity + 1e-9);
  }
  // every decomposed task is owned or explicitly unassigned, never both
  for (const auto& t : decomposed) {
    const bool listed = std::find(res.unassigned.begin(), res.unassigned.end(), t.id) !=
                        res.unassigned.end();
    CHECK(owner.contains(t.id) != listed);
  }
}

}  // namespace

TEST_CASE("grouping with an unreachable cap degenerates to the ungrouped pipeline") {
  // every generated demand is >= 10, so a cap of 1 forces singleton groups
  // and the two pipelines must agree bit for bit
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
    const auto s = generate(small_config(12, 4), seed);
    const auto graph = make_graph(GraphKind::Full, int(s.agents.size()));
    const auto params = warehouse_params();
    const auto grouped =
        gcbha_allocate(s.agents, s.tasks, graph, params, GroupingConfig{1.0}, s.layout);
    const auto flat = cbga_allocate(s.agents, s.tasks, graph, params, s.layout);
    REQUIRE(grouped.queues.size() == flat.queues.size());
    for (std::size_t i = 0; i < grouped.queues.size(); ++i)
      CHECK(grouped.queues[i] == flat.queues[i]);
    CHECK(grouped.unassigned == flat.unassigned);
    CHECK(grouped.total_score == flat.total_score);
    CHECK(grouped.predicted_total == flat.predicted_total);
    CHECK(grouped.consensus_rounds == flat.consensus_rounds);
  }
}

TEST_CASE("gcbha allocation satisfies the structural invariants") {
  for (std::uint64_t seed : {7ULL, 11ULL, 13ULL}) {
    const auto s = generate(small_config(15, 5), seed);
    const auto graph = make_graph(GraphKind::Random, int(s.agents.size()),
                                  split_seed(seed, 7), 0.5);
    const auto res =
        gcbha_allocate(s.agents, s.tasks, graph, warehouse_params(), GroupingConfig{50.0},
                       s.layout);
    check_queue_invariants(res, s);
    CHECK(res.consensus_rounds > 0);
    CHECK(res.messages > 0);
  }
}

TEST_CASE("central greedy picks the nearest feasible task first") {
  const WarehouseLayout l{20, 20, 0, 1, 1, {1, 1}, Orientation::XAxis};
  ScoreParams params;
  params.cost_model = CostModel::Manhattan;
  std::vector<Agent> agents = {{0, {0, 0}, 100.0, 0, 1.0}, {1, {19, 19}, 100.0, 0, 1.0}};
  std::vector<Task> tasks;
  auto add_task = [&](int id, GridPoint s, GridPoint e, double req = 10.0, int type = 0) {
    Task t{id, s, e, 0.0, 1000.0, req, type, req * 0.1};
    tasks.push_back(t);
  };
  add_task(0, {2, 0}, {2, 5});     // near agent 0
  add_task(1, {18, 19}, {14, 19});  // near agent 1
  add_task(2, {10, 10}, {10, 14});  // middle
  add_task(3, {5, 5}, {5, 9}, 10.0, 1);  // no type-1 agent exists

  const auto res = central_allocate(agents, tasks, params, l);
  REQUIRE(res.queues.size() == 2);
  REQUIRE(res.queues[0].targets.size() >= 2);
  CHECK(res.queues[0].targets[0].task_id == 0);
  CHECK(res.queues[1].targets[0].task_id == 1);
  CHECK(res.unassigned == std::vector<int>{3});
  // the middle task went to exactly one of them
  int holders = 0;
  for (const auto& q : res.queues)
    for (const auto& tg : q.targets)
      if (tg.task_id == 2 && tg.kind == TargetKind::Pickup) ++holders;
  CHECK(holders == 1);
}

TEST_CASE("central greedy respects deadlines") {
  const WarehouseLayout l{20, 20, 0, 1, 1, {1, 1}, Orientation::XAxis};
  ScoreParams params;
  params.cost_model = CostModel::Manhattan;
  std::vector<Agent> agents = {{0, {0, 0}, 100.0, 0, 1.0}};
  Task t{0, {10, 0}, {10, 5}, 0.0, 12.0, 10.0, 0, 1.0};  // needs 15 time units
  const auto res = central_allocate(agents, {t}, params, l);
  CHECK(res.queues[0].targets.empty());
  CHECK(res.unassigned == std::vector<int>{0});
}

TEST_CASE("priority round-robin alternates between agents") {
  const WarehouseLayout l{20, 20, 0, 1, 1, {1, 1}, Orientation::XAxis};
  ScoreParams params;
  params.cost_model = CostModel::Manhattan;
  std::vector<Agent> agents = {{0, {0, 0}, 30.0, 0, 1.0}, {1, {19, 19}, 30.0, 0, 1.0}};
  std::vector<Task> tasks;
  for (int j = 0; j < 4; ++j) {
    Task t{j, {1 + j * 5, 1}, {1 + j * 5, 8}, 0.0, 1e9, 10.0, 0, 1.0};
    tasks.push_back(t);
  }
  const auto res = ta_priority_allocate(agents, tasks, params, l);
  // 4 tasks of demand 10 against capacity 30 each: at most 3 per agent,
  // and round-robin guarantees both agents get at least one
  CHECK(res.queues[0].targets.size() >= 2);
  CHECK(res.queues[1].targets.size() >= 2);
  CHECK(res.unassigned.empty());
  // agent 0 moves first and takes its nearest pickup
  CHECK(res.queues[0].targets[0].task_id == 0);
}

TEST_CASE("allocator dispatch covers all four strategies") {
  const auto s = generate(small_config(8, 3), 21);
  const auto graph = make_graph(GraphKind::Full, int(s.agents.size()));
  for (auto kind : {AllocatorKind::Gcbha, AllocatorKind::Cbga, AllocatorKind::Central,
                    AllocatorKind::TaPriority}) {
    const auto res = allocate(kind, s, graph, warehouse_params(), GroupingConfig{50.0});
    check_queue_invariants(res, s);
    if (kind == AllocatorKind::Central || kind == AllocatorKind::TaPriority) {
      CHECK(res.consensus_rounds == 0);
      CHECK(res.messages == 0);
    }
  }
  CHECK(allocator_name(AllocatorKind::Gcbha) == "gcbha");
  CHECK(allocator_name(AllocatorKind::Cbga) == "cbga");
  CHECK(allocator_name(AllocatorKind::Central) == "central");
  CHECK(allocator_name(AllocatorKind::TaPriority) == "ta-priority");
}

TEST_CASE("allocation is deterministic across repeated calls") {
  const auto s = generate(small_config(10, 4), 33);
  const auto graph = make_graph(GraphKind::Ring, int(s.agents.size()));
  const auto params = warehouse_params();
  const auto a = gcbha_allocate(s.agents, s.tasks, graph, params, GroupingConfig{50.0},
                                s.layout);
  const auto b = gcbha_allocate(s.agents, s.tasks, graph, params, GroupingConfig{50.0},
                                s.layout);
  CHECK(a.queues == b.queues);
  CHECK(a.total_score == b.total_score);
  CHECK(a.predicted_length == b.predicted_length);
  CHECK(a.unassigned == b.unassigned);
  CHECK(a.consensus_rounds == b.consensus_rounds);
  CHECK(a.messages == b.messages);
}

TEST_CASE("predicted lengths accumulate estimator costs along the queue") {
  const auto s = generate(small_config(6, 2), 5);
  const auto graph = make_graph(GraphKind::Full, int(s.agents.size()));
  const auto params = warehouse_params();
  const auto res = cbga_allocate(s.agents, s.tasks, graph, params, s.layout);
  double total = 0.0;
  for (std::size_t i = 0; i < res.queues.size(); ++i) {
    GridPoint pos = s.agents[i].position;
    double len = 0.0;
    for (const auto& tg : res.queues[i].targets) {
      len += warehouse_cost(pos, tg.position, s.layout);
      pos = tg.position;
    }
    CHECK(res.predicted_length[i] == doctest::Approx(len));
    total += len;
  }
  CHECK(res.predicted_total == doctest::Approx(total));
}
