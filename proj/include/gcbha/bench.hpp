#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcbha/baselines.hpp"
#include "gcbha/netsim.hpp"
#include "gcbha/planner.hpp"
#include "gcbha/scenario.hpp"

namespace gcbha {

/// Documented seed-splitting scheme: all sub-streams derive from the
/// master seed through splitmix64 over (seed, stream index).
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct ScenarioConfig {
  // map and shelf lattice
  int map_width = 80;
  int map_height = 80;
  int shelf_length = 10;
  int gap_w = 4;
  int gap_h = 2;
  GridPoint shelf_origin{2, 2};
  Orientation orientation = Orientation::XAxis;
  // population
  int n_tasks = 20;
  int n_agents = 10;
  double small_speed = 1.0;
  double large_speed = 2.0;
  double small_capacity = 100.0;
  double large_capacity = 200.0;
  double large_agent_fraction = 0.1;
  // demands
  double request_min = 10.0;
  double request_max = 50.0;
  double large_request_min = 201.0;
  double large_request_max = 300.0;
  double large_task_fraction = 0.1;
  double special_task_fraction = 0.1;  // second cargo type
  double value_request_ratio = 0.1;    // value_j = ratio * request_j
  // time windows (invented generation scheme; the source experiment
  // tables do not specify one)
  double window_start_max = -1.0;  // default: (w+h)/2
  double window_duration_min = -1.0;  // default: 2*(w+h)
  double window_duration_max = -1.0;  // default: 6*(w+h)
  // run matrix
  double group_request = 50.0;
  std::uint64_t seed = 1;
  int repetitions = 10;

  WarehouseLayout layout() const {
    return {map_width, map_height, shelf_length, gap_w, gap_h, shelf_origin, orientation};
  }
};

/// Deterministic scenario generation: pickups on shelf-adjacent aisle
/// cells, deliveries on the side columns, agents on distinct aisle cells.
inline Scenario generate(const ScenarioConfig& config, std::uint64_t seed) {
  Scenario s;
  s.seed = seed;
  s.layout = config.layout();
  std::mt19937_64 rng(split_seed(seed, 0));

  auto pickups = s.layout.shelf_adjacent_cells();
  if (pickups.empty()) pickups = s.layout.aisle_cells();
  auto deliveries = s.layout.side_cells();
  auto aisle = s.layout.aisle_cells();
  if (int(aisle.size()) < config.n_agents)
    throw std::invalid_argument("generate: more agents than aisle cells");

  auto pick_one = [&](const std::vector<GridPoint>& pool) {
    std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
    return pool[d(rng)];
  };
  auto pick_flags = [&](int total, int chosen) {
    std::vector<bool> flags(std::size_t(total), false);
    std::vector<int> idx(static_cast<std::size_t>(total));
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int i = 0; i < chosen && i < total; ++i) flags[std::size_t(idx[std::size_t(i)])] = true;
    return flags;
  };

  const int n = config.n_agents;
  const int m = config.n_tasks;
  const int n_large_tasks = int(std::lround(config.large_task_fraction * m));
  const int n_special_tasks = int(std::lround(config.special_task_fraction * m));
  const int n_large_agents = int(std::lround(config.large_agent_fraction * n));
  int n_special_agents = int(std::lround(config.special_task_fraction * n));
  if (n_special_tasks > 0) n_special_agents = std::max(n_special_agents, 1);

  const auto agent_large = pick_flags(n, n_large_agents);
  const auto agent_special = pick_flags(n, n_special_agents);
  {
    std::vector<GridPoint> pool = aisle;
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int i = 0; i < n; ++i) {
      Agent a;
      a.id = i;
      a.position = pool[std::size_t(i)];
      a.capacity = agent_large[std::size_t(i)] ? config.large_capacity : config.small_capacity;
      a.velocity = agent_large[std::size_t(i)] ? config.large_speed : config.small_speed;
      a.cargo_type = agent_special[std::size_t(i)] ? 1 : 0;
      s.agents.push_back(a);
    }
  }

  const auto task_large = pick_flags(m, n_large_tasks);
  const auto task_special = pick_flags(m, n_special_tasks);
  const double span = config.map_width + config.map_height;
  const double start_max =
      config.window_start_max >= 0 ? config.window_start_max : span / 2.0;
  const double dur_min =
      config.window_duration_min >= 0 ? config.window_duration_min : 2.0 * span;
  const double dur_max =
      config.window_duration_max >= 0 ? config.window_duration_max : 6.0 * span;

  for (int j = 0; j < m; ++j) {
    Task t;
    t.id = j;
    t.position_start = pick_one(pickups);
    do {
      t.position_end = pick_one(deliveries);
    } while (t.position_end == t.position_start);
    if (task_large[std::size_t(j)]) {
      std::uniform_int_distribution<int> d(int(config.large_request_min),
                                           int(config.large_request_max));
      t.request = d(rng);
    } else {
      std::uniform_int_distribution<int> d(int(config.request_min), int(config.request_max));
      t.request = d(rng);
    }
    t.cargo_type = task_special[std::size_t(j)] ? 1 : 0;
    t.value = config.value_request_ratio * t.request;
    std::uniform_real_distribution<double> ds(0.0, start_max);
    std::uniform_real_distribution<double> dd(dur_min, dur_max);
    t.time_start = ds(rng);
    t.time_end = t.time_start + dd(rng);
    s.tasks.push_back(t);
  }
  return s;
}

struct RunMetrics {
  double alloc_wall_ms = 0.0;
  double plan_wall_ms = 0.0;
  int consensus_rounds = 0;
  long long messages = 0;
  double total_score = 0.0;
  double predicted_length = 0.0;
  double actual_length = 0.0;
  double prediction_gap = 0.0;  // actual - predicted
  double makespan = 0.0;
  int unassigned = 0;
  int replans = 0;
};

struct ExperimentCell {
  std::string name;
  AllocatorKind allocator = AllocatorKind::Gcbha;
  ScenarioConfig config;
  ScoreParams score;
  GraphKind graph = GraphKind::Full;
  double graph_p = 0.5;
  bool run_planner = true;
  bool enforce_windows = true;
};

/// One generated-scenario run through allocation and (optionally) the
/// lifelong planning episode.
inline RunMetrics run_single(const ExperimentCell& cell, std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  const Scenario scenario = generate(cell.config, seed);
  const CommGraph graph = make_graph(cell.graph, int(scenario.agents.size()),
                                     split_seed(seed, 7), cell.graph_p);
  GroupingConfig grouping{cell.config.group_request};

  RunMetrics metrics;
  const auto a0 = clock::now();
  const AllocationResult alloc = allocate(cell.allocator, scenario, graph, cell.score, grouping);
  metrics.alloc_wall_ms =
      std::chrono::duration<double, std::milli>(clock::now() - a0).count();
  metrics.consensus_rounds = alloc.consensus_rounds;
  metrics.messages = alloc.messages;
  metrics.total_score = alloc.total_score;
  metrics.predicted_length = alloc.predicted_total;
  metrics.unassigned = int(alloc.unassigned.size());

  if (cell.run_planner) {
    const auto p0 = clock::now();
    const EpisodeResult episode =
        run_episode(scenario.agents, alloc.queues, scenario.layout, cell.enforce_windows);
    metrics.plan_wall_ms =
        std::chrono::duration<double, std::milli>(clock::now() - p0).count();
    long long actual = 0;
    for (auto v : episode.actual_length) actual += v;
    metrics.actual_length = double(actual);
    metrics.prediction_gap = metrics.actual_length - metrics.predicted_length;
    metrics.makespan = episode.makespan;
    metrics.replans = episode.replan_invocations;
  }
  return metrics;
}

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;
};

inline Aggregate aggregate(const std::vector<double>& xs) {
  if (xs.empty()) return {};
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / double(xs.size()))};
}

struct CellReport {
  ExperimentCell cell;
  std::vector<RunMetrics> runs;
  std::string error;  // non-empty when the cell failed

  std::vector<double> column(double RunMetrics::* field) const {
    std::vector<double> out;
    for (const auto& r : runs) out.push_back(r.*field);
    return out;
  }
  std::vector<double> column_i(int RunMetrics::* field) const {
    std::vector<double> out;
    for (const auto& r : runs) out.push_back(double(r.*field));
    return out;
  }
};

/// Runs every cell of the matrix, `repetitions` derived-seed runs each.
/// Per-cell failures are recorded and the matrix continues.
inline std::vector<CellReport> run_experiment(const std::vector<ExperimentCell>& matrix,
                                              int jobs = 1) {
  std::vector<CellReport> reports(matrix.size());
  auto run_cell = [&](std::size_t c) {
    reports[c].cell = matrix[c];
    try {
      for (int rep = 0; rep < matrix[c].config.repetitions; ++rep) {
        const std::uint64_t seed = split_seed(matrix[c].config.seed, std::uint64_t(rep));
        reports[c].runs.push_back(run_single(matrix[c], seed));
      }
    } catch (const std::exception& e) {
      reports[c].error = e.what();
    }
  };
  if (jobs <= 1) {
    for (std::size_t c = 0; c < matrix.size(); ++c) run_cell(c);
  } else {
    std::vector<std::future<void>> pending;
    for (std::size_t c = 0; c < matrix.size(); ++c) {
      pending.push_back(std::async(std::launch::async, run_cell, c));
      if (int(pending.size()) >= jobs) {
        pending.front().wait();
        pending.erase(pending.begin());
      }
    }
    for (auto& f : pending) f.wait();
  }
  return reports;
}

inline std::string report_csv(const std::vector<CellReport>& reports) {
  std::ostringstream out;
  out << "cell,allocator,tasks,agents,group_request,estimator,graph,"
         "alloc_ms_mean,alloc_ms_std,plan_ms_mean,plan_ms_std,"
         "rounds_mean,rounds_std,messages_mean,score_mean,score_std,"
         "predicted_mean,actual_mean,gap_mean,gap_std,abs_gap_mean,"
         "makespan_mean,unassigned_mean,replans_mean,error\n";
  auto estimator_name = [](CostModel m) {
    switch (m) {
      case CostModel::Warehouse: return "warehouse";
      case CostModel::Euclidean: return "euclidean";
      case CostModel::Manhattan: return "manhattan";
    }
    return "?";
  };
  auto graph_name = [](GraphKind g) {
    switch (g) {
      case GraphKind::Full: return "full";
      case GraphKind::Line: return "line";
      case GraphKind::Ring: return "ring";
      case GraphKind::Random: return "random";
    }
    return "?";
  };
  for (const auto& r : reports) {
    std::vector<double> abs_gap;
    for (const auto& run : r.runs) abs_gap.push_back(std::abs(run.prediction_gap));
    const auto alloc_ms = aggregate(r.column(&RunMetrics::alloc_wall_ms));
    const auto plan_ms = aggregate(r.column(&RunMetrics::plan_wall_ms));
    const auto rounds = aggregate(r.column_i(&RunMetrics::consensus_rounds));
    std::vector<double> msgs;
    for (const auto& run : r.runs) msgs.push_back(double(run.messages));
    const auto score = aggregate(r.column(&RunMetrics::total_score));
    const auto gap = aggregate(r.column(&RunMetrics::prediction_gap));
    out << r.cell.name << ',' << allocator_name(r.cell.allocator) << ','
        << r.cell.config.n_tasks << ',' << r.cell.config.n_agents << ','
        << r.cell.config.group_request << ',' << estimator_name(r.cell.score.cost_model) << ','
        << graph_name(r.cell.graph) << ',' << alloc_ms.mean << ',' << alloc_ms.stddev << ','
        << plan_ms.mean << ',' << plan_ms.stddev << ',' << rounds.mean << ',' << rounds.stddev
        << ',' << aggregate(msgs).mean << ',' << score.mean << ',' << score.stddev << ','
        << aggregate(r.column(&RunMetrics::predicted_length)).mean << ','
        << aggregate(r.column(&RunMetrics::actual_length)).mean << ',' << gap.mean << ','
        << gap.stddev << ',' << aggregate(abs_gap).mean << ','
        << aggregate(r.column(&RunMetrics::makespan)).mean << ','
        << aggregate(r.column_i(&RunMetrics::unassigned)).mean << ','
        << aggregate(r.column_i(&RunMetrics::replans)).mean << ',' << r.error << "\n";
  }
  return out.str();
}

}  // namespace gcbha
