#pragma once

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcbha/bench.hpp"
#include "gcbha/io.hpp"

namespace gcbha::cli {

// Exit codes: 0 success, 1 usage error, 2 data error, 3 non-convergence or
// plan failure.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kData = 2;
inline constexpr int kSolver = 3;

namespace detail {

inline AllocatorKind parse_allocator(const std::string& s) {
  if (s == "gcbha") return AllocatorKind::Gcbha;
  if (s == "cbga") return AllocatorKind::Cbga;
  if (s == "central") return AllocatorKind::Central;
  if (s == "ta-priority") return AllocatorKind::TaPriority;
  throw CLI::ValidationError("--alloc", "unknown allocator: " + s);
}

inline CostModel parse_estimator(const std::string& s) {
  if (s == "warehouse") return CostModel::Warehouse;
  if (s == "euclidean") return CostModel::Euclidean;
  if (s == "manhattan") return CostModel::Manhattan;
  throw CLI::ValidationError("--estimator", "unknown estimator: " + s);
}

inline std::pair<GraphKind, double> parse_graph(const std::string& s) {
  if (s == "full") return {GraphKind::Full, 1.0};
  if (s == "line") return {GraphKind::Line, 1.0};
  if (s == "ring") return {GraphKind::Ring, 1.0};
  if (s.rfind("random:", 0) == 0) {
    const double p = std::stod(s.substr(7));
    return {GraphKind::Random, p};
  }
  throw CLI::ValidationError("--graph", "unknown graph: " + s);
}

struct AllocOptions {
  std::string allocator = "gcbha";
  double group_request = 50.0;
  double lambda = 0.1;
  std::string estimator = "warehouse";
  std::string graph = "full";
};

inline void add_alloc_options(CLI::App* cmd, AllocOptions& opt) {
  cmd->add_option("--alloc", opt.allocator, "allocator: gcbha|cbga|central|ta-priority");
  cmd->add_option("--group-request", opt.group_request, "group demand cap");
  cmd->add_option("--lambda", opt.lambda, "time-discount factor in (0,1]");
  cmd->add_option("--estimator", opt.estimator, "warehouse|euclidean|manhattan");
  cmd->add_option("--graph", opt.graph, "full|line|ring|random:p");
}

inline AllocationResult do_allocate(const Scenario& scenario, const AllocOptions& opt) {
  const auto [gkind, gp] = parse_graph(opt.graph);
  const CommGraph graph = make_graph(gkind, int(scenario.agents.size()),
                                     split_seed(scenario.seed, 7), gp);
  ScoreParams params;
  params.lambda = opt.lambda;
  params.cost_model = parse_estimator(opt.estimator);
  return allocate(parse_allocator(opt.allocator), scenario, graph, params,
                  GroupingConfig{opt.group_request});
}

inline json alloc_params_json(const AllocOptions& opt) {
  return json{{"lambda", opt.lambda},
              {"estimator", opt.estimator},
              {"group_request", opt.group_request},
              {"graph", opt.graph}};
}

/// Deterministic per-run metrics (no wall-clock fields, so re-runs are
/// byte-identical).
inline std::string run_metrics_csv(const AllocOptions& opt, const Scenario& scenario,
                                   const AllocationResult& alloc, const EpisodeResult& episode) {
  long long actual = 0;
  for (auto v : episode.actual_length) actual += v;
  std::ostringstream out;
  out << "allocator,tasks,agents,rounds,messages,total_score,predicted_length,"
         "actual_length,prediction_gap,makespan,unassigned,replans\n";
  out << opt.allocator << ',' << scenario.tasks.size() << ',' << scenario.agents.size() << ','
      << alloc.consensus_rounds << ',' << alloc.messages << ',' << alloc.total_score << ','
      << alloc.predicted_total << ',' << actual << ','
      << (double(actual) - alloc.predicted_total) << ',' << episode.makespan << ','
      << alloc.unassigned.size() << ',' << episode.replan_invocations << "\n";
  return out.str();
}

inline std::vector<Violation> validate_allocation_file(const json& j) {
  std::vector<Violation> out;
  const AllocationResult alloc = allocation_from_json(j);
  for (const auto& q : alloc.queues) {
    std::vector<int> open;  // picked but not delivered
    for (const auto& tg : q.targets) {
      if (tg.kind == TargetKind::Pickup) {
        open.push_back(tg.task_id);
      } else {
        auto it = std::find(open.begin(), open.end(), tg.task_id);
        if (it == open.end())
          out.push_back({"agent " + std::to_string(q.agent_id) + ": delivery of task " +
                         std::to_string(tg.task_id) + " precedes its pickup"});
        else
          open.erase(it);
      }
    }
    for (int id : open)
      out.push_back({"agent " + std::to_string(q.agent_id) + ": task " + std::to_string(id) +
                     " picked up but never delivered"});
  }
  return out;
}

inline ExperimentCell cell_from_json(const json& j) {
  ExperimentCell cell;
  cell.name = j.value("name", "cell");
  cell.allocator = parse_allocator(j.value("allocator", "gcbha"));
  cell.config.n_tasks = j.value("tasks", cell.config.n_tasks);
  cell.config.n_agents = j.value("agents", cell.config.n_agents);
  cell.config.group_request = j.value("group_request", cell.config.group_request);
  cell.config.seed = j.value("seed", cell.config.seed);
  cell.config.repetitions = j.value("repetitions", cell.config.repetitions);
  cell.config.map_width = j.value("width", cell.config.map_width);
  cell.config.map_height = j.value("height", cell.config.map_height);
  cell.config.shelf_length = j.value("shelf_length", cell.config.shelf_length);
  cell.config.gap_w = j.value("gap_w", cell.config.gap_w);
  cell.config.gap_h = j.value("gap_h", cell.config.gap_h);
  cell.score.lambda = j.value("lambda", cell.score.lambda);
  cell.score.cost_model = parse_estimator(j.value("estimator", "warehouse"));
  const auto [gk, gp] = parse_graph(j.value("graph", "full"));
  cell.graph = gk;
  cell.graph_p = j.value("graph_p", gp);
  cell.run_planner = j.value("run_planner", true);
  cell.enforce_windows = j.value("enforce_windows", true);
  return cell;
}

inline json report_json(const std::vector<CellReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) {
    json runs = json::array();
    for (const auto& m : r.runs)
      runs.push_back({{"alloc_wall_ms", m.alloc_wall_ms},
                      {"plan_wall_ms", m.plan_wall_ms},
                      {"rounds", m.consensus_rounds},
                      {"messages", m.messages},
                      {"total_score", m.total_score},
                      {"predicted_length", m.predicted_length},
                      {"actual_length", m.actual_length},
                      {"prediction_gap", m.prediction_gap},
                      {"makespan", m.makespan},
                      {"unassigned", m.unassigned},
                      {"replans", m.replans}});
    out.push_back({{"cell", r.cell.name},
                   {"allocator", allocator_name(r.cell.allocator)},
                   {"tasks", r.cell.config.n_tasks},
                   {"agents", r.cell.config.n_agents},
                   {"group_request", r.cell.config.group_request},
                   {"error", r.error},
                   {"runs", runs}});
  }
  return json{{"kind", "bench-report"}, {"cells", out}};
}

}  // namespace detail

/// Full CLI entry point; the binary's main() forwards here so tests can
/// drive the exact production code path.
inline int run(std::vector<std::string> args) {
  CLI::App app{"GCBHA warehouse task-allocation toolkit"};
  app.require_subcommand(1);

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "generate a scenario file");
  ScenarioConfig gen_config;
  std::string gen_out;
  std::string gen_orientation = "x";
  gen->add_option("--tasks", gen_config.n_tasks);
  gen->add_option("--agents", gen_config.n_agents);
  gen->add_option("--seed", gen_config.seed);
  gen->add_option("--width", gen_config.map_width);
  gen->add_option("--height", gen_config.map_height);
  gen->add_option("--shelf-l", gen_config.shelf_length);
  gen->add_option("--gap-w", gen_config.gap_w);
  gen->add_option("--gap-h", gen_config.gap_h);
  gen->add_option("--orientation", gen_orientation, "x|y");
  gen->add_option("--large-task-fraction", gen_config.large_task_fraction);
  gen->add_option("--special-task-fraction", gen_config.special_task_fraction);
  gen->add_option("--value-ratio", gen_config.value_request_ratio);
  gen->add_option("-o,--output", gen_out)->required();

  // --- allocate ---
  auto* alloc_cmd = app.add_subcommand("allocate", "run task allocation on a scenario");
  detail::AllocOptions alloc_opt;
  std::string alloc_in, alloc_out;
  alloc_cmd->add_option("scenario", alloc_in)->required();
  detail::add_alloc_options(alloc_cmd, alloc_opt);
  alloc_cmd->add_option("-o,--output", alloc_out)->required();

  // --- plan ---
  auto* plan_cmd = app.add_subcommand("plan", "plan collision-free paths for an allocation");
  std::string plan_scenario, plan_alloc, plan_out, plan_csv_dir;
  std::string plan_windows = "on";
  plan_cmd->add_option("scenario", plan_scenario)->required();
  plan_cmd->add_option("allocation", plan_alloc)->required();
  plan_cmd->add_option("--enforce-windows", plan_windows, "on|off");
  plan_cmd->add_option("--csv-dir", plan_csv_dir, "directory for per-agent CSV paths");
  plan_cmd->add_option("-o,--output", plan_out)->required();

  // --- run ---
  auto* run_cmd = app.add_subcommand("run", "allocate, plan, and report in one pass");
  detail::AllocOptions run_opt;
  std::string run_in, run_out_dir;
  std::string run_windows = "on";
  run_cmd->add_option("scenario", run_in)->required();
  detail::add_alloc_options(run_cmd, run_opt);
  run_cmd->add_option("--enforce-windows", run_windows, "on|off");
  run_cmd->add_option("-o,--output", run_out_dir)->required();

  // --- bench ---
  auto* bench_cmd = app.add_subcommand("bench", "run an experiment matrix file");
  std::string bench_in, bench_out_dir;
  int bench_jobs = 1;
  bench_cmd->add_option("matrix", bench_in)->required();
  bench_cmd->add_option("--jobs", bench_jobs);
  bench_cmd->add_option("-o,--output", bench_out_dir)->required();

  // --- validate ---
  auto* validate_cmd = app.add_subcommand("validate", "check any artifact file");
  std::string validate_in;
  validate_cmd->add_option("file", validate_in)->required();

  try {
    std::vector<const char*> argv;
    argv.push_back("gcbha");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) {
      gen_config.orientation = gen_orientation == "y" ? Orientation::YAxis
                                                      : Orientation::XAxis;
      const Scenario scenario = generate(gen_config, gen_config.seed);
      const auto violations = validate_scenario(scenario);
      if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "generated scenario: " << v.what << "\n";
        return kData;
      }
      write_json_file(gen_out, to_json(scenario));
    } else if (alloc_cmd->parsed()) {
      const Scenario scenario = scenario_from_json(read_json_file(alloc_in));
      const auto violations = validate_scenario(scenario);
      if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << alloc_in << ": " << v.what << "\n";
        return kData;
      }
      const AllocationResult result = detail::do_allocate(scenario, alloc_opt);
      write_json_file(alloc_out,
                      to_json(result, alloc_opt.allocator, detail::alloc_params_json(alloc_opt)));
    } else if (plan_cmd->parsed()) {
      const Scenario scenario = scenario_from_json(read_json_file(plan_scenario));
      const AllocationResult alloc = allocation_from_json(read_json_file(plan_alloc));
      const EpisodeResult episode = run_episode(scenario.agents, alloc.queues, scenario.layout,
                                                plan_windows != "off");
      write_json_file(plan_out, to_json(episode, scenario.layout));
      if (!plan_csv_dir.empty()) {
        std::filesystem::create_directories(plan_csv_dir);
        for (const auto& p : episode.paths)
          write_file(plan_csv_dir + "/agent_" + std::to_string(p.agent_id) + ".csv",
                     path_to_csv(p));
      }
    } else if (run_cmd->parsed()) {
      const Scenario scenario = scenario_from_json(read_json_file(run_in));
      const auto violations = validate_scenario(scenario);
      if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << run_in << ": " << v.what << "\n";
        return kData;
      }
      std::filesystem::create_directories(run_out_dir);
      const AllocationResult alloc = detail::do_allocate(scenario, run_opt);
      write_json_file(run_out_dir + "/allocation.json",
                      to_json(alloc, run_opt.allocator, detail::alloc_params_json(run_opt)));
      const EpisodeResult episode =
          run_episode(scenario.agents, alloc.queues, scenario.layout, run_windows != "off");
      write_json_file(run_out_dir + "/paths.json", to_json(episode, scenario.layout));
      write_file(run_out_dir + "/metrics.csv",
                 detail::run_metrics_csv(run_opt, scenario, alloc, episode));
    } else if (bench_cmd->parsed()) {
      const json matrix_json = read_json_file(bench_in);
      std::vector<ExperimentCell> matrix;
      for (const auto& c : matrix_json.at("cells"))
        matrix.push_back(detail::cell_from_json(c));
      const auto reports = run_experiment(matrix, bench_jobs);
      std::filesystem::create_directories(bench_out_dir);
      write_file(bench_out_dir + "/report.csv", report_csv(reports));
      write_json_file(bench_out_dir + "/report.json", detail::report_json(reports));
    } else if (validate_cmd->parsed()) {
      const json j = read_json_file(validate_in);
      std::vector<Violation> violations;
      const std::string kind = j.value("kind", "");
      if (kind == "scenario") {
        violations = validate_scenario(scenario_from_json(j));
      } else if (kind == "allocation") {
        violations = detail::validate_allocation_file(j);
      } else if (kind == "paths") {
        auto [episode, layout] = paths_from_json(j);
        violations = validate_paths(episode.paths, layout);
      } else {
        throw DataError(validate_in + ": unknown artifact kind \"" + kind + "\"");
      }
      if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << validate_in << ": " << v.what << "\n";
        return kData;
      }
      std::cout << validate_in << ": ok\n";
    }
  } catch (const ConsensusError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  } catch (const PlanFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kOk;
}

}  // namespace gcbha::cli
