#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gcbha/baselines.hpp"
#include "gcbha/planner.hpp"
#include "gcbha/scenario.hpp"

namespace gcbha {

using nlohmann::json;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- layout / scenario --------------------------------------------------

inline json to_json(const WarehouseLayout& l) {
  return json{{"width", l.width},
              {"height", l.height},
              {"shelf_length", l.shelf_length},
              {"gap_w", l.gap_w},
              {"gap_h", l.gap_h},
              {"origin", {{"x", l.origin.x}, {"y", l.origin.y}}},
              {"orientation", l.orientation == Orientation::XAxis ? "x" : "y"}};
}

inline WarehouseLayout layout_from_json(const json& j) {
  WarehouseLayout l;
  l.width = j.at("width").get<int>();
  l.height = j.at("height").get<int>();
  l.shelf_length = j.at("shelf_length").get<int>();
  l.gap_w = j.at("gap_w").get<int>();
  l.gap_h = j.at("gap_h").get<int>();
  l.origin = {j.at("origin").at("x").get<int>(), j.at("origin").at("y").get<int>()};
  const auto o = j.at("orientation").get<std::string>();
  if (o != "x" && o != "y") throw DataError("layout: orientation must be \"x\" or \"y\"");
  l.orientation = o == "x" ? Orientation::XAxis : Orientation::YAxis;
  return l;
}

inline json to_json(const Scenario& s) {
  json agents = json::array();
  for (const auto& a : s.agents)
    agents.push_back({{"id", a.id},
                      {"x", a.position.x},
                      {"y", a.position.y},
                      {"capacity", a.capacity},
                      {"cargo_type", a.cargo_type},
                      {"velocity", a.velocity}});
  json tasks = json::array();
  for (const auto& t : s.tasks)
    tasks.push_back({{"id", t.id},
                     {"start", {{"x", t.position_start.x}, {"y", t.position_start.y}}},
                     {"end", {{"x", t.position_end.x}, {"y", t.position_end.y}}},
                     {"time_start", t.time_start},
                     {"time_end", t.time_end},
                     {"request", t.request},
                     {"cargo_type", t.cargo_type},
                     {"value", t.value}});
  return json{{"kind", "scenario"},
              {"seed", s.seed},
              {"layout", to_json(s.layout)},
              {"agents", agents},
              {"tasks", tasks}};
}

inline Scenario scenario_from_json(const json& j) {
  if (j.value("kind", "") != "scenario") throw DataError("not a scenario file");
  Scenario s;
  s.seed = j.value("seed", std::uint64_t(0));
  s.layout = layout_from_json(j.at("layout"));
  for (const auto& a : j.at("agents"))
    s.agents.push_back({a.at("id").get<int>(),
                        {a.at("x").get<int>(), a.at("y").get<int>()},
                        a.at("capacity").get<double>(),
                        a.at("cargo_type").get<int>(),
                        a.at("velocity").get<double>()});
  for (const auto& t : j.at("tasks"))
    s.tasks.push_back({t.at("id").get<int>(),
                       {t.at("start").at("x").get<int>(), t.at("start").at("y").get<int>()},
                       {t.at("end").at("x").get<int>(), t.at("end").at("y").get<int>()},
                       t.at("time_start").get<double>(),
                       t.at("time_end").get<double>(),
                       t.at("request").get<double>(),
                       t.at("cargo_type").get<int>(),
                       t.at("value").get<double>()});
  return s;
}

// ---- allocation ----------------------------------------------------------

inline json to_json(const Target& t) {
  return json{{"x", t.position.x},
              {"y", t.position.y},
              {"kind", t.kind == TargetKind::Pickup ? "pickup" : "delivery"},
              {"task_id", t.task_id},
              {"time_start", t.time_start},
              {"time_end", t.time_end},
              {"value", t.value}};
}

inline Target target_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "pickup" && kind != "delivery")
    throw DataError("target: kind must be pickup or delivery");
  return Target{{j.at("x").get<int>(), j.at("y").get<int>()},
                kind == "pickup" ? TargetKind::Pickup : TargetKind::Delivery,
                j.at("task_id").get<int>(),
                j.at("time_start").get<double>(),
                j.at("time_end").get<double>(),
                j.at("value").get<double>()};
}

inline json to_json(const AllocationResult& r, const std::string& allocator,
                    const json& params) {
  json queues = json::array();
  for (const auto& q : r.queues) {
    json targets = json::array();
    for (const auto& t : q.targets) targets.push_back(to_json(t));
    queues.push_back({{"agent_id", q.agent_id}, {"targets", targets}});
  }
  return json{{"kind", "allocation"},
              {"allocator", allocator},
              {"params", params},
              {"queues", queues},
              {"predicted", {{"per_agent", r.predicted_length}, {"total", r.predicted_total}}},
              {"total_score", r.total_score},
              {"unassigned", r.unassigned},
              {"telemetry", {{"rounds", r.consensus_rounds}, {"messages", r.messages}}}};
}

inline AllocationResult allocation_from_json(const json& j) {
  if (j.value("kind", "") != "allocation") throw DataError("not an allocation file");
  AllocationResult r;
  for (const auto& q : j.at("queues")) {
    OrderedTargetQueue queue;
    queue.agent_id = q.at("agent_id").get<int>();
    for (const auto& t : q.at("targets")) queue.targets.push_back(target_from_json(t));
    r.queues.push_back(std::move(queue));
  }
  r.predicted_length = j.at("predicted").at("per_agent").get<std::vector<double>>();
  r.predicted_total = j.at("predicted").at("total").get<double>();
  r.total_score = j.value("total_score", 0.0);
  r.unassigned = j.at("unassigned").get<std::vector<int>>();
  r.consensus_rounds = j.at("telemetry").at("rounds").get<int>();
  r.messages = j.at("telemetry").at("messages").get<long long>();
  return r;
}

// ---- paths ---------------------------------------------------------------

inline json to_json(const EpisodeResult& e, const WarehouseLayout& layout) {
  json paths = json::array();
  for (const auto& p : e.paths) {
    json intervals = json::array();
    for (const auto& iv : p.intervals) {
      json cells = json::array();
      for (const auto& c : iv.cells) cells.push_back(json::array({c.x, c.y}));
      intervals.push_back(cells);
    }
    paths.push_back(
        {{"agent_id", p.agent_id}, {"start_time", p.start_time}, {"intervals", intervals}});
  }
  long long total = 0;
  for (auto v : e.actual_length) total += v;
  return json{{"kind", "paths"},
              {"layout", to_json(layout)},
              {"paths", paths},
              {"actual", {{"per_agent", e.actual_length}, {"total", total}}},
              {"leg_lengths", e.leg_lengths},
              {"makespan", e.makespan},
              {"replans", e.replan_invocations}};
}

inline std::pair<EpisodeResult, WarehouseLayout> paths_from_json(const json& j) {
  if (j.value("kind", "") != "paths") throw DataError("not a paths file");
  EpisodeResult e;
  for (const auto& p : j.at("paths")) {
    TimedPath path;
    path.agent_id = p.at("agent_id").get<int>();
    path.start_time = p.at("start_time").get<int>();
    for (const auto& iv : p.at("intervals")) {
      PathInterval interval;
      for (const auto& c : iv) interval.cells.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
      path.intervals.push_back(std::move(interval));
    }
    e.paths.push_back(std::move(path));
  }
  e.actual_length = j.at("actual").at("per_agent").get<std::vector<long long>>();
  e.leg_lengths = j.at("leg_lengths").get<std::vector<std::vector<long long>>>();
  e.makespan = j.at("makespan").get<int>();
  e.replan_invocations = j.at("replans").get<int>();
  return {std::move(e), layout_from_json(j.at("layout"))};
}

/// Per-agent CSV export of a timed path: timestep,x,y at integer timesteps.
inline std::string path_to_csv(const TimedPath& p) {
  std::ostringstream out;
  out << "timestep,x,y\n";
  if (p.intervals.empty()) return out.str();
  for (int t = p.start_time; t <= p.end_time(); ++t) {
    const GridPoint c = p.position_at(t);
    out << t << "," << c.x << "," << c.y << "\n";
  }
  return out.str();
}

// ---- files ---------------------------------------------------------------

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return j;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
}

inline void write_json_file(const std::string& path, const json& j) {
  write_file(path, j.dump(2) + "\n");
}

}  // namespace gcbha
