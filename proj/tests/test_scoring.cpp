#include <doctest.h>

#include <cmath>
#include <random>

#include "gcbha/scoring.hpp"

using namespace gcbha;

namespace {

WarehouseLayout open20() { return {20, 20, 0, 1, 1, {1, 1}, Orientation::XAxis}; }

ScoreParams manhattan_params() {
  ScoreParams p;
  p.cost_model = CostModel::Manhattan;
  return p;
}

Task simple_task(GridPoint start, GridPoint end, double time_end, double value,
                 double time_start = 0.0) {
  Task t;
  t.position_start = start;
  t.position_end = end;
  t.time_start = time_start;
  t.time_end = time_end;
  t.request = 1.0;
  t.value = value;
  return t;
}

}  // namespace

TEST_CASE("insertion score closed-form value") {
  // arrival at pickup = 5, slack = 20, value 10, lambda 0.1:
  // 10 * exp(-0.5) * ln(3)
  const auto l = open20();
  Agent agent{0, {0, 0}, 10.0, 0, 1.0};
  const Task t = simple_task({5, 0}, {5, 10}, 35.0, 10.0);
  const auto s = insertion_score(agent, t, {{0, 0}, 0.0}, manhattan_params(), l);
  REQUIRE(s.has_value());
  CHECK(*s == doctest::Approx(10.0 * std::exp(-0.5) * std::log(3.0)));
  CHECK(*s == doctest::Approx(6.6634).epsilon(1e-4));
}

TEST_CASE("zero slack scores zero, negative slack is infeasible") {
  const auto l = open20();
  Agent agent{0, {0, 0}, 10.0, 0, 1.0};
  const Task exact = simple_task({5, 0}, {5, 10}, 15.0, 10.0);
  const auto s0 = insertion_score(agent, exact, {{0, 0}, 0.0}, manhattan_params(), l);
  REQUIRE(s0.has_value());
  CHECK(*s0 == doctest::Approx(0.0));
  const Task late = simple_task({5, 0}, {5, 10}, 14.9, 10.0);
  CHECK_FALSE(insertion_score(agent, late, {{0, 0}, 0.0}, manhattan_params(), l).has_value());
}

TEST_CASE("waiting clamp: arrival never precedes the window start") {
  const auto l = open20();
  Agent agent{0, {0, 0}, 10.0, 0, 1.0};
  const Task t = simple_task({2, 0}, {2, 5}, 40.0, 10.0, /*time_start=*/9.0);
  // travel to pickup takes 2, but the window opens at 9
  CHECK(task_completion_time(agent, t, {{0, 0}, 0.0}, manhattan_params(), l) ==
        doctest::Approx(14.0));
  const auto s = insertion_score(agent, t, {{0, 0}, 0.0}, manhattan_params(), l);
  REQUIRE(s.has_value());
  CHECK(*s == doctest::Approx(10.0 * std::exp(-0.9) * std::log(0.1 * 26.0 + 1.0)));
}

TEST_CASE("velocity divides travel time") {
  const auto l = open20();
  Agent fast{0, {0, 0}, 10.0, 0, 2.0};
  const Task t = simple_task({10, 0}, {10, 10}, 35.0, 10.0);
  // arrival = 10/2 = 5, slack = 35 - (5 + 10/2) = 25
  const auto s = insertion_score(fast, t, {{0, 0}, 0.0}, manhattan_params(), l);
  REQUIRE(s.has_value());
  CHECK(*s == doctest::Approx(10.0 * std::exp(-0.5) * std::log(3.5)));
}

TEST_CASE("score monotonicity in arrival and slack") {
  const auto l = open20();
  Agent agent{0, {0, 0}, 10.0, 0, 1.0};
  const auto params = manhattan_params();
  double prev = std::numeric_limits<double>::infinity();
  for (int d = 1; d <= 15; ++d) {
    // same slack (deadline shifts with distance), growing arrival
    const Task t = simple_task({d, 0}, {d, 5}, double(d) + 5.0 + 20.0, 10.0);
    const auto s = insertion_score(agent, t, {{0, 0}, 0.0}, params, l);
    REQUIRE(s.has_value());
    CHECK(*s < prev);
    prev = *s;
  }
  prev = 0.0;
  for (double extra = 1.0; extra <= 30.0; extra += 1.0) {
    // fixed arrival, growing slack
    const Task t = simple_task({5, 0}, {5, 5}, 10.0 + extra, 10.0);
    const auto s = insertion_score(agent, t, {{0, 0}, 0.0}, params, l);
    REQUIRE(s.has_value());
    CHECK(*s > prev);
    prev = *s;
  }
}

TEST_CASE("literal formula variant differs but stays feasibility-consistent at time zero") {
  const auto l = open20();
  Agent agent{0, {0, 0}, 10.0, 0, 1.0};
  auto literal = manhattan_params();
  literal.literal_formula = true;
  const Task t = simple_task({5, 0}, {5, 10}, 35.0, 10.0);
  const auto a = insertion_score(agent, t, {{0, 0}, 0.0}, manhattan_params(), l);
  const auto b = insertion_score(agent, t, {{0, 0}, 0.0}, literal, l);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  // with time_start = 0, prev.time = 0, velocity 1 the two coincide
  CHECK(*a == doctest::Approx(*b));
}

TEST_CASE("bundle score rejects sequences that miss a deadline") {
  const auto l = open20();
  Agent agent{0, {0, 0}, 10.0, 0, 1.0};
  auto t1 = simple_task({5, 0}, {5, 5}, 100.0, 10.0);
  auto t2 = simple_task({0, 5}, {0, 0}, 12.0, 10.0);
  t1.id = 0;
  t2.id = 1;
  CHECK(bundle_score(agent, {t2, t1}, manhattan_params(), l).has_value());
  CHECK_FALSE(bundle_score(agent, {t1, t2}, manhattan_params(), l).has_value());
}

TEST_CASE("best_insertion matches exhaustive index enumeration") {
  const auto l = open20();
  const auto params = manhattan_params();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coord(0, 19);
  std::uniform_real_distribution<double> deadline(30.0, 400.0);
  std::uniform_real_distribution<double> val(1.0, 20.0);
  int feasible_cases = 0;
  for (int it = 0; it < 300; ++it) {
    Agent agent{0, {coord(rng), coord(rng)}, 100.0, 0, 1.0};
    std::vector<Task> bundle;
    const int len = it % 5;  // bundles up to 4 entries
    for (int i = 0; i < len; ++i) {
      auto t = simple_task({coord(rng), coord(rng)}, {coord(rng), coord(rng)}, deadline(rng),
                           val(rng));
      t.id = i;
      if (t.position_start == t.position_end) t.position_end.x = (t.position_end.x + 1) % 20;
      bundle.push_back(t);
    }
    if (!bundle_score(agent, bundle, params, l)) continue;
    auto cand = simple_task({coord(rng), coord(rng)}, {coord(rng), coord(rng)}, deadline(rng),
                            val(rng));
    cand.id = 99;
    if (cand.position_start == cand.position_end) cand.position_end.y = (cand.position_end.y + 1) % 20;

    // oracle: try every index by hand
    std::optional<double> best_total;
    std::optional<std::size_t> best_idx;
    for (std::size_t i = 0; i <= bundle.size(); ++i) {
      auto trial = bundle;
      trial.insert(trial.begin() + std::ptrdiff_t(i), cand);
      const auto s = bundle_score(agent, trial, params, l);
      if (!s) continue;
      if (!best_total || *s > *best_total) {
        best_total = *s;
        best_idx = i;
      }
    }
    const auto got = best_insertion(agent, cand, bundle, params, l);
    REQUIRE(got.has_value() == best_total.has_value());
    if (got) {
      ++feasible_cases;
      CHECK(got->total == doctest::Approx(*best_total));
      CHECK(got->index == *best_idx);
    }
  }
  CHECK(feasible_cases > 100);
}

TEST_CASE("position score closed-form value") {
  const auto l = open20();
  Agent agent{0, {0, 0}, 10.0, 0, 1.0};
  // travel 4 + order_time 6 = 10, lambda 0.1 -> 10 * exp(-1)
  CHECK(position_score(agent, {0, 0}, 6.0, {4, 0}, 10.0, manhattan_params(), l) ==
        doctest::Approx(10.0 * std::exp(-1.0)));
}

TEST_CASE("sequence score argmax is invariant to uniform value scaling") {
  const auto l = open20();
  const auto params = manhattan_params();
  Agent agent{0, {0, 0}, 10.0, 0, 1.0};
  std::vector<Target> a = {{{3, 0}, TargetKind::Pickup, 0, 0, 50, 5.0},
                           {{3, 4}, TargetKind::Delivery, 0, 0, 50, 5.0}};
  std::vector<Target> b = {{{9, 9}, TargetKind::Pickup, 1, 0, 50, 5.0},
                           {{1, 1}, TargetKind::Delivery, 1, 0, 50, 5.0}};
  const bool a_wins =
      target_sequence_score(agent, a, params, l) > target_sequence_score(agent, b, params, l);
  for (auto* seq : {&a, &b})
    for (auto& tg : *seq) tg.value *= 17.0;
  const bool a_wins_scaled =
      target_sequence_score(agent, a, params, l) > target_sequence_score(agent, b, params, l);
  CHECK(a_wins == a_wins_scaled);
}
