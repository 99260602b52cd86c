#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcbha/auction.hpp"
#include "gcbha/domain.hpp"

namespace gcbha {

enum class GraphKind { Full, Line, Ring, Random };

/// Static symmetric communication network with unit diagonal.
struct CommGraph {
  int n = 0;
  std::vector<std::uint8_t> adjacency;  // row-major n*n

  bool linked(int i, int j) const { return adjacency[std::size_t(i) * n + j] != 0; }

  void link(int i, int j) {
    adjacency[std::size_t(i) * n + j] = 1;
    adjacency[std::size_t(j) * n + i] = 1;
  }

  bool connected() const {
    if (n == 0) return true;
    std::vector<bool> seen(std::size_t(n), false);
    std::deque<int> queue{0};
    seen[0] = true;
    int count = 1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v = 0; v < n; ++v)
        if (v != u && linked(u, v) && !seen[std::size_t(v)]) {
          seen[std::size_t(v)] = true;
          ++count;
          queue.push_back(v);
        }
    }
    return count == n;
  }

  /// Largest finite shortest-path distance over all pairs (per component).
  int diameter() const {
    int best = 0;
    for (int s = 0; s < n; ++s) {
      std::vector<int> dist(std::size_t(n), -1);
      std::deque<int> queue{s};
      dist[std::size_t(s)] = 0;
      while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v = 0; v < n; ++v)
          if (v != u && linked(u, v) && dist[std::size_t(v)] < 0) {
            dist[std::size_t(v)] = dist[std::size_t(u)] + 1;
            queue.push_back(v);
          }
      }
      for (int d : dist) best = std::max(best, d);
    }
    return std::max(best, 1);
  }
};

/// Deterministic graph construction. Random graphs draw edges with
/// probability p and redraw until connected.
inline CommGraph make_graph(GraphKind kind, int n, std::uint64_t seed = 0, double p = 0.5) {
  if (n < 1) throw std::invalid_argument("make_graph: need at least one agent");
  CommGraph g;
  g.n = n;
  g.adjacency.assign(std::size_t(n) * n, 0);
  for (int i = 0; i < n; ++i) g.link(i, i);
  switch (kind) {
    case GraphKind::Full:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.link(i, j);
      break;
    case GraphKind::Line:
      for (int i = 0; i + 1 < n; ++i) g.link(i, i + 1);
      break;
    case GraphKind::Ring:
      for (int i = 0; i + 1 < n; ++i) g.link(i, i + 1);
      if (n > 2) g.link(n - 1, 0);
      break;
    case GraphKind::Random: {
      if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("make_graph: p must be in (0,1]");
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> coin(0.0, 1.0);
      for (int attempt = 0; attempt < 10000; ++attempt) {
        std::fill(g.adjacency.begin(), g.adjacency.end(), 0);
        for (int i = 0; i < n; ++i) g.link(i, i);
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (coin(rng) < p) g.link(i, j);
        if (g.connected()) return g;
      }
      throw std::runtime_error("make_graph: random graph never connected");
    }
  }
  return g;
}

struct ConsensusResult {
  std::vector<BidState> states;
  int rounds = 0;
  long long messages = 0;
  bool converged = false;
  bool connected = true;
};

struct ConsensusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Synchronous consensus rounds: every agent rebids over its current
/// knowledge, then all neighbor pairs exchange (y,z,t) snapshots and apply
/// the action table, releasing conflicting bundle suffixes in-round.
/// Terminates after D quiet rounds (D = graph diameter) so information has
/// time to cross the network; a generous round cap guards non-convergence.
inline ConsensusResult run_consensus(const std::vector<Agent>& agents,
                                     const std::vector<Task>& tasks, const CommGraph& graph,
                                     const ScoreParams& params, const WarehouseLayout& layout,
                                     int round_cap = 0) {
  const int n = int(agents.size());
  const std::size_t m = tasks.size();
  if (graph.n != n) throw std::invalid_argument("run_consensus: graph size mismatch");
  if (round_cap <= 0) round_cap = std::max(16, 4 * n * std::max(1, int(m)));

  ConsensusResult result;
  result.connected = graph.connected();
  for (int i = 0; i < n; ++i) result.states.emplace_back(agents[std::size_t(i)].id, m, n);

  const int quiet_needed = graph.diameter();
  int quiet = 0;
  int round = 0;
  while (round < round_cap) {
    ++round;
    bool changed = false;

    for (int i = 0; i < n; ++i) {
      auto& st = result.states[std::size_t(i)];
      st.t[std::size_t(i)] = round;
      const auto y_before = st.y;
      const auto z_before = st.z;
      build_bundle(agents[std::size_t(i)], st, tasks, params, layout);
      if (st.y != y_before || st.z != z_before) changed = true;
    }

    const std::vector<BidState> snapshot = result.states;
    for (int i = 0; i < n; ++i) {
      auto& st = result.states[std::size_t(i)];
      // Every neighbor message this round is judged against the receiver's
      // round-start timestamps; refreshes are merged afterwards. Letting an
      // earlier neighbor's refresh erase a later neighbor's freshness edge
      // can permanently strand a stale belief the later payload would fix.
      const std::vector<int> t_start = st.t;
      std::vector<int> t_merged = st.t;
      for (int k = 0; k < n; ++k) {
        if (k == i || !graph.linked(i, k)) continue;
        st.t = t_start;
        auto modified = resolve(st, snapshot[std::size_t(k)], k, round);
        for (std::size_t a = 0; a < t_merged.size(); ++a)
          t_merged[a] = std::max(t_merged[a], st.t[a]);
        ++result.messages;
        if (modified.empty()) continue;
        changed = true;
        // Release from the earliest affected bundle position.
        std::size_t earliest = st.bundle.size();
        int release_id = -1;
        for (int j : modified) {
          auto it = std::find(st.bundle.begin(), st.bundle.end(), j);
          if (it != st.bundle.end()) {
            const auto pos = std::size_t(it - st.bundle.begin());
            if (pos < earliest) {
              earliest = pos;
              release_id = j;
            }
          }
        }
        if (release_id >= 0) release_from(st, release_id, tasks);
      }
      st.t = t_merged;
    }

    quiet = changed ? 0 : quiet + 1;
    if (quiet >= quiet_needed) {
      result.converged = true;
      break;
    }
  }
  result.rounds = round;
  if (!result.converged) {
    std::string dump = "run_consensus: no convergence after " + std::to_string(round) +
                       " rounds; disagreeing tasks:";
    for (std::size_t j = 0; j < m; ++j) {
      bool agree = true;
      for (int i = 1; i < n; ++i)
        if (result.states[std::size_t(i)].z[j] != result.states[0].z[j]) agree = false;
      if (!agree) dump += " " + std::to_string(j);
    }
    throw ConsensusError(dump);
  }
  return result;
}

}  // namespace gcbha
