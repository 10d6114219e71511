#pragma once

// Test-only reference implementations. None of these share code with the
// solver paths they check beyond the Graph adjacency itself.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "amapf/generator.hpp"
#include "amapf/graph.hpp"
#include "amapf/instance.hpp"

namespace amapf::oracle {

// Plain BFS with std::queue over the adjacency lists.
inline std::vector<int> distances(const Graph& g, VertexId src) {
  std::vector<int> d(g.vertex_count(), -1);
  std::queue<VertexId> q;
  d[src] = 0;
  q.push(src);
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    for (VertexId u : g.neighbors(v))
      if (d[u] < 0) {
        d[u] = d[v] + 1;
        q.push(u);
      }
  }
  return d;
}

// min over all k! assignments of the max start->goal distance.
inline int brute_force_bottleneck(const Graph& g, const std::vector<VertexId>& starts,
                                  const std::vector<VertexId>& goals) {
  std::vector<std::vector<int>> d;
  for (VertexId s : starts) d.push_back(distances(g, s));
  std::vector<std::size_t> perm(goals.size());
  std::iota(perm.begin(), perm.end(), 0);
  int best = std::numeric_limits<int>::max();
  do {
    int worst = 0;
    for (std::size_t i = 0; i < starts.size(); ++i) {
      int dist = d[i][goals[perm[i]]];
      worst = std::max(worst, dist < 0 ? std::numeric_limits<int>::max() : dist);
    }
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return starts.empty() ? 0 : best;
}

// Optimal anonymous makespan by breadth-first search over joint
// configurations (ordered agent positions). A step lets every agent wait or
// move to a neighbor; two agents may not end on one vertex or traverse one
// edge in opposite directions. Terminates when the position set equals the
// goal set. Returns -1 if unreachable within max_depth.
inline int joint_state_optimum(const Graph& g, const std::vector<VertexId>& starts, const std::vector<VertexId>& goals,
                               int max_depth = 64) {
  const std::size_t k = starts.size();
  const std::set<VertexId> goal_set(goals.begin(), goals.end());
  auto is_goal = [&](const std::vector<VertexId>& s) { return std::set<VertexId>(s.begin(), s.end()) == goal_set; };
  if (is_goal(starts)) return 0;
  std::set<std::vector<VertexId>> seen{starts};
  std::vector<std::vector<VertexId>> frontier{starts};
  for (int depth = 1; depth <= max_depth && !frontier.empty(); ++depth) {
    std::vector<std::vector<VertexId>> next;
    for (const auto& state : frontier) {
      std::vector<VertexId> cur(k);
      std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == k) {
          for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b) {
              if (cur[a] == cur[b]) return false;
              if (cur[a] == state[b] && cur[b] == state[a]) return false;
            }
          if (seen.insert(cur).second) {
            if (is_goal(cur)) return true;
            next.push_back(cur);
          }
          return false;
        }
        cur[i] = state[i];
        if (rec(i + 1)) return true;
        for (VertexId u : g.neighbors(state[i])) {
          cur[i] = u;
          if (rec(i + 1)) return true;
        }
        return false;
      };
      if (rec(0)) return depth;
    }
    frontier = std::move(next);
  }
  return -1;
}

// Random grid with the given obstacle fraction; k distinct starts and k
// distinct goals inside the largest component.
inline Instance random_instance(int width, int height, double obstacles, std::size_t k, std::mt19937_64& rng) {
  for (;;) {
    GridMap map = random_grid(width, height, obstacles, rng());
    auto graph = std::make_shared<const Graph>(grid_to_graph(map));
    auto pool = largest_component(*graph);
    if (pool.size() < k) continue;
    auto s = pool, t = pool;
    std::shuffle(s.begin(), s.end(), rng);
    std::shuffle(t.begin(), t.end(), rng);
    s.resize(k);
    t.resize(k);
    return Instance{graph, s, t};
  }
}

// Every instance on a width x height grid with up to max_k agents: all
// obstacle masks, all ordered-start/unordered-goal choices inside one
// component. Start order is canonical (ascending) since agents are anonymous.
template <class F>
void for_each_small_instance(int width, int height, std::size_t max_k, F&& f) {
  const int cells = width * height;
  for (int mask = 0; mask < (1 << cells); ++mask) {
    GridMap map(width, height, false);
    for (int c = 0; c < cells; ++c)
      if (mask & (1 << c)) map.set_passable({c % width, c / width}, true);
    if (map.passable_count() == 0) continue;
    auto graph = std::make_shared<const Graph>(grid_to_graph(map));
    const auto label = connected_components(*graph);
    const int n = graph->vertex_count();
    for (std::size_t k = 1; k <= max_k; ++k) {
      std::vector<std::vector<VertexId>> subsets;
      std::vector<VertexId> cur;
      std::function<void(int)> rec = [&](int from) {
        if (cur.size() == k) {
          subsets.push_back(cur);
          return;
        }
        for (int v = from; v < n; ++v) {
          cur.push_back(v);
          rec(v + 1);
          cur.pop_back();
        }
      };
      rec(0);
      for (const auto& s : subsets)
        for (const auto& t : subsets) {
          bool connected = true;
          for (VertexId v : s) connected &= label[v] == label[s[0]];
          for (VertexId v : t) connected &= label[v] == label[s[0]];
          if (connected) f(Instance{graph, s, t});
        }
    }
  }
}

}  // namespace amapf::oracle
