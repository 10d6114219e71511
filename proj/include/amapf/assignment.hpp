#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "amapf/errors.hpp"
#include "amapf/graph.hpp"

namespace amapf {

// dist(i, j): shortest path length from start i to goal j.
class DistanceMatrix {
 public:
  DistanceMatrix(std::size_t k = 0) : k_(k), data_(k * k, kUnreachable) {}
  std::size_t size() const noexcept { return k_; }
  Distance operator()(std::size_t i, std::size_t j) const { return data_[i * k_ + j]; }
  Distance& operator()(std::size_t i, std::size_t j) { return data_[i * k_ + j]; }

 private:
  std::size_t k_;
  std::vector<Distance> data_;
};

// k goal-rooted BFS runs.
inline DistanceMatrix distance_matrix(const Graph& graph, std::span<const VertexId> starts,
                                      std::span<const VertexId> goals) {
  if (starts.size() != goals.size()) throw std::invalid_argument("start/goal count mismatch");
  DistanceMatrix m(starts.size());
  for (std::size_t j = 0; j < goals.size(); ++j) {
    auto dist = bfs_distances(graph, goals[j]);
    for (std::size_t i = 0; i < starts.size(); ++i) m(i, j) = dist[starts[i]];
  }
  return m;
}

// Hopcroft-Karp on a k x k bipartite graph given by adjacency lists of the
// left side. O(E sqrt(V)). Returns matching size.
class BipartiteMatcher {
 public:
  explicit BipartiteMatcher(std::size_t n) : n_(n), adj_(n) {}

  void add_edge(std::size_t left, std::size_t right) { adj_[left].push_back(static_cast<int>(right)); }

  std::size_t max_matching() {
    match_left_.assign(n_, -1);
    match_right_.assign(n_, -1);
    std::size_t size = 0;
    while (bfs_layers()) {
      for (std::size_t u = 0; u < n_; ++u) {
        if (match_left_[u] < 0 && dfs_augment(static_cast<int>(u))) ++size;
      }
    }
    return size;
  }

  const std::vector<int>& match_of_left() const noexcept { return match_left_; }

 private:
  bool bfs_layers() {
    layer_.assign(n_, -1);
    std::vector<int> queue;
    for (std::size_t u = 0; u < n_; ++u) {
      if (match_left_[u] < 0) {
        layer_[u] = 0;
        queue.push_back(static_cast<int>(u));
      }
    }
    bool found_free = false;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int u = queue[head];
      for (int v : adj_[u]) {
        int w = match_right_[v];
        if (w < 0) {
          found_free = true;
        } else if (layer_[w] < 0) {
          layer_[w] = layer_[u] + 1;
          queue.push_back(w);
        }
      }
    }
    return found_free;
  }

  bool dfs_augment(int u) {
    for (int v : adj_[u]) {
      int w = match_right_[v];
      if (w < 0 || (layer_[w] == layer_[u] + 1 && dfs_augment(w))) {
        match_left_[u] = v;
        match_right_[v] = u;
        return true;
      }
    }
    layer_[u] = -1;
    return false;
  }

  std::size_t n_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> match_left_, match_right_, layer_;
};

inline bool has_perfect_matching_within(const DistanceMatrix& m, Distance threshold) {
  BipartiteMatcher matcher(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m(i, j) <= threshold) matcher.add_edge(i, j);
  return matcher.max_matching() == m.size();
}

// Smallest threshold admitting a perfect start-goal matching (bottleneck
// assignment value). Binary search over the distinct finite distances;
// each probe is one Hopcroft-Karp run, so O(k^2.5 log k) after the BFS runs.
inline Distance bottleneck_value(const DistanceMatrix& m) {
  if (m.size() == 0) return 0;
  std::vector<Distance> values;
  values.reserve(m.size() * m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m(i, j) != kUnreachable) values.push_back(m(i, j));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty() || !has_perfect_matching_within(m, values.back())) {
    throw InstanceError("no perfect start-goal assignment: some start cannot reach enough goals");
  }
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (has_perfect_matching_within(m, values[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return values[lo];
}

// Lower bound on the optimal makespan: min over assignments of the max
// individual shortest-path distance.
inline Distance bottleneck_lower_bound(const Graph& graph, std::span<const VertexId> starts,
                                       std::span<const VertexId> goals) {
  return bottleneck_value(distance_matrix(graph, starts, goals));
}

}  // namespace amapf
