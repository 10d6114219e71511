#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "amapf/graph.hpp"
#include "amapf/grid_io.hpp"
#include "amapf/instance.hpp"

namespace amapf {

// MovingAI-style random map: exactly round(ratio * W * H) cells blocked,
// chosen uniformly with the given seed.
inline GridMap random_grid(int width, int height, double obstacle_ratio, std::uint64_t seed) {
  GridMap map(width, height, true);
  std::mt19937_64 rng(seed);
  std::vector<int> cells(static_cast<std::size_t>(width) * height);
  std::iota(cells.begin(), cells.end(), 0);
  std::shuffle(cells.begin(), cells.end(), rng);
  const auto blocked = static_cast<std::size_t>(std::lround(obstacle_ratio * static_cast<double>(cells.size())));
  for (std::size_t i = 0; i < blocked && i < cells.size(); ++i) map.set_passable({cells[i] % width, cells[i] / width}, false);
  return map;
}

// Vertices of the largest connected component, ascending.
inline std::vector<VertexId> largest_component(const Graph& graph) {
  auto label = connected_components(graph);
  std::vector<std::size_t> size;
  for (auto l : label) {
    if (static_cast<std::size_t>(l) >= size.size()) size.resize(l + 1, 0);
    ++size[l];
  }
  std::vector<VertexId> out;
  if (size.empty()) return out;
  const auto best = static_cast<std::int32_t>(std::max_element(size.begin(), size.end()) - size.begin());
  for (VertexId v = 0; v < graph.vertex_count(); ++v)
    if (label[v] == best) out.push_back(v);
  return out;
}

// `count` start/goal pairs inside the largest component: starts pairwise
// distinct, goals pairwise distinct (a start may coincide with a goal).
inline std::vector<ScenarioEntry> random_scenario(const GridMap& map, std::size_t count, std::uint64_t seed,
                                                  const std::string& map_name = "generated.map") {
  const Graph graph = grid_to_graph(map);
  auto pool = largest_component(graph);
  if (pool.size() < count) throw InstanceError("not enough connected cells for " + std::to_string(count) + " agents");
  std::mt19937_64 rng(seed);
  auto starts = pool, goals = pool;
  std::shuffle(starts.begin(), starts.end(), rng);
  std::shuffle(goals.begin(), goals.end(), rng);
  std::vector<ScenarioEntry> out;
  for (std::size_t i = 0; i < count; ++i) {
    ScenarioEntry e;
    e.bucket = static_cast<int>(i / 10);
    e.map_name = map_name;
    e.map_width = map.width();
    e.map_height = map.height();
    e.start = graph.cell_of(starts[i]);
    e.goal = graph.cell_of(goals[i]);
    e.optimal_length = bfs_distances(graph, starts[i])[goals[i]];
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace amapf
