#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "amapf/amapf.hpp"

namespace amapf::testing_util {

// Vertex ids for the six-cell example: A..F along one line.
enum : VertexId { A = 0, B, C, D, E, F };

inline std::shared_ptr<const Graph> path_graph(int n) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return std::make_shared<const Graph>(Graph::from_edges(n, edges));
}

// starts {C, F}, goals {A, D} on the path A-B-C-D-E-F
inline Instance six_cell_instance() { return Instance{path_graph(6), {C, F}, {A, D}}; }

inline std::shared_ptr<const Graph> grid_graph(const GridMap& map) { return std::make_shared<const Graph>(grid_to_graph(map)); }

inline NodePath grid_path(std::initializer_list<std::pair<VertexId, Level>> cells) {
  NodePath p{NetworkNode::source()};
  for (auto [v, l] : cells) p.push_back(NetworkNode::grid(v, l));
  p.push_back(NetworkNode::sink());
  return p;
}

}  // namespace amapf::testing_util
