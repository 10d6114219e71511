#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "amapf/grid_io.hpp"

namespace amapf {

using VertexId = std::int32_t;
inline constexpr VertexId kNoVertex = -1;

using Distance = std::int32_t;
inline constexpr Distance kUnreachable = std::numeric_limits<Distance>::max();

// Undirected graph in CSR form. Vertices built from a grid keep a mapping to
// their cell; graphs built from an edge list have no cells.
class Graph {
 public:
  Graph() = default;

  static Graph from_edges(VertexId vertex_count, std::span<const std::pair<VertexId, VertexId>> edges) {
    std::vector<std::vector<VertexId>> adj(vertex_count);
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count || u == v) {
        throw std::invalid_argument("edge endpoint out of range or self-loop");
      }
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    Graph g;
    g.build_csr(adj);
    return g;
  }

  VertexId vertex_count() const noexcept { return static_cast<VertexId>(offsets_.empty() ? 0 : offsets_.size() - 1); }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  bool adjacent(VertexId u, VertexId v) const {
    for (VertexId w : neighbors(u))
      if (w == v) return true;
    return false;
  }

  bool has_cells() const noexcept { return !cells_.empty(); }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Cell cell_of(VertexId v) const { return cells_.at(v); }
  // kNoVertex for blocked or out-of-range cells.
  VertexId vertex_at(Cell c) const {
    if (c.x < 0 || c.y < 0 || c.x >= width_ || c.y >= height_) return kNoVertex;
    return vertex_of_cell_[static_cast<std::size_t>(c.y) * width_ + c.x];
  }

 private:
  friend Graph grid_to_graph(const GridMap& map);

  void build_csr(const std::vector<std::vector<VertexId>>& adj) {
    offsets_.assign(adj.size() + 1, 0);
    for (std::size_t v = 0; v < adj.size(); ++v) offsets_[v + 1] = offsets_[v] + adj[v].size();
    neighbors_.clear();
    neighbors_.reserve(offsets_.back());
    for (const auto& list : adj) neighbors_.insert(neighbors_.end(), list.begin(), list.end());
  }

  std::vector<std::size_t> offsets_;
  std::vector<VertexId> neighbors_;
  int width_ = 0;
  int height_ = 0;
  std::vector<Cell> cells_;
  std::vector<VertexId> vertex_of_cell_;
};

// One vertex per passable cell in row-major order; edges join 4-adjacent
// passable cells. Neighbor order is fixed: right, left, down, up.
inline Graph grid_to_graph(const GridMap& map) {
  Graph g;
  g.width_ = map.width();
  g.height_ = map.height();
  g.vertex_of_cell_.assign(static_cast<std::size_t>(map.width()) * map.height(), kNoVertex);
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (!map.passable(x, y)) continue;
      g.vertex_of_cell_[static_cast<std::size_t>(y) * map.width() + x] = static_cast<VertexId>(g.cells_.size());
      g.cells_.push_back({x, y});
    }
  }
  std::vector<std::vector<VertexId>> adj(g.cells_.size());
  static constexpr int kDx[] = {1, -1, 0, 0};
  static constexpr int kDy[] = {0, 0, 1, -1};
  for (std::size_t v = 0; v < g.cells_.size(); ++v) {
    const Cell c = g.cells_[v];
    for (int d = 0; d < 4; ++d) {
      VertexId u = g.vertex_at({c.x + kDx[d], c.y + kDy[d]});
      if (u != kNoVertex) adj[v].push_back(u);
    }
  }
  g.build_csr(adj);
  return g;
}

inline std::vector<Distance> bfs_distances(const Graph& graph, VertexId source) {
  std::vector<Distance> dist(graph.vertex_count(), kUnreachable);
  std::vector<VertexId> queue;
  queue.reserve(graph.vertex_count());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    for (VertexId u : graph.neighbors(v)) {
      if (dist[u] != kUnreachable) continue;
      dist[u] = dist[v] + 1;
      queue.push_back(u);
    }
  }
  return dist;
}

// Connected-component label per vertex, labels dense from 0.
inline std::vector<std::int32_t> connected_components(const Graph& graph) {
  std::vector<std::int32_t> label(graph.vertex_count(), -1);
  std::int32_t next = 0;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < graph.vertex_count(); ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (VertexId u : graph.neighbors(v)) {
        if (label[u] < 0) {
          label[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace amapf
