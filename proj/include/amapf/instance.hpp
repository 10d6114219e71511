#pragma once

#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "amapf/errors.hpp"
#include "amapf/graph.hpp"
#include "amapf/grid_io.hpp"

namespace amapf {

// k distinct starts and k distinct goals; any agent may serve any goal.
struct Instance {
  std::shared_ptr<const Graph> graph;
  std::vector<VertexId> starts;
  std::vector<VertexId> goals;

  std::size_t agent_count() const noexcept { return starts.size(); }
};

// Checks the instance invariants; throws InstanceError.
inline void check_instance(const Instance& inst) {
  if (!inst.graph) throw InstanceError("instance has no graph");
  if (inst.starts.size() != inst.goals.size()) throw InstanceError("start/goal count mismatch");
  const VertexId n = inst.graph->vertex_count();
  std::unordered_set<VertexId> seen_starts, seen_goals;
  for (VertexId s : inst.starts) {
    if (s < 0 || s >= n) throw InstanceError("start vertex out of range");
    if (!seen_starts.insert(s).second) throw InstanceError("duplicate start");
  }
  for (VertexId g : inst.goals) {
    if (g < 0 || g >= n) throw InstanceError("goal vertex out of range");
    if (!seen_goals.insert(g).second) throw InstanceError("duplicate goal");
  }
  if (inst.starts.empty()) return;
  // all starts and goals in one component <=> every start reaches every goal
  auto label = connected_components(*inst.graph);
  const auto c = label[inst.starts.front()];
  for (VertexId s : inst.starts)
    if (label[s] != c) throw InstanceError("start-goal disconnected");
  for (VertexId g : inst.goals)
    if (label[g] != c) throw InstanceError("start-goal disconnected");
}

// Takes the first k scenario entries.
inline Instance build_instance(std::shared_ptr<const Graph> graph, const std::vector<ScenarioEntry>& entries,
                               std::size_t k) {
  if (k > entries.size()) {
    throw InstanceError("k too large: " + std::to_string(k) + " agents requested, scenario has " +
                        std::to_string(entries.size()));
  }
  Instance inst;
  inst.graph = std::move(graph);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& e = entries[i];
    VertexId s = inst.graph->vertex_at(e.start);
    VertexId g = inst.graph->vertex_at(e.goal);
    if (s == kNoVertex) throw InstanceError("start on blocked cell (entry " + std::to_string(i) + ")");
    if (g == kNoVertex) throw InstanceError("goal on blocked cell (entry " + std::to_string(i) + ")");
    inst.starts.push_back(s);
    inst.goals.push_back(g);
  }
  check_instance(inst);
  return inst;
}

inline Instance build_instance(const GridMap& map, const std::vector<ScenarioEntry>& entries, std::size_t k) {
  return build_instance(std::make_shared<const Graph>(grid_to_graph(map)), entries, k);
}

}  // namespace amapf
