#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "amapf/errors.hpp"
#include "amapf/flow_solver.hpp"
#include "amapf/graph.hpp"
#include "amapf/plan.hpp"

namespace amapf {

// Solution document:
// { "map": {"name", "width", "height"},
//   "agents": [{"start": [x, y], "goal": [x, y], "actions": ["U"|"D"|"L"|"R"|"W", ...]}],
//   "makespan": int, "horizon": int, "stats": {...} }
// U/D move to row y-1 / y+1, L/R to column x-1 / x+1.

inline char direction_letter(const Graph& g, VertexId from, VertexId to) {
  const Cell a = g.cell_of(from), b = g.cell_of(to);
  if (b.x == a.x && b.y == a.y - 1) return 'U';
  if (b.x == a.x && b.y == a.y + 1) return 'D';
  if (b.y == a.y && b.x == a.x - 1) return 'L';
  if (b.y == a.y && b.x == a.x + 1) return 'R';
  throw std::invalid_argument("move between non-adjacent cells");
}

inline nlohmann::json stats_to_json(const SolveStats& s) {
  nlohmann::json per_t = nlohmann::json::array();
  for (const auto& h : s.per_T) {
    per_t.push_back({{"T", h.horizon},
                     {"flow", h.flow},
                     {"expansions", h.expansions},
                     {"generated", h.generated},
                     {"sequences", h.sequences},
                     {"wall_ms", h.wall_ms}});
  }
  return {{"expansions", s.expansions},
          {"generated", s.generated},
          {"sequences_created", s.sequences_created},
          {"augmentations", s.augmentations},
          {"lower_bound", s.lower_bound},
          {"estimator_ms", s.estimator_ms},
          {"total_ms", s.total_ms},
          {"per_T", per_t}};
}

inline nlohmann::json solution_to_json(const std::string& map_name, const Graph& graph, const std::vector<Plan>& plans,
                                       int makespan, int horizon, const SolveStats& stats) {
  nlohmann::json agents = nlohmann::json::array();
  for (const auto& p : plans) {
    nlohmann::json actions = nlohmann::json::array();
    VertexId cur = p.start;
    for (const auto& a : p.actions) {
      if (a.is_move()) {
        actions.push_back(std::string(1, direction_letter(graph, cur, a.to)));
        cur = a.to;
      } else {
        actions.push_back("W");
      }
    }
    const Cell s = graph.cell_of(p.start), g = graph.cell_of(cur);
    agents.push_back({{"start", {s.x, s.y}}, {"goal", {g.x, g.y}}, {"actions", actions}});
  }
  return {{"map", {{"name", map_name}, {"width", graph.width()}, {"height", graph.height()}}},
          {"agents", agents},
          {"makespan", makespan},
          {"horizon", horizon},
          {"stats", stats_to_json(stats)}};
}

struct SolutionDocument {
  std::string map_name;
  std::vector<VertexId> starts;
  std::vector<VertexId> goals;  // as claimed by the document
  std::vector<Plan> plans;
  int makespan = 0;
  int horizon = 0;
};

class SchemaError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Decodes a solution document against `graph`. Direction letters are applied
// literally; a letter leading off the grid or into a blocked cell produces an
// out-of-graph MOVE for validate() to report. Throws SchemaError.
inline SolutionDocument parse_solution_json(const nlohmann::json& doc, const Graph& graph) {
  SolutionDocument out;
  try {
    const auto& map = doc.at("map");
    out.map_name = map.at("name").get<std::string>();
    if (map.at("width").get<int>() != graph.width() || map.at("height").get<int>() != graph.height()) {
      throw SchemaError("solution map dimensions do not match the map");
    }
    out.makespan = doc.at("makespan").get<int>();
    auto cell_vertex = [&](const nlohmann::json& xy, const char* what) {
      if (!xy.is_array() || xy.size() != 2) throw SchemaError(std::string(what) + " must be [x, y]");
      VertexId v = graph.vertex_at({xy[0].get<int>(), xy[1].get<int>()});
      if (v == kNoVertex) throw SchemaError(std::string(what) + " is not a passable cell");
      return v;
    };
    std::size_t longest = 0;
    for (const auto& agent : doc.at("agents")) {
      Plan plan;
      plan.start = cell_vertex(agent.at("start"), "start");
      out.starts.push_back(plan.start);
      out.goals.push_back(cell_vertex(agent.at("goal"), "goal"));
      Cell cur = graph.cell_of(plan.start);
      for (const auto& a : agent.at("actions")) {
        const auto letter = a.get<std::string>();
        if (letter == "W") {
          plan.actions.push_back(Action::wait());
          continue;
        }
        Cell next = cur;
        if (letter == "U") --next.y;
        else if (letter == "D") ++next.y;
        else if (letter == "L") --next.x;
        else if (letter == "R") ++next.x;
        else throw SchemaError("unknown action '" + letter + "'");
        const VertexId v = graph.vertex_at(next);
        plan.actions.push_back(Action::move(v == kNoVertex ? graph.vertex_count() : v));
        if (v != kNoVertex) cur = next;
      }
      longest = std::max(longest, plan.actions.size());
      out.plans.push_back(std::move(plan));
    }
    out.horizon = doc.contains("horizon") ? doc.at("horizon").get<int>() : static_cast<int>(longest);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("solution schema mismatch: ") + e.what());
  }
  return out;
}

}  // namespace amapf
