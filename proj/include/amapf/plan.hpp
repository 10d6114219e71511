#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "amapf/graph.hpp"
#include "amapf/instance.hpp"
#include "amapf/ten_network.hpp"

namespace amapf {

enum class ActionKind : std::uint8_t { kWait, kMove };

struct Action {
  ActionKind kind = ActionKind::kWait;
  VertexId to = kNoVertex;  // MOVE only

  static constexpr Action wait() noexcept { return {}; }
  static constexpr Action move(VertexId v) noexcept { return {ActionKind::kMove, v}; }
  bool is_move() const noexcept { return kind == ActionKind::kMove; }
  friend bool operator==(const Action&, const Action&) = default;
};

struct Plan {
  VertexId start = kNoVertex;
  std::vector<Action> actions;

  // Vertex occupied at each time step 0..|actions|.
  std::vector<VertexId> positions() const {
    std::vector<VertexId> pos{start};
    pos.reserve(actions.size() + 1);
    for (const Action& a : actions) pos.push_back(a.is_move() ? a.to : pos.back());
    return pos;
  }
  VertexId position_at(std::size_t t) const {
    VertexId p = start;
    for (std::size_t i = 0; i < t && i < actions.size(); ++i)
      if (actions[i].is_move()) p = actions[i].to;
    return p;
  }
  VertexId final_position() const { return position_at(actions.size()); }

  friend bool operator==(const Plan&, const Plan&) = default;
};

// Move edge -> MOVE, wait edge -> WAIT, restriction edge -> nothing. Each
// path must cover levels 0..2T one level per node.
inline std::vector<Plan> paths_to_plans(std::span<const NodePath> paths, int horizon) {
  std::vector<Plan> plans;
  plans.reserve(paths.size());
  const auto expected = static_cast<std::size_t>(2 * horizon + 1);
  for (const NodePath& path : paths) {
    if (path.size() != expected) throw std::invalid_argument("malformed flow path: wrong length");
    Plan plan;
    plan.start = path.front().vertex;
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (!path[i].is_grid() || path[i].level != static_cast<Level>(i)) {
        throw std::invalid_argument("malformed flow path: missing level " + std::to_string(i));
      }
    }
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const auto& a = path[i];
      const auto& b = path[i + 1];
      if (is_outer(a.level)) {
        plan.actions.push_back(a.vertex == b.vertex ? Action::wait() : Action::move(b.vertex));
      } else if (a.vertex != b.vertex) {
        throw std::invalid_argument("malformed flow path: restriction step changes vertex");
      }
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

// Removes opposite-direction edge conflicts: both agents WAIT for the step
// and then continue with each other's remaining actions. The (vertex, time)
// occupancy and the final positions are preserved as multisets.
inline std::vector<Plan> resolve_edge_conflicts(std::vector<Plan> plans) {
  if (plans.empty()) return plans;
  std::size_t horizon = 0;
  for (const auto& p : plans) horizon = std::max(horizon, p.actions.size());
  for (auto& p : plans) p.actions.resize(horizon, Action::wait());

  std::vector<VertexId> pos(plans.size());
  for (std::size_t i = 0; i < plans.size(); ++i) pos[i] = plans[i].start;
  std::unordered_map<VertexId, std::size_t> at;
  for (std::size_t t = 0; t < horizon; ++t) {
    at.clear();
    for (std::size_t i = 0; i < plans.size(); ++i) at[pos[i]] = i;
    bool swapped = true;
    while (swapped) {
      swapped = false;
      for (std::size_t a = 0; a < plans.size() && !swapped; ++a) {
        const Action& act = plans[a].actions[t];
        if (!act.is_move()) continue;
        auto it = at.find(act.to);
        if (it == at.end()) continue;
        const std::size_t b = it->second;
        const Action& other = plans[b].actions[t];
        if (b == a || !other.is_move() || other.to != pos[a]) continue;
        plans[a].actions[t] = Action::wait();
        plans[b].actions[t] = Action::wait();
        std::swap_ranges(plans[a].actions.begin() + static_cast<std::ptrdiff_t>(t) + 1, plans[a].actions.end(),
                         plans[b].actions.begin() + static_cast<std::ptrdiff_t>(t) + 1);
        swapped = true;
      }
    }
    for (std::size_t i = 0; i < plans.size(); ++i)
      if (plans[i].actions[t].is_move()) pos[i] = plans[i].actions[t].to;
  }
  return plans;
}

struct Conflict {
  int time = 0;  // vertex conflicts: time step; edge conflicts: step index (t -> t+1)
  std::size_t agent_a = 0;
  std::size_t agent_b = 0;
  VertexId u = kNoVertex;
  VertexId v = kNoVertex;  // edge conflicts only
};

struct IllegalStep {
  int time = 0;
  std::size_t agent = 0;
  VertexId from = kNoVertex;
  VertexId to = kNoVertex;
};

struct ValidationReport {
  bool ok = false;
  std::vector<Conflict> vertex_conflicts;
  std::vector<Conflict> edge_conflicts;
  std::vector<IllegalStep> illegal_steps;
  bool goal_coverage = false;
  std::optional<std::string> first_failure;
};

// Checks plans against the instance at horizon T: start placement, move
// adjacency, vertex and edge conflicts, and that the positions at T are
// exactly the goal set. Reports failures instead of throwing.
inline ValidationReport validate(const Graph& graph, std::span<const VertexId> starts, std::span<const VertexId> goals,
                                 std::span<const Plan> plans, int horizon) {
  ValidationReport r;
  auto fail = [&](std::string msg) {
    if (!r.first_failure) r.first_failure = std::move(msg);
  };
  if (plans.size() != starts.size()) {
    fail("expected " + std::to_string(starts.size()) + " plans, got " + std::to_string(plans.size()));
    return r;
  }
  {
    std::vector<VertexId> a(starts.begin(), starts.end()), b;
    for (const auto& p : plans) b.push_back(p.start);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) fail("plan starts do not match the instance starts");
  }
  const VertexId n = graph.vertex_count();
  std::vector<std::vector<VertexId>> pos(plans.size());
  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (plans[i].actions.size() != static_cast<std::size_t>(horizon)) {
      fail("agent " + std::to_string(i) + " has " + std::to_string(plans[i].actions.size()) + " actions, expected " +
           std::to_string(horizon));
    }
    pos[i].push_back(plans[i].start);
    for (std::size_t t = 0; t < static_cast<std::size_t>(horizon); ++t) {
      const VertexId cur = pos[i].back();
      VertexId next = cur;
      if (t < plans[i].actions.size() && plans[i].actions[t].is_move()) {
        next = plans[i].actions[t].to;
        const bool legal = cur >= 0 && cur < n && next >= 0 && next < n && graph.adjacent(cur, next);
        if (!legal) {
          r.illegal_steps.push_back({static_cast<int>(t), i, cur, next});
          fail("agent " + std::to_string(i) + " makes an illegal move at step " + std::to_string(t));
          next = cur;
        }
      }
      pos[i].push_back(next);
    }
  }
  std::unordered_map<VertexId, std::size_t> occupant;
  for (int t = 0; t <= horizon; ++t) {
    occupant.clear();
    for (std::size_t i = 0; i < plans.size(); ++i) {
      auto [it, fresh] = occupant.try_emplace(pos[i][t], i);
      if (!fresh) {
        r.vertex_conflicts.push_back({t, it->second, i, pos[i][t], kNoVertex});
        fail("vertex conflict at time " + std::to_string(t));
      }
    }
    if (t == horizon) break;
    for (std::size_t i = 0; i < plans.size(); ++i) {
      const VertexId from = pos[i][t], to = pos[i][t + 1];
      if (from == to) continue;
      auto it = occupant.find(to);
      if (it == occupant.end() || it->second <= i) continue;
      const std::size_t j = it->second;
      if (pos[j][t + 1] == from) {
        r.edge_conflicts.push_back({t, i, j, from, to});
        fail("edge conflict at step " + std::to_string(t));
      }
    }
  }
  {
    std::vector<VertexId> finals, g(goals.begin(), goals.end());
    for (const auto& p : pos) finals.push_back(p.back());
    std::sort(finals.begin(), finals.end());
    std::sort(g.begin(), g.end());
    r.goal_coverage = finals == g;
    if (!r.goal_coverage) fail("final positions do not cover the goal set");
  }
  r.ok = r.vertex_conflicts.empty() && r.edge_conflicts.empty() && r.illegal_steps.empty() && r.goal_coverage &&
         !r.first_failure;
  return r;
}

inline ValidationReport validate(const Instance& inst, std::span<const Plan> plans, int horizon) {
  return validate(*inst.graph, inst.starts, inst.goals, plans, horizon);
}

// Per agent: the time after its last MOVE, i.e. the earliest step from which
// it rests on a goal. Trailing waits do not count.
inline int plan_cost(const Plan& plan, std::span<const VertexId> goals) {
  int last_move = -1;
  for (std::size_t t = 0; t < plan.actions.size(); ++t)
    if (plan.actions[t].is_move()) last_move = static_cast<int>(t);
  const VertexId rest = plan.final_position();
  if (std::find(goals.begin(), goals.end(), rest) == goals.end()) {
    throw std::invalid_argument("agent never rests on a goal");
  }
  return last_move + 1;
}

inline int makespan_of(std::span<const Plan> plans, std::span<const VertexId> goals) {
  int m = 0;
  for (const auto& p : plans) m = std::max(m, plan_cost(p, goals));
  return m;
}

}  // namespace amapf
