#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "amapf/amapf.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace amapf;
using namespace amapf::testing_util;

namespace {

NodePath walk_path(const std::vector<VertexId>& positions) {
  NodePath p{NetworkNode::grid(positions[0], 0)};
  for (std::size_t t = 1; t < positions.size(); ++t) {
    p.push_back(NetworkNode::grid(positions[t], static_cast<Level>(2 * t - 1)));
    p.push_back(NetworkNode::grid(positions[t], static_cast<Level>(2 * t)));
  }
  return p;
}

std::vector<std::pair<VertexId, std::size_t>> occupancy(const std::vector<Plan>& plans) {
  std::vector<std::pair<VertexId, std::size_t>> out;
  for (const auto& p : plans) {
    auto pos = p.positions();
    for (std::size_t t = 0; t < pos.size(); ++t) out.push_back({pos[t], t});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Plan> raw_plans(const Instance& inst, int T) {
  TENetwork net(inst, T);
  max_flow(net, inst.agent_count(), Engine::kBulk);
  return paths_to_plans(net.extract_flow_paths(), T);
}

}  // namespace

TEST(PathsToPlans, MoveThenWait) {
  NodePath p{NetworkNode::grid(C, 0), NetworkNode::grid(D, 1), NetworkNode::grid(D, 2), NetworkNode::grid(D, 3),
             NetworkNode::grid(D, 4)};
  auto plans = paths_to_plans(std::vector<NodePath>{p}, 2);
  ASSERT_EQ(plans.size(), 1u);
  EXPECT_EQ(plans[0].start, C);
  EXPECT_EQ(plans[0].actions, (std::vector<Action>{Action::move(D), Action::wait()}));
}

TEST(PathsToPlans, AllWait) {
  auto plans = paths_to_plans(std::vector<NodePath>{walk_path({B, B, B, B})}, 3);
  EXPECT_EQ(plans[0].actions, std::vector<Action>(3, Action::wait()));
}

TEST(PathsToPlans, Malformed) {
  NodePath gap{NetworkNode::grid(C, 0), NetworkNode::grid(D, 1), NetworkNode::grid(D, 3)};
  EXPECT_THROW(paths_to_plans(std::vector<NodePath>{gap}, 1), std::invalid_argument);
  NodePath drift{NetworkNode::grid(C, 0), NetworkNode::grid(D, 1), NetworkNode::grid(E, 2)};
  EXPECT_THROW(paths_to_plans(std::vector<NodePath>{drift}, 1), std::invalid_argument);
}

TEST(PathsToPlans, ProjectionProperty) {
  std::mt19937_64 rng(67);
  Graph g = grid_to_graph(random_grid(8, 8, 0.2, 5));
  for (int i = 0; i < 100; ++i) {
    std::vector<VertexId> pos{static_cast<VertexId>(rng() % g.vertex_count())};
    int T = 1 + static_cast<int>(rng() % 12);
    for (int t = 0; t < T; ++t) {
      auto nb = g.neighbors(pos.back());
      std::size_t pick = rng() % (nb.size() + 1);
      pos.push_back(pick == nb.size() ? pos.back() : nb[pick]);
    }
    auto plans = paths_to_plans(std::vector<NodePath>{walk_path(pos)}, T);
    EXPECT_EQ(plans[0].positions(), pos);
  }
}

TEST(ResolveEdgeConflicts, MinimalSwap) {
  std::vector<Plan> plans{{A, {Action::move(B)}}, {B, {Action::move(A)}}};
  auto out = resolve_edge_conflicts(plans);
  EXPECT_EQ(out[0].actions, std::vector<Action>{Action::wait()});
  EXPECT_EQ(out[1].actions, std::vector<Action>{Action::wait()});
  EXPECT_EQ(occupancy(out), occupancy(plans));
}

TEST(ResolveEdgeConflicts, SuffixesExchanged) {
  // A->B->C and B->A->A on the path graph
  std::vector<Plan> plans{{A, {Action::move(B), Action::move(C)}}, {B, {Action::move(A), Action::wait()}}};
  auto out = resolve_edge_conflicts(plans);
  EXPECT_EQ(out[0].positions(), (std::vector<VertexId>{A, A, A}));
  EXPECT_EQ(out[1].positions(), (std::vector<VertexId>{B, B, C}));
  EXPECT_EQ(occupancy(out), occupancy(plans));
}

TEST(ResolveEdgeConflicts, TwoSwapsSameStep) {
  std::vector<Plan> plans{{A, {Action::move(B)}}, {B, {Action::move(A)}}, {C, {Action::move(D)}}, {D, {Action::move(C)}}};
  auto out = resolve_edge_conflicts(plans);
  for (const auto& p : out) EXPECT_EQ(p.actions, std::vector<Action>{Action::wait()});
}

TEST(ResolveEdgeConflicts, IdentityWithoutConflicts) {
  auto inst = six_cell_instance();
  auto plans = raw_plans(inst, 2);
  EXPECT_EQ(resolve_edge_conflicts(plans), plans);
}

// Raw flow plans on crowded instances, before and after swapping.
TEST(ResolveEdgeConflicts, ValidatorSweep) {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 500; ++i) {
    int side = 3 + static_cast<int>(rng() % 4);
    Instance inst = oracle::random_instance(side, side, 0.1, 1 + rng() % (side * side / 2), rng);
    SolveOptions o;
    o.timeout.reset();
    int T = solve_amapf(inst, o).makespan;
    if (T == 0) continue;
    auto before = raw_plans(inst, T);
    auto after = resolve_edge_conflicts(before);
    auto rb = validate(*inst.graph, inst.starts, inst.goals, before, T);
    auto ra = validate(*inst.graph, inst.starts, inst.goals, after, T);
    EXPECT_TRUE(rb.vertex_conflicts.empty());
    EXPECT_TRUE(ra.ok) << ra.first_failure.value_or("");
    EXPECT_EQ(occupancy(after), occupancy(before));
    EXPECT_EQ(makespan_of(after, inst.goals), makespan_of(before, inst.goals));
  }
}

// Random vertex-conflict-free joint walks with forced swaps.
TEST(ResolveEdgeConflicts, SyntheticSwapsPreserveOccupancy) {
  std::mt19937_64 rng(83);
  std::size_t swaps_seen = 0;
  for (int i = 0; i < 300; ++i) {
    Graph g = grid_to_graph(random_grid(5, 5, 0.1, rng()));
    const std::size_t k = 2 + rng() % 8;
    if (static_cast<std::size_t>(g.vertex_count()) < k) continue;
    std::vector<VertexId> cur(g.vertex_count());
    std::iota(cur.begin(), cur.end(), 0);
    std::shuffle(cur.begin(), cur.end(), rng);
    cur.resize(k);
    std::vector<Plan> plans(k);
    for (std::size_t a = 0; a < k; ++a) plans[a].start = cur[a];
    const int T = 1 + static_cast<int>(rng() % 8);
    for (int t = 0; t < T; ++t) {
      std::vector<VertexId> next(k, kNoVertex);
      std::set<VertexId> taken;
      // force swaps between some adjacent pairs
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
          if (next[a] == kNoVertex && next[b] == kNoVertex && g.adjacent(cur[a], cur[b]) && rng() % 2) {
            next[a] = cur[b];
            next[b] = cur[a];
            taken.insert(cur[a]);
            taken.insert(cur[b]);
          }
      // the rest move into a free cell that no one is leaving, else wait
      std::set<VertexId> occupied(cur.begin(), cur.end());
      for (std::size_t a = 0; a < k; ++a) {
        if (next[a] != kNoVertex) continue;
        next[a] = cur[a];
        auto nb = g.neighbors(cur[a]);
        if (nb.empty() || rng() % 3 == 0) continue;
        VertexId x = nb[rng() % nb.size()];
        if (!occupied.count(x) && taken.insert(x).second) next[a] = x;
      }
      for (std::size_t a = 0; a < k; ++a) {
        plans[a].actions.push_back(next[a] == cur[a] ? Action::wait() : Action::move(next[a]));
      }
      cur = next;
    }
    auto goals = cur;
    std::vector<VertexId> starts;
    for (const auto& p : plans) starts.push_back(p.start);
    auto before = validate(g, starts, goals, plans, T);
    ASSERT_TRUE(before.vertex_conflicts.empty());
    swaps_seen += before.edge_conflicts.size();
    auto out = resolve_edge_conflicts(plans);
    auto after = validate(g, starts, goals, out, T);
    EXPECT_TRUE(after.ok) << after.first_failure.value_or("");
    EXPECT_EQ(occupancy(out), occupancy(plans));
  }
  EXPECT_GT(swaps_seen, 100u);
}

TEST(Validate, SixCellSolution) {
  auto inst = six_cell_instance();
  std::vector<Plan> plans{{C, {Action::move(B), Action::move(A)}}, {F, {Action::move(E), Action::move(D)}}};
  EXPECT_TRUE(validate(inst, plans, 2).ok);
}

TEST(Validate, SharedStartConflict) {
  auto g = path_graph(3);
  std::vector<VertexId> starts{A, A}, goals{A, B};
  std::vector<Plan> plans{{A, {Action::wait()}}, {A, {Action::wait()}}};
  auto r = validate(*g, starts, goals, plans, 1);
  EXPECT_FALSE(r.ok);
  ASSERT_FALSE(r.vertex_conflicts.empty());
  EXPECT_EQ(r.vertex_conflicts[0].time, 0);
  EXPECT_THROW(check_instance(Instance{g, starts, goals}), InstanceError);
}

TEST(Validate, OffGoal) {
  auto inst = six_cell_instance();
  std::vector<Plan> plans{{C, {Action::move(B), Action::wait()}}, {F, {Action::move(E), Action::move(D)}}};
  auto r = validate(inst, plans, 2);
  EXPECT_FALSE(r.goal_coverage);
  EXPECT_FALSE(r.ok);
}

TEST(Validate, EdgeConflictAndIllegalMove) {
  auto g = path_graph(3);
  std::vector<VertexId> starts{A, B}, goals{B, A};
  std::vector<Plan> swap{{A, {Action::move(B)}}, {B, {Action::move(A)}}};
  auto r = validate(*g, starts, goals, swap, 1);
  EXPECT_EQ(r.edge_conflicts.size(), 1u);
  std::vector<Plan> jump{{A, {Action::move(C)}}, {B, {Action::wait()}}};
  auto j = validate(*g, starts, std::vector<VertexId>{C, B}, jump, 1);
  EXPECT_EQ(j.illegal_steps.size(), 1u);
  EXPECT_FALSE(j.ok);
}

// Every injected fault in a valid solution is reported.
TEST(Validate, MutationsDetected) {
  std::mt19937_64 rng(73);
  std::size_t mutants = 0;
  for (int i = 0; i < 200; ++i) {
    Instance inst = oracle::random_instance(6, 6, 0.15, 2 + rng() % 6, rng);
    SolveOptions o;
    o.timeout.reset();
    auto sol = solve_amapf(inst, o);
    const int T = sol.makespan;
    if (T == 0) continue;
    ASSERT_TRUE(validate(inst, sol.plans, T).ok);
    const std::size_t k = sol.plans.size();
    for (std::size_t a = 0; a < k; ++a) {
      auto pa = sol.plans[a].positions();
      for (int t = 0; t < T; ++t) {
        // step into another agent's next cell
        for (std::size_t b = 0; b < k; ++b) {
          if (b == a) continue;
          VertexId x = sol.plans[b].positions()[t + 1];
          if (x == pa[t + 1] || !(x == pa[t] || inst.graph->adjacent(pa[t], x))) continue;
          auto m = sol.plans;
          m[a].actions[t] = x == pa[t] ? Action::wait() : Action::move(x);
          auto r = validate(inst, m, T);
          EXPECT_FALSE(r.ok);
          EXPECT_FALSE(r.vertex_conflicts.empty());
          ++mutants;
        }
        // teleport
        VertexId far = static_cast<VertexId>(rng() % inst.graph->vertex_count());
        if (far != pa[t] && !inst.graph->adjacent(pa[t], far)) {
          auto m = sol.plans;
          m[a].actions[t] = Action::move(far);
          EXPECT_FALSE(validate(inst, m, T).ok);
          ++mutants;
        }
      }
      // drop the last move
      auto m = sol.plans;
      for (int t = T - 1; t >= 0; --t)
        if (m[a].actions[t].is_move()) {
          m[a].actions[t] = Action::wait();
          EXPECT_FALSE(validate(inst, m, T).ok);
          ++mutants;
          break;
        }
    }
  }
  EXPECT_GT(mutants, 1000u);
}

TEST(Makespan, TrailingWaitsIgnored) {
  std::vector<VertexId> goals{B};
  EXPECT_EQ(plan_cost(Plan{A, {Action::move(B), Action::wait(), Action::wait()}}, goals), 1);
  EXPECT_EQ(plan_cost(Plan{B, {}}, goals), 0);
  EXPECT_THROW(plan_cost(Plan{A, {Action::wait()}}, goals), std::invalid_argument);
  std::vector<Plan> plans{{A, {Action::move(B), Action::wait()}}, {D, {Action::move(C), Action::move(D)}}};
  std::vector<VertexId> g2{B, D};
  EXPECT_EQ(makespan_of(plans, g2), 2);
}

TEST(Makespan, EqualsJointStateOptimum) {
  std::mt19937_64 rng(79);
  for (int i = 0; i < 40; ++i) {
    Instance inst = oracle::random_instance(4, 3, 0.2, 1 + rng() % 3, rng);
    SolveOptions o;
    o.timeout.reset();
    auto sol = solve_amapf(inst, o);
    EXPECT_EQ(makespan_of(sol.plans, inst.goals), oracle::joint_state_optimum(*inst.graph, inst.starts, inst.goals));
  }
}
