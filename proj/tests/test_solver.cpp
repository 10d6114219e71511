#include <gtest/gtest.h>

#include <random>
#include <set>

#include "amapf/amapf.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace amapf;
using namespace amapf::testing_util;

namespace {

SolveOptions checked(Engine e = Engine::kBulk) {
  SolveOptions o;
  o.engine = e;
  o.timeout.reset();
  o.check_invariants = true;
  return o;
}

std::size_t flow_at(const Instance& inst, int T, Engine e) {
  TENetwork net(inst, T);
  return max_flow(net, inst.agent_count(), e).flow;
}

}  // namespace

TEST(MaxFlow, SixCellTwoAugmentations) {
  for (Engine e : {Engine::kBulk, Engine::kBaseline}) {
    auto inst = six_cell_instance();
    TENetwork net(inst, 2);
    auto r = max_flow(net, 2, e, {}, true);
    EXPECT_EQ(r.flow, 2u);
    EXPECT_EQ(r.augmentations, 2u);
    ASSERT_TRUE(r.paths);
    EXPECT_EQ(r.paths->size(), 2u);
  }
}

TEST(MaxFlow, BelowLowerBound) {
  auto inst = six_cell_instance();
  EXPECT_LT(flow_at(inst, 1, Engine::kBulk), 2u);
  EXPECT_LT(flow_at(inst, 1, Engine::kBaseline), 2u);
}

TEST(MaxFlow, NoAgents) {
  Instance inst{path_graph(3), {}, {}};
  TENetwork net(inst, 1);
  auto r = max_flow(net, 0, Engine::kBulk);
  EXPECT_EQ(r.flow, 0u);
  ASSERT_TRUE(r.paths);
  EXPECT_TRUE(r.paths->empty());
}

TEST(Solve, SixCellExample) {
  for (Engine e : {Engine::kBulk, Engine::kBaseline}) {
    auto inst = six_cell_instance();
    auto sol = solve_amapf(inst, checked(e));
    EXPECT_EQ(sol.makespan, 2);
    ASSERT_EQ(sol.plans.size(), 2u);
    EXPECT_EQ(sol.plans[0].positions(), (std::vector<VertexId>{C, B, A}));
    EXPECT_EQ(sol.plans[1].positions(), (std::vector<VertexId>{F, E, D}));
    EXPECT_EQ(sol.assignment, (std::vector<VertexId>{A, D}));
    EXPECT_TRUE(validate(inst, sol.plans, sol.makespan).ok);
  }
}

TEST(Solve, AlreadyOnGoal) {
  Instance inst{path_graph(4), {B}, {B}};
  auto sol = solve_amapf(inst, checked());
  EXPECT_EQ(sol.makespan, 0);
  ASSERT_EQ(sol.plans.size(), 1u);
  EXPECT_TRUE(sol.plans[0].actions.empty());
  EXPECT_TRUE(sol.stats.per_T.empty());
  // anonymous: a permuted goal set also counts
  Instance swapped{path_graph(4), {A, D}, {D, A}};
  EXPECT_EQ(solve_amapf(swapped, checked()).makespan, 0);
}

TEST(Solve, RejectsInvalidInstance) {
  Instance dup{path_graph(4), {A, A}, {C, D}};
  EXPECT_THROW(solve_amapf(dup, checked()), InstanceError);
}

TEST(Solve, MatchesJointStateOracle) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 50; ++i) {
    std::size_t k = 1 + rng() % 3;
    Instance inst = oracle::random_instance(3, 3, 0.2, k, rng);
    auto sol = solve_amapf(inst, checked());
    EXPECT_EQ(sol.makespan, oracle::joint_state_optimum(*inst.graph, inst.starts, inst.goals)) << i;
    EXPECT_EQ(makespan_of(sol.plans, inst.goals), sol.makespan);
  }
}

TEST(Solve, OptimalMonotoneAndBounded) {
  std::mt19937_64 rng(59);
  for (int i = 0; i < 60; ++i) {
    Instance inst = oracle::random_instance(8, 8, 0.25, 1 + rng() % 8, rng);
    auto sol = solve_amapf(inst, checked());
    EXPECT_GE(sol.makespan, sol.stats.lower_bound);
    if (sol.makespan >= 2) EXPECT_LT(flow_at(inst, sol.makespan - 1, Engine::kBulk), inst.agent_count());
    std::size_t prev = 0;
    for (const auto& h : sol.stats.per_T) {
      EXPECT_GE(h.flow, prev);
      prev = h.flow;
    }
    for (int T = 1; T <= sol.makespan + 2; ++T) {
      std::size_t f = flow_at(inst, T, Engine::kBulk);
      EXPECT_GE(f, prev * (T > sol.makespan ? 1 : 0));
      if (T > 1) EXPECT_GE(f, flow_at(inst, T - 1, Engine::kBulk));
    }
    auto base = solve_amapf(inst, checked(Engine::kBaseline));
    EXPECT_EQ(base.makespan, sol.makespan);
  }
}

TEST(Solve, HorizonProbe) {
  auto inst = six_cell_instance();
  auto low = solve_at_horizon(inst, 1, checked());
  EXPECT_FALSE(low.feasible);
  EXPECT_EQ(low.flow, 1u);
  auto ok = solve_at_horizon(inst, 3, checked());
  EXPECT_TRUE(ok.feasible);
  EXPECT_TRUE(validate(inst, ok.plans, 3).ok);
  EXPECT_EQ(makespan_of(ok.plans, inst.goals), 2);
}

TEST(Solve, Timeout) {
  Instance inst = [] {
    std::mt19937_64 rng(61);
    return oracle::random_instance(64, 64, 0.2, 200, rng);
  }();
  SolveOptions o;
  o.engine = Engine::kBaseline;
  o.timeout = std::chrono::milliseconds(1);
  EXPECT_THROW(solve_amapf(inst, o), TimeoutError);
}

TEST(Solve, SequenceBoundFormula) {
  EXPECT_EQ(sequence_bound(2, 6, 2), 14u);
  EXPECT_EQ(sequence_bound(1, 10, 5), 10u);
  EXPECT_EQ(sequence_bound(0, 10, 5), 0u);
}
