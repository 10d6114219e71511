#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amapf/assignment.hpp"
#include "amapf/baseline_search.hpp"
#include "amapf/bulk_search.hpp"
#include "amapf/plan.hpp"
#include "amapf/search_common.hpp"
#include "amapf/ten_network.hpp"

namespace amapf {

enum class Engine { kBulk, kBaseline };

inline std::string_view engine_name(Engine e) { return e == Engine::kBulk ? "bulk" : "baseline"; }
inline std::optional<Engine> parse_engine(std::string_view s) {
  if (s == "bulk") return Engine::kBulk;
  if (s == "baseline") return Engine::kBaseline;
  return std::nullopt;
}

struct HorizonStats {
  int horizon = 0;
  std::size_t flow = 0;
  std::uint64_t expansions = 0;
  std::uint64_t generated = 0;
  // Sum over this network's path searches of the connected-sequences present
  // when each search started.
  std::uint64_t sequences = 0;
  double wall_ms = 0.0;
};

struct SolveStats {
  std::uint64_t expansions = 0;
  std::uint64_t generated = 0;
  std::uint64_t sequences_created = 0;  // for the final horizon
  std::uint64_t augmentations = 0;
  std::vector<HorizonStats> per_T;
  int lower_bound = 0;
  double estimator_ms = 0.0;
  double total_ms = 0.0;

  void add(const HorizonStats& h, std::uint64_t augmented) {
    expansions += h.expansions;
    generated += h.generated;
    augmentations += augmented;
    sequences_created = h.sequences;
    per_T.push_back(h);
  }
};

// k|V| + T k (k-1) / 2
inline std::uint64_t sequence_bound(std::size_t k, std::size_t vertices, int horizon) {
  return static_cast<std::uint64_t>(k) * vertices +
         static_cast<std::uint64_t>(horizon) * k * (k == 0 ? 0 : k - 1) / 2;
}

struct MaxFlowResult {
  std::size_t flow = 0;
  std::optional<std::vector<NodePath>> paths;  // set when flow reached the target
  HorizonStats stats;
  std::uint64_t augmentations = 0;
};

// Augment-and-reverse until no path remains or the flow reaches `target`.
// With `check_invariants`, conservation and reversed-move locality are
// verified after every augmentation.
inline MaxFlowResult max_flow(TENetwork& net, std::size_t target, Engine engine, const Deadline& deadline = {},
                              bool check_invariants = false) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  MaxFlowResult result;
  result.stats.horizon = net.horizon();
  SearchCounters counters;
  std::optional<BulkSearch> bulk;
  std::optional<BaselineSearch> baseline;
  if (engine == Engine::kBulk)
    bulk.emplace(net);
  else
    baseline.emplace(net);

  while (net.flow_value() < target) {
    result.stats.sequences += net.sequence_count();
    auto path = bulk ? bulk->find_augmenting_path(counters, deadline)
                     : baseline->find_augmenting_path(counters, deadline);
    if (!path) break;
    net.reverse_path(*path);
    ++result.augmentations;
    if (check_invariants) {
      net.check_conservation();
      net.check_move_locality();
    }
  }
  result.flow = net.flow_value();
  if (result.flow >= target) result.paths = net.extract_flow_paths();
  result.stats.flow = result.flow;
  result.stats.expansions = counters.expansions;
  result.stats.generated = counters.generated;
  result.stats.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return result;
}

struct SolveOptions {
  Engine engine = Engine::kBulk;
  std::optional<std::chrono::duration<double>> timeout = std::chrono::seconds(30);
  bool check_invariants = false;
};

struct Solution {
  std::vector<Plan> plans;            // plans[i] starts at instance.starts[i]
  int makespan = 0;                   // the minimal feasible horizon T
  std::vector<VertexId> assignment;   // goal vertex reached by agent i
  SolveStats stats;
};

// Result of a single fixed-horizon probe.
struct HorizonResult {
  int horizon = 0;
  std::size_t flow = 0;
  bool feasible = false;
  std::vector<Plan> plans;  // set when feasible
  SolveStats stats;
};

namespace detail {

inline Deadline make_deadline(const SolveOptions& o) { return o.timeout ? Deadline(*o.timeout) : Deadline(); }

inline std::vector<Plan> plans_for_instance(const Instance& inst, const std::vector<NodePath>& paths, int horizon) {
  auto plans = resolve_edge_conflicts(paths_to_plans(paths, horizon));
  std::vector<Plan> ordered(inst.starts.size());
  for (auto& p : plans) {
    auto it = std::find(inst.starts.begin(), inst.starts.end(), p.start);
    ordered[static_cast<std::size_t>(it - inst.starts.begin())] = std::move(p);
  }
  return ordered;
}

inline bool all_on_goals(const Instance& inst) {
  std::vector<VertexId> a = inst.starts, b = inst.goals;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline Distance estimate_lower_bound(const Instance& inst, SolveStats& stats) {
  const auto t0 = std::chrono::steady_clock::now();
  const Distance lb = bottleneck_lower_bound(*inst.graph, inst.starts, inst.goals);
  stats.estimator_ms = detail::ms_since(t0);
  stats.lower_bound = lb;
  return lb;
}

// Runs max flow on one network of the given horizon. Throws TimeoutError.
inline HorizonResult solve_at_horizon(const Instance& inst, int horizon, const SolveOptions& options = {}) {
  check_instance(inst);
  const auto t0 = std::chrono::steady_clock::now();
  HorizonResult out;
  out.horizon = horizon;
  estimate_lower_bound(inst, out.stats);
  const Deadline deadline = detail::make_deadline(options);
  TENetwork net(inst, horizon);
  auto mf = max_flow(net, inst.agent_count(), options.engine, deadline, options.check_invariants);
  out.stats.add(mf.stats, mf.augmentations);
  out.flow = mf.flow;
  out.feasible = mf.flow == inst.agent_count();
  if (out.feasible) out.plans = detail::plans_for_instance(inst, *mf.paths, horizon);
  out.stats.total_ms = detail::ms_since(t0);
  return out;
}

// Minimal-makespan AMAPF: start from the bottleneck lower bound (at least 1)
// and grow the horizon by one, rebuilding the network each time, until the
// flow equals the agent count. Throws TimeoutError, InfeasibleError.
inline Solution solve_amapf(const Instance& inst, const SolveOptions& options = {}) {
  check_instance(inst);
  const auto t0 = std::chrono::steady_clock::now();
  Solution sol;
  const Distance lb = estimate_lower_bound(inst, sol.stats);
  const Deadline deadline = detail::make_deadline(options);
  const std::size_t k = inst.agent_count();

  if (detail::all_on_goals(inst)) {
    sol.plans.resize(k);
    for (std::size_t i = 0; i < k; ++i) sol.plans[i].start = inst.starts[i];
    sol.assignment = inst.starts;
    sol.stats.total_ms = detail::ms_since(t0);
    return sol;
  }

  const int cap = std::max<int>(1, static_cast<int>(k) + inst.graph->vertex_count() - 2);
  for (int horizon = std::max<int>(1, lb);; ++horizon) {
    if (horizon > cap) throw InfeasibleError("horizon cap k+|V|-2 exceeded");
    if (deadline.expired()) throw TimeoutError("time limit exceeded");
    TENetwork net(inst, horizon);
    auto mf = max_flow(net, k, options.engine, deadline, options.check_invariants);
    sol.stats.add(mf.stats, mf.augmentations);
    if (mf.flow == k) {
      sol.makespan = horizon;
      sol.plans = detail::plans_for_instance(inst, *mf.paths, horizon);
      for (const auto& p : sol.plans) sol.assignment.push_back(p.final_position());
      break;
    }
  }
  sol.stats.total_ms = detail::ms_since(t0);
  return sol;
}

}  // namespace amapf
