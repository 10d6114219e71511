#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "amapf/flow_solver.hpp"
#include "amapf/instance.hpp"

namespace amapf {

enum class RunStatus { kSolved, kTimeout, kError };

inline const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::kSolved: return "solved";
    case RunStatus::kTimeout: return "timeout";
    case RunStatus::kError: return "error";
  }
  return "error";
}

struct BenchRow {
  std::string map;
  std::string scenario;
  std::size_t agents = 0;
  Engine engine = Engine::kBulk;
  int makespan = -1;
  std::size_t t_probes = 0;
  std::uint64_t expansions = 0;
  std::uint64_t generated = 0;
  std::uint64_t augmentations = 0;
  double estimator_ms = 0.0;
  double solve_ms = 0.0;
  RunStatus status = RunStatus::kError;
  int lower_bound = 0;  // not a CSV column
};

inline constexpr const char* kBenchCsvHeader =
    "map,scenario,agents,engine,makespan,t_probes,expansions,generated,augmentations,estimator_ms,solve_ms,status";

inline std::string to_csv(const BenchRow& r) {
  std::ostringstream out;
  out << r.map << ',' << r.scenario << ',' << r.agents << ',' << engine_name(r.engine) << ',' << r.makespan << ','
      << r.t_probes << ',' << r.expansions << ',' << r.generated << ',' << r.augmentations << ','
      << r.estimator_ms << ',' << r.solve_ms << ',' << status_name(r.status);
  return out.str();
}

// One solve of the first `agents` entries; never throws for solver failures.
inline BenchRow bench_one(const std::shared_ptr<const Graph>& graph, const std::vector<ScenarioEntry>& entries,
                          std::size_t agents, Engine engine, std::chrono::duration<double> timeout,
                          const std::string& map_name, const std::string& scen_name) {
  BenchRow row;
  row.map = map_name;
  row.scenario = scen_name;
  row.agents = agents;
  row.engine = engine;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Instance inst = build_instance(graph, entries, agents);
    SolveOptions opt;
    opt.engine = engine;
    opt.timeout = timeout;
    Solution sol = solve_amapf(inst, opt);
    row.makespan = sol.makespan;
    row.t_probes = sol.stats.per_T.size();
    row.expansions = sol.stats.expansions;
    row.generated = sol.stats.generated;
    row.augmentations = sol.stats.augmentations;
    row.estimator_ms = sol.stats.estimator_ms;
    row.solve_ms = sol.stats.total_ms - sol.stats.estimator_ms;
    row.lower_bound = sol.stats.lower_bound;
    row.status = RunStatus::kSolved;
  } catch (const TimeoutError&) {
    row.status = RunStatus::kTimeout;
    row.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  } catch (const std::exception&) {
    row.status = RunStatus::kError;
  }
  return row;
}

// Runs the agent schedule in ascending order and stops at the first run that
// does not solve (timeout or error), mirroring the usual scenario protocol.
inline std::vector<BenchRow> bench_scenario(const std::shared_ptr<const Graph>& graph,
                                            const std::vector<ScenarioEntry>& entries, std::vector<std::size_t> schedule,
                                            Engine engine, std::chrono::duration<double> timeout,
                                            const std::string& map_name, const std::string& scen_name) {
  std::sort(schedule.begin(), schedule.end());
  std::vector<BenchRow> rows;
  for (std::size_t k : schedule) {
    if (k > entries.size()) break;
    rows.push_back(bench_one(graph, entries, k, engine, timeout, map_name, scen_name));
    if (rows.back().status != RunStatus::kSolved) break;
  }
  return rows;
}

struct SuccessRate {
  std::size_t solved = 0;
  std::size_t scheduled = 0;
  double rate() const { return scheduled == 0 ? 0.0 : static_cast<double>(solved) / static_cast<double>(scheduled); }
};

using SuccessTable = std::map<std::pair<std::string, std::string>, SuccessRate>;

// Per (map, engine): solved runs over scheduled runs. `scheduled` gives the
// number of runs each (map, engine) would have made without early stops;
// runs skipped after a failure count as unsolved. Without it, only emitted
// rows are counted.
inline SuccessTable success_rates(const std::vector<BenchRow>& rows, const SuccessTable* scheduled = nullptr) {
  SuccessTable out;
  if (scheduled) {
    for (const auto& [key, s] : *scheduled) out[key].scheduled = s.scheduled;
  }
  for (const auto& r : rows) {
    auto& s = out[{r.map, std::string(engine_name(r.engine))}];
    if (!scheduled) ++s.scheduled;
    if (r.status == RunStatus::kSolved) ++s.solved;
  }
  return out;
}

}  // namespace amapf
