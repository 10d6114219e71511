// amapf: makespan-optimal anonymous MAPF via unit-capacity max flow.
//
// Exit codes: 0 ok, 1 usage, 2 input (missing file, parse/schema error,
// invalid instance or solution), 3 timeout.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "amapf/amapf.hpp"

namespace fs = std::filesystem;
using namespace amapf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitTimeout = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
  out << text;
}

std::string plain_report(const Graph& g, const std::vector<Plan>& plans, int makespan, const SolveStats& s) {
  std::ostringstream out;
  out << "makespan " << makespan << "\n";
  for (std::size_t i = 0; i < plans.size(); ++i) {
    out << "agent " << i << ":";
    for (VertexId v : plans[i].positions()) {
      const Cell c = g.cell_of(v);
      out << " (" << c.x << "," << c.y << ")";
    }
    out << "\n";
  }
  out << "expansions " << s.expansions << "\ngenerated " << s.generated << "\naugmentations " << s.augmentations
      << "\nlower_bound " << s.lower_bound << "\nestimator_ms " << s.estimator_ms << "\ntotal_ms " << s.total_ms
      << "\n";
  return out.str();
}

struct SolveArgs {
  std::string map, scen, out, format = "json", engine = "bulk";
  std::size_t agents = 0;
  double timeout = 30.0;
  int t_override = 0;
  bool check = false;
};

int cmd_solve(const SolveArgs& a) {
  if (a.agents == 0) throw UsageError("--agents must be at least 1");
  auto engine = parse_engine(a.engine);
  if (!engine) throw UsageError("unknown engine '" + a.engine + "'");
  if (a.format != "json" && a.format != "plain") throw UsageError("unknown format '" + a.format + "'");

  const GridMap map = load_map(a.map);
  const auto entries = load_scenario(a.scen);
  auto graph = std::make_shared<const Graph>(grid_to_graph(map));
  const Instance inst = build_instance(graph, entries, a.agents);
  SolveOptions opt;
  opt.engine = *engine;
  opt.timeout = std::chrono::duration<double>(a.timeout);
  opt.check_invariants = a.check;
  const std::string map_name = fs::path(a.map).filename().string();

  std::vector<Plan> plans;
  SolveStats stats;
  int horizon = 0;
  if (a.t_override > 0) {
    HorizonResult r = solve_at_horizon(inst, a.t_override, opt);
    if (!r.feasible) {
      nlohmann::json doc = {{"status", "infeasible"},
                            {"horizon", r.horizon},
                            {"flow", r.flow},
                            {"agents", inst.agent_count()},
                            {"stats", stats_to_json(r.stats)}};
      if (a.format == "json") {
        write_output(a.out, doc.dump(2) + "\n");
      } else {
        std::ostringstream o;
        o << "infeasible at T=" << r.horizon << ": flow " << r.flow << " of " << inst.agent_count() << "\n"
          << "expansions " << r.stats.expansions << "\n";
        write_output(a.out, o.str());
      }
      return kExitOk;
    }
    plans = std::move(r.plans);
    stats = r.stats;
    horizon = r.horizon;
  } else {
    Solution sol = solve_amapf(inst, opt);
    plans = std::move(sol.plans);
    stats = sol.stats;
    horizon = sol.makespan;
  }
  auto report = validate(inst, plans, horizon);
  if (!report.ok) {
    std::cerr << "error: produced solution failed validation: " << report.first_failure.value_or("?") << "\n";
    return kExitInput;
  }
  const int makespan = makespan_of(plans, inst.goals);
  if (a.format == "json") {
    write_output(a.out, solution_to_json(map_name, *graph, plans, makespan, horizon, stats).dump(2) + "\n");
  } else {
    write_output(a.out, plain_report(*graph, plans, makespan, stats));
  }
  return kExitOk;
}

struct ValidateArgs {
  std::string map, scen, solution;
  std::size_t agents = 0;
};

int cmd_validate(const ValidateArgs& a) {
  const GridMap map = load_map(a.map);
  auto graph = std::make_shared<const Graph>(grid_to_graph(map));
  const auto doc = nlohmann::json::parse(read_text_file(a.solution));
  SolutionDocument sol = parse_solution_json(doc, *graph);

  std::vector<VertexId> starts = sol.starts, goals = sol.goals;
  if (!a.scen.empty()) {
    const std::size_t k = a.agents ? a.agents : sol.plans.size();
    Instance inst = build_instance(graph, load_scenario(a.scen), k);
    auto sorted = [](std::vector<VertexId> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    if (sorted(inst.starts) != sorted(sol.starts)) throw SchemaError("solution starts do not match the scenario");
    starts = inst.starts;
    goals = inst.goals;
  }
  auto report = validate(*graph, starts, goals, sol.plans, sol.horizon);
  auto cell = [&](VertexId v) {
    if (v < 0 || v >= graph->vertex_count()) return std::string("(off-map)");
    const Cell c = graph->cell_of(v);
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
  };
  for (const auto& s : report.illegal_steps)
    std::cout << "illegal move: agent " << s.agent << " step " << s.time << " " << cell(s.from) << " -> "
              << cell(s.to) << "\n";
  for (const auto& c : report.vertex_conflicts)
    std::cout << "vertex conflict: agents " << c.agent_a << "," << c.agent_b << " time " << c.time << " at "
              << cell(c.u) << "\n";
  for (const auto& c : report.edge_conflicts)
    std::cout << "edge conflict: agents " << c.agent_a << "," << c.agent_b << " step " << c.time << " on "
              << cell(c.u) << "-" << cell(c.v) << "\n";
  if (!report.goal_coverage) std::cout << "goals not covered at T=" << sol.horizon << "\n";
  if (report.ok) {
    std::cout << "ok: " << sol.plans.size() << " agents, makespan " << makespan_of(sol.plans, goals) << "\n";
    return kExitOk;
  }
  std::cout << "invalid: " << report.first_failure.value_or("?") << "\n";
  return kExitInput;
}

struct BenchArgs {
  std::string maps, scens, schedule = "1,2,4,8,16,32,64,128,256,512,1000", engines = "bulk,baseline", out,
                               pattern;
  double timeout = 30.0;
  unsigned jobs = 1;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<std::size_t> schedule;
  for (const auto& s : split_csv(a.schedule)) schedule.push_back(static_cast<std::size_t>(std::stoul(s)));
  if (schedule.empty()) throw UsageError("empty agent schedule");
  std::sort(schedule.begin(), schedule.end());
  std::vector<Engine> engines;
  for (const auto& e : split_csv(a.engines)) {
    auto parsed = parse_engine(e);
    if (!parsed) throw UsageError("unknown engine '" + e + "'");
    engines.push_back(*parsed);
  }
  if (!fs::is_directory(a.maps) || !fs::is_directory(a.scens)) {
    throw std::ios_base::failure("--maps and --scens must be directories");
  }

  std::vector<fs::path> scen_files;
  for (const auto& entry : fs::directory_iterator(a.scens)) {
    const auto& p = entry.path();
    if (p.extension() == ".scen" && p.filename().string().find(a.pattern) != std::string::npos) {
      scen_files.push_back(p);
    }
  }
  std::sort(scen_files.begin(), scen_files.end());

  struct Task {
    std::shared_ptr<const Graph> graph;
    std::vector<ScenarioEntry> entries;
    std::string map_name, scen_name;
    Engine engine;
  };
  std::vector<Task> tasks;
  std::map<std::string, std::shared_ptr<const Graph>> graphs;
  for (const auto& sf : scen_files) {
    try {
      auto entries = load_scenario(sf.string());
      if (entries.empty()) continue;
      const std::string map_name = entries.front().map_name;
      auto& graph = graphs[map_name];
      if (!graph) graph = std::make_shared<const Graph>(grid_to_graph(load_map((fs::path(a.maps) / map_name).string())));
      for (Engine e : engines) tasks.push_back({graph, entries, map_name, sf.filename().string(), e});
    } catch (const std::exception& e) {
      std::cerr << "warning: skipping " << sf << ": " << e.what() << "\n";
    }
  }

  std::vector<std::vector<BenchRow>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      results[i] = bench_scenario(t.graph, t.entries, schedule, t.engine, std::chrono::duration<double>(a.timeout),
                                  t.map_name, t.scen_name);
      std::lock_guard lock(log_mutex);
      std::cerr << t.scen_name << " [" << engine_name(t.engine) << "]: " << results[i].size() << " runs\n";
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::max(1u, a.jobs); ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::ostringstream csv;
  csv << kBenchCsvHeader << "\n";
  std::vector<BenchRow> all;
  for (const auto& rows : results) {
    for (const auto& r : rows) {
      csv << to_csv(r) << "\n";
      all.push_back(r);
    }
  }
  write_output(a.out, csv.str());

  SuccessTable scheduled;
  for (const auto& t : tasks) {
    std::size_t runnable = 0;
    for (auto k : schedule) runnable += k <= t.entries.size();
    scheduled[{t.map_name, std::string(engine_name(t.engine))}].scheduled += runnable;
  }
  std::cerr << "map,engine,solved,scheduled,success_rate\n";
  for (const auto& [key, rate] : success_rates(all, &scheduled)) {
    std::cerr << key.first << "," << key.second << "," << rate.solved << "," << rate.scheduled << ","
              << 100.0 * rate.rate() << "%\n";
  }
  return kExitOk;
}

struct GenerateArgs {
  int width = 32, height = 32;
  double obstacles = 0.2;
  std::uint64_t seed = 1;
  std::size_t agents = 100;
  std::string map_out, scen_out;
};

int cmd_generate(const GenerateArgs& a) {
  if (a.width < 1 || a.height < 1) throw UsageError("map dimensions must be positive");
  if (a.obstacles < 0.0 || a.obstacles >= 1.0) throw UsageError("--obstacles must be in [0, 1)");
  GridMap map = random_grid(a.width, a.height, a.obstacles, a.seed);
  const std::string name = fs::path(a.map_out).filename().string();
  auto entries = random_scenario(map, a.agents, a.seed + 1, name);
  write_output(a.map_out, write_map(map));
  write_output(a.scen_out, write_scenario(entries));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Makespan-optimal anonymous MAPF solver (unit-capacity max flow with bulk search)"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve one instance");
  s->add_option("--map", solve.map, "MovingAI .map file")->required();
  s->add_option("--scen", solve.scen, "MovingAI .scen file")->required();
  s->add_option("--agents", solve.agents, "Use the first K scenario entries")->required();
  s->add_option("--engine", solve.engine, "bulk | baseline");
  s->add_option("--timeout", solve.timeout, "Seconds (default 30)");
  s->add_option("--t-override", solve.t_override, "Solve a single network of this horizon");
  s->add_option("--out", solve.out, "Output file (default stdout)");
  s->add_option("--format", solve.format, "json | plain");
  s->add_flag("--check", solve.check, "Verify flow invariants after every augmentation");

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "Validate a solution file");
  v->add_option("--map", val.map, "MovingAI .map file")->required();
  v->add_option("--solution", val.solution, "Solution JSON")->required();
  v->add_option("--scen", val.scen, "Scenario to check the instance against");
  v->add_option("--agents", val.agents, "Agent count taken from --scen");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Benchmark sweep over map/scenario directories (CSV)");
  b->add_option("--maps", bench.maps, "Directory with .map files")->required();
  b->add_option("--scens", bench.scens, "Directory with .scen files")->required();
  b->add_option("--agent-schedule", bench.schedule, "Comma-separated agent counts");
  b->add_option("--timeout", bench.timeout, "Seconds per instance (default 30)");
  b->add_option("--engines", bench.engines, "Comma-separated engines");
  b->add_option("--jobs", bench.jobs, "Parallel solves");
  b->add_option("--scen-pattern", bench.pattern, "Only scenario files whose name contains this text");
  b->add_option("--out", bench.out, "CSV output file (default stdout)");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a seeded random map and scenario");
  g->add_option("--width", gen.width);
  g->add_option("--height", gen.height);
  g->add_option("--obstacles", gen.obstacles, "Blocked cell fraction");
  g->add_option("--seed", gen.seed);
  g->add_option("--agents", gen.agents, "Scenario entries");
  g->add_option("--map-out", gen.map_out)->required();
  g->add_option("--scen-out", gen.scen_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (s->parsed()) return cmd_solve(solve);
    if (v->parsed()) return cmd_validate(val);
    if (b->parsed()) return cmd_bench(bench);
    if (g->parsed()) return cmd_generate(gen);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TimeoutError& e) {
    std::cerr << "timeout: " << e.what() << "\n";
    return kExitTimeout;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
