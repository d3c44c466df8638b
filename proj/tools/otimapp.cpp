// otimapp: solve, verify, execute and benchmark time-independent
// multi-agent path plans.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "otimapp/graph.hpp"
#include "otimapp/instance.hpp"
#include "otimapp/mapfdp.hpp"
#include "otimapp/random.hpp"
#include "otimapp/solver.hpp"
#include "otimapp/verify.hpp"

using namespace otimapp;

namespace {

enum Exit : int {
  kOk = 0,
  kFail = 1,
  kTimeout = 2,
  kUnknown = 3,
  kUsage = 64,
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int parse_bound(const std::string& s) {
  if (s == "inf") return kUnbounded;
  try {
    std::size_t used = 0;
    int m = std::stoi(s, &used);
    if (used != s.size() || m < 2) throw UsageError("");
    return m;
  } catch (const std::exception&) {
    throw UsageError("--m expects an integer >= 2 or 'inf', got '" + s + "'");
  }
}

std::string bound_name(int m) { return m == kUnbounded ? "inf" : std::to_string(m); }

TieBreak parse_tie(const std::string& s, std::uint64_t seed) {
  // In the FIG7 fixture the lower-id neighbour is the dotted route.
  if (s == "low-id" || s == "dotted-first") return TieBreak::low_id();
  if (s == "high-id") return TieBreak::high_id();
  if (s == "shuffle") return TieBreak::shuffled(split_seed(seed, 0x7e));
  throw UsageError("--tie-break expects low-id (alias dotted-first), high-id or shuffle");
}

std::string read_or_usage(const std::string& path) {
  try {
    return read_text_file(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

std::shared_ptr<const Graph> load_map(const std::string& path) {
  std::string text = read_or_usage(path);
  try {
    if (text.rfind("otimapp-graph", 0) == 0) return std::make_shared<const Graph>(parse_graph_file(text));
    return std::make_shared<const Graph>(parse_grid_map(text));
  } catch (const std::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

Instance load_instance(const std::string& map, const std::string& scen) {
  auto g = load_map(map);
  std::string text = read_or_usage(scen);
  try {
    Instance ins = parse_scenario(g, text);
    ValidationReport rep = validate(ins, false);
    if (!rep.ok()) throw UsageError(scen + ": " + rep.violations.front());
    return ins;
  } catch (const ParseError& e) {
    throw UsageError(scen + ": " + e.what());
  }
}

Solution load_solution(const std::string& path) {
  std::string text = read_or_usage(path);
  try {
    return parse_solution(text);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

std::vector<AgentId> parse_order(const std::string& s, std::size_t n) {
  std::vector<AgentId> order;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      int a = std::stoi(tok);
      if (a < 1 || static_cast<std::size_t>(a) > n) throw UsageError("");
      order.push_back(a - 1);
    } catch (const std::exception&) {
      throw UsageError("--order expects 1-based agent indices, got '" + tok + "'");
    }
  }
  std::vector<AgentId> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] != static_cast<AgentId>(k) || sorted.size() != n) {
      throw UsageError("--order must list every agent exactly once");
    }
  }
  return order;
}

struct Common {
  std::string map, scen, sol, out;
  std::string m = "inf";
  std::string solver = "pp";
  std::string tie = "low-id";
  std::string order;
  double time_limit = 30.0;
  std::uint64_t seed = 0;
  std::size_t node_limit = 100000;
  bool no_root_penalty = false;
  bool oracle = false;
  std::size_t state_budget = kDefaultStateBudget;
  std::size_t budget = 10'000'000;
  std::optional<double> pbar;
  std::size_t runs = 0;
  std::size_t agents = 0;
  std::size_t instances = 100;
  std::size_t max_steps = 100000;
  // gen sat
  std::string cnf, out_graph;
  int vars = 3, clauses = 2;
};

SolveResult run_solver(const Instance& ins, const Common& c, int m, std::uint64_t seed) {
  TieBreak tie = parse_tie(c.tie, seed);
  if (c.solver == "cp") {
    CPOptions opt;
    opt.m = m;
    opt.time_limit = c.time_limit;
    opt.node_limit = c.node_limit;
    opt.root_penalty = !c.no_root_penalty;
    opt.tie = tie;
    return solve_cp(ins, opt);
  }
  if (!c.order.empty()) {
    auto order = parse_order(c.order, ins.agent_count());
    auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(c.time_limit));
    return solve_pp(ins, order, m, tie, deadline);
  }
  RestartOptions opt;
  opt.m = m;
  opt.seed = seed;
  opt.time_limit = c.time_limit;
  opt.tie = tie;
  return solve_pp_restarts(ins, opt);
}

int cmd_solve(const Common& c) {
  Instance ins = load_instance(c.map, c.scen);
  const int m = parse_bound(c.m);
  SolveResult r = run_solver(ins, c, m, c.seed);
  std::cerr << "status=" << to_string(r.status) << " solver=" << c.solver << " m=" << bound_name(m)
            << " attempts=" << r.attempts << " expansions=" << r.expansions
            << " seconds=" << r.seconds << '\n';
  switch (r.status) {
    case SolveStatus::success:
      write_output(c.out, serialize_solution(r.paths));
      return kOk;
    case SolveStatus::failure:
      return kFail;
    case SolveStatus::timeout:
      return kTimeout;
  }
  return kFail;
}

int cmd_verify(const Common& c) {
  Instance ins = load_instance(c.map, c.scen);
  Solution paths = load_solution(c.sol);
  const int m = parse_bound(c.m);
  auto problems = check_solution(ins, paths);
  if (!problems.empty()) {
    for (const auto& p : problems) std::cout << "invalid " << p << '\n';
    return kFail;
  }
  RelaxedCheck rc = check_relaxed_sufficient(ins, paths, m);
  if (rc.pass) {
    std::cout << "static pass\n";
  } else {
    std::cout << "static fail condition=" << rc.failed_condition << " " << rc.reason << '\n';
  }
  if (!c.oracle) return rc.pass ? kOk : kFail;

  FeasibilityVerdict v = oracle_feasibility(ins, paths, c.state_budget);
  std::cout << format_verdict(v) << '\n';
  if (v.status == Feasibility::infeasible) {
    std::cout << "stuck agents=(";
    for (std::size_t k = 0; k < v.deadlock.agents.size(); ++k) {
      std::cout << (k ? "," : "") << v.deadlock.agents[k] + 1;
    }
    std::cout << ")\n";
    return kFail;
  }
  if (v.status == Feasibility::unknown) return kUnknown;
  if (!rc.pass) std::cout << "warning: static check failed but the solution is feasible\n";
  return kOk;
}

int cmd_exec(const Common& c) {
  Instance ins = load_instance(c.map, c.scen);
  Solution paths = load_solution(c.sol);
  auto problems = check_solution(ins, paths);
  if (!problems.empty()) throw UsageError(c.sol + ": " + problems.front());
  if (c.pbar) {
    DelayProfile d = DelayProfile::uniform(ins.agent_count(), *c.pbar, split_seed(c.seed, 1));
    DPTrace tr = run_otimapp_dp(ins, paths, d, split_seed(c.seed, 2), c.max_steps, true);
    std::ostringstream log;
    for (std::size_t t = 0; t < tr.configs.size(); ++t) {
      log << "t=" << t;
      for (const DPAgentState& s : tr.configs[t]) {
        log << ' ' << s.at;
        if (s.extended()) log << '>' << s.target;
      }
      log << '\n';
    }
    auto soc = sum_of_costs(tr);
    log << "outcome=" << to_string(tr.status) << " timesteps=" << tr.timesteps
        << " sum_of_costs=" << (soc ? std::to_string(*soc) : "") << '\n';
    write_output(c.out, log.str());
    return tr.status == DPStatus::terminated ? kOk : tr.status == DPStatus::stuck ? kFail : kUnknown;
  }
  ExecutionOutcome o = simulate_random(ins, paths, c.seed, c.budget, true);
  write_output(c.out, format_execution_log(o));
  return o.status == ExecStatus::terminated ? kOk : o.status == ExecStatus::stuck ? kFail : kUnknown;
}

std::string fmt_double(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

int cmd_bench(const Common& c) {
  auto g = load_map(c.map);
  const int m = parse_bound(c.m);
  const std::string policy = "otimapp-" + c.solver + bound_name(m);
  std::ostringstream csv;
  csv << "instance,seed,policy,pbar,n,sum_of_costs,timesteps,status\n";
  std::size_t solved = 0, attempted = 0, exec_ok = 0, exec_total = 0;
  double solve_seconds = 0.0;
  double soc_otimapp = 0.0, soc_mcp = 0.0;
  std::size_t soc_otimapp_n = 0, soc_mcp_n = 0;
  const std::size_t count = c.agents == 0 ? 0 : c.instances;
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t inst_seed = split_seed(c.seed, k);
    Instance ins;
    try {
      ins = generate_random(g, c.agents, inst_seed);
    } catch (const std::exception&) {
      csv << k << ',' << inst_seed << ',' << policy << ",," << c.agents << ",,,generation-failure\n";
      continue;
    }
    ++attempted;
    SolveResult r = run_solver(ins, c, m, split_seed(inst_seed, 1));
    solve_seconds += r.seconds;
    std::size_t cost = 0;
    for (const Path& p : r.paths) cost += p.size() - 1;
    if (!c.pbar) {
      csv << k << ',' << inst_seed << ',' << policy << ",," << c.agents << ','
          << (r.ok() ? std::to_string(cost) : "") << ",," << to_string(r.status) << '\n';
    }
    if (!r.ok()) {
      if (c.pbar) {
        csv << k << ',' << inst_seed << ',' << policy << ',' << fmt_double(*c.pbar) << ','
            << c.agents << ",,," << to_string(r.status) << '\n';
      }
      continue;
    }
    ++solved;
    if (!c.pbar) {
      for (std::size_t run = 0; run < c.runs; ++run) {
        ExecutionOutcome o = simulate_random(ins, r.paths, split_seed(inst_seed, 2, run), c.budget, false);
        ++exec_total;
        exec_ok += o.status == ExecStatus::terminated;
        csv << k << ',' << run << ',' << policy << "-exec,," << c.agents << ",," << o.activations
            << ',' << to_string(o.status) << '\n';
      }
      continue;
    }
    auto plan = plan_mapf_prioritized(ins, split_seed(inst_seed, 3));
    for (std::size_t run = 0; run < c.runs; ++run) {
      DelayProfile d = DelayProfile::uniform(ins.agent_count(), *c.pbar, split_seed(inst_seed, 4, run));
      DPTrace a = run_otimapp_dp(ins, r.paths, d, split_seed(inst_seed, 5, run), c.max_steps);
      auto sa = sum_of_costs(a);
      if (sa) {
        soc_otimapp += static_cast<double>(*sa);
        ++soc_otimapp_n;
      }
      csv << k << ',' << run << ',' << policy << ',' << fmt_double(*c.pbar) << ',' << c.agents
          << ',' << (sa ? std::to_string(*sa) : "") << ',' << a.timesteps << ',' << to_string(a.status)
          << '\n';
      if (!plan) {
        csv << k << ',' << run << ",mcp," << fmt_double(*c.pbar) << ',' << c.agents
            << ",,,plan-failure\n";
        continue;
      }
      DPTrace b = run_mcp(ins, *plan, d, split_seed(inst_seed, 5, run), c.max_steps);
      auto sb = sum_of_costs(b);
      if (sb) {
        soc_mcp += static_cast<double>(*sb);
        ++soc_mcp_n;
      }
      csv << k << ',' << run << ",mcp," << fmt_double(*c.pbar) << ',' << c.agents << ','
          << (sb ? std::to_string(*sb) : "") << ',' << b.timesteps << ',' << to_string(b.status) << '\n';
    }
  }
  write_output(c.out, csv.str());
  std::cerr << "solved " << solved << "/" << attempted << " total_solve_seconds=" << solve_seconds;
  if (exec_total) std::cerr << " executions_terminated " << exec_ok << "/" << exec_total;
  if (soc_otimapp_n) std::cerr << " mean_soc_otimapp=" << soc_otimapp / static_cast<double>(soc_otimapp_n);
  if (soc_mcp_n) std::cerr << " mean_soc_mcp=" << soc_mcp / static_cast<double>(soc_mcp_n);
  std::cerr << '\n';
  return kOk;
}

int cmd_gen_random(const Common& c) {
  auto g = load_map(c.map);
  Instance ins;
  try {
    ins = generate_random(g, c.agents, c.seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  write_output(c.out, serialize_scenario(ins, c.map));
  return kOk;
}

int cmd_gen_sat(const Common& c) {
  Formula3SAT f;
  if (!c.cnf.empty()) {
    std::string text = read_or_usage(c.cnf);
    try {
      f = parse_dimacs_3sat(text);
    } catch (const std::exception& e) {
      throw UsageError(c.cnf + ": " + e.what());
    }
  } else {
    try {
      f = random_formula(c.vars, c.clauses, c.seed);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  if (c.out_graph.empty()) throw UsageError("gen sat needs --out-graph");
  SatReduction red = reduce_3sat(f);
  write_output(c.out_graph, serialize_graph_file(red.instance.g()));
  write_output(c.out, serialize_scenario(red.instance, c.out_graph));
  std::cerr << "variables=" << f.variable_count << " clauses=" << f.clauses.size()
            << " vertices=" << red.instance.g().size() << " agents=" << red.instance.agent_count()
            << " satisfiable=" << (satisfiable(f) ? "yes" : "no") << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline time-independent multi-agent path planning toolkit"};
  app.require_subcommand(1);
  Common c;

  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("--map", c.map, "grid map or otimapp-graph file")->required();
    sub->add_option("--scen", c.scen, "otimapp-scen file")->required();
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--solver", c.solver, "pp or cp")->check(CLI::IsMember({"pp", "cp"}));
    sub->add_option("--m", c.m, "cycle bound: integer >= 2 or inf");
    sub->add_option("--time-limit", c.time_limit, "seconds per solve");
    sub->add_option("--tie-break", c.tie, "low-id (alias dotted-first), high-id or shuffle");
    sub->add_option("--node-limit", c.node_limit, "CP expansion cap");
    sub->add_flag("--no-root-penalty", c.no_root_penalty, "CP root uses plain shortest paths");
  };

  auto* solve = app.add_subcommand("solve", "plan a solution");
  add_instance(solve);
  add_solver(solve);
  solve->add_option("--order", c.order, "PP: fixed 1-based order, e.g. 2,1");
  solve->add_option("--seed", c.seed);
  solve->add_option("--out", c.out, "solution file (default stdout)");

  auto* verify = app.add_subcommand("verify", "check a solution");
  add_instance(verify);
  verify->add_option("--sol", c.sol)->required();
  verify->add_option("--m", c.m, "cycle bound for the static check");
  verify->add_flag("--oracle", c.oracle, "run the exhaustive reachability oracle");
  verify->add_option("--state-budget", c.state_budget);

  auto* exec = app.add_subcommand("exec", "execute a solution with random activations");
  add_instance(exec);
  exec->add_option("--sol", c.sol)->required();
  exec->add_option("--seed", c.seed);
  exec->add_option("--budget", c.budget, "activation budget");
  exec->add_option("--pbar", c.pbar, "run the delay model instead");
  exec->add_option("--max-steps", c.max_steps);
  exec->add_option("--out", c.out);

  auto* bench = app.add_subcommand("bench", "seeded benchmark sweep, CSV output");
  bench->add_option("--map", c.map)->required();
  bench->add_option("--n", c.agents, "agents per instance")->required();
  bench->add_option("--instances", c.instances);
  bench->add_option("--runs", c.runs, "executions per solved instance");
  bench->add_option("--pbar", c.pbar, "delay bound; compares with MCP");
  bench->add_option("--seed", c.seed);
  bench->add_option("--budget", c.budget, "activation budget per execution");
  bench->add_option("--max-steps", c.max_steps);
  bench->add_option("--out", c.out);
  add_solver(bench);

  auto* gen = app.add_subcommand("gen", "generate instances");
  gen->require_subcommand(1);
  auto* gen_random = gen->add_subcommand("random", "random starts and goals");
  gen_random->add_option("--map", c.map)->required();
  gen_random->add_option("--n", c.agents)->required();
  gen_random->add_option("--seed", c.seed);
  gen_random->add_option("--out", c.out);
  auto* gen_sat = gen->add_subcommand("sat", "instance reduced from a 3-SAT formula");
  gen_sat->add_option("--cnf", c.cnf, "DIMACS file; random formula when absent");
  gen_sat->add_option("--vars", c.vars);
  gen_sat->add_option("--clauses", c.clauses);
  gen_sat->add_option("--seed", c.seed);
  gen_sat->add_option("--out-graph", c.out_graph);
  gen_sat->add_option("--out", c.out, "scenario file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*solve) return cmd_solve(c);
    if (*verify) return cmd_verify(c);
    if (*exec) return cmd_exec(c);
    if (*bench) return cmd_bench(c);
    if (*gen_random) return cmd_gen_random(c);
    if (*gen_sat) return cmd_gen_sat(c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}
