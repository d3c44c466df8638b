#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "otimapp/solver.hpp"
#include "otimapp/verify.hpp"

using namespace otimapp;

namespace {

oracle::Paths plain(const Solution& s) {
  oracle::Paths p;
  for (const auto& q : s) p.emplace_back(q.begin(), q.end());
  return p;
}

struct RandomSolution {
  Instance ins;
  Solution paths;
};

// Random instance with random walks that end at the goals: each path is a
// shortest path with a few random detours glued on.
RandomSolution random_solution_once(std::mt19937_64& rng) {
  const int n = 4 + static_cast<int>(rng() % 6);
  std::vector<Edge> edges;
  for (int a = 1; a < n; ++a) edges.push_back({static_cast<Vertex>(rng() % a), a});
  for (int k = 0; k < n / 2; ++k) {
    int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
    if (a != b) edges.push_back({a, b});
  }
  auto g = std::make_shared<const Graph>(n, edges, false);
  const std::size_t agents = 2 + rng() % 2;
  Instance ins = generate_random(g, agents, rng());
  Solution paths;
  for (std::size_t i = 0; i < ins.agent_count(); ++i) {
    Path p{ins.starts[i]};
    const int detour = static_cast<int>(rng() % 3);
    for (int k = 0; k < detour; ++k) {
      auto nb = g->neighbors(p.back());
      p.push_back(nb[rng() % nb.size()]);
    }
    auto rest = shortest_path(*g, p.back(), ins.goals[i], {});
    p.insert(p.end(), rest->begin() + 1, rest->end());
    paths.push_back(p);
  }
  return {std::move(ins), std::move(paths)};
}

RandomSolution random_solution(std::mt19937_64& rng) {
  while (true) {
    try {
      return random_solution_once(rng);
    } catch (const std::runtime_error&) {
      // No valid placement on this graph; draw another.
    }
  }
}

}  // namespace

TEST(Activate, MovesOnlyIntoVacantVertices) {
  const Solution s = fixtures::fig1_dotted();
  Clocks c{0, 0};
  c = activate(c, 0, s);
  EXPECT_EQ(c, (Clocks{1, 0}));
  c = activate(c, 0, s);
  EXPECT_EQ(c, (Clocks{2, 0}));
  // a1 wants v4, held by a2; a2 wants v3, held by a1.
  EXPECT_EQ(activate(c, 0, s), c);
  EXPECT_EQ(activate(c, 1, s), c);
  // A finished agent stays put.
  Clocks f{4, 2};
  EXPECT_TRUE(all_finished(s, f));
  EXPECT_EQ(activate(f, 1, s), f);
}

TEST(StuckSet, CyclicOnFig1Dotted) {
  auto rep = stuck_set({2, 0}, fixtures::fig1_dotted());
  EXPECT_EQ(rep.kind, DeadlockKind::cyclic);
  EXPECT_EQ(rep.agents, (std::vector<AgentId>{0, 1}));
  EXPECT_EQ(rep.cycle.size(), 2u);
  EXPECT_TRUE(stuck_set({1, 0}, fixtures::fig1_dotted()).empty());
}

TEST(StuckSet, TerminalOnFig5) {
  Solution s{{0, 1, 3}, {2, 1}};
  auto rep = stuck_set({0, 1}, s);
  EXPECT_EQ(rep.kind, DeadlockKind::terminal);
  EXPECT_EQ(rep.agents, (std::vector<AgentId>{0}));
  EXPECT_EQ(rep.blocker, 1);
}

TEST(StuckSet, ChainBehindCycleIsStuck) {
  // a3 waits behind a1, which sits on a head-on pair with a2.
  Solution s{{1, 2}, {2, 1}, {0, 1}};
  auto rep = stuck_set({0, 0, 0}, s);
  EXPECT_EQ(rep.kind, DeadlockKind::cyclic);
  EXPECT_EQ(rep.agents, (std::vector<AgentId>{0, 1, 2}));
}

TEST(Oracle, Fig1SolidFeasibleDottedNot) {
  const auto ins = fixtures::fig1();
  EXPECT_EQ(format_verdict(oracle_feasibility(ins, fixtures::fig1_solid())), "feasible");
  auto v = oracle_feasibility(ins, fixtures::fig1_dotted());
  EXPECT_EQ(v.status, Feasibility::infeasible);
  EXPECT_EQ(format_verdict(v), "infeasible kind=cyclic witness=(1,1)");
  EXPECT_EQ(v.config, (Clocks{2, 0}));
  EXPECT_EQ(v.deadlock.agents, (std::vector<AgentId>{0, 1}));
}

TEST(Oracle, Fig2Examples) {
  EXPECT_TRUE(oracle_feasibility(fixtures::fig2a(), fixtures::fig2a_solution()).feasible());
  EXPECT_TRUE(oracle_feasibility(fixtures::fig2b(), fixtures::fig2b_solution()).feasible());
  EXPECT_TRUE(oracle::feasible(plain(fixtures::fig2a_solution())));
  EXPECT_TRUE(oracle::feasible(plain(fixtures::fig2b_solution())));
}

TEST(Oracle, Fig5Terminal) {
  auto v = oracle_feasibility(fixtures::fig5(), {{0, 1, 3}, {2, 1}});
  EXPECT_EQ(format_verdict(v), "infeasible kind=terminal witness=(2)");
}

TEST(Oracle, Fig11Infeasible) {
  auto v = oracle_feasibility(fixtures::fig11(), fixtures::fig11_solution());
  EXPECT_EQ(v.status, Feasibility::infeasible);
  EXPECT_EQ(v.deadlock.kind, DeadlockKind::cyclic);
  EXPECT_FALSE(oracle::feasible(plain(fixtures::fig11_solution())));
}

TEST(Oracle, BudgetGivesUnknown) {
  auto v = oracle_feasibility(fixtures::fig1(), fixtures::fig1_solid(), 3);
  EXPECT_EQ(v.status, Feasibility::unknown);
  EXPECT_EQ(format_verdict(v), "unknown budget-exhausted");
  EXPECT_EQ(oracle_feasibility(fixtures::fig1(), fixtures::fig1_solid(), 0).status,
            Feasibility::unknown);
}

TEST(Relaxed, Conditions) {
  auto a = check_relaxed_sufficient(fixtures::fig2a(), fixtures::fig2a_solution());
  EXPECT_FALSE(a.pass);
  EXPECT_EQ(a.failed_condition, 1);
  auto b = check_relaxed_sufficient(fixtures::fig2b(), fixtures::fig2b_solution());
  EXPECT_FALSE(b.pass);
  EXPECT_EQ(b.failed_condition, 2);
  ASSERT_TRUE(b.witness);
  EXPECT_EQ(b.witness->agent_count(), 3u);
  // With m = 2 the three-agent cycle is outside the bound.
  EXPECT_TRUE(check_relaxed_sufficient(fixtures::fig2b(), fixtures::fig2b_solution(), 2).pass);
  EXPECT_TRUE(check_relaxed_sufficient(fixtures::fig1(), fixtures::fig1_solid()).pass);
  EXPECT_EQ(check_relaxed_sufficient(fixtures::fig1(), fixtures::fig1_dotted()).failed_condition, 2);
}

TEST(Relaxed, SufficientNotNecessaryOnRandomSolutions) {
  std::mt19937_64 rng(41);
  int pass = 0, feasible_but_fail = 0;
  for (int trial = 0; trial < 500; ++trial) {
    auto [ins, paths] = random_solution(rng);
    const bool ref = oracle::feasible(plain(paths));
    auto v = oracle_feasibility(ins, paths);
    ASSERT_NE(v.status, Feasibility::unknown);
    ASSERT_EQ(v.feasible(), ref) << "trial " << trial;
    if (!v.feasible()) {
      // The witness sequence replays to the reported configuration.
      Clocks c(paths.size(), 0);
      for (AgentId a : v.sequence) {
        Clocks d = activate(c, a, paths);
        EXPECT_NE(d, c);
        c = d;
      }
      EXPECT_EQ(c, v.config);
      EXPECT_FALSE(stuck_set(c, paths).empty());
    }
    auto r = check_relaxed_sufficient(ins, paths);
    if (r.pass) {
      ++pass;
      EXPECT_TRUE(ref) << "trial " << trial;
    } else if (ref) {
      ++feasible_but_fail;
    }
  }
  EXPECT_GT(pass, 20);
  EXPECT_GT(feasible_but_fail, 0);
}

TEST(OptimalActivations, Fixtures) {
  EXPECT_EQ(optimal_activation_count(fixtures::fig1(), fixtures::fig1_solid()), 7u);
  EXPECT_EQ(optimal_activation_count(fixtures::fig1(), fixtures::fig1_dotted()), 6u);
  EXPECT_EQ(oracle::min_activations(plain(fixtures::fig1_dotted())), 6);
  auto one = fixtures::make(4, {{0, 1}, {1, 2}, {2, 3}}, false, {0}, {3});
  EXPECT_EQ(optimal_activation_count(one, {{0, 1, 2, 3}}), 3u);
  // a1 may pass v2 before a2 settles there.
  EXPECT_EQ(optimal_activation_count(fixtures::fig5(), {{0, 1, 3}, {2, 1}}), 3u);
  auto pair = fixtures::make(4, {{0, 1}, {1, 2}, {2, 3}}, false, {1, 2}, {3, 0});
  EXPECT_FALSE(optimal_activation_count(pair, {{1, 2, 3}, {2, 1, 0}}).has_value());
  EXPECT_THROW(optimal_activation_count(fixtures::fig1(), fixtures::fig1_solid(), 1),
               std::runtime_error);
}

TEST(OptimalActivations, MatchesBreadthFirstReference) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    auto [ins, paths] = random_solution(rng);
    auto ref = oracle::min_activations(plain(paths));
    auto got = optimal_activation_count(ins, paths);
    ASSERT_EQ(got.has_value(), ref.has_value());
    if (got) { EXPECT_EQ(static_cast<int>(*got), *ref); }
  }
}

TEST(Simulate, ZeroBudget) {
  auto out = simulate_random(fixtures::fig1(), fixtures::fig1_solid(), 1, 0);
  EXPECT_EQ(out.status, ExecStatus::budget);
  EXPECT_EQ(out.activations, 0u);
  EXPECT_EQ(out.final_config, (Clocks{0, 0}));
}

TEST(Simulate, AlreadyFinished) {
  auto ins = fixtures::make(2, {{0, 1}}, false, {0}, {0});
  auto out = simulate_random(ins, {{0}}, 1, 0);
  EXPECT_EQ(out.status, ExecStatus::terminated);
}

TEST(Simulate, DeterministicPerSeed) {
  const auto ins = fixtures::fig11();
  const auto sol = fixtures::fig11_solution();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto a = simulate_random(ins, sol, seed, 10000);
    auto b = simulate_random(ins, sol, seed, 10000);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.activations, b.activations);
    EXPECT_EQ(format_execution_log(a), format_execution_log(b));
  }
}

TEST(Simulate, FeasibleSolutionsAlwaysTerminate) {
  const auto ins = fixtures::fig1();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto out = simulate_random(ins, fixtures::fig1_solid(), seed, 100000, false);
    EXPECT_EQ(out.status, ExecStatus::terminated);
    EXPECT_EQ(out.final_config, (Clocks{4, 3}));
  }
}

TEST(Simulate, DottedSometimesDeadlocks) {
  int stuck = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto out = simulate_random(fixtures::fig1(), fixtures::fig1_dotted(), seed, 100000, false);
    ASSERT_NE(out.status, ExecStatus::budget);
    if (out.status == ExecStatus::stuck) {
      ++stuck;
      EXPECT_EQ(out.stuck.kind, DeadlockKind::cyclic);
    }
  }
  EXPECT_GT(stuck, 0);
  EXPECT_LT(stuck, 200);
}

TEST(Simulate, TraceInvariants) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    auto [ins, paths] = random_solution(rng);
    auto out = simulate_random(ins, paths, rng(), 5000);
    ASSERT_EQ(out.trace.size(), out.activations);
    Clocks c(paths.size(), 0);
    for (const auto& r : out.trace) {
      Clocks d = activate(c, r.agent, paths);
      EXPECT_EQ(r.moved, d != c);
      // Clocks never decrease and move by at most one.
      for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_GE(d[i], c[i]);
        EXPECT_LE(d[i], c[i] + 1);
      }
      c = d;
      EXPECT_EQ(r.vertex, paths[r.agent][c[r.agent]]);
      std::set<Vertex> at;
      for (std::size_t i = 0; i < c.size(); ++i) at.insert(paths[i][c[i]]);
      EXPECT_EQ(at.size(), c.size());
    }
    EXPECT_EQ(c, out.final_config);
    if (out.status == ExecStatus::terminated) { EXPECT_TRUE(all_finished(paths, c)); }
    if (out.status == ExecStatus::stuck) { EXPECT_FALSE(oracle::feasible(plain(paths))); }
  }
}

TEST(Simulate, LogFormat) {
  auto ins = fixtures::make(3, {{0, 1}, {1, 2}}, false, {0}, {2});
  auto out = simulate_random(ins, {{0, 1, 2}}, 3, 100);
  EXPECT_EQ(format_execution_log(out),
            "step=0 agent=0 moved=true vertex=1\n"
            "step=1 agent=0 moved=true vertex=2\n"
            "outcome=terminated activations=2\n");
}

TEST(Solvers, OutputsAreFeasible) {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    auto [ins, ignored] = random_solution(rng);
    auto r = solve_cp(ins);
    if (!r.ok()) continue;
    EXPECT_TRUE(check_relaxed_sufficient(ins, r.paths).pass);
    EXPECT_TRUE(oracle_feasibility(ins, r.paths).feasible());
  }
}
