#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "otimapp/mapfdp.hpp"
#include "otimapp/solver.hpp"

using namespace otimapp;

namespace {

std::shared_ptr<const Graph> open_grid(int h, int w) {
  std::string s = "type octile\nheight " + std::to_string(h) + "\nwidth " + std::to_string(w) + "\nmap\n";
  for (int r = 0; r < h; ++r) s += std::string(w, '.') + "\n";
  return std::make_shared<const Graph>(parse_grid_map(s));
}

Instance corridor(int len) {
  std::vector<Edge> e;
  for (int k = 0; k + 1 < len; ++k) e.push_back({k, k + 1});
  return fixtures::make(len, e, false, {0}, {static_cast<Vertex>(len - 1)});
}

}  // namespace

TEST(Delays, Profiles) {
  auto c = DelayProfile::constant(3, 0.25);
  EXPECT_EQ(c.p, (std::vector<double>{0.25, 0.25, 0.25}));
  auto u = DelayProfile::uniform(100, 0.5, 7);
  for (double p : u.p) {
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 0.5);
  }
  EXPECT_EQ(u.p, DelayProfile::uniform(100, 0.5, 7).p);
  EXPECT_EQ(DelayProfile::uniform(4, 0.0, 1).p, std::vector<double>(4, 0.0));
  EXPECT_THROW(DelayProfile::uniform(2, 1.5, 0), std::invalid_argument);
}

TEST(DP, SingleAgentWithoutDelayTakesPathLength) {
  for (int len = 1; len <= 8; ++len) {
    auto ins = corridor(len);
    Path p(len);
    for (int k = 0; k < len; ++k) p[k] = k;
    auto tr = run_otimapp_dp(ins, {p}, DelayProfile::constant(1, 0.0), 1, 1000);
    EXPECT_EQ(tr.status, DPStatus::terminated);
    EXPECT_EQ(tr.timesteps, static_cast<std::size_t>(len - 1));
    EXPECT_EQ(sum_of_costs(tr), static_cast<std::size_t>(len - 1));
  }
}

TEST(DP, AgentsAtGoalsCostNothing) {
  auto ins = fixtures::make(3, {{0, 1}, {1, 2}}, false, {0, 2}, {0, 2});
  auto tr = run_otimapp_dp(ins, {{0}, {2}}, DelayProfile::constant(2, 0.5), 1, 10);
  EXPECT_EQ(tr.status, DPStatus::terminated);
  EXPECT_EQ(tr.timesteps, 0u);
  EXPECT_EQ(sum_of_costs(tr), 0u);
}

TEST(DP, CertainDelayExhaustsBudget) {
  auto ins = corridor(3);
  auto tr = run_otimapp_dp(ins, {{0, 1, 2}}, DelayProfile::constant(1, 1.0), 1, 50);
  EXPECT_EQ(tr.status, DPStatus::budget);
  EXPECT_EQ(tr.timesteps, 50u);
  EXPECT_FALSE(sum_of_costs(tr).has_value());
}

TEST(DP, DeadlockIsReportedStuck) {
  // Head-on pair: both sit still with nothing extended.
  auto ins = fixtures::make(4, {{0, 1}, {1, 2}, {2, 3}}, false, {1, 2}, {3, 0});
  auto tr = run_otimapp_dp(ins, {{1, 2, 3}, {2, 1, 0}}, DelayProfile::constant(2, 0.0), 1, 100);
  EXPECT_EQ(tr.status, DPStatus::stuck);
  EXPECT_EQ(tr.timesteps, 0u);
}

TEST(DP, Deterministic) {
  const auto ins = fixtures::fig1();
  auto d = DelayProfile::uniform(2, 0.5, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto a = run_otimapp_dp(ins, fixtures::fig1_solid(), d, seed, 1000);
    auto b = run_otimapp_dp(ins, fixtures::fig1_solid(), d, seed, 1000);
    EXPECT_EQ(a.timesteps, b.timesteps);
    EXPECT_EQ(a.arrival, b.arrival);
  }
}

TEST(DP, FootprintsNeverOverlap) {
  auto g = open_grid(5, 5);
  std::mt19937_64 rng(51);
  int runs = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Instance ins = generate_random(g, 6, rng());
    auto sol = solve_cp(ins);
    if (!sol.ok()) continue;
    auto d = DelayProfile::uniform(ins.agent_count(), 0.5, rng());
    auto tr = run_otimapp_dp(ins, sol.paths, d, rng(), 10000, true);
    ++runs;
    EXPECT_EQ(tr.status, DPStatus::terminated);
    ASSERT_EQ(tr.configs.size(), tr.timesteps + 1);
    for (std::size_t t = 0; t < tr.configs.size(); ++t) {
      const auto& cfg = tr.configs[t];
      std::multiset<Vertex> fp;
      for (const auto& s : cfg) {
        fp.insert(s.at);
        if (s.extended()) fp.insert(s.target);
      }
      std::set<Vertex> uniq(fp.begin(), fp.end());
      EXPECT_EQ(uniq.size(), fp.size()) << "t=" << t;
      // After the extension phase no contracted agent could still extend.
      for (std::size_t i = 0; i < cfg.size(); ++i) {
        if (cfg[i].extended()) continue;
        const Path& p = sol.paths[i];
        auto pos = std::find(p.begin(), p.end(), cfg[i].at);
        if (cfg[i].at == p.back()) continue;
        ASSERT_NE(pos, p.end());
        EXPECT_TRUE(uniq.count(*(pos + 1))) << "agent " << i << " could extend at t=" << t;
      }
      // Consecutive snapshots differ only by legal steps along the path.
      if (t > 0) {
        for (std::size_t i = 0; i < cfg.size(); ++i) {
          const Vertex before = tr.configs[t - 1][i].at, after = cfg[i].at;
          if (before != after) { EXPECT_EQ(tr.configs[t - 1][i].target, after); }
        }
      }
    }
  }
  EXPECT_GT(runs, 20);
}

TEST(DP, MoreDelayNeverFaster) {
  // Single agent: the cost is a sum of geometric waits, so the mean grows
  // with p. Compare means over many seeds.
  auto ins = corridor(10);
  Path p{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  double prev = 0.0;
  for (double q : {0.0, 0.2, 0.4, 0.6}) {
    double total = 0.0;
    for (std::uint64_t s = 0; s < 400; ++s) {
      total += static_cast<double>(run_otimapp_dp(ins, {p}, DelayProfile::constant(1, q), s, 100000).timesteps);
    }
    const double mean = total / 400.0;
    EXPECT_GE(mean, prev);
    // Expected value 9 / (1 - q).
    EXPECT_NEAR(mean, 9.0 / (1.0 - q), 0.1 * 9.0 / (1.0 - q));
    prev = mean;
  }
}

TEST(DP, RejectsProfileOfWrongSize) {
  EXPECT_THROW(run_otimapp_dp(corridor(2), {{0, 1}}, DelayProfile::constant(2, 0.0), 0, 5),
               std::invalid_argument);
}

TEST(MapfPlanner, SingleAgentIsShortest) {
  auto ins = corridor(6);
  auto plan = plan_mapf_prioritized(ins, 1);
  ASSERT_TRUE(plan);
  EXPECT_EQ(plan->positions[0], (Path{0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(plan->makespan(), 5u);
  EXPECT_EQ(plan->at(0, 99), 5);
}

TEST(MapfPlanner, PlansAreCollisionFree) {
  auto g = open_grid(6, 6);
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    Instance ins = generate_random(g, 8, rng());
    auto plan = plan_mapf_prioritized(ins, rng());
    ASSERT_TRUE(plan) << trial;
    EXPECT_TRUE(check_timed_plan(ins, *plan).empty()) << trial;
  }
}

TEST(MapfPlanner, Fig5NeedsWaiting) {
  // a2 must wait for a1 to pass through v2 before settling there.
  const auto ins = fixtures::fig5();
  auto plan = plan_mapf_prioritized(ins, 3);
  ASSERT_TRUE(plan);
  EXPECT_TRUE(check_timed_plan(ins, *plan).empty());
}

TEST(MapfPlanner, CheckerFlagsViolations) {
  const auto ins = fixtures::make(3, {{0, 1}, {1, 2}}, false, {0, 1}, {1, 2});
  TimedPlan follow{{{0, 1}, {1, 2}}};
  EXPECT_FALSE(check_timed_plan(ins, follow).empty());
  TimedPlan ok{{{0, 0, 0, 1}, {1, 2}}};
  EXPECT_TRUE(check_timed_plan(ins, ok).empty());
  TimedPlan jump{{{0, 2, 1}, {1, 2}}};
  EXPECT_FALSE(check_timed_plan(ins, jump).empty());
}

TEST(MCP, NoDelayMatchesPlan) {
  auto g = open_grid(6, 6);
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    Instance ins = generate_random(g, 8, rng());
    auto plan = plan_mapf_prioritized(ins, rng());
    ASSERT_TRUE(plan);
    auto tr = run_mcp(ins, *plan, DelayProfile::constant(ins.agent_count(), 0.0), rng(), 10000);
    ASSERT_EQ(tr.status, DPStatus::terminated);
    EXPECT_LE(tr.timesteps, plan->makespan());
  }
  auto ins = corridor(5);
  auto plan = plan_mapf_prioritized(ins, 0);
  auto tr = run_mcp(ins, *plan, DelayProfile::constant(1, 0.0), 0, 100);
  EXPECT_EQ(tr.timesteps, plan->makespan());
}

TEST(MCP, KeepsPlannedVisitOrder) {
  auto g = open_grid(5, 5);
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 40; ++trial) {
    Instance ins = generate_random(g, 7, rng());
    auto plan = plan_mapf_prioritized(ins, rng());
    ASSERT_TRUE(plan);
    // Planned visit order per vertex.
    std::map<Vertex, std::vector<AgentId>> planned, seen;
    for (std::size_t t = 0; t <= plan->makespan(); ++t) {
      for (std::size_t i = 0; i < plan->positions.size(); ++i) {
        const auto a = static_cast<AgentId>(i);
        if (t == 0 || plan->at(a, t) != plan->at(a, t - 1)) planned[plan->at(a, t)].push_back(a);
      }
    }
    auto tr = run_mcp(ins, *plan, DelayProfile::uniform(ins.agent_count(), 0.7, rng()), rng(), 100000, true);
    ASSERT_EQ(tr.status, DPStatus::terminated);
    for (std::size_t i = 0; i < ins.agent_count(); ++i) seen[ins.starts[i]].push_back(static_cast<AgentId>(i));
    // Re-sort the starts like the plan does: all t = 0 entries in agent order.
    for (std::size_t t = 1; t < tr.configs.size(); ++t) {
      for (std::size_t i = 0; i < ins.agent_count(); ++i) {
        if (tr.configs[t][i].at != tr.configs[t - 1][i].at) {
          seen[tr.configs[t][i].at].push_back(static_cast<AgentId>(i));
        }
      }
    }
    for (auto& [v, order] : planned) EXPECT_EQ(seen[v], order) << "vertex " << v;
  }
}

TEST(MCP, StalledAgentBlocksFollowers) {
  // a2 follows a1 through the corridor; a1 never moves.
  auto ins = fixtures::make(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}, false, {1, 0}, {3, 2});
  auto plan = plan_mapf_prioritized(ins, 0);
  ASSERT_TRUE(plan);
  DelayProfile d = DelayProfile::constant(2, 0.0);
  d.p[0] = 1.0;
  auto tr = run_mcp(ins, *plan, d, 0, 200);
  EXPECT_EQ(tr.status, DPStatus::budget);
}
