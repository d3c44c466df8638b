#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "otimapp/fragment.hpp"
#include "otimapp/graph.hpp"
#include "otimapp/instance.hpp"

namespace otimapp {

using Clock = std::chrono::steady_clock;

enum class SolveStatus { success, failure, timeout };

std::string_view to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::failure;
  Solution paths;              // empty unless status == success
  std::size_t attempts = 0;    // PP orders tried
  std::size_t expansions = 0;  // CP nodes expanded
  std::size_t generated = 0;   // CP nodes enqueued, root included
  AgentId failed_agent = -1;   // PP: first agent without an admissible path
  double seconds = 0.0;

  bool ok() const { return status == SolveStatus::success; }
};

// Unordered pairs of (agent, clock) links that traverse one edge in opposite
// directions, i.e. two-agent potential cyclic deadlocks.
std::size_t count_head_on(const Solution& paths);

// Agent i may not enter g_j (j != i) unless g_j is its own start.
EdgeConstraintSet goal_constraints(const Instance& ins, AgentId i);

// Prioritized planning in the given order. Each agent takes a hop-minimal
// path that avoids other goals and every edge closing a cycle of at most m
// agents with the paths planned before it.
SolveResult solve_pp(const Instance& ins, std::span<const AgentId> order, int m = kUnbounded,
                     const TieBreak& tie = {},
                     std::optional<Clock::time_point> deadline = std::nullopt);

struct RestartOptions {
  int m = kUnbounded;
  std::uint64_t seed = 0;
  double time_limit = 30.0;  // seconds
  std::size_t max_attempts = SIZE_MAX;
  TieBreak tie{};
};

// PP with seeded random orders until success, the attempt cap or the
// deadline. The first attempt uses the identity order. Running out of time or
// attempts yields `timeout`; `failure` is never returned because a failed
// order says nothing about the instance.
SolveResult solve_pp_restarts(const Instance& ins, const RestartOptions& opt = {});

struct CPOptions {
  int m = kUnbounded;
  double time_limit = 30.0;  // seconds
  std::size_t node_limit = 100000;
  // Root paths pay |V| extra per edge that closes a cycle against the root
  // paths planned so far. Off: plain shortest paths.
  bool root_penalty = true;
  TieBreak tie{};
};

// Best-first search over edge prohibitions, fewest head-on collisions first
// and FIFO among equals. `failure` means the queue emptied; cap hits are
// `timeout`.
SolveResult solve_cp(const Instance& ins, const CPOptions& opt = {});

// Solution file:
//   otimapp-sol v1 n=<count>
//   <agent>: v0,v1,...,vk
std::string serialize_solution(const Solution& paths);
Solution parse_solution(std::string_view text);

// Structural problems: wrong agent count, wrong endpoints, non-edges.
std::vector<std::string> check_solution(const Instance& ins, const Solution& paths);

}  // namespace otimapp
