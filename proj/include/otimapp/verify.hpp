#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otimapp/fragment.hpp"
#include "otimapp/instance.hpp"

namespace otimapp {

// Internal clock per agent.
using Clocks = std::vector<int>;

bool is_finished(const Solution& paths, const Clocks& c, AgentId i);
bool all_finished(const Solution& paths, const Clocks& c);

// One activation: a finished agent, or one whose next vertex is occupied,
// leaves the configuration unchanged.
Clocks activate(const Clocks& c, AgentId i, const Solution& paths);

enum class DeadlockKind { none, cyclic, terminal };

struct StuckReport {
  std::vector<AgentId> agents;  // ascending
  DeadlockKind kind = DeadlockKind::none;
  // cyclic: the agents on one blocking cycle, in blocking order.
  std::vector<AgentId> cycle;
  // terminal: a finished agent at the end of a blocking chain.
  AgentId blocker = -1;

  bool empty() const { return agents.empty(); }
};

// Unfinished agents that can never move again: those whose chain of
// "my next vertex is held by" ends at a finished agent or runs into a cycle.
// A cycle takes precedence when reporting the kind.
StuckReport stuck_set(const Clocks& c, const Solution& paths);

enum class Feasibility { feasible, infeasible, unknown };

struct FeasibilityVerdict {
  Feasibility status = Feasibility::unknown;
  std::vector<AgentId> sequence;  // effective activations reaching `config`
  Clocks config;
  StuckReport deadlock;
  std::size_t states = 0;

  bool feasible() const { return status == Feasibility::feasible; }
};

inline constexpr std::size_t kDefaultStateBudget = 5'000'000;

// Breadth-first search over every configuration reachable from all-zero
// clocks. Infeasible iff some reachable configuration has a stuck agent; the
// returned sequence is a shortest one. `unknown` when the budget runs out.
FeasibilityVerdict oracle_feasibility(const Instance& ins, const Solution& paths,
                                      std::size_t state_budget = kDefaultStateBudget);

// `feasible`, `infeasible kind=<k> witness=(a,b,...)` (1-based agents) or
// `unknown budget-exhausted`.
std::string format_verdict(const FeasibilityVerdict& v);

struct RelaxedCheck {
  bool pass = true;
  int failed_condition = 0;  // 1: other goal used, 2: potential cyclic deadlock
  std::string reason;
  std::optional<Fragment> witness;
};

RelaxedCheck check_relaxed_sufficient(const Instance& ins, const Solution& paths,
                                      int m = kUnbounded);

enum class ExecStatus { terminated, stuck, budget };

std::string_view to_string(ExecStatus s);

struct ActivationRecord {
  std::size_t step;
  AgentId agent;
  bool moved;
  Vertex vertex;  // agent position after the activation
};

struct ExecutionOutcome {
  ExecStatus status = ExecStatus::budget;
  std::size_t activations = 0;
  std::vector<ActivationRecord> trace;  // filled when recording
  Clocks final_config;
  StuckReport stuck;
};

// Uniformly random activations until all agents finish, some agent is stuck
// or `activation_budget` activations were spent.
ExecutionOutcome simulate_random(const Instance& ins, const Solution& paths, std::uint64_t seed,
                                 std::size_t activation_budget, bool record = true);

std::string format_execution_log(const ExecutionOutcome& out);

// Minimum number of clock increments reaching the all-finished
// configuration, or nullopt when no execution reaches it. Every increment
// counts once, so any successful execution costs the total edge count;
// the search only decides reachability. Throws std::runtime_error when more
// than `state_budget` configurations are visited.
std::optional<std::size_t> optimal_activation_count(
    const Instance& ins, const Solution& paths,
    std::size_t state_budget = kDefaultStateBudget);

}  // namespace otimapp
