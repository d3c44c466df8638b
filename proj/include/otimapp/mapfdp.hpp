#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otimapp/fragment.hpp"
#include "otimapp/instance.hpp"

namespace otimapp {

// Per-agent probability that a pending move fails in one timestep.
struct DelayProfile {
  std::vector<double> p;
  double pbar = 0.0;

  // p_i uniform on [0, pbar].
  static DelayProfile uniform(std::size_t n, double pbar, std::uint64_t seed);
  static DelayProfile constant(std::size_t n, double p);
};

// MAPF plan: positions[i][t] is agent i's vertex at timestep t. After its
// last entry an agent stays put.
struct TimedPlan {
  std::vector<Path> positions;

  std::size_t makespan() const;
  Vertex at(AgentId i, std::size_t t) const;
};

// Violations of the two collision rules: no shared vertex at one timestep,
// and no vertex entered at t+1 by an agent other than its holder at t.
std::vector<std::string> check_timed_plan(const Instance& ins, const TimedPlan& plan);

struct DPAgentState {
  Vertex at = -1;
  Vertex target = -1;  // -1 while contracted
  bool extended() const { return target >= 0; }
};

enum class DPStatus { terminated, stuck, budget };

std::string_view to_string(DPStatus s);

struct DPTrace {
  DPStatus status = DPStatus::budget;
  std::size_t timesteps = 0;
  // Timestep of each agent's last move; meaningful for finished agents.
  std::vector<std::size_t> arrival;
  // configs[t]: state after timestep t (configs[0] follows the initial
  // extension phase). Filled when recording.
  std::vector<std::vector<DPAgentState>> configs;
};

// Absent unless the trace terminated.
std::optional<std::size_t> sum_of_costs(const DPTrace& trace);

// Timestep 0 runs only the extension phase. Every later timestep first
// completes each extended agent's move with probability 1 - p_i, then
// repeatedly extends a uniformly chosen contracted agent whose next vertex is
// free until none is left. Stops when all agents finish, when nothing can
// change any more (stuck), or after max_steps timesteps.
DPTrace run_otimapp_dp(const Instance& ins, const Solution& paths, const DelayProfile& delays,
                       std::uint64_t seed, std::size_t max_steps, bool record = false);

struct MapfOptions {
  std::size_t max_attempts = 20;
  // Search horizon beyond the latest reserved timestep; 0 picks 2 |V|.
  std::size_t horizon_slack = 0;
};

// Prioritized space-time A* with a reservation table, one random order per
// attempt. nullopt after max_attempts failed orders.
std::optional<TimedPlan> plan_mapf_prioritized(const Instance& ins, std::uint64_t seed,
                                               const MapfOptions& opt = {});

// Executes the plan under the same two-phase stepping, but a move into v may
// start only when the mover is v's next visitor in the plan order and every
// earlier visitor has left v.
DPTrace run_mcp(const Instance& ins, const TimedPlan& plan, const DelayProfile& delays,
                std::uint64_t seed, std::size_t max_steps, bool record = false);

}  // namespace otimapp
