#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "otimapp/graph.hpp"

namespace otimapp {

using AgentId = std::int32_t;

struct Instance {
  std::shared_ptr<const Graph> graph;
  std::vector<Vertex> starts;
  std::vector<Vertex> goals;
  // Optional human-readable agent names (used by the 3-SAT reduction).
  std::vector<std::string> agent_names;

  std::size_t agent_count() const { return starts.size(); }
  const Graph& g() const { return *graph; }
};

Instance make_instance(Graph g, std::vector<Vertex> starts, std::vector<Vertex> goals);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Injectivity of starts/goals, n <= |V|, and (optionally) that each agent can
// reach its goal without entering another agent's goal.
ValidationReport validate(const Instance& ins, bool check_reachability = true);

// True iff agent i has a path to its goal avoiding every other goal (its own
// start exempt).
bool goal_reachable_avoiding_others(const Instance& ins, AgentId i);

// Random starts/goals by rejection sampling: at most 100*n rejected draws.
// Throws std::runtime_error when the cap is reached.
Instance generate_random(std::shared_ptr<const Graph> g, std::size_t n, std::uint64_t seed);

// Scenario TSV:
//   otimapp-scen v1 map=<mapfile> n=<count>
//   <agent>\t<start>\t<goal>
std::string serialize_scenario(const Instance& ins, const std::string& map_name);
Instance parse_scenario(std::shared_ptr<const Graph> g, std::string_view text);
// Benchmark-suite .scen import (x = column, y = row). Takes the first n rows,
// or all of them when n is zero.
Instance import_movingai_scen(std::shared_ptr<const Graph> g, std::string_view text,
                              std::size_t n = 0);

struct Literal {
  int variable;  // 0-based
  bool negated;
  bool operator==(const Literal&) const = default;
};

struct Formula3SAT {
  int variable_count = 0;
  std::vector<std::array<Literal, 3>> clauses;

  bool evaluate(const std::vector<bool>& assignment) const;
};

// Brute-force truth-table satisfiability.
bool satisfiable(const Formula3SAT& f);

// DIMACS CNF restricted to exactly three literals per clause.
Formula3SAT parse_dimacs_3sat(std::string_view text);
std::string serialize_dimacs(const Formula3SAT& f);

// Random formula where every variable occurs both positively and negatively.
// Requires 2 * vars <= 3 * clauses.
Formula3SAT random_formula(int vars, int clauses, std::uint64_t seed);

// Layout summary of a reduced instance, useful for inspection and tests.
struct SatReduction {
  Instance instance;
  std::vector<AgentId> deciders;                 // one per variable
  std::vector<std::array<AgentId, 3>> literals;  // per clause, per slot
  std::vector<std::array<Vertex, 3>> triangles;  // clause constrainer vertices
};

// Directed OTIMAPP instance that admits a solution iff the formula is
// satisfiable. Each variable gets a decider agent with a left (false) and a
// right (true) route; each literal occurrence gets an agent that either
// crosses the decider route on its side or detours through its clause
// triangle.
SatReduction reduce_3sat(const Formula3SAT& f);

}  // namespace otimapp
