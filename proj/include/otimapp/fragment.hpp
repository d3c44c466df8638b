#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "otimapp/graph.hpp"
#include "otimapp/instance.hpp"

namespace otimapp {

using Solution = std::vector<Path>;

// Agent-count bound for m-tolerant detection.
inline constexpr int kUnbounded = std::numeric_limits<int>::max();

// One chain link: agent `agent` standing at its clock `clock` wants to move to
// the vertex held by the next link.
struct Link {
  AgentId agent;
  int clock;
  bool operator==(const Link&) const = default;
};

// A partial deadlock chain. `start` is the first agent's current vertex and
// `end` the last agent's next vertex; start == end closes a potential cyclic
// deadlock.
struct Fragment {
  std::vector<Link> links;
  Vertex start = -1;
  Vertex end = -1;

  std::size_t agent_count() const { return links.size(); }
  bool closed() const { return start == end; }
  bool contains(AgentId a) const;
  std::vector<AgentId> agents() const;
  std::vector<int> clocks() const;
};

// `cycle agents=(i,j,...) clocks=(ti,tj,...)` with 1-based agent indices.
std::string format_witness(const Fragment& witness);

// Checks the closed-chain equations against the paths.
bool is_potential_cyclic_deadlock(const Solution& paths, std::span<const Link> links);

// Fragment store indexed by start and end vertex. With a finite bound m, no
// stored fragment has m or more agents, and a fragment is dropped when its
// agents plus the hop distance from its end back to its start (avoiding its
// own vertices) exceeds m.
class FragmentTables {
 public:
  using FragmentId = std::uint32_t;

  explicit FragmentTables(const Graph& g, int m = kUnbounded);

  // Registers every edge of the agent's path. Returns the first closing chain
  // found while scanning the edge that closes it; the scans for that edge are
  // completed (closing chains are never stored) before returning.
  // Throws std::logic_error if the agent was already registered.
  std::optional<Fragment> register_path(AgentId agent, const Path& path);

  // True iff some stored fragment ends at u and starts at v, i.e. a new agent
  // moving u -> v would close a potential cyclic deadlock.
  bool closes_cycle(Vertex u, Vertex v) const {
    return closing_.count(edge_key(u, v)) != 0;
  }

  std::span<const FragmentId> starting_at(Vertex v) const;
  std::span<const FragmentId> ending_at(Vertex v) const;
  const Fragment& fragment(FragmentId id) const { return store_[id]; }
  std::size_t fragment_count() const { return store_.size(); }
  int bound() const { return bound_; }
  bool registered(AgentId a) const;
  // Vertices that currently key a non-empty starting_at() row, ascending.
  std::vector<Vertex> start_keys() const;

 private:
  Vertex pos(AgentId a, int clock) const { return paths_[a][clock]; }
  // Returns true when the fragment closed (and was not stored).
  bool offer(Fragment&& f, std::optional<Fragment>& witness);
  bool worth_keeping(const Fragment& f) const;

  const Graph* graph_;
  int bound_;
  std::vector<Path> paths_;
  std::vector<char> registered_;
  std::vector<Fragment> store_;
  std::unordered_map<Vertex, std::vector<FragmentId>> from_;
  std::unordered_map<Vertex, std::vector<FragmentId>> to_;
  // (end, start) pairs of stored fragments, with multiplicity.
  std::unordered_map<std::uint64_t, std::uint32_t> closing_;
};

// Registers all paths in agent order and returns the first witness of at
// most m agents, if any.
std::optional<Fragment> detect(const Graph& g, const Solution& paths, int m = kUnbounded);

}  // namespace otimapp
