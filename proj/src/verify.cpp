#include "otimapp/verify.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "otimapp/random.hpp"

namespace otimapp {

bool is_finished(const Solution& paths, const Clocks& c, AgentId i) {
  return static_cast<std::size_t>(c[i]) + 1 >= paths[i].size();
}

bool all_finished(const Solution& paths, const Clocks& c) {
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (!is_finished(paths, c, static_cast<AgentId>(i))) return false;
  }
  return true;
}

Clocks activate(const Clocks& c, AgentId i, const Solution& paths) {
  if (is_finished(paths, c, i)) return c;
  const Vertex next = paths[i][c[i] + 1];
  for (std::size_t j = 0; j < paths.size(); ++j) {
    if (paths[j][c[j]] == next) return c;
  }
  Clocks out = c;
  ++out[i];
  return out;
}

namespace {

// Dense vertex -> agent map reused across configurations.
class Occupancy {
 public:
  explicit Occupancy(std::size_t vertex_count) : at_(vertex_count, -1) {}

  void load(const Solution& paths, const Clocks& c) {
    clear();
    for (std::size_t i = 0; i < paths.size(); ++i) {
      Vertex v = paths[i][c[i]];
      at_[v] = static_cast<AgentId>(i);
      used_.push_back(v);
    }
  }
  void clear() {
    for (Vertex v : used_) at_[v] = -1;
    used_.clear();
  }
  void move(Vertex from, Vertex to) {
    at_[to] = at_[from];
    at_[from] = -1;
    used_.push_back(to);
  }
  AgentId operator[](Vertex v) const { return at_[v]; }

 private:
  std::vector<AgentId> at_;
  std::vector<Vertex> used_;
};

template <class OccupantOf>
StuckReport compute_stuck(const Clocks& c, const Solution& paths, OccupantOf&& occupant_of) {
  enum : char { unknown, walking, stuck, free };
  const std::size_t n = paths.size();
  std::vector<char> state(n, unknown);
  StuckReport rep;
  AgentId first_blocker = -1;
  std::vector<AgentId> walk;
  for (std::size_t s = 0; s < n; ++s) {
    if (state[s] != unknown) continue;
    walk.clear();
    AgentId a = static_cast<AgentId>(s);
    char verdict = free;
    AgentId finished_blocker = -1;
    while (true) {
      if (is_finished(paths, c, a)) {
        state[a] = free;
        finished_blocker = a;
        verdict = walk.empty() ? free : stuck;
        break;
      }
      if (state[a] == stuck || state[a] == free) {
        verdict = state[a];
        break;
      }
      if (state[a] == walking) {
        auto from = std::find(walk.begin(), walk.end(), a);
        if (rep.cycle.empty()) rep.cycle.assign(from, walk.end());
        verdict = stuck;
        break;
      }
      state[a] = walking;
      walk.push_back(a);
      AgentId b = occupant_of(paths[a][c[a] + 1]);
      if (b < 0) {
        verdict = free;
        break;
      }
      a = b;
    }
    for (AgentId w : walk) state[w] = verdict;
    if (verdict == stuck && finished_blocker >= 0 && first_blocker < 0) {
      first_blocker = finished_blocker;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (state[i] == stuck) rep.agents.push_back(static_cast<AgentId>(i));
  }
  if (!rep.cycle.empty()) {
    rep.kind = DeadlockKind::cyclic;
  } else if (!rep.agents.empty()) {
    rep.kind = DeadlockKind::terminal;
    rep.blocker = first_blocker;
  }
  return rep;
}

}  // namespace

StuckReport stuck_set(const Clocks& c, const Solution& paths) {
  std::unordered_map<Vertex, AgentId> occ;
  for (std::size_t i = 0; i < paths.size(); ++i) occ[paths[i][c[i]]] = static_cast<AgentId>(i);
  return compute_stuck(c, paths, [&](Vertex v) {
    auto it = occ.find(v);
    return it == occ.end() ? AgentId{-1} : it->second;
  });
}

namespace {

// Mixed-radix key when the product of path lengths fits in 64 bits.
struct RadixCodec {
  std::vector<std::uint64_t> weight;
  using Key = std::uint64_t;
  Key encode(const Clocks& c) const {
    Key k = 0;
    for (std::size_t i = 0; i < c.size(); ++i) k += weight[i] * static_cast<std::uint64_t>(c[i]);
    return k;
  }
};

struct BytesCodec {
  using Key = std::string;
  Key encode(const Clocks& c) const {
    Key k(c.size() * sizeof(int), '\0');
    std::memcpy(k.data(), c.data(), k.size());
    return k;
  }
};

std::optional<RadixCodec> radix_codec(const Solution& paths) {
  RadixCodec codec;
  std::uint64_t w = 1;
  for (const Path& p : paths) {
    codec.weight.push_back(w);
    if (w > std::numeric_limits<std::uint64_t>::max() / p.size()) return std::nullopt;
    w *= p.size();
  }
  return codec;
}

template <class Codec>
FeasibilityVerdict bfs_oracle(const Instance& ins, const Solution& paths, std::size_t budget,
                              const Codec& codec) {
  const std::size_t n = paths.size();
  FeasibilityVerdict out;
  std::vector<Clocks> states;
  std::vector<std::uint32_t> parent;
  std::vector<AgentId> via;
  std::unordered_map<typename Codec::Key, std::uint32_t> index;
  Occupancy occ(ins.g().size());

  auto witness = [&](std::size_t s, StuckReport rep) {
    out.status = Feasibility::infeasible;
    out.config = states[s];
    out.deadlock = std::move(rep);
    for (std::size_t k = s; k != 0; k = parent[k]) out.sequence.push_back(via[k]);
    std::reverse(out.sequence.begin(), out.sequence.end());
  };

  Clocks zero(n, 0);
  index.emplace(codec.encode(zero), 0);
  states.push_back(zero);
  parent.push_back(0);
  via.push_back(-1);
  for (std::size_t s = 0; s < states.size(); ++s) {
    const Clocks cur = states[s];
    occ.load(paths, cur);
    StuckReport rep = compute_stuck(cur, paths, [&](Vertex v) { return occ[v]; });
    if (!rep.empty()) {
      out.states = states.size();
      witness(s, std::move(rep));
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (is_finished(paths, cur, static_cast<AgentId>(i))) continue;
      if (occ[paths[i][cur[i] + 1]] >= 0) continue;
      Clocks next = cur;
      ++next[i];
      auto [it, fresh] = index.emplace(codec.encode(next), static_cast<std::uint32_t>(states.size()));
      if (!fresh) continue;
      if (states.size() >= budget) {
        out.status = Feasibility::unknown;
        out.states = states.size();
        return out;
      }
      states.push_back(std::move(next));
      parent.push_back(static_cast<std::uint32_t>(s));
      via.push_back(static_cast<AgentId>(i));
    }
  }
  out.status = Feasibility::feasible;
  out.states = states.size();
  return out;
}

}  // namespace

FeasibilityVerdict oracle_feasibility(const Instance& ins, const Solution& paths,
                                      std::size_t state_budget) {
  if (paths.empty()) {
    FeasibilityVerdict v;
    v.status = Feasibility::feasible;
    v.states = 1;
    return v;
  }
  if (state_budget == 0) return FeasibilityVerdict{};
  if (auto codec = radix_codec(paths)) return bfs_oracle(ins, paths, state_budget, *codec);
  return bfs_oracle(ins, paths, state_budget, BytesCodec{});
}

std::string format_verdict(const FeasibilityVerdict& v) {
  switch (v.status) {
    case Feasibility::feasible:
      return "feasible";
    case Feasibility::unknown:
      return "unknown budget-exhausted";
    case Feasibility::infeasible: {
      std::ostringstream out;
      out << "infeasible kind=" << (v.deadlock.kind == DeadlockKind::cyclic ? "cyclic" : "terminal")
          << " witness=(";
      for (std::size_t k = 0; k < v.sequence.size(); ++k) {
        out << (k ? "," : "") << v.sequence[k] + 1;
      }
      out << ")";
      return out.str();
    }
  }
  return "";
}

RelaxedCheck check_relaxed_sufficient(const Instance& ins, const Solution& paths, int m) {
  RelaxedCheck res;
  const std::size_t n = paths.size();
  std::unordered_map<Vertex, AgentId> goal_of;
  for (std::size_t j = 0; j < n; ++j) goal_of[ins.goals[j]] = static_cast<AgentId>(j);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 1; t < paths[i].size(); ++t) {
      auto it = goal_of.find(paths[i][t]);
      if (it == goal_of.end() || it->second == static_cast<AgentId>(i)) continue;
      res.pass = false;
      res.failed_condition = 1;
      res.reason = "agent " + std::to_string(i + 1) + " uses the goal of agent " +
                   std::to_string(it->second + 1) + " at clock " + std::to_string(t);
      return res;
    }
  }
  if (auto w = detect(ins.g(), paths, m)) {
    res.pass = false;
    res.failed_condition = 2;
    res.reason = "potential " + format_witness(*w);
    res.witness = std::move(w);
  }
  return res;
}

std::string_view to_string(ExecStatus s) {
  switch (s) {
    case ExecStatus::terminated: return "terminated";
    case ExecStatus::stuck: return "stuck";
    case ExecStatus::budget: return "budget";
  }
  return "?";
}

ExecutionOutcome simulate_random(const Instance& ins, const Solution& paths, std::uint64_t seed,
                                 std::size_t activation_budget, bool record) {
  const std::size_t n = paths.size();
  ExecutionOutcome out;
  Clocks c(n, 0);
  Occupancy occ(ins.g().size());
  occ.load(paths, c);
  std::size_t done = 0;
  for (std::size_t i = 0; i < n; ++i) done += is_finished(paths, c, static_cast<AgentId>(i));
  auto finish = [&](ExecStatus s) {
    out.status = s;
    out.final_config = c;
    return out;
  };
  if (done == n) return finish(ExecStatus::terminated);
  out.stuck = compute_stuck(c, paths, [&](Vertex v) { return occ[v]; });
  if (!out.stuck.empty()) return finish(ExecStatus::stuck);

  Rng rng = make_rng(seed);
  while (out.activations < activation_budget) {
    const auto i = static_cast<AgentId>(uniform_index(rng, n));
    bool moved = false;
    if (!is_finished(paths, c, i)) {
      const Vertex from = paths[i][c[i]];
      const Vertex to = paths[i][c[i] + 1];
      if (occ[to] < 0) {
        occ.move(from, to);
        ++c[i];
        moved = true;
      }
    }
    if (record) out.trace.push_back({out.activations, i, moved, paths[i][c[i]]});
    ++out.activations;
    if (!moved) continue;
    if (is_finished(paths, c, i) && ++done == n) return finish(ExecStatus::terminated);
    out.stuck = compute_stuck(c, paths, [&](Vertex v) { return occ[v]; });
    if (!out.stuck.empty()) return finish(ExecStatus::stuck);
  }
  return finish(ExecStatus::budget);
}

std::string format_execution_log(const ExecutionOutcome& out) {
  std::ostringstream s;
  for (const ActivationRecord& r : out.trace) {
    s << "step=" << r.step << " agent=" << r.agent << " moved=" << (r.moved ? "true" : "false")
      << " vertex=" << r.vertex << '\n';
  }
  s << "outcome=" << to_string(out.status) << " activations=" << out.activations << '\n';
  return s.str();
}

std::optional<std::size_t> optimal_activation_count(const Instance& ins, const Solution& paths,
                                                    std::size_t state_budget) {
  std::size_t total = 0;
  for (const Path& p : paths) total += p.size() - 1;
  const std::size_t n = paths.size();
  Occupancy occ(ins.g().size());
  std::unordered_map<std::string, char> seen;
  BytesCodec codec;
  std::vector<Clocks> stack{Clocks(n, 0)};
  seen.emplace(codec.encode(stack.back()), 1);
  while (!stack.empty()) {
    Clocks cur = std::move(stack.back());
    stack.pop_back();
    if (all_finished(paths, cur)) return total;
    occ.load(paths, cur);
    // Pushed in reverse so agent 0 is tried first.
    for (std::size_t k = n; k-- > 0;) {
      if (is_finished(paths, cur, static_cast<AgentId>(k))) continue;
      if (occ[paths[k][cur[k] + 1]] >= 0) continue;
      Clocks next = cur;
      ++next[k];
      if (!seen.emplace(codec.encode(next), 1).second) continue;
      if (seen.size() > state_budget) {
        throw std::runtime_error("state budget exhausted");
      }
      stack.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

}  // namespace otimapp
