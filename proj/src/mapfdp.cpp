#include "otimapp/mapfdp.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_set>

#include "otimapp/random.hpp"

namespace otimapp {

DelayProfile DelayProfile::uniform(std::size_t n, double pbar, std::uint64_t seed) {
  if (pbar < 0.0 || pbar > 1.0) throw std::invalid_argument("pbar must lie in [0, 1]");
  DelayProfile d;
  d.pbar = pbar;
  Rng rng = make_rng(seed);
  for (std::size_t i = 0; i < n; ++i) d.p.push_back(pbar > 0.0 ? uniform_real(rng, 0.0, pbar) : 0.0);
  return d;
}

DelayProfile DelayProfile::constant(std::size_t n, double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("delay probability must lie in [0, 1]");
  DelayProfile d;
  d.pbar = p;
  d.p.assign(n, p);
  return d;
}

std::size_t TimedPlan::makespan() const {
  std::size_t m = 0;
  for (const Path& p : positions) m = std::max(m, p.size() - 1);
  return m;
}

Vertex TimedPlan::at(AgentId i, std::size_t t) const {
  const Path& p = positions[i];
  return t < p.size() ? p[t] : p.back();
}

std::vector<std::string> check_timed_plan(const Instance& ins, const TimedPlan& plan) {
  std::vector<std::string> out;
  const std::size_t n = plan.positions.size();
  if (n != ins.agent_count()) {
    out.push_back("plan size differs from agent count");
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Path& p = plan.positions[i];
    if (p.empty() || p.front() != ins.starts[i] || p.back() != ins.goals[i]) {
      out.push_back("agent " + std::to_string(i) + ": wrong endpoints");
      continue;
    }
    for (std::size_t t = 0; t + 1 < p.size(); ++t) {
      if (p[t] != p[t + 1] && !ins.g().has_edge(p[t], p[t + 1])) {
        out.push_back("agent " + std::to_string(i) + ": illegal move at " + std::to_string(t));
      }
    }
  }
  const std::size_t horizon = plan.makespan() + 1;
  for (std::size_t t = 0; t <= horizon; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        auto a = static_cast<AgentId>(i), b = static_cast<AgentId>(j);
        if (i < j && plan.at(a, t) == plan.at(b, t)) {
          out.push_back("agents " + std::to_string(i) + "," + std::to_string(j) +
                        " share a vertex at " + std::to_string(t));
        }
        if (plan.at(a, t) == plan.at(b, t + 1)) {
          out.push_back("agent " + std::to_string(j) + " enters the vertex agent " +
                        std::to_string(i) + " held at " + std::to_string(t));
        }
      }
    }
  }
  return out;
}

std::string_view to_string(DPStatus s) {
  switch (s) {
    case DPStatus::terminated: return "terminated";
    case DPStatus::stuck: return "stuck";
    case DPStatus::budget: return "budget";
  }
  return "?";
}

std::optional<std::size_t> sum_of_costs(const DPTrace& trace) {
  if (trace.status != DPStatus::terminated) return std::nullopt;
  return std::accumulate(trace.arrival.begin(), trace.arrival.end(), std::size_t{0});
}

namespace {

// Shared two-phase stepping. `may_enter(i, k)` gates agent i's move to
// routes[i][k]; `departed(i, v)` fires when agent i completes a move out of v.
template <class MayEnter, class Departed>
DPTrace run_two_phase(std::size_t vertex_count, const std::vector<Path>& routes,
                      const DelayProfile& delays, std::uint64_t seed, std::size_t max_steps,
                      bool record, MayEnter&& may_enter, Departed&& departed) {
  const std::size_t n = routes.size();
  if (delays.p.size() != n) throw std::invalid_argument("delay profile size differs from agent count");
  DPTrace trace;
  trace.arrival.assign(n, 0);
  std::vector<DPAgentState> st(n);
  std::vector<std::size_t> idx(n, 0);
  std::vector<AgentId> occ(vertex_count, -1);
  std::size_t done = 0;
  for (std::size_t i = 0; i < n; ++i) {
    st[i].at = routes[i].front();
    occ[st[i].at] = static_cast<AgentId>(i);
    if (routes[i].size() == 1) ++done;
  }
  Rng rng = make_rng(seed);
  std::vector<AgentId> ready;

  auto extend_phase = [&] {
    while (true) {
      ready.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (st[i].extended() || idx[i] + 1 >= routes[i].size()) continue;
        const Vertex next = routes[i][idx[i] + 1];
        if (occ[next] < 0 && may_enter(static_cast<AgentId>(i), idx[i] + 1)) {
          ready.push_back(static_cast<AgentId>(i));
        }
      }
      if (ready.empty()) return;
      const AgentId a = ready[uniform_index(rng, ready.size())];
      st[a].target = routes[a][idx[a] + 1];
      occ[st[a].target] = a;
    }
  };

  auto snapshot = [&] {
    if (record) trace.configs.push_back(st);
  };

  extend_phase();
  snapshot();
  for (std::size_t t = 0;; ++t) {
    if (done == n) {
      trace.status = DPStatus::terminated;
      trace.timesteps = t;
      return trace;
    }
    const bool moving = std::any_of(st.begin(), st.end(), [](const DPAgentState& s) { return s.extended(); });
    if (!moving) {
      trace.status = DPStatus::stuck;
      trace.timesteps = t;
      return trace;
    }
    if (t == max_steps) {
      trace.status = DPStatus::budget;
      trace.timesteps = t;
      return trace;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!st[i].extended()) continue;
      if (!(uniform_real(rng, 0.0, 1.0) < 1.0 - delays.p[i])) continue;
      const Vertex from = st[i].at;
      occ[from] = -1;
      st[i].at = st[i].target;
      st[i].target = -1;
      ++idx[i];
      departed(static_cast<AgentId>(i), from);
      if (idx[i] + 1 == routes[i].size()) {
        trace.arrival[i] = t + 1;
        ++done;
      }
    }
    extend_phase();
    snapshot();
  }
}

}  // namespace

DPTrace run_otimapp_dp(const Instance& ins, const Solution& paths, const DelayProfile& delays,
                       std::uint64_t seed, std::size_t max_steps, bool record) {
  return run_two_phase(
      ins.g().size(), paths, delays, seed, max_steps, record,
      [](AgentId, std::size_t) { return true; }, [](AgentId, Vertex) {});
}

DPTrace run_mcp(const Instance& ins, const TimedPlan& plan, const DelayProfile& delays,
                std::uint64_t seed, std::size_t max_steps, bool record) {
  const std::size_t n = plan.positions.size();
  // Routes are the plan with waits removed; slot[i][k] is the position of
  // agent i's k-th route entry in the visit order of that vertex.
  std::vector<Path> routes(n);
  std::vector<std::vector<std::size_t>> slot(n);
  std::vector<std::size_t> visits(ins.g().size(), 0);
  const std::size_t horizon = plan.makespan();
  for (std::size_t t = 0; t <= horizon; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const Path& p = plan.positions[i];
      if (t >= p.size() || (t > 0 && p[t] == p[t - 1])) continue;
      routes[i].push_back(p[t]);
      slot[i].push_back(visits[p[t]]++);
    }
  }
  std::vector<std::size_t> turn(ins.g().size(), 0);
  return run_two_phase(
      ins.g().size(), routes, delays, seed, max_steps, record,
      [&](AgentId i, std::size_t k) { return turn[routes[i][k]] == slot[i][k]; },
      [&](AgentId, Vertex v) { ++turn[v]; });
}

namespace {

std::vector<std::size_t> distances_to(const Graph& g, Vertex goal) {
  if (!g.directed()) return bfs_distances(g, goal);
  std::vector<Edge> rev;
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (Vertex v : g.neighbors(static_cast<Vertex>(u))) rev.push_back({v, static_cast<Vertex>(u)});
  }
  return bfs_distances(Graph(g.size(), rev, true), goal);
}

constexpr std::size_t kForever = std::numeric_limits<std::size_t>::max();

class Reservations {
 public:
  explicit Reservations(std::size_t vertex_count)
      : parked_(vertex_count, kForever), last_(vertex_count, 0), used_(vertex_count, 0) {}

  bool occupied(Vertex v, std::size_t t) const {
    return t >= parked_[v] || cells_.count(edge_key(v, static_cast<Vertex>(t))) != 0;
  }
  // Entering v at t conflicts with any holder at t-1, t or t+1.
  bool blocked(Vertex v, std::size_t t) const {
    return occupied(v, t) || occupied(v, t + 1) || (t > 0 && occupied(v, t - 1));
  }
  // Earliest timestep from which the agent may stay at v forever.
  std::size_t free_from(Vertex v) const {
    if (parked_[v] != kForever) return kForever;
    return used_[v] ? last_[v] + 2 : 0;
  }
  void hold(Vertex v, std::size_t t) {
    cells_.insert(edge_key(v, static_cast<Vertex>(t)));
    last_[v] = used_[v] ? std::max(last_[v], t) : t;
    used_[v] = 1;
    latest_ = std::max(latest_, t);
  }
  void release(Vertex v, std::size_t t) { cells_.erase(edge_key(v, static_cast<Vertex>(t))); }
  void park(Vertex v, std::size_t t) { parked_[v] = t; }
  std::size_t latest() const { return latest_; }

 private:
  std::unordered_set<std::uint64_t> cells_;
  std::vector<std::size_t> parked_;
  std::vector<std::size_t> last_;
  std::vector<char> used_;
  std::size_t latest_ = 0;
};

std::optional<Path> space_time_astar(const Graph& g, Vertex s, Vertex goal,
                                     const std::vector<std::size_t>& h, const Reservations& res,
                                     std::size_t horizon) {
  if (h[s] == kForever) return std::nullopt;
  const std::size_t ready = res.free_from(goal);
  if (ready == kForever) return std::nullopt;
  struct Entry {
    std::size_t f, t;
    Vertex v;
    std::uint32_t id;
    bool operator>(const Entry& o) const {
      return std::tie(f, o.t, id) > std::tie(o.f, t, o.id);
    }
  };
  struct Rec {
    Vertex v;
    std::uint32_t parent;
  };
  std::vector<Rec> recs;
  std::unordered_set<std::uint64_t> closed;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  recs.push_back({s, 0});
  open.push({h[s], 0, s, 0});
  while (!open.empty()) {
    Entry e = open.top();
    open.pop();
    if (!closed.insert(edge_key(e.v, static_cast<Vertex>(e.t))).second) continue;
    if (e.v == goal && e.t >= ready) {
      Path p;
      for (std::uint32_t k = e.id;; k = recs[k].parent) {
        p.push_back(recs[k].v);
        if (k == 0) break;
      }
      std::reverse(p.begin(), p.end());
      return p;
    }
    if (e.t >= horizon) continue;
    auto expand = [&](Vertex w) {
      if (h[w] == kForever || res.blocked(w, e.t + 1)) return;
      if (closed.count(edge_key(w, static_cast<Vertex>(e.t + 1)))) return;
      const auto id = static_cast<std::uint32_t>(recs.size());
      recs.push_back({w, e.id});
      open.push({e.t + 1 + h[w], e.t + 1, w, id});
    };
    expand(e.v);
    for (Vertex w : g.neighbors(e.v)) expand(w);
  }
  return std::nullopt;
}

}  // namespace

std::optional<TimedPlan> plan_mapf_prioritized(const Instance& ins, std::uint64_t seed,
                                               const MapfOptions& opt) {
  const Graph& g = ins.g();
  const std::size_t n = ins.agent_count();
  std::vector<std::vector<std::size_t>> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = distances_to(g, ins.goals[i]);
  const std::size_t slack = opt.horizon_slack ? opt.horizon_slack : 2 * g.size();
  std::vector<AgentId> order(n);
  for (std::size_t attempt = 0; attempt < opt.max_attempts; ++attempt) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng = make_rng(split_seed(seed, attempt));
    std::shuffle(order.begin(), order.end(), rng);
    Reservations res(g.size());
    // Agents not yet planned still stand on their starts at time 0.
    for (std::size_t i = 0; i < n; ++i) res.hold(ins.starts[i], 0);
    TimedPlan plan;
    plan.positions.resize(n);
    bool ok = true;
    for (AgentId i : order) {
      res.release(ins.starts[i], 0);
      auto p = space_time_astar(g, ins.starts[i], ins.goals[i], h[i], res, res.latest() + slack);
      if (!p) {
        ok = false;
        break;
      }
      for (std::size_t t = 0; t < p->size(); ++t) res.hold((*p)[t], t);
      res.park(ins.goals[i], p->size() - 1);
      plan.positions[i] = std::move(*p);
    }
    if (ok) return plan;
  }
  return std::nullopt;
}

}  // namespace otimapp
