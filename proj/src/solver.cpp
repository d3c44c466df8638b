#include "otimapp/solver.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_map>

#include "otimapp/random.hpp"

namespace otimapp {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::success: return "success";
    case SolveStatus::failure: return "failure";
    case SolveStatus::timeout: return "timeout";
  }
  return "?";
}

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Clock::time_point deadline_after(Clock::time_point t0, double seconds) {
  if (seconds <= 0) return t0;
  auto d = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
  if (d > Clock::time_point::max() - t0) return Clock::time_point::max();
  return t0 + d;
}

}  // namespace

std::size_t count_head_on(const Solution& paths) {
  std::vector<std::unordered_map<std::uint64_t, std::size_t>> uses(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t t = 0; t + 1 < paths[i].size(); ++t) {
      ++uses[i][edge_key(paths[i][t], paths[i][t + 1])];
    }
  }
  std::size_t total = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = i + 1; j < paths.size(); ++j) {
      for (const auto& [key, count] : uses[i]) {
        auto u = static_cast<Vertex>(key >> 32);
        auto v = static_cast<Vertex>(key & 0xffffffffu);
        auto it = uses[j].find(edge_key(v, u));
        if (it != uses[j].end()) total += count * it->second;
      }
    }
  }
  return total;
}

EdgeConstraintSet goal_constraints(const Instance& ins, AgentId i) {
  EdgeConstraintSet c;
  for (std::size_t j = 0; j < ins.agent_count(); ++j) {
    if (static_cast<AgentId>(j) == i) continue;
    if (ins.goals[j] != ins.starts[i]) c.forbid_vertex(ins.goals[j]);
  }
  return c;
}

SolveResult solve_pp(const Instance& ins, std::span<const AgentId> order, int m,
                     const TieBreak& tie, std::optional<Clock::time_point> deadline) {
  const auto t0 = Clock::now();
  const std::size_t n = ins.agent_count();
  SolveResult res;
  res.attempts = 1;
  {
    std::vector<AgentId> sorted(order.begin(), order.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<AgentId> ident(n);
    std::iota(ident.begin(), ident.end(), 0);
    if (sorted != ident) throw std::invalid_argument("order is not a permutation of the agents");
  }
  const Graph& g = ins.g();
  FragmentTables tables(g, m);
  Solution paths(n);
  for (AgentId i : order) {
    if (deadline && Clock::now() >= *deadline) {
      res.status = SolveStatus::timeout;
      res.seconds = seconds_since(t0);
      return res;
    }
    EdgeConstraintSet goals = goal_constraints(ins, i);
    auto p = shortest_path_if(
        g, ins.starts[i], ins.goals[i],
        [&](Vertex v) { return !goals.vertex_forbidden(v); },
        [&](Vertex u, Vertex v) { return !tables.closes_cycle(u, v); }, tie);
    if (!p) {
      res.status = SolveStatus::failure;
      res.failed_agent = i;
      res.seconds = seconds_since(t0);
      return res;
    }
    if (tables.register_path(i, *p)) {
      throw std::logic_error("planned path closes a cycle");
    }
    paths[i] = std::move(*p);
  }
  res.status = SolveStatus::success;
  res.paths = std::move(paths);
  res.seconds = seconds_since(t0);
  return res;
}

SolveResult solve_pp_restarts(const Instance& ins, const RestartOptions& opt) {
  const auto t0 = Clock::now();
  const auto deadline = deadline_after(t0, opt.time_limit);
  std::vector<AgentId> order(ins.agent_count());
  std::size_t attempts = 0;
  while (attempts < opt.max_attempts && Clock::now() < deadline) {
    std::iota(order.begin(), order.end(), 0);
    if (attempts > 0) {
      Rng rng = make_rng(split_seed(opt.seed, attempts));
      std::shuffle(order.begin(), order.end(), rng);
    }
    ++attempts;
    SolveResult r = solve_pp(ins, order, opt.m, opt.tie, deadline);
    if (r.ok()) {
      r.attempts = attempts;
      r.seconds = seconds_since(t0);
      return r;
    }
  }
  SolveResult res;
  res.status = SolveStatus::timeout;
  res.attempts = attempts;
  res.seconds = seconds_since(t0);
  return res;
}

namespace {

struct Constraint {
  AgentId agent;
  std::uint64_t edge;
  auto operator<=>(const Constraint&) const = default;
};

struct Node {
  std::vector<Constraint> constraints;  // sorted
  Solution paths;
  std::size_t head_on = 0;
};

struct QueueEntry {
  std::size_t head_on;
  std::size_t seq;
  std::size_t node;
  bool operator>(const QueueEntry& o) const {
    return std::tie(head_on, seq) > std::tie(o.head_on, o.seq);
  }
};

std::optional<Path> plan_constrained(const Instance& ins, AgentId i,
                                     const std::vector<Constraint>& constraints,
                                     const TieBreak& tie) {
  EdgeConstraintSet c = goal_constraints(ins, i);
  for (const Constraint& k : constraints) {
    if (k.agent == i) c.forbidden_edges.insert(k.edge);
  }
  return shortest_path(ins.g(), ins.starts[i], ins.goals[i], c, true, tie);
}

std::optional<Solution> plan_root(const Instance& ins, const CPOptions& opt) {
  const Graph& g = ins.g();
  const std::size_t n = ins.agent_count();
  Solution paths(n);
  if (!opt.root_penalty) {
    for (std::size_t i = 0; i < n; ++i) {
      auto p = plan_constrained(ins, static_cast<AgentId>(i), {}, opt.tie);
      if (!p) return std::nullopt;
      paths[i] = std::move(*p);
    }
    return paths;
  }
  FragmentTables tables(g, opt.m);
  const auto penalty = static_cast<std::uint64_t>(g.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = static_cast<AgentId>(i);
    EdgeConstraintSet goals = goal_constraints(ins, a);
    auto p = cheapest_path_if(
        g, ins.starts[i], ins.goals[i], [&](Vertex v) { return !goals.vertex_forbidden(v); },
        [](Vertex, Vertex) { return true; },
        [&](Vertex u, Vertex v) { return tables.closes_cycle(u, v) ? penalty : 0; }, opt.tie);
    if (!p) return std::nullopt;
    tables.register_path(a, *p);
    paths[i] = std::move(*p);
  }
  return paths;
}

}  // namespace

SolveResult solve_cp(const Instance& ins, const CPOptions& opt) {
  const auto t0 = Clock::now();
  const auto deadline = deadline_after(t0, opt.time_limit);
  SolveResult res;
  auto finish = [&](SolveStatus s) {
    res.status = s;
    res.seconds = seconds_since(t0);
    return res;
  };

  auto root_paths = plan_root(ins, opt);
  if (!root_paths) return finish(SolveStatus::failure);

  std::vector<Node> nodes;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
  std::set<std::vector<Constraint>> seen;
  std::size_t seq = 0;
  auto push = [&](Node&& node) {
    node.head_on = count_head_on(node.paths);
    open.push({node.head_on, seq++, nodes.size()});
    nodes.push_back(std::move(node));
    ++res.generated;
  };
  push(Node{{}, std::move(*root_paths), 0});
  seen.insert({});

  while (!open.empty()) {
    if (res.expansions >= opt.node_limit || Clock::now() >= deadline) {
      return finish(SolveStatus::timeout);
    }
    const std::size_t id = open.top().node;
    open.pop();
    ++res.expansions;
    auto witness = detect(ins.g(), nodes[id].paths, opt.m);
    if (!witness) {
      res.paths = std::move(nodes[id].paths);
      return finish(SolveStatus::success);
    }
    for (const Link& l : witness->links) {
      const Path& p = nodes[id].paths[l.agent];
      Constraint k{l.agent, edge_key(p[l.clock], p[l.clock + 1])};
      std::vector<Constraint> cs = nodes[id].constraints;
      cs.insert(std::upper_bound(cs.begin(), cs.end(), k), k);
      if (!seen.insert(cs).second) continue;
      auto replanned = plan_constrained(ins, l.agent, cs, opt.tie);
      if (!replanned) continue;
      Solution child = nodes[id].paths;
      child[l.agent] = std::move(*replanned);
      push(Node{std::move(cs), std::move(child), 0});
    }
    // Expanded nodes are never revisited.
    nodes[id].paths = Solution{};
    nodes[id].constraints = {};
  }
  return finish(SolveStatus::failure);
}

std::vector<std::string> check_solution(const Instance& ins, const Solution& paths) {
  std::vector<std::string> out;
  if (paths.size() != ins.agent_count()) {
    out.push_back("solution has " + std::to_string(paths.size()) + " paths for " +
                  std::to_string(ins.agent_count()) + " agents");
    return out;
  }
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Path& p = paths[i];
    const std::string who = "agent " + std::to_string(i) + ": ";
    if (p.empty()) {
      out.push_back(who + "empty path");
      continue;
    }
    if (p.front() != ins.starts[i]) out.push_back(who + "path does not begin at start");
    if (p.back() != ins.goals[i]) out.push_back(who + "path does not end at goal");
    if (!is_valid_path(ins.g(), p)) out.push_back(who + "consecutive vertices not adjacent");
  }
  return out;
}

}  // namespace otimapp
