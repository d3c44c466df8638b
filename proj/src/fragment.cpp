#include "otimapp/fragment.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace otimapp {

bool Fragment::contains(AgentId a) const {
  return std::any_of(links.begin(), links.end(), [a](const Link& l) { return l.agent == a; });
}

std::vector<AgentId> Fragment::agents() const {
  std::vector<AgentId> out;
  for (const Link& l : links) out.push_back(l.agent);
  return out;
}

std::vector<int> Fragment::clocks() const {
  std::vector<int> out;
  for (const Link& l : links) out.push_back(l.clock);
  return out;
}

std::string format_witness(const Fragment& witness) {
  std::ostringstream out;
  out << "cycle agents=(";
  for (std::size_t k = 0; k < witness.links.size(); ++k) {
    out << (k ? "," : "") << witness.links[k].agent + 1;
  }
  out << ") clocks=(";
  for (std::size_t k = 0; k < witness.links.size(); ++k) {
    out << (k ? "," : "") << witness.links[k].clock;
  }
  out << ")";
  return out.str();
}

bool is_potential_cyclic_deadlock(const Solution& paths, std::span<const Link> links) {
  if (links.size() < 2) return false;
  for (std::size_t x = 0; x < links.size(); ++x) {
    for (std::size_t y = x + 1; y < links.size(); ++y) {
      if (links[x].agent == links[y].agent) return false;
    }
  }
  for (std::size_t x = 0; x < links.size(); ++x) {
    const Link& a = links[x];
    const Link& b = links[(x + 1) % links.size()];
    if (a.agent < 0 || static_cast<std::size_t>(a.agent) >= paths.size()) return false;
    const Path& pa = paths[a.agent];
    const Path& pb = paths[b.agent];
    if (a.clock < 0 || static_cast<std::size_t>(a.clock) + 1 >= pa.size()) return false;
    if (b.clock < 0 || static_cast<std::size_t>(b.clock) >= pb.size()) return false;
    if (pa[a.clock + 1] != pb[b.clock]) return false;
  }
  return true;
}

FragmentTables::FragmentTables(const Graph& g, int m) : graph_(&g), bound_(m) {
  if (m < 2) throw std::invalid_argument("agent bound must be at least 2");
}

bool FragmentTables::registered(AgentId a) const {
  return a >= 0 && static_cast<std::size_t>(a) < registered_.size() && registered_[a];
}

std::span<const FragmentTables::FragmentId> FragmentTables::starting_at(Vertex v) const {
  auto it = from_.find(v);
  if (it == from_.end()) return {};
  return it->second;
}

std::span<const FragmentTables::FragmentId> FragmentTables::ending_at(Vertex v) const {
  auto it = to_.find(v);
  if (it == to_.end()) return {};
  return it->second;
}

std::vector<Vertex> FragmentTables::start_keys() const {
  std::vector<Vertex> keys;
  for (const auto& [v, ids] : from_) keys.push_back(v);
  std::sort(keys.begin(), keys.end());
  return keys;
}

bool FragmentTables::worth_keeping(const Fragment& f) const {
  if (bound_ == kUnbounded) return true;
  const int k = static_cast<int>(f.agent_count());
  if (k >= bound_) return false;
  std::vector<Vertex> occupied;
  occupied.reserve(f.links.size());
  for (const Link& l : f.links) occupied.push_back(pos(l.agent, l.clock));
  auto d = distance_avoiding(*graph_, f.end, f.start, occupied,
                             static_cast<std::size_t>(bound_ - k));
  return d.has_value();
}

bool FragmentTables::offer(Fragment&& f, std::optional<Fragment>& witness) {
  if (f.closed()) {
    if (!witness) witness = std::move(f);
    return true;
  }
  if (!worth_keeping(f)) return false;
  auto id = static_cast<FragmentId>(store_.size());
  closing_.emplace(edge_key(f.end, f.start), 0).first->second++;
  from_[f.start].push_back(id);
  to_[f.end].push_back(id);
  store_.push_back(std::move(f));
  return false;
}

namespace {

bool disjoint(const Fragment& a, const Fragment& b) {
  for (const Link& x : a.links) {
    if (b.contains(x.agent)) return false;
  }
  return true;
}

}  // namespace

std::optional<Fragment> FragmentTables::register_path(AgentId agent, const Path& path) {
  if (agent < 0) throw std::invalid_argument("negative agent index");
  if (registered(agent)) {
    throw std::logic_error("agent " + std::to_string(agent) + " already registered");
  }
  if (static_cast<std::size_t>(agent) >= paths_.size()) {
    paths_.resize(agent + 1);
    registered_.resize(agent + 1, 0);
  }
  paths_[agent] = path;
  registered_[agent] = 1;

  std::optional<Fragment> witness;
  const int bound = bound_;
  for (std::size_t j = 0; j + 1 < path.size(); ++j) {
    const Vertex u = path[j];
    const Vertex v = path[j + 1];
    const Link self{agent, static_cast<int>(j)};

    // Only fragments stored before this edge take part; everything added
    // below contains `agent` and would be skipped anyway.
    std::vector<FragmentId> ends_at_u(ending_at(u).begin(), ending_at(u).end());
    std::vector<FragmentId> starts_at_v(starting_at(v).begin(), starting_at(v).end());
    std::erase_if(ends_at_u, [&](FragmentId id) { return store_[id].contains(agent); });
    std::erase_if(starts_at_v, [&](FragmentId id) { return store_[id].contains(agent); });

    offer(Fragment{{self}, u, v}, witness);

    for (FragmentId id : ends_at_u) {
      const Fragment& before = store_[id];
      if (static_cast<int>(before.agent_count()) + 1 > bound) continue;
      Fragment f{before.links, before.start, v};
      f.links.push_back(self);
      offer(std::move(f), witness);
    }

    for (FragmentId id : starts_at_v) {
      const Fragment& after = store_[id];
      if (static_cast<int>(after.agent_count()) + 1 > bound) continue;
      Fragment f{{self}, u, after.end};
      f.links.insert(f.links.end(), after.links.begin(), after.links.end());
      offer(std::move(f), witness);
    }

    for (FragmentId a : ends_at_u) {
      for (FragmentId b : starts_at_v) {
        const Fragment& before = store_[a];
        const Fragment& after = store_[b];
        if (static_cast<int>(before.agent_count() + after.agent_count()) + 1 > bound) continue;
        if (!disjoint(before, after)) continue;
        Fragment f{before.links, before.start, after.end};
        f.links.push_back(self);
        f.links.insert(f.links.end(), after.links.begin(), after.links.end());
        offer(std::move(f), witness);
      }
    }

    if (witness) return witness;
  }
  return std::nullopt;
}

std::optional<Fragment> detect(const Graph& g, const Solution& paths, int m) {
  FragmentTables tables(g, m);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (auto w = tables.register_path(static_cast<AgentId>(i), paths[i])) return w;
  }
  return std::nullopt;
}

}  // namespace otimapp
