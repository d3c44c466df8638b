// Template search routines for graph.hpp.
#pragma once

#include <algorithm>
#include <deque>
#include <queue>

#include "otimapp/random.hpp"

namespace otimapp {

template <class F>
void for_each_neighbor(const Graph& g, Vertex v, const TieBreak& tie, F&& f) {
  auto nbrs = g.neighbors(v);
  switch (tie.kind) {
    case TieBreak::Kind::low_id:
      for (Vertex w : nbrs) f(w);
      return;
    case TieBreak::Kind::high_id:
      for (auto it = nbrs.rbegin(); it != nbrs.rend(); ++it) f(*it);
      return;
    case TieBreak::Kind::shuffled: {
      Vertex buf[16];
      std::vector<Vertex> heap;
      Vertex* first = buf;
      if (nbrs.size() > 16) {
        heap.assign(nbrs.begin(), nbrs.end());
        first = heap.data();
      } else {
        std::copy(nbrs.begin(), nbrs.end(), buf);
      }
      Vertex* last = first + nbrs.size();
      std::sort(first, last, [&](Vertex a, Vertex b) {
        return split_seed(tie.seed, static_cast<std::uint64_t>(a)) <
               split_seed(tie.seed, static_cast<std::uint64_t>(b));
      });
      for (Vertex* it = first; it != last; ++it) f(*it);
      return;
    }
  }
}

namespace detail {

inline Path unwind(const std::vector<Vertex>& parent, Vertex from, Vertex to) {
  Path p;
  for (Vertex v = to; v != from; v = parent[v]) p.push_back(v);
  p.push_back(from);
  std::reverse(p.begin(), p.end());
  return p;
}

}  // namespace detail

template <class VertexOk, class EdgeOk>
std::optional<Path> shortest_path_if(const Graph& g, Vertex from, Vertex to,
                                     VertexOk&& vertex_ok, EdgeOk&& edge_ok,
                                     const TieBreak& tie) {
  if (!g.contains(from) || !g.contains(to)) return std::nullopt;
  if (from == to) return Path{from};
  std::vector<Vertex> parent(g.size(), -1);
  parent[from] = from;
  std::deque<Vertex> open{from};
  while (!open.empty()) {
    Vertex u = open.front();
    open.pop_front();
    bool found = false;
    for_each_neighbor(g, u, tie, [&](Vertex w) {
      if (found || parent[w] != -1) return;
      if (!vertex_ok(w) || !edge_ok(u, w)) return;
      parent[w] = u;
      if (w == to) {
        found = true;
        return;
      }
      open.push_back(w);
    });
    if (found) return detail::unwind(parent, from, to);
  }
  return std::nullopt;
}

template <class VertexOk, class EdgeOk, class Penalty>
std::optional<Path> cheapest_path_if(const Graph& g, Vertex from, Vertex to,
                                     VertexOk&& vertex_ok, EdgeOk&& edge_ok,
                                     Penalty&& penalty, const TieBreak& tie) {
  if (!g.contains(from) || !g.contains(to)) return std::nullopt;
  if (from == to) return Path{from};
  constexpr auto kInf = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> cost(g.size(), kInf);
  std::vector<Vertex> parent(g.size(), -1);
  // (cost, discovery sequence, vertex); the sequence keeps ties FIFO.
  using Entry = std::tuple<std::uint64_t, std::uint64_t, Vertex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t seq = 0;
  cost[from] = 0;
  parent[from] = from;
  open.emplace(0, seq++, from);
  while (!open.empty()) {
    auto [c, s, u] = open.top();
    open.pop();
    if (c != cost[u]) continue;
    if (u == to) return detail::unwind(parent, from, to);
    for_each_neighbor(g, u, tie, [&](Vertex w) {
      if (w == from || !vertex_ok(w) || !edge_ok(u, w)) return;
      std::uint64_t nc = c + 1 + static_cast<std::uint64_t>(penalty(u, w));
      if (nc < cost[w]) {
        cost[w] = nc;
        parent[w] = u;
        open.emplace(nc, seq++, w);
      }
    });
  }
  return std::nullopt;
}

}  // namespace otimapp
