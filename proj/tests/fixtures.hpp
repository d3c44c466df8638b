// Small hand-drawn instances shared by the unit and acceptance tests.
// Vertex vN of a drawing is id N-1; agent aK is index K-1.
#pragma once

#include <memory>
#include <vector>

#include "otimapp/fragment.hpp"
#include "otimapp/graph.hpp"
#include "otimapp/instance.hpp"

namespace fixtures {

using otimapp::Edge;
using otimapp::Instance;
using otimapp::Path;
using otimapp::Solution;
using otimapp::Vertex;

inline Instance make(std::size_t n, std::vector<Edge> edges, bool directed,
                     std::vector<Vertex> starts, std::vector<Vertex> goals) {
  Instance ins;
  ins.graph = std::make_shared<const otimapp::Graph>(n, edges, directed);
  ins.starts = std::move(starts);
  ins.goals = std::move(goals);
  return ins;
}

// Seven vertices; a1 crosses the top row, a2 goes from v4 to v6.
inline Instance fig1() {
  return make(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {6, 3}, {2, 5}, {2, 6}}, false, {0, 3}, {4, 5});
}
inline Solution fig1_solid() { return {{0, 1, 2, 3, 4}, {3, 6, 2, 5}}; }
inline Solution fig1_dotted() { return {{0, 1, 2, 3, 4}, {3, 2, 5}}; }

// Path v1-v2-v3-v4; a2 passes the goal of a1.
inline Instance fig2a() { return make(4, {{0, 1}, {1, 2}, {2, 3}}, false, {0, 1}, {2, 3}); }
inline Solution fig2a_solution() { return {{0, 1, 2}, {1, 2, 3}}; }

// Unreachable three-agent potential cyclic deadlock through v2, v3, v5.
inline Instance fig2b() {
  return make(8, {{0, 1}, {1, 2}, {2, 3}, {1, 4}, {2, 4}, {4, 5}, {4, 6}, {1, 7}}, false,
              {0, 1, 6}, {5, 3, 7});
}
inline Solution fig2b_solution() { return {{0, 1, 2, 4, 5}, {1, 2, 3}, {6, 4, 1, 7}}; }

// Star around v2; a2 must finish on v2, which a1 has to cross.
inline Instance fig5() { return make(4, {{0, 1}, {1, 2}, {1, 3}}, false, {0, 2}, {3, 1}); }

// Top row v1..v4 with a lower loop v5-v7-v8-v6.
inline Instance fig7() {
  return make(8, {{0, 1}, {1, 2}, {2, 3}, {1, 4}, {2, 5}, {4, 6}, {5, 7}, {6, 7}}, false, {0, 5},
              {3, 4});
}
inline Path fig7_a1() { return {0, 1, 2, 3}; }
inline Path fig7_a2_dotted() { return {5, 2, 1, 4}; }
inline Path fig7_a2_solid() { return {5, 7, 6, 4}; }

// Two potential cyclic deadlocks, of which only the one-step cycle is
// reachable.
inline Instance fig11() {
  return make(9, {{0, 1}, {1, 2}, {2, 3}, {1, 4}, {2, 4}, {4, 5}, {4, 6}, {1, 7}, {2, 8}}, false,
              {0, 5, 8}, {6, 3, 7});
}
inline Solution fig11_solution() { return {{0, 1, 2, 4, 6}, {5, 4, 1, 2, 3}, {8, 2, 4, 1, 7}}; }

// Worked fragment-table example: u v w x y z are ids 0..5.
enum Tab1Vertex : Vertex { u = 0, v, w, x, y, z };
inline otimapp::Graph tab1_graph() {
  std::vector<Edge> e{{u, v}, {v, w}, {v, x}, {x, y}, {z, x}, {x, u}};
  return otimapp::Graph(6, e, false);
}
inline Solution tab1_paths() { return {{u, v, w}, {v, x, y}, {z, x, u}}; }

}  // namespace fixtures
