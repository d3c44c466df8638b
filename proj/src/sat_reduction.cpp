#include "otimapp/instance.hpp"

namespace otimapp {

// Gadget layout per variable x:
//
//   start(x) -> s1 <-> t1 -> s2 <-> t2 -> ... -> goal(x)     (one chain per side)
//                      ^  |
//        literal start-+  +-> literal goal
//
// Positive occurrences sit on the left (false) chain, negated ones on the
// right (true) chain. A literal agent may cross t -> s only while the decider
// uses the other chain; otherwise it detours through its clause triangle,
// entering at corner k and leaving from corner k+2.
SatReduction reduce_3sat(const Formula3SAT& f) {
  for (const auto& clause : f.clauses) {
    for (const Literal& l : clause) {
      if (l.variable < 0 || l.variable >= f.variable_count) {
        throw std::invalid_argument("literal references unknown variable");
      }
    }
  }
  const int nv = f.variable_count;
  const int nc = static_cast<int>(f.clauses.size());

  Vertex next_id = 0;
  auto fresh = [&] { return next_id++; };

  std::vector<Vertex> decider_start(nv), decider_goal(nv);
  for (int x = 0; x < nv; ++x) {
    decider_start[x] = fresh();
    decider_goal[x] = fresh();
  }
  std::vector<std::array<Vertex, 3>> triangles(nc);
  for (int j = 0; j < nc; ++j) {
    for (auto& v : triangles[j]) v = fresh();
  }
  struct Slot {
    Vertex lit_start, lit_goal, low, high;
  };
  std::vector<std::array<Slot, 3>> slots(nc);
  for (int j = 0; j < nc; ++j) {
    for (auto& s : slots[j]) s = {fresh(), fresh(), fresh(), fresh()};
  }

  std::vector<Edge> edges;
  auto arc = [&](Vertex u, Vertex v) { edges.push_back({u, v}); };

  for (int x = 0; x < nv; ++x) {
    for (bool negated_side : {false, true}) {
      Vertex prev = decider_start[x];
      for (int j = 0; j < nc; ++j) {
        for (int k = 0; k < 3; ++k) {
          const Literal& l = f.clauses[j][k];
          if (l.variable != x || l.negated != negated_side) continue;
          const Slot& s = slots[j][k];
          arc(prev, s.low);
          arc(s.low, s.high);
          arc(s.high, s.low);
          arc(s.lit_start, s.high);
          arc(s.low, s.lit_goal);
          prev = s.high;
        }
      }
      arc(prev, decider_goal[x]);
    }
  }
  for (int j = 0; j < nc; ++j) {
    const auto& tri = triangles[j];
    for (int a = 0; a < 3; ++a) {
      arc(tri[a], tri[(a + 1) % 3]);
      arc(tri[(a + 1) % 3], tri[a]);
    }
    for (int k = 0; k < 3; ++k) {
      arc(slots[j][k].lit_start, tri[k]);
      arc(tri[(k + 2) % 3], slots[j][k].lit_goal);
    }
  }

  SatReduction out;
  Instance& ins = out.instance;
  ins.graph = std::make_shared<const Graph>(static_cast<std::size_t>(next_id), edges, true);
  for (int x = 0; x < nv; ++x) {
    out.deciders.push_back(static_cast<AgentId>(ins.starts.size()));
    ins.starts.push_back(decider_start[x]);
    ins.goals.push_back(decider_goal[x]);
    ins.agent_names.push_back("x" + std::to_string(x + 1));
  }
  for (int j = 0; j < nc; ++j) {
    std::array<AgentId, 3> ids{};
    for (int k = 0; k < 3; ++k) {
      ids[k] = static_cast<AgentId>(ins.starts.size());
      ins.starts.push_back(slots[j][k].lit_start);
      ins.goals.push_back(slots[j][k].lit_goal);
      ins.agent_names.push_back("c" + std::to_string(j + 1) + "_" + std::to_string(k + 1));
    }
    out.literals.push_back(ids);
  }
  out.triangles = triangles;
  return out;
}

}  // namespace otimapp
