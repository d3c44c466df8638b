#include "otimapp/instance.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_set>

#include "otimapp/random.hpp"
#include "text_util.hpp"

namespace otimapp {

Instance make_instance(Graph g, std::vector<Vertex> starts, std::vector<Vertex> goals) {
  Instance ins;
  ins.graph = std::make_shared<const Graph>(std::move(g));
  ins.starts = std::move(starts);
  ins.goals = std::move(goals);
  return ins;
}

bool goal_reachable_avoiding_others(const Instance& ins, AgentId i) {
  const Graph& g = ins.g();
  std::vector<char> blocked(g.size(), 0);
  for (std::size_t j = 0; j < ins.goals.size(); ++j) {
    if (static_cast<AgentId>(j) != i) blocked[ins.goals[j]] = 1;
  }
  return shortest_path_if(
             g, ins.starts[i], ins.goals[i], [&](Vertex v) { return !blocked[v]; },
             [](Vertex, Vertex) { return true; })
      .has_value();
}

ValidationReport validate(const Instance& ins, bool check_reachability) {
  ValidationReport report;
  if (!ins.graph) {
    report.violations.push_back("missing graph");
    return report;
  }
  const Graph& g = ins.g();
  if (ins.starts.size() != ins.goals.size()) {
    report.violations.push_back("start and goal counts differ");
    return report;
  }
  if (ins.agent_count() > g.size()) report.violations.push_back("more agents than vertices");
  bool in_range = true;
  for (std::size_t i = 0; i < ins.agent_count(); ++i) {
    if (!g.contains(ins.starts[i]) || !g.contains(ins.goals[i])) {
      report.violations.push_back("agent " + std::to_string(i) + " has an out-of-range vertex");
      in_range = false;
    }
  }
  if (!in_range) return report;
  auto injective = [](const std::vector<Vertex>& xs) {
    std::unordered_set<Vertex> seen(xs.begin(), xs.end());
    return seen.size() == xs.size();
  };
  if (!injective(ins.starts)) report.violations.push_back("starts not injective");
  if (!injective(ins.goals)) report.violations.push_back("goals not injective");
  if (check_reachability) {
    for (std::size_t i = 0; i < ins.agent_count(); ++i) {
      if (!goal_reachable_avoiding_others(ins, static_cast<AgentId>(i))) {
        report.violations.push_back("agent " + std::to_string(i) +
                                    " cannot reach its goal without entering another goal");
      }
    }
  }
  return report;
}

Instance generate_random(std::shared_ptr<const Graph> g, std::size_t n, std::uint64_t seed) {
  if (n > g->size()) throw std::invalid_argument("more agents than vertices");
  Rng rng = make_rng(seed);
  Instance ins;
  ins.graph = std::move(g);
  std::vector<Vertex> free_starts(ins.g().size()), free_goals(ins.g().size());
  for (std::size_t v = 0; v < ins.g().size(); ++v) {
    free_starts[v] = free_goals[v] = static_cast<Vertex>(v);
  }
  const std::size_t cap = 100 * std::max<std::size_t>(n, 1);
  std::size_t rejected = 0;
  while (ins.agent_count() < n) {
    std::size_t si = uniform_index(rng, free_starts.size());
    std::size_t gi = uniform_index(rng, free_goals.size());
    Vertex s = free_starts[si];
    Vertex t = free_goals[gi];
    bool ok = s != t;
    if (ok) {
      ins.starts.push_back(s);
      ins.goals.push_back(t);
      // A new goal may cut routes of earlier agents, so recheck all of them.
      for (std::size_t i = 0; ok && i < ins.agent_count(); ++i) {
        ok = goal_reachable_avoiding_others(ins, static_cast<AgentId>(i));
      }
      if (!ok) {
        ins.starts.pop_back();
        ins.goals.pop_back();
      }
    }
    if (!ok) {
      if (++rejected > cap) {
        throw std::runtime_error("could not place " + std::to_string(n) +
                                 " agents after " + std::to_string(cap) + " rejections");
      }
      continue;
    }
    free_starts.erase(free_starts.begin() + static_cast<std::ptrdiff_t>(si));
    free_goals.erase(free_goals.begin() + static_cast<std::ptrdiff_t>(gi));
  }
  return ins;
}

std::string serialize_scenario(const Instance& ins, const std::string& map_name) {
  std::ostringstream out;
  out << "otimapp-scen v1 map=" << map_name << " n=" << ins.agent_count() << '\n';
  for (std::size_t i = 0; i < ins.agent_count(); ++i) {
    out << i << '\t' << ins.starts[i] << '\t' << ins.goals[i] << '\n';
  }
  return out.str();
}

using detail::lines_of;
using detail::split_on;
using detail::to_long;

Instance parse_scenario(std::shared_ptr<const Graph> g, std::string_view text) {
  auto lines = lines_of(text);
  if (lines.empty() || lines[0].rfind("otimapp-scen v1 ", 0) != 0) {
    throw ParseError("expected 'otimapp-scen v1 map=<mapfile> n=<count>'", 1);
  }
  std::size_t npos = lines[0].rfind(" n=");
  if (npos == std::string_view::npos) throw ParseError("missing n=<count>", 1);
  long n = to_long(lines[0].substr(npos + 3), 1);
  if (n < 0) throw ParseError("negative agent count", 1);
  Instance ins;
  ins.graph = std::move(g);
  ins.starts.assign(static_cast<std::size_t>(n), -1);
  ins.goals.assign(static_cast<std::size_t>(n), -1);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  long rows = 0;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    int lineno = static_cast<int>(k) + 1;
    if (lines[k].empty()) continue;
    auto f = split_on(lines[k], '\t');
    if (f.size() != 3) throw ParseError("expected agent<TAB>start<TAB>goal", lineno);
    long a = to_long(f[0], lineno), s = to_long(f[1], lineno), t = to_long(f[2], lineno);
    if (a < 0 || a >= n) throw ParseError("agent index out of range", lineno);
    if (seen[a]) throw ParseError("duplicate agent index", lineno);
    if (!ins.g().contains(static_cast<Vertex>(s)) || !ins.g().contains(static_cast<Vertex>(t))) {
      throw ParseError("vertex id out of range", lineno);
    }
    seen[a] = 1;
    ins.starts[a] = static_cast<Vertex>(s);
    ins.goals[a] = static_cast<Vertex>(t);
    ++rows;
  }
  if (rows != n) throw ParseError("expected " + std::to_string(n) + " agents", static_cast<int>(lines.size()));
  return ins;
}

Instance import_movingai_scen(std::shared_ptr<const Graph> g, std::string_view text,
                              std::size_t n) {
  if (!g->is_grid()) throw std::invalid_argument(".scen import needs a grid map");
  auto lines = lines_of(text);
  Instance ins;
  ins.graph = std::move(g);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    int lineno = static_cast<int>(k) + 1;
    if (lines[k].empty() || lines[k].rfind("version", 0) == 0) continue;
    auto f = split_on(lines[k], '\t');
    if (f.size() < 8) throw ParseError("expected at least 8 tab-separated fields", lineno);
    auto cell = [&](std::string_view x, std::string_view y) {
      Cell c{static_cast<int>(to_long(y, lineno)), static_cast<int>(to_long(x, lineno))};
      auto v = ins.g().vertex_at(c);
      if (!v) throw ParseError("coordinate is not a passable cell", lineno);
      return *v;
    };
    ins.starts.push_back(cell(f[4], f[5]));
    ins.goals.push_back(cell(f[6], f[7]));
    if (n != 0 && ins.agent_count() == n) break;
  }
  if (n != 0 && ins.agent_count() < n) {
    throw std::runtime_error("scenario has fewer than " + std::to_string(n) + " agents");
  }
  return ins;
}

bool Formula3SAT::evaluate(const std::vector<bool>& assignment) const {
  for (const auto& clause : clauses) {
    bool sat = false;
    for (const Literal& l : clause) sat = sat || (assignment[l.variable] != l.negated);
    if (!sat) return false;
  }
  return true;
}

bool satisfiable(const Formula3SAT& f) {
  if (f.variable_count > 24) throw std::invalid_argument("truth table too large");
  std::vector<bool> a(f.variable_count);
  for (std::uint32_t mask = 0; mask < (1u << f.variable_count); ++mask) {
    for (int v = 0; v < f.variable_count; ++v) a[v] = (mask >> v) & 1u;
    if (f.evaluate(a)) return true;
  }
  return false;
}

Formula3SAT parse_dimacs_3sat(std::string_view text) {
  Formula3SAT f;
  bool have_header = false;
  long declared_clauses = 0;
  std::vector<long> pending;
  int lineno = 0;
  for (std::string_view line : lines_of(text)) {
    ++lineno;
    std::istringstream in{std::string(line)};
    std::string tok;
    if (!(in >> tok) || tok == "c" || tok[0] == 'c') continue;
    if (tok == "p") {
      std::string kind;
      long vars = 0;
      if (!(in >> kind >> vars >> declared_clauses) || kind != "cnf" || vars < 0) {
        throw ParseError("expected 'p cnf <vars> <clauses>'", lineno);
      }
      f.variable_count = static_cast<int>(vars);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("clause before 'p cnf' header", lineno);
    do {
      long lit = to_long(tok, lineno);
      if (lit == 0) {
        if (pending.size() != 3) {
          throw ParseError("clause must have exactly 3 literals, found " +
                               std::to_string(pending.size()),
                           lineno);
        }
        std::array<Literal, 3> clause{};
        for (int k = 0; k < 3; ++k) {
          long x = pending[k];
          long var = x < 0 ? -x : x;
          if (var > f.variable_count) throw ParseError("variable out of range", lineno);
          clause[k] = {static_cast<int>(var - 1), x < 0};
        }
        f.clauses.push_back(clause);
        pending.clear();
      } else {
        pending.push_back(lit);
      }
    } while (in >> tok);
  }
  if (!have_header) throw ParseError("missing 'p cnf' header", lineno + 1);
  if (!pending.empty()) throw ParseError("unterminated clause", lineno);
  if (static_cast<long>(f.clauses.size()) != declared_clauses) {
    throw ParseError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                         std::to_string(f.clauses.size()),
                     lineno);
  }
  return f;
}

std::string serialize_dimacs(const Formula3SAT& f) {
  std::ostringstream out;
  out << "p cnf " << f.variable_count << ' ' << f.clauses.size() << '\n';
  for (const auto& clause : f.clauses) {
    for (const Literal& l : clause) out << (l.negated ? "-" : "") << (l.variable + 1) << ' ';
    out << "0\n";
  }
  return out.str();
}

Formula3SAT random_formula(int vars, int clauses, std::uint64_t seed) {
  if (vars <= 0 || 2 * vars > 3 * clauses) {
    throw std::invalid_argument("need 2 * vars <= 3 * clauses for both polarities");
  }
  Rng rng = make_rng(seed);
  // Reserve one positive and one negative slot per variable, fill the rest
  // at random, then shuffle slots across clauses.
  std::vector<Literal> slots;
  for (int v = 0; v < vars; ++v) {
    slots.push_back({v, false});
    slots.push_back({v, true});
  }
  while (slots.size() < static_cast<std::size_t>(3 * clauses)) {
    slots.push_back({static_cast<int>(uniform_index(rng, static_cast<std::size_t>(vars))),
                     uniform_index(rng, 2) == 1});
  }
  std::shuffle(slots.begin(), slots.end(), rng);
  Formula3SAT f;
  f.variable_count = vars;
  for (int c = 0; c < clauses; ++c) {
    f.clauses.push_back({slots[3 * c], slots[3 * c + 1], slots[3 * c + 2]});
  }
  return f;
}

}  // namespace otimapp
