#include "otimapp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace otimapp {

Graph::Graph(std::size_t vertex_count, std::span<const Edge> edges, bool directed)
    : directed_(directed) {
  std::vector<std::vector<Vertex>> adj(vertex_count);
  for (const Edge& e : edges) {
    if (e.from < 0 || e.to < 0 || static_cast<std::size_t>(e.from) >= vertex_count ||
        static_cast<std::size_t>(e.to) >= vertex_count) {
      throw std::invalid_argument("edge endpoint out of range: (" +
                                  std::to_string(e.from) + "," +
                                  std::to_string(e.to) + ")");
    }
    if (e.from == e.to) {
      throw std::invalid_argument("self-loop at vertex " + std::to_string(e.from));
    }
    adj[e.from].push_back(e.to);
    if (!directed) adj[e.to].push_back(e.from);
  }
  offsets_.reserve(vertex_count + 1);
  offsets_.push_back(0);
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    targets_.insert(targets_.end(), list.begin(), list.end());
    offsets_.push_back(targets_.size());
  }
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (!contains(u) || !contains(v)) return false;
  auto n = neighbors(u);
  return std::binary_search(n.begin(), n.end(), v);
}

std::optional<Cell> Graph::cell(Vertex v) const {
  if (cells_.empty() || !contains(v)) return std::nullopt;
  return cells_[v];
}

std::optional<Vertex> Graph::vertex_at(Cell c) const {
  if (c.row < 0 || c.col < 0 || c.row >= grid_height_ || c.col >= grid_width_) {
    return std::nullopt;
  }
  Vertex v = cell_index_[static_cast<std::size_t>(c.row) * grid_width_ + c.col];
  if (v < 0) return std::nullopt;
  return v;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  // drop trailing empty lines
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

int parse_keyword_int(std::string_view line, std::string_view key, int lineno) {
  if (line.substr(0, key.size()) != key || line.size() <= key.size() ||
      line[key.size()] != ' ') {
    throw ParseError("expected '" + std::string(key) + " <n>'", lineno);
  }
  std::string_view num = line.substr(key.size() + 1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
  if (ec != std::errc() || ptr != num.data() + num.size() || value <= 0) {
    throw ParseError("bad value for '" + std::string(key) + "'", lineno);
  }
  return value;
}

bool passable(char c, int lineno) {
  switch (c) {
    case '.':
    case 'G':
      return true;
    case '@':
    case 'T':
      return false;
    default:
      throw ParseError(std::string("unknown cell character '") + c + "'", lineno);
  }
}

}  // namespace

Graph parse_grid_map(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.size() < 4) throw ParseError("truncated header", static_cast<int>(lines.size()) + 1);
  if (lines[0] != "type octile") throw ParseError("expected 'type octile'", 1);
  int height = parse_keyword_int(lines[1], "height", 2);
  int width = parse_keyword_int(lines[2], "width", 3);
  if (lines[3] != "map") throw ParseError("expected 'map'", 4);
  if (lines.size() != static_cast<std::size_t>(height) + 4) {
    throw ParseError("expected " + std::to_string(height) + " map rows, found " +
                         std::to_string(lines.size() - 4),
                     static_cast<int>(std::min(lines.size(), static_cast<std::size_t>(height) + 4)) + 1);
  }

  std::vector<Vertex> index(static_cast<std::size_t>(height) * width, -1);
  std::vector<Cell> cells;
  for (int r = 0; r < height; ++r) {
    std::string_view row = lines[4 + r];
    int lineno = 5 + r;
    if (row.size() != static_cast<std::size_t>(width)) {
      throw ParseError("row width " + std::to_string(row.size()) + " != " +
                           std::to_string(width),
                       lineno);
    }
    for (int c = 0; c < width; ++c) {
      if (passable(row[c], lineno)) {
        index[static_cast<std::size_t>(r) * width + c] = static_cast<Vertex>(cells.size());
        cells.push_back({r, c});
      }
    }
  }

  std::vector<Edge> edges;
  for (std::size_t v = 0; v < cells.size(); ++v) {
    auto [r, c] = cells[v];
    if (c + 1 < width) {
      Vertex w = index[static_cast<std::size_t>(r) * width + c + 1];
      if (w >= 0) edges.push_back({static_cast<Vertex>(v), w});
    }
    if (r + 1 < height) {
      Vertex w = index[static_cast<std::size_t>(r + 1) * width + c];
      if (w >= 0) edges.push_back({static_cast<Vertex>(v), w});
    }
  }
  Graph g(cells.size(), edges, false);
  g.grid_height_ = height;
  g.grid_width_ = width;
  g.cells_ = std::move(cells);
  g.cell_index_ = std::move(index);
  return g;
}

std::string serialize_grid_map(const Graph& g) {
  if (!g.is_grid()) throw std::invalid_argument("graph has no grid layout");
  std::ostringstream out;
  out << "type octile\nheight " << g.grid_height() << "\nwidth " << g.grid_width()
      << "\nmap\n";
  for (int r = 0; r < g.grid_height(); ++r) {
    for (int c = 0; c < g.grid_width(); ++c) out << (g.vertex_at({r, c}) ? '.' : '@');
    out << '\n';
  }
  return out.str();
}

namespace {

long parse_field(std::string_view tok, std::string_view what, int lineno) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("bad " + std::string(what) + " '" + std::string(tok) + "'", lineno);
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Graph parse_graph_file(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty graph file", 1);
  auto head = split_ws(lines[0]);
  if (head.size() != 4 || head[0] != "otimapp-graph" || head[1] != "v1" ||
      head[2].substr(0, 9) != "directed=" || head[3].substr(0, 2) != "n=") {
    throw ParseError("expected 'otimapp-graph v1 directed=<0|1> n=<count>'", 1);
  }
  long directed = parse_field(head[2].substr(9), "directed flag", 1);
  long n = parse_field(head[3].substr(2), "vertex count", 1);
  if ((directed != 0 && directed != 1) || n < 0) throw ParseError("bad header values", 1);
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    int lineno = static_cast<int>(i) + 1;
    auto toks = split_ws(lines[i]);
    if (toks.empty()) continue;
    if (toks.size() != 2) throw ParseError("expected '<from> <to>'", lineno);
    long u = parse_field(toks[0], "vertex", lineno);
    long v = parse_field(toks[1], "vertex", lineno);
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError("vertex out of range", lineno);
    if (u == v) throw ParseError("self-loop", lineno);
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  return Graph(static_cast<std::size_t>(n), edges, directed == 1);
}

std::string serialize_graph_file(const Graph& g) {
  std::ostringstream out;
  out << "otimapp-graph v1 directed=" << (g.directed() ? 1 : 0) << " n=" << g.size() << '\n';
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (Vertex v : g.neighbors(static_cast<Vertex>(u))) {
      if (!g.directed() && v < static_cast<Vertex>(u)) continue;
      out << u << ' ' << v << '\n';
    }
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Graph load_graph(const std::string& path) {
  std::string text = read_text_file(path);
  if (text.rfind("otimapp-graph", 0) == 0) return parse_graph_file(text);
  return parse_grid_map(text);
}

std::optional<Path> shortest_path(const Graph& g, Vertex from, Vertex to,
                                  const EdgeConstraintSet& constraints,
                                  bool /*simple_only*/, const TieBreak& tie) {
  return shortest_path_if(
      g, from, to, [&](Vertex v) { return !constraints.vertex_forbidden(v); },
      [&](Vertex u, Vertex v) { return !constraints.edge_forbidden(u, v); }, tie);
}

std::optional<std::size_t> distance_avoiding(const Graph& g, Vertex from, Vertex to,
                                             std::span<const Vertex> avoid,
                                             std::size_t max_hops) {
  if (from == to) return 0;
  if (max_hops == 0) return std::nullopt;
  // Small avoid sets (fragment footprints) are scanned linearly.
  auto avoided = [&](Vertex v) {
    return v != to && std::find(avoid.begin(), avoid.end(), v) != avoid.end();
  };
  std::vector<std::pair<Vertex, std::size_t>> frontier{{from, 0}};
  std::unordered_set<Vertex> seen{from};
  std::size_t head = 0;
  while (head < frontier.size()) {
    auto [u, d] = frontier[head++];
    for (Vertex w : g.neighbors(u)) {
      if (w == to) return d + 1;
      if (d + 1 >= max_hops || avoided(w) || !seen.insert(w).second) continue;
      frontier.emplace_back(w, d + 1);
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> bfs_distances(const Graph& g, Vertex from) {
  constexpr auto kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(g.size(), kInf);
  if (!g.contains(from)) return dist;
  dist[from] = 0;
  std::deque<Vertex> open{from};
  while (!open.empty()) {
    Vertex u = open.front();
    open.pop_front();
    for (Vertex w : g.neighbors(u)) {
      if (dist[w] != kInf) continue;
      dist[w] = dist[u] + 1;
      open.push_back(w);
    }
  }
  return dist;
}

bool is_valid_path(const Graph& g, const Path& p) {
  if (p.empty()) return false;
  for (Vertex v : p) {
    if (!g.contains(v)) return false;
  }
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    if (!g.has_edge(p[k], p[k + 1])) return false;
  }
  return true;
}

}  // namespace otimapp
