#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace otimapp {

using Vertex = std::int32_t;
using Path = std::vector<Vertex>;

struct Edge {
  Vertex from;
  Vertex to;
};

struct Cell {
  int row;
  int col;
  bool operator==(const Cell&) const = default;
};

// Thrown for malformed map, graph, scenario and solution files.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

inline std::uint64_t edge_key(Vertex u, Vertex v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

// Immutable simple graph in compressed adjacency form. Out-neighbors are
// sorted by vertex id; undirected edges appear in both lists.
class Graph {
 public:
  Graph() = default;
  // Throws std::invalid_argument on self-loops or out-of-range endpoints.
  // Duplicate edges are merged.
  Graph(std::size_t vertex_count, std::span<const Edge> edges, bool directed);

  bool directed() const { return directed_; }
  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(Vertex u, Vertex v) const;
  // Undirected edges are counted once.
  std::size_t edge_count() const {
    return directed_ ? targets_.size() : targets_.size() / 2;
  }
  bool contains(Vertex v) const { return v >= 0 && static_cast<std::size_t>(v) < size(); }

  // Grid provenance; empty for graphs not read from a map.
  bool is_grid() const { return grid_width_ > 0; }
  int grid_height() const { return grid_height_; }
  int grid_width() const { return grid_width_; }
  std::optional<Cell> cell(Vertex v) const;
  std::optional<Vertex> vertex_at(Cell c) const;

  friend Graph parse_grid_map(std::string_view text);

 private:
  bool directed_ = false;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> targets_;
  int grid_height_ = 0;
  int grid_width_ = 0;
  std::vector<Cell> cells_;
  std::vector<Vertex> cell_index_;  // row-major, -1 for obstacles
};

inline Graph build_graph(std::size_t vertex_count, std::span<const Edge> edges,
                         bool directed) {
  return Graph(vertex_count, edges, directed);
}

// Benchmark-suite grid map ("type octile" header). Passable: '.', 'G';
// obstacles: '@', 'T'. Read as a 4-connected undirected grid.
Graph parse_grid_map(std::string_view text);
std::string serialize_grid_map(const Graph& g);

// Plain edge-list graph file:
//   otimapp-graph v1 directed=<0|1> n=<count>
//   <from> <to>
Graph parse_graph_file(std::string_view text);
std::string serialize_graph_file(const Graph& g);

// Reads either format, dispatching on the first line.
Graph load_graph(const std::string& path);

std::string read_text_file(const std::string& path);

struct EdgeConstraintSet {
  std::unordered_set<Vertex> forbidden_vertices;
  std::unordered_set<std::uint64_t> forbidden_edges;

  void forbid_vertex(Vertex v) { forbidden_vertices.insert(v); }
  void forbid_edge(Vertex u, Vertex v) { forbidden_edges.insert(edge_key(u, v)); }
  bool vertex_forbidden(Vertex v) const { return forbidden_vertices.count(v) != 0; }
  bool edge_forbidden(Vertex u, Vertex v) const {
    return forbidden_edges.count(edge_key(u, v)) != 0;
  }
};

// Neighbor scan order used to break ties among equal-length paths.
struct TieBreak {
  enum class Kind { low_id, high_id, shuffled };
  Kind kind = Kind::low_id;
  std::uint64_t seed = 0;

  static TieBreak low_id() { return {}; }
  static TieBreak high_id() { return {Kind::high_id, 0}; }
  static TieBreak shuffled(std::uint64_t seed) { return {Kind::shuffled, seed}; }
};

// Visits the out-neighbors of v in the order given by the tie-break.
template <class F>
void for_each_neighbor(const Graph& g, Vertex v, const TieBreak& tie, F&& f);

// Minimum-hop path from `from` to `to` avoiding forbidden vertices (the
// source is always admissible) and forbidden directed edges. Hop-minimal
// paths are simple, so `simple_only` never changes the result.
std::optional<Path> shortest_path(const Graph& g, Vertex from, Vertex to,
                                  const EdgeConstraintSet& constraints,
                                  bool simple_only = true,
                                  const TieBreak& tie = {});

// Same search with arbitrary admissibility predicates.
template <class VertexOk, class EdgeOk>
std::optional<Path> shortest_path_if(const Graph& g, Vertex from, Vertex to,
                                     VertexOk&& vertex_ok, EdgeOk&& edge_ok,
                                     const TieBreak& tie = {});

// Cheapest path where each edge costs 1 + penalty(u, v). Ties are resolved
// by discovery order, which follows the tie-break.
template <class VertexOk, class EdgeOk, class Penalty>
std::optional<Path> cheapest_path_if(const Graph& g, Vertex from, Vertex to,
                                     VertexOk&& vertex_ok, EdgeOk&& edge_ok,
                                     Penalty&& penalty, const TieBreak& tie = {});

// Hop distance avoiding `avoid` (endpoints exempt). nullopt means no path
// within `max_hops`.
std::optional<std::size_t> distance_avoiding(
    const Graph& g, Vertex from, Vertex to, std::span<const Vertex> avoid,
    std::size_t max_hops = std::numeric_limits<std::size_t>::max());

// Breadth-first hop distances from `from` to every vertex (SIZE_MAX when
// unreachable).
std::vector<std::size_t> bfs_distances(const Graph& g, Vertex from);

bool is_valid_path(const Graph& g, const Path& p);

}  // namespace otimapp

#include "otimapp/graph_search.ipp"
