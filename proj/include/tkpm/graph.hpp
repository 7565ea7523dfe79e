#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tkpm {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
using Weight = std::int64_t;

enum class Color : std::uint8_t { Uncolored, Red, Blue };

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  Weight w = 0;
  Color color = Color::Uncolored;
};

// Thrown for malformed or unsupported input. The CLI maps it to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simple undirected graph with nonnegative integer weights and optional
// red/blue edge colors. Immutable after construction.
class Graph {
 public:
  Graph() = default;
  Graph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_[static_cast<std::size_t>(id)]; }
  std::span<const EdgeId> incident(VertexId v) const {
    return incident_[static_cast<std::size_t>(v)];
  }
  VertexId other(EdgeId id, VertexId v) const {
    const Edge& e = edge(id);
    return e.u == v ? e.v : e.u;
  }
  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;
  bool has_edge(VertexId a, VertexId b) const { return find_edge(a, b).has_value(); }
  Weight max_weight() const;
  // True iff every edge is red or blue.
  bool fully_colored() const;

 private:
  int vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incident_;
};

// A set of edge ids of some graph, kept sorted.
struct Matching {
  std::vector<EdgeId> edges;

  std::size_t size() const { return edges.size(); }
  bool empty() const { return edges.empty(); }
  friend bool operator==(const Matching&, const Matching&) = default;
};

Matching make_matching(std::vector<EdgeId> edges);

// Sum of the min(k, |weights|) largest values.
Weight topk_value(std::span<const Weight> weights, std::size_t k);
Weight topk_value(const Graph& g, const Matching& m, std::size_t k);
Weight total_weight(const Graph& g, const Matching& m);
int red_count(const Graph& g, const Matching& m);

bool is_matching(const Graph& g, std::span<const EdgeId> edges);
bool is_perfect_matching(const Graph& g, const Matching& m);
// Per-vertex covered flags of a matching.
std::vector<bool> covered_vertices(const Graph& g, const Matching& m);

// Subgraph induced on a vertex subset, with the maps needed to lift
// matchings back to the parent graph.
struct InducedSubgraph {
  Graph graph;
  std::vector<VertexId> to_parent;    // child vertex -> parent vertex
  std::vector<VertexId> from_parent;  // parent vertex -> child vertex or -1
  std::vector<EdgeId> edge_to_parent;

  Matching lift(const Matching& m) const;
};

// `keep` may be in any order; child ids follow ascending parent ids.
InducedSubgraph induced_subgraph(const Graph& g, std::span<const VertexId> keep);

}  // namespace tkpm
