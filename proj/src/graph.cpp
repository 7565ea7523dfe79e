#include "tkpm/graph.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>
#include <utility>

namespace tkpm {

Graph::Graph(int vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ < 0) throw InputError("negative vertex count");
  incident_.assign(static_cast<std::size_t>(vertex_count_), {});
  std::set<std::pair<VertexId, VertexId>> seen;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.u < 0 || e.v < 0 || e.u >= vertex_count_ || e.v >= vertex_count_)
      throw InputError("edge " + std::to_string(i) + " has an endpoint out of range");
    if (e.u == e.v) throw InputError("edge " + std::to_string(i) + " is a self-loop");
    if (e.w < 0) throw InputError("edge " + std::to_string(i) + " has a negative weight");
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second)
      throw InputError("duplicate edge " + std::to_string(e.u) + " " + std::to_string(e.v));
    incident_[static_cast<std::size_t>(e.u)].push_back(static_cast<EdgeId>(i));
    incident_[static_cast<std::size_t>(e.v)].push_back(static_cast<EdgeId>(i));
  }
}

std::optional<EdgeId> Graph::find_edge(VertexId a, VertexId b) const {
  if (incident(a).size() > incident(b).size()) std::swap(a, b);
  for (EdgeId id : incident(a))
    if (other(id, a) == b) return id;
  return std::nullopt;
}

Weight Graph::max_weight() const {
  Weight best = 0;
  for (const Edge& e : edges_) best = std::max(best, e.w);
  return best;
}

bool Graph::fully_colored() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.color != Color::Uncolored; });
}

Matching make_matching(std::vector<EdgeId> edges) {
  std::sort(edges.begin(), edges.end());
  return Matching{std::move(edges)};
}

Weight topk_value(std::span<const Weight> weights, std::size_t k) {
  std::vector<Weight> sorted(weights.begin(), weights.end());
  const std::size_t take = std::min(k, sorted.size());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(take),
                    sorted.end(), std::greater<>());
  Weight sum = 0;
  for (std::size_t i = 0; i < take; ++i) sum += sorted[i];
  return sum;
}

Weight topk_value(const Graph& g, const Matching& m, std::size_t k) {
  std::vector<Weight> w;
  w.reserve(m.size());
  for (EdgeId id : m.edges) w.push_back(g.edge(id).w);
  return topk_value(w, k);
}

Weight total_weight(const Graph& g, const Matching& m) {
  Weight sum = 0;
  for (EdgeId id : m.edges) sum += g.edge(id).w;
  return sum;
}

int red_count(const Graph& g, const Matching& m) {
  return static_cast<int>(std::count_if(m.edges.begin(), m.edges.end(), [&](EdgeId id) {
    return g.edge(id).color == Color::Red;
  }));
}

bool is_matching(const Graph& g, std::span<const EdgeId> edges) {
  std::vector<bool> used(static_cast<std::size_t>(g.vertex_count()), false);
  for (EdgeId id : edges) {
    if (id < 0 || id >= g.edge_count()) return false;
    const Edge& e = g.edge(id);
    if (used[static_cast<std::size_t>(e.u)] || used[static_cast<std::size_t>(e.v)]) return false;
    used[static_cast<std::size_t>(e.u)] = used[static_cast<std::size_t>(e.v)] = true;
  }
  return true;
}

bool is_perfect_matching(const Graph& g, const Matching& m) {
  return is_matching(g, m.edges) && 2 * m.size() == static_cast<std::size_t>(g.vertex_count());
}

std::vector<bool> covered_vertices(const Graph& g, const Matching& m) {
  std::vector<bool> covered(static_cast<std::size_t>(g.vertex_count()), false);
  for (EdgeId id : m.edges) {
    covered[static_cast<std::size_t>(g.edge(id).u)] = true;
    covered[static_cast<std::size_t>(g.edge(id).v)] = true;
  }
  return covered;
}

Matching InducedSubgraph::lift(const Matching& m) const {
  std::vector<EdgeId> out;
  out.reserve(m.size());
  for (EdgeId id : m.edges) out.push_back(edge_to_parent[static_cast<std::size_t>(id)]);
  return make_matching(std::move(out));
}

InducedSubgraph induced_subgraph(const Graph& g, std::span<const VertexId> keep) {
  InducedSubgraph sub;
  sub.from_parent.assign(static_cast<std::size_t>(g.vertex_count()), -1);
  for (VertexId v : keep) {
    if (v < 0 || v >= g.vertex_count()) throw InputError("induced_subgraph: vertex out of range");
    sub.from_parent[static_cast<std::size_t>(v)] = 0;
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (sub.from_parent[static_cast<std::size_t>(v)] < 0) continue;
    sub.from_parent[static_cast<std::size_t>(v)] = static_cast<VertexId>(sub.to_parent.size());
    sub.to_parent.push_back(v);
  }
  std::vector<Edge> edges;
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    const VertexId a = sub.from_parent[static_cast<std::size_t>(e.u)];
    const VertexId b = sub.from_parent[static_cast<std::size_t>(e.v)];
    if (a < 0 || b < 0) continue;
    edges.push_back(Edge{a, b, e.w, e.color});
    sub.edge_to_parent.push_back(id);
  }
  sub.graph = Graph(static_cast<int>(sub.to_parent.size()), std::move(edges));
  return sub;
}

}  // namespace tkpm
