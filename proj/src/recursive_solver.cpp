#include "tkpm/recursive_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tkpm/matching_engine.hpp"
#include "tkpm/nd_solver.hpp"
#include "tkpm/oracle.hpp"

namespace tkpm {

std::int64_t band_threshold(int n, double alpha) {
  if (n <= 1) return 1;
  if (alpha == 0.5) {
    std::int64_t t = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (t * t < n) ++t;
    while (t > 1 && (t - 1) * (t - 1) >= n) --t;
    return t;
  }
  const double raw = std::pow(static_cast<double>(n), alpha);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw - 1e-9)));
}

std::vector<std::vector<BandId>> enumerate_tight_sets(int band_count, int max_size) {
  std::vector<std::vector<BandId>> out;
  std::vector<BandId> current;
  for (int size = 0; size <= std::min(max_size, band_count); ++size) {
    auto rec = [&](auto&& self, int start) -> void {
      if (static_cast<int>(current.size()) == size) {
        out.push_back(current);
        return;
      }
      for (int b = start; b < band_count; ++b) {
        current.push_back(b);
        self(self, b + 1);
        current.pop_back();
      }
    };
    rec(rec, 0);
  }
  return out;
}

EmBaseSolver brute_force_em_base() {
  return [](const Graph& g, int k) { return oracle::brute_force_em(g, k); };
}

namespace {

// A recursion node: the blobs of a sub-prototype in ordering order, the
// still-unmatched vertices of those blobs, and the assumed tight bands.
struct Node {
  std::vector<BlobId> blobs;
  std::vector<VertexId> live;
  std::vector<BandId> tight;
};

// State of one separator edge set E' while it is being enumerated.
struct EdgeSetView {
  const std::vector<EdgeId>& edges;
  const std::vector<char>& used;              // vertex covered by E'
  const std::vector<VertexId>& blob_vertices; // untouched separator vertices
};

class Decomposer {
 public:
  Decomposer(const Graph& g, const Prototype& p, int phi, std::int64_t threshold,
             const RecursionOptions& options, RecursionStats& stats)
      : g_(g), p_(p), map_(derive_blowup_map(g, p)), phi_(phi), threshold_(threshold),
        options_(options), stats_(stats) {}

  const Graph& graph() const { return g_; }
  RecursionStats& stats() { return stats_; }

  Node root(const std::vector<BlobId>& ordering, const std::vector<BandId>& tight) const {
    Node node{ordering, {}, tight};
    for (VertexId v = 0; v < g_.vertex_count(); ++v) node.live.push_back(v);
    return node;
  }

  bool is_base(const Node& node) const {
    const int blobs = static_cast<int>(node.blobs.size());
    return 2 * static_cast<int>(node.tight.size()) >= separator_window_bound(blobs, phi_) ||
           blobs <= options_.base_blob_limit;
  }

  Separator separator(const Node& node) const {
    Prototype local;
    std::vector<int> local_id(static_cast<std::size_t>(p_.blob_count()), -1);
    for (std::size_t i = 0; i < node.blobs.size(); ++i) {
      local_id[static_cast<std::size_t>(node.blobs[i])] = static_cast<int>(i);
      local.blobs.push_back(p_.blobs[static_cast<std::size_t>(node.blobs[i])]);
    }
    std::vector<int> local_band(p_.bands.size(), -1);
    for (std::size_t b = 0; b < p_.bands.size(); ++b) {
      const int a = local_id[static_cast<std::size_t>(p_.bands[b].a)];
      const int c = local_id[static_cast<std::size_t>(p_.bands[b].b)];
      if (a < 0 || c < 0) continue;
      local_band[b] = static_cast<int>(local.bands.size());
      local.bands.push_back(Band{a, c});
    }
    std::vector<BandId> tight;
    for (BandId b : node.tight) tight.push_back(local_band[static_cast<std::size_t>(b)]);
    std::vector<BlobId> identity(node.blobs.size());
    for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = static_cast<BlobId>(i);
    auto sep = find_loose_separator(local, identity, tight, phi_);
    if (!sep)
      throw std::logic_error("no loose separator although 2|T| < floor((n'/2 - 3)/phi) held");
    for (auto* part : {&sep->blobs, &sep->left, &sep->right})
      for (auto& b : *part) b = node.blobs[static_cast<std::size_t>(b)];
    return *sep;
  }

  // Enumerates every matching E' of band edges with an endpoint in the
  // separator blobs, at most threshold edges per band, leaving an even number
  // of untouched vertices in each separator clique and none in separator
  // independent blobs. `visit` returns false to stop.
  template <class Visit>
  void for_each_edge_set(const Node& node, const Separator& sep, Visit&& visit) {
    std::vector<char> alive(static_cast<std::size_t>(g_.vertex_count()), 0);
    for (VertexId v : node.live) alive[static_cast<std::size_t>(v)] = 1;
    std::vector<char> in_sep_blob(static_cast<std::size_t>(p_.blob_count()), 0);
    for (BlobId b : sep.blobs) in_sep_blob[static_cast<std::size_t>(b)] = 1;
    std::vector<VertexId> sep_vertices;
    for (VertexId v : node.live)
      if (in_sep_blob[static_cast<std::size_t>(map_.blob_of[static_cast<std::size_t>(v)])]) sep_vertices.push_back(v);

    std::vector<char> used(static_cast<std::size_t>(g_.vertex_count()), 0);
    std::vector<char> left_out(static_cast<std::size_t>(g_.vertex_count()), 0);
    std::vector<std::int64_t> per_band(p_.bands.size(), 0);
    std::vector<EdgeId> chosen;
    std::vector<VertexId> untouched;
    bool stop = false;

    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (stop) return;
      if (i == sep_vertices.size()) {
        for (BlobId b : sep.blobs) {
          int count = 0;
          for (VertexId v : untouched) count += map_.blob_of[static_cast<std::size_t>(v)] == b ? 1 : 0;
          if (count % 2 != 0) return;
        }
        for (EdgeId id : chosen) {
          const EdgeOrigin& o = map_.origin[static_cast<std::size_t>(id)];
          if (o.intra_blob || per_band[static_cast<std::size_t>(o.id)] > threshold_)
            throw std::logic_error("separator edge set violates the per-band cap");
        }
        ++stats_.edge_sets;
        if (!visit(EdgeSetView{chosen, used, untouched})) stop = true;
        return;
      }
      const VertexId v = sep_vertices[i];
      if (used[static_cast<std::size_t>(v)]) {
        self(self, i + 1);
        return;
      }
      used[static_cast<std::size_t>(v)] = 1;
      for (EdgeId id : g_.incident(v)) {
        const EdgeOrigin& o = map_.origin[static_cast<std::size_t>(id)];
        if (o.intra_blob) continue;
        const VertexId u = g_.other(id, v);
        if (!alive[static_cast<std::size_t>(u)] || used[static_cast<std::size_t>(u)] ||
            left_out[static_cast<std::size_t>(u)])
          continue;
        if (per_band[static_cast<std::size_t>(o.id)] >= threshold_) continue;
        ++per_band[static_cast<std::size_t>(o.id)];
        used[static_cast<std::size_t>(u)] = 1;
        chosen.push_back(id);
        self(self, i + 1);
        chosen.pop_back();
        used[static_cast<std::size_t>(u)] = 0;
        --per_band[static_cast<std::size_t>(o.id)];
        if (stop) break;
      }
      used[static_cast<std::size_t>(v)] = 0;
      // Leaving v for the blob-interior matching only makes sense in a clique blob.
      const BlobId blob = map_.blob_of[static_cast<std::size_t>(v)];
      if (!stop && p_.blobs[static_cast<std::size_t>(blob)].kind == ClassKind::Clique) {
        left_out[static_cast<std::size_t>(v)] = 1;
        untouched.push_back(v);
        self(self, i + 1);
        untouched.pop_back();
        left_out[static_cast<std::size_t>(v)] = 0;
      }
    };
    rec(rec, 0);
  }

  Node child(const Node& node, const std::vector<BlobId>& side, const std::vector<char>& used) const {
    Node c;
    std::vector<char> in_side(static_cast<std::size_t>(p_.blob_count()), 0);
    for (BlobId b : side) in_side[static_cast<std::size_t>(b)] = 1;
    c.blobs = side;
    for (VertexId v : node.live)
      if (in_side[static_cast<std::size_t>(map_.blob_of[static_cast<std::size_t>(v)])] && !used[static_cast<std::size_t>(v)])
        c.live.push_back(v);
    for (BandId b : node.tight) {
      const Band& band = p_.bands[static_cast<std::size_t>(b)];
      if (in_side[static_cast<std::size_t>(band.a)] && in_side[static_cast<std::size_t>(band.b)]) c.tight.push_back(b);
    }
    return c;
  }

  // Untouched separator vertices with only the edges inside single blobs.
  InducedSubgraph blob_interiors(const std::vector<VertexId>& vertices) const {
    InducedSubgraph sub = induced_subgraph(g_, vertices);
    std::vector<Edge> edges;
    std::vector<EdgeId> to_parent;
    for (EdgeId id = 0; id < sub.graph.edge_count(); ++id) {
      const EdgeId parent = sub.edge_to_parent[static_cast<std::size_t>(id)];
      if (!map_.origin[static_cast<std::size_t>(parent)].intra_blob) continue;
      edges.push_back(sub.graph.edge(id));
      to_parent.push_back(parent);
    }
    sub.graph = Graph(sub.graph.vertex_count(), std::move(edges));
    sub.edge_to_parent = std::move(to_parent);
    return sub;
  }

  // Asserts that the pieces form a perfect matching of the node's vertices.
  Matching combine(const Node& node, std::initializer_list<const std::vector<EdgeId>*> parts) const {
    std::vector<EdgeId> all;
    for (const auto* part : parts) all.insert(all.end(), part->begin(), part->end());
    Matching m = make_matching(std::move(all));
    if (!is_matching(g_, m.edges) || 2 * m.size() != node.live.size())
      throw std::logic_error("combined matching is not a perfect matching of the node");
    return m;
  }

 private:
  const Graph& g_;
  const Prototype& p_;
  BlowupMap map_;
  int phi_;
  std::int64_t threshold_;
  RecursionOptions options_;
  RecursionStats& stats_;
};

class TopKRecursion {
 public:
  explicit TopKRecursion(Decomposer& d) : d_(d) {}

  std::optional<Matching> solve(const Node& node, int k) {
    auto& stats = d_.stats();
    ++stats.nodes;
    const InducedSubgraph sub = induced_subgraph(d_.graph(), node.live);
    k = std::min(k, sub.graph.vertex_count() / 2);
    if (!has_perfect_matching(sub.graph)) return std::nullopt;
    if (d_.is_base(node)) {
      ++stats.base_cases;
      NdResult r = tkpm_exact_nd(sub.graph, k);
      stats.base_tuples += r.stats.tuples_visited;
      if (!r.matching) return std::nullopt;
      return sub.lift(*r.matching);
    }
    ++stats.separators;
    const Separator sep = d_.separator(node);
    std::optional<Matching> best;
    Weight best_value = 0;
    d_.for_each_edge_set(node, sep, [&](const EdgeSetView& es) {
      const Node left = d_.child(node, sep.left, es.used);
      const Node right = d_.child(node, sep.right, es.used);
      const InducedSubgraph interiors = d_.blob_interiors(es.blob_vertices);
      const int n_left = static_cast<int>(left.live.size()) / 2;
      const int n_right = static_cast<int>(right.live.size()) / 2;
      const int n_blobs = interiors.graph.vertex_count() / 2;
      // Per-budget child answers; a child without any PM makes E' useless.
      std::vector<std::optional<std::optional<Matching>>> left_at(static_cast<std::size_t>(std::min(k, n_left)) + 1);
      std::vector<std::optional<std::optional<Matching>>> right_at(static_cast<std::size_t>(std::min(k, n_right)) + 1);
      std::vector<std::optional<std::optional<Matching>>> blobs_at(static_cast<std::size_t>(std::min(k, n_blobs)) + 1);
      auto fetch = [&](auto& cache, int budget, auto&& compute) -> const std::optional<Matching>& {
        auto& slot = cache[static_cast<std::size_t>(budget)];
        if (!slot) slot = compute(budget);
        return *slot;
      };
      const int es_size = static_cast<int>(es.edges.size());
      for (int kb = 0; kb <= std::min(k, n_blobs); ++kb)
        for (int k1 = 0; k1 <= std::min(k - kb, n_left); ++k1)
          for (int k2 = 0; k2 <= std::min(k - kb - k1, n_right); ++k2) {
            const RecursionBudget budget{k - kb - k1 - k2, kb, k1, k2};
            if (budget.separator_edges > es_size) continue;
            if (budget.total() != k) throw std::logic_error("budget does not sum to k");
            ++d_.stats().budgets;
            const auto& m1 = fetch(left_at, k1, [&](int b) { return solve(left, b); });
            if (!m1) return true;
            const auto& m2 = fetch(right_at, k2, [&](int b) { return solve(right, b); });
            if (!m2) return true;
            const auto& mb = fetch(blobs_at, kb, [&](int b) -> std::optional<Matching> {
              NdResult r = tkpm_exact_nd(interiors.graph, b);
              d_.stats().base_tuples += r.stats.tuples_visited;
              if (!r.matching) return std::nullopt;
              return interiors.lift(*r.matching);
            });
            if (!mb) return true;
            Matching candidate = d_.combine(node, {&es.edges, &m1->edges, &m2->edges, &mb->edges});
            const Weight value = topk_value(d_.graph(), candidate, static_cast<std::size_t>(k));
            if (!best || value > best_value) {
              best_value = value;
              best = std::move(candidate);
            }
          }
      return true;
    });
    return best;
  }

 private:
  Decomposer& d_;
};

class ExactRecursion {
 public:
  ExactRecursion(Decomposer& d, const EmBaseSolver& base) : d_(d), base_(base) {}

  std::optional<Matching> solve(const Node& node, int k) {
    auto& stats = d_.stats();
    ++stats.nodes;
    const InducedSubgraph sub = induced_subgraph(d_.graph(), node.live);
    if (k < 0 || 2 * k > sub.graph.vertex_count()) return std::nullopt;
    if (!has_perfect_matching(sub.graph)) return std::nullopt;
    if (d_.is_base(node)) {
      ++stats.base_cases;
      auto m = base_(sub.graph, k);
      if (!m) return std::nullopt;
      return sub.lift(*m);
    }
    ++stats.separators;
    const Separator sep = d_.separator(node);
    std::optional<Matching> found;
    d_.for_each_edge_set(node, sep, [&](const EdgeSetView& es) {
      int red = 0;
      for (EdgeId id : es.edges) red += d_.graph().edge(id).color == Color::Red ? 1 : 0;
      const int remaining = k - red;
      if (remaining < 0) return true;
      const Node left = d_.child(node, sep.left, es.used);
      const Node right = d_.child(node, sep.right, es.used);
      const InducedSubgraph interiors = d_.blob_interiors(es.blob_vertices);
      const int n_left = static_cast<int>(left.live.size()) / 2;
      const int n_right = static_cast<int>(right.live.size()) / 2;
      const int n_blobs = interiors.graph.vertex_count() / 2;
      if (!has_perfect_matching(induced_subgraph(d_.graph(), left.live).graph) ||
          !has_perfect_matching(induced_subgraph(d_.graph(), right.live).graph) ||
          !has_perfect_matching(interiors.graph))
        return true;
      std::vector<std::optional<std::optional<Matching>>> left_at(static_cast<std::size_t>(n_left) + 1);
      std::vector<std::optional<std::optional<Matching>>> right_at(static_cast<std::size_t>(n_right) + 1);
      std::vector<std::optional<std::optional<Matching>>> blobs_at(static_cast<std::size_t>(n_blobs) + 1);
      auto fetch = [&](auto& cache, int budget, auto&& compute) -> const std::optional<Matching>& {
        auto& slot = cache[static_cast<std::size_t>(budget)];
        if (!slot) slot = compute(budget);
        return *slot;
      };
      for (int kb = 0; kb <= std::min(remaining, n_blobs); ++kb)
        for (int k1 = 0; k1 <= std::min(remaining - kb, n_left); ++k1) {
          const int k2 = remaining - kb - k1;
          if (k2 > n_right) continue;
          const RecursionBudget budget{red, kb, k1, k2};
          if (budget.total() != k) throw std::logic_error("budget does not sum to k");
          ++d_.stats().budgets;
          const auto& mb = fetch(blobs_at, kb, [&](int b) -> std::optional<Matching> {
            auto m = base_(interiors.graph, b);
            if (!m) return std::nullopt;
            return interiors.lift(*m);
          });
          if (!mb) continue;
          const auto& m1 = fetch(left_at, k1, [&](int b) { return solve(left, b); });
          if (!m1) continue;
          const auto& m2 = fetch(right_at, k2, [&](int b) { return solve(right, b); });
          if (!m2) continue;
          found = d_.combine(node, {&es.edges, &m1->edges, &m2->edges, &mb->edges});
          return false;
        }
      return true;
    });
    return found;
  }

 private:
  Decomposer& d_;
  const EmBaseSolver& base_;
};

struct Setup {
  int phi = 1;
  std::int64_t threshold = 1;
  int max_tight = 0;
};

Setup prepare(const Graph& g, const Prototype& p, const std::vector<BlobId>& ordering, int k,
              const RecursionOptions& options, double default_alpha) {
  p.validate();
  if (g.vertex_count() % 2 != 0) throw InputError("graph has an odd number of vertices");
  if (k < 0 || 2 * k > g.vertex_count()) throw InputError("k must satisfy 0 <= k <= n");
  Setup s;
  s.phi = std::max(1, bandwidth_of_ordering(p, ordering));
  const int n = g.vertex_count() / 2;
  const double alpha = options.threshold_alpha > 0.0 ? options.threshold_alpha : default_alpha;
  s.threshold = options.threshold > 0 ? options.threshold : band_threshold(n, alpha);
  s.max_tight = static_cast<int>(n / s.threshold);
  return s;
}

}  // namespace

RecursiveResult bbb(const Graph& g, const Prototype& p, const std::vector<BlobId>& ordering, int phi,
                    const std::vector<BandId>& tight, int k, std::int64_t threshold,
                    const RecursionOptions& options) {
  if (bandwidth_of_ordering(p, ordering) > phi) throw InputError("ordering does not witness the given bandwidth");
  if (threshold < 1) threshold = band_threshold(g.vertex_count() / 2, 0.5);
  RecursiveResult result;
  result.stats.threshold = threshold;
  result.stats.bandwidth = phi;
  result.stats.tight_sets = 1;
  Decomposer d(g, p, std::max(1, phi), threshold, options, result.stats);
  TopKRecursion solver(d);
  result.matching = solver.solve(d.root(ordering, tight), k);
  if (result.matching) result.objective = topk_value(g, *result.matching, static_cast<std::size_t>(k));
  return result;
}

RecursiveResult tkpm_recursive(const Graph& g, const Prototype& p, const std::vector<BlobId>& ordering,
                               int k, const RecursionOptions& options) {
  const Setup s = prepare(g, p, ordering, k, options, 0.5);
  RecursiveResult result;
  result.stats.threshold = s.threshold;
  result.stats.bandwidth = s.phi;
  if (!has_perfect_matching(g)) return result;
  Decomposer d(g, p, s.phi, s.threshold, options, result.stats);
  TopKRecursion solver(d);
  // When the root is a base case the answer does not depend on the guess.
  std::optional<std::optional<Matching>> root_base;
  for (const auto& tight : enumerate_tight_sets(static_cast<int>(p.bands.size()), s.max_tight)) {
    ++result.stats.tight_sets;
    const Node root = d.root(ordering, tight);
    std::optional<Matching> m;
    if (d.is_base(root)) {
      if (!root_base) root_base = solver.solve(root, k);
      m = *root_base;
    } else {
      m = solver.solve(root, k);
    }
    if (!m) continue;
    const Weight value = topk_value(g, *m, static_cast<std::size_t>(k));
    if (!result.matching || value > result.objective) {
      result.objective = value;
      result.matching = std::move(m);
    }
  }
  return result;
}

RecursiveResult em_recursive(const Graph& g, const Prototype& p, const std::vector<BlobId>& ordering,
                             int k, const EmBaseSolver& base, const RecursionOptions& options) {
  if (!g.fully_colored()) throw InputError("exact matching needs every edge colored red or blue");
  const Setup s = prepare(g, p, ordering, k, options, 12.0 / 13.0);
  RecursiveResult result;
  result.stats.threshold = s.threshold;
  result.stats.bandwidth = s.phi;
  if (!has_perfect_matching(g)) return result;
  Decomposer d(g, p, s.phi, s.threshold, options, result.stats);
  ExactRecursion solver(d, base);
  bool root_base_done = false;
  for (const auto& tight : enumerate_tight_sets(static_cast<int>(p.bands.size()), s.max_tight)) {
    ++result.stats.tight_sets;
    const Node root = d.root(ordering, tight);
    if (d.is_base(root)) {
      if (root_base_done) continue;
      root_base_done = true;
    }
    if (auto m = solver.solve(root, k)) {
      result.objective = red_count(g, *m);
      result.matching = std::move(m);
      break;
    }
  }
  return result;
}

}  // namespace tkpm
