#include "tkpm/nd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "tkpm/kernels.hpp"
#include "tkpm/matching_engine.hpp"

namespace tkpm {

TypePartition compute_type_partition(const Graph& g) {
  const int n = g.vertex_count();
  const kernels::BitAdjacency adj(g);
  TypePartition p;
  p.class_of.assign(static_cast<std::size_t>(n), -1);
  for (VertexId v = 0; v < n; ++v) {
    for (int c = 0; c < p.gamma(); ++c) {
      if (kernels::are_twins(adj, p.classes[static_cast<std::size_t>(c)].front(), v)) {
        p.class_of[static_cast<std::size_t>(v)] = c;
        p.classes[static_cast<std::size_t>(c)].push_back(v);
        break;
      }
    }
    if (p.class_of[static_cast<std::size_t>(v)] < 0) {
      p.class_of[static_cast<std::size_t>(v)] = p.gamma();
      p.classes.push_back({v});
    }
  }
  const int gamma = p.gamma();
  p.kind.assign(static_cast<std::size_t>(gamma), ClassKind::Independent);
  p.adjacent.assign(static_cast<std::size_t>(gamma), std::vector<bool>(static_cast<std::size_t>(gamma), false));
  for (int i = 0; i < gamma; ++i) {
    const auto& ci = p.classes[static_cast<std::size_t>(i)];
    if (ci.size() >= 2 && adj.test(ci[0], ci[1])) {
      p.kind[static_cast<std::size_t>(i)] = ClassKind::Clique;
      p.adjacent[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = true;
    }
    for (int j = i + 1; j < gamma; ++j) {
      const bool a = adj.test(ci[0], p.classes[static_cast<std::size_t>(j)][0]);
      p.adjacent[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a;
      p.adjacent[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = a;
    }
  }
  return p;
}

std::optional<Matching> tc_mwm(const Graph& g, const TypePartition& partition,
                               std::span<const int> counts) {
  const int gamma = partition.gamma();
  if (static_cast<int>(counts.size()) != gamma) throw InputError("tc_mwm: count tuple has wrong arity");
  int killers = 0;
  for (int i = 0; i < gamma; ++i) {
    const int c = counts[static_cast<std::size_t>(i)];
    if (c < 0 || c > partition.class_size(i)) throw InputError("tc_mwm: count out of range");
    killers += partition.class_size(i) - c;
  }
  std::vector<Edge> edges = g.edges();
  VertexId next = g.vertex_count();
  for (int i = 0; i < gamma; ++i) {
    const int extra = partition.class_size(i) - counts[static_cast<std::size_t>(i)];
    for (int t = 0; t < extra; ++t, ++next)
      for (VertexId v : partition.classes[static_cast<std::size_t>(i)])
        edges.push_back(Edge{v, next, 0, Color::Uncolored});
  }
  const Graph augmented(g.vertex_count() + killers, std::move(edges));
  auto pm = max_weight_perfect_matching(augmented);
  if (!pm) return std::nullopt;
  std::vector<EdgeId> kept;
  for (EdgeId id : pm->edges)
    if (id < g.edge_count()) kept.push_back(id);
  return make_matching(std::move(kept));
}

TypeCounts band_counts_to_type_counts(const BandCounts& bands, int gamma) {
  TypeCounts c(static_cast<std::size_t>(gamma), 0);
  for (const BandCount& b : bands) {
    if (b.pair.a == b.pair.b) {
      c[static_cast<std::size_t>(b.pair.a)] += 2 * b.edges;
    } else {
      c[static_cast<std::size_t>(b.pair.a)] += b.edges;
      c[static_cast<std::size_t>(b.pair.b)] += b.edges;
    }
  }
  return c;
}

std::vector<int> geometric_levels(int k, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  if (k < 1) throw InputError("geometric_levels: k must be positive");
  const long double alpha = 1.0L / (1.0L - static_cast<long double>(epsilon));
  std::vector<int> levels{0, 1};
  for (int j = 1;; ++j) {
    const long double level = std::ceil(std::pow(alpha, static_cast<long double>(j)));
    if (level > static_cast<long double>(k)) break;
    levels.push_back(static_cast<int>(level));
  }
  levels.push_back(k);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

std::uint64_t count_bounded_compositions(std::span<const int> caps, int total) {
  if (total < 0) return 0;
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(total) + 1, 0);
  ways[0] = 1;
  for (int cap : caps) {
    std::vector<std::uint64_t> next(ways.size(), 0);
    for (int s = 0; s <= total; ++s)
      for (int c = 0; c <= cap && c <= s; ++c) next[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - c)];
    ways = std::move(next);
  }
  return ways[static_cast<std::size_t>(total)];
}

namespace {

void check_k(const Graph& g, int k) {
  if (g.vertex_count() % 2 != 0) throw InputError("graph has an odd number of vertices");
  if (k < 0 || 2 * k > g.vertex_count()) throw InputError("k must satisfy 0 <= k <= n");
}

// One outer iteration shared by the exact and approximate loops: solve
// TC-MWM for the counts, extend through a PM of the residual graph, and keep
// the result if it beats the incumbent.
void evaluate_counts(const Graph& g, const TypePartition& partition, std::span<const int> counts,
                     int k, NdResult& best) {
  auto partial = tc_mwm(g, partition, counts);
  if (!partial) return;
  ++best.stats.tc_feasible;
  const auto covered = covered_vertices(g, *partial);
  std::vector<VertexId> rest;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (!covered[static_cast<std::size_t>(v)]) rest.push_back(v);
  const InducedSubgraph residual = induced_subgraph(g, rest);
  auto extension = max_weight_perfect_matching(residual.graph);
  if (!extension) return;
  ++best.stats.extendible;
  std::vector<EdgeId> all = partial->edges;
  const Matching lifted = residual.lift(*extension);
  all.insert(all.end(), lifted.edges.begin(), lifted.edges.end());
  Matching candidate = make_matching(std::move(all));
  const Weight value = topk_value(g, candidate, static_cast<std::size_t>(k));
  if (!best.matching || value > best.objective) {
    best.objective = value;
    best.matching = std::move(candidate);
  }
}

}  // namespace

NdResult tkpm_exact_nd(const Graph& g, int k) {
  return tkpm_exact_nd(g, compute_type_partition(g), k);
}

NdResult tkpm_exact_nd(const Graph& g, const TypePartition& partition, int k) {
  check_k(g, k);
  NdResult best;
  best.stats.gamma = partition.gamma();
  if (!has_perfect_matching(g)) return best;

  const int gamma = partition.gamma();
  std::vector<int> caps(static_cast<std::size_t>(gamma));
  for (int i = 0; i < gamma; ++i) caps[static_cast<std::size_t>(i)] = std::min(2 * k, partition.class_size(i));
  std::vector<int> counts(static_cast<std::size_t>(gamma), 0);
  std::vector<int> suffix_cap(static_cast<std::size_t>(gamma) + 1, 0);
  for (int i = gamma - 1; i >= 0; --i)
    suffix_cap[static_cast<std::size_t>(i)] = suffix_cap[static_cast<std::size_t>(i) + 1] + caps[static_cast<std::size_t>(i)];

  std::function<void(int, int)> enumerate = [&](int i, int remaining) {
    if (i == gamma) {
      if (remaining != 0) return;
      ++best.stats.tuples_visited;
      evaluate_counts(g, partition, counts, k, best);
      return;
    }
    const int hi = std::min(caps[static_cast<std::size_t>(i)], remaining);
    for (int c = 0; c <= hi; ++c) {
      if (remaining - c > suffix_cap[static_cast<std::size_t>(i) + 1]) continue;
      counts[static_cast<std::size_t>(i)] = c;
      enumerate(i + 1, remaining - c);
    }
    counts[static_cast<std::size_t>(i)] = 0;
  };
  enumerate(0, 2 * k);
  return best;
}

NdResult tkpm_approx_nd(const Graph& g, int k, double epsilon) {
  return tkpm_approx_nd(g, compute_type_partition(g), k, epsilon);
}

NdResult tkpm_approx_nd(const Graph& g, const TypePartition& partition, int k, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  check_k(g, k);
  if (k == 0) return tkpm_exact_nd(g, partition, 0);
  NdResult best;
  best.stats.gamma = partition.gamma();
  const std::vector<int> levels = geometric_levels(k, epsilon);
  best.stats.levels = levels.size();

  // Pairs that can host edges at all; other pairs are structurally zero.
  BandCounts bands;
  for (int a = 0; a < partition.gamma(); ++a)
    for (int b = a; b < partition.gamma(); ++b)
      if (partition.adjacent[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])
        bands.push_back(BandCount{ClassPair{a, b}, 0});
  best.stats.band_coordinates = bands.size();
  if (!has_perfect_matching(g)) return best;

  std::function<void(std::size_t, int)> enumerate = [&](std::size_t i, int remaining) {
    if (i == bands.size()) {
      ++best.stats.tuples_visited;
      const TypeCounts counts = band_counts_to_type_counts(bands, partition.gamma());
      for (int c = 0; c < partition.gamma(); ++c)
        if (counts[static_cast<std::size_t>(c)] > partition.class_size(c)) return;
      evaluate_counts(g, partition, counts, k, best);
      return;
    }
    for (int level : levels) {
      if (level > remaining) break;
      bands[i].edges = level;
      enumerate(i + 1, remaining - level);
    }
    bands[i].edges = 0;
  };
  enumerate(0, k);
  return best;
}

}  // namespace tkpm
