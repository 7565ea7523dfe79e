#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tkpm/graph.hpp"

namespace tkpm {

enum class ClassKind { Clique, Independent };

// Partition into neighborhood types: u and v share a class iff
// N(u) \ {v} == N(v) \ {u}. The relation is an equivalence, and its classes
// form the unique minimum partition, so no separate minimization is needed.
struct TypePartition {
  std::vector<std::vector<VertexId>> classes;
  std::vector<int> class_of;
  // Singleton classes are reported as Independent (they host no internal edge).
  std::vector<ClassKind> kind;
  // adjacent[i][j] for i != j: every V_i x V_j pair is an edge.
  // adjacent[i][i]: class i is a clique with at least two members.
  std::vector<std::vector<bool>> adjacent;

  int gamma() const { return static_cast<int>(classes.size()); }
  int class_size(int i) const { return static_cast<int>(classes[static_cast<std::size_t>(i)].size()); }
  bool is_clique(int i) const { return kind[static_cast<std::size_t>(i)] == ClassKind::Clique; }
};

TypePartition compute_type_partition(const Graph& g);

// Required number of covered vertices per class.
using TypeCounts = std::vector<int>;

struct ClassPair {
  int a = 0;  // a <= b; a == b denotes edges inside a clique class
  int b = 0;
  friend bool operator==(const ClassPair&, const ClassPair&) = default;
};

struct BandCount {
  ClassPair pair;
  int edges = 0;
};
using BandCounts = std::vector<BandCount>;

// Maximum-weight matching covering exactly c[i] vertices of class i, built by
// attaching |V_i| - c[i] zero-weight "killer" vertices to every member of V_i
// and solving maximum-weight perfect matching. nullopt when c is unrealizable.
std::optional<Matching> tc_mwm(const Graph& g, const TypePartition& partition,
                               std::span<const int> counts);

// Vertices covered per class by an edge-count assignment.
TypeCounts band_counts_to_type_counts(const BandCounts& bands, int gamma);

// {0, 1, ceil(a), ceil(a^2), ...} with a = 1/(1-eps), capped and closed by k.
std::vector<int> geometric_levels(int k, double epsilon);

// Number of tuples c with 0 <= c[i] <= caps[i] and sum == total.
std::uint64_t count_bounded_compositions(std::span<const int> caps, int total);

struct NdStats {
  int gamma = 0;
  std::uint64_t tuples_visited = 0;   // outer-loop iterations
  std::uint64_t tc_feasible = 0;      // tuples whose TC-MWM instance had a solution
  std::uint64_t extendible = 0;       // ... and whose residual graph had a PM
  std::size_t levels = 0;             // |A| for the approximation scheme
  std::size_t band_coordinates = 0;   // class pairs enumerated by the approximation scheme
};

struct NdResult {
  std::optional<Matching> matching;  // perfect matching, or nullopt if none exists
  Weight objective = 0;
  NdStats stats;
};

// Exact top-k perfect matching, FPT in k and the number of types. Requires
// 0 <= k <= |V|/2. Per-class counts range over [0, min(2k, |V_i|)].
NdResult tkpm_exact_nd(const Graph& g, int k);
NdResult tkpm_exact_nd(const Graph& g, const TypePartition& partition, int k);

// (1 - eps)-approximation: edge counts per class pair are restricted to
// geometric levels and may sum to at most k.
NdResult tkpm_approx_nd(const Graph& g, int k, double epsilon);
NdResult tkpm_approx_nd(const Graph& g, const TypePartition& partition, int k, double epsilon);

}  // namespace tkpm
