#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tkpm/blowup.hpp"
#include "tkpm/graph.hpp"

namespace tkpm {

// Nonnegative split of a budget k over the separator edges, the separator
// blob interiors and the two sides: sums to k.
struct RecursionBudget {
  int separator_edges = 0;
  int blobs = 0;
  int left = 0;
  int right = 0;

  int total() const { return separator_edges + blobs + left + right; }
};

struct RecursionOptions {
  // Prototypes with at most this many blobs go straight to the base case.
  int base_blob_limit = 16;
  // Per-band cap on separator edges. 0 selects ceil(n^threshold_alpha).
  std::int64_t threshold = 0;
  // Exponent for the default threshold; 0 selects 1/2 for top-k and 12/13
  // for exact matching.
  double threshold_alpha = 0.0;
};

struct RecursionStats {
  std::uint64_t tight_sets = 0;     // guesses tried by the wrapper
  std::uint64_t nodes = 0;          // recursion nodes entered
  std::uint64_t base_cases = 0;     // nodes delegated to the base solver
  std::uint64_t separators = 0;     // nodes that split on a loose separator
  std::uint64_t edge_sets = 0;      // separator edge sets enumerated
  std::uint64_t budgets = 0;        // budget tuples combined
  std::uint64_t base_tuples = 0;    // outer tuples visited inside base-case calls
  std::int64_t threshold = 0;
  int bandwidth = 0;
};

struct RecursiveResult {
  std::optional<Matching> matching;
  Weight objective = 0;  // top-k value, or red count for exact matching
  RecursionStats stats;
};

// Smallest integer >= n^alpha (exact for alpha == 1/2).
std::int64_t band_threshold(int n, double alpha);

// Top-k perfect matching on the blow-up `g` of `p` under the assumption that
// bands outside `tight` carry at most `threshold` edges of an optimum.
RecursiveResult bbb(const Graph& g, const Prototype& p, const std::vector<BlobId>& ordering, int phi,
                    const std::vector<BandId>& tight, int k, std::int64_t threshold,
                    const RecursionOptions& options = {});

// Every candidate tight set of size <= floor(n / threshold) is tried.
RecursiveResult tkpm_recursive(const Graph& g, const Prototype& p, const std::vector<BlobId>& ordering,
                               int k, const RecursionOptions& options = {});

// Exact-matching base case: some PM of the given graph with exactly k red
// edges, or nullopt.
using EmBaseSolver = std::function<std::optional<Matching>(const Graph&, int)>;

// Default base case (exhaustive enumeration).
EmBaseSolver brute_force_em_base();

RecursiveResult em_recursive(const Graph& g, const Prototype& p, const std::vector<BlobId>& ordering,
                             int k, const EmBaseSolver& base, const RecursionOptions& options = {});

// All subsets of {0..band_count-1} with at most max_size elements, by size
// then lexicographically.
std::vector<std::vector<BandId>> enumerate_tight_sets(int band_count, int max_size);

}  // namespace tkpm
