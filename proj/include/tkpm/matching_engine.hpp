#pragma once

#include <optional>

#include "tkpm/graph.hpp"

namespace tkpm {

// Edmonds' blossom algorithm for maximum-cardinality matching in a general
// graph. O(V^3).
Matching max_cardinality_matching(const Graph& g);

bool has_perfect_matching(const Graph& g);

// Maximum-weight perfect matching, or nullopt when the graph has none.
//
// Every weight is shifted by n * max_weight + 1 so that a maximum-weight
// matching on the shifted graph is necessarily of maximum cardinality; the
// result is accepted only if it is perfect. Throws InputError when the
// shifted weights could overflow 64-bit dual arithmetic.
std::optional<Matching> max_weight_perfect_matching(const Graph& g);

}  // namespace tkpm
