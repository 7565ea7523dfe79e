#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "tkpm/graph.hpp"

// Ground-truth solvers: exhaustive enumeration for small graphs and the
// one-sided randomized algebraic test for Exact Matching.
namespace tkpm::oracle {

inline constexpr int kDefaultMaxVertices = 20;

// Calls `visit` with the edge ids of every perfect matching, obtained by
// pairing the lowest-id unmatched vertex with each available neighbor.
// Returning false from `visit` stops the enumeration.
void for_each_perfect_matching(const Graph& g, const std::function<bool(std::span<const EdgeId>)>& visit,
                               int max_vertices = kDefaultMaxVertices);

struct TkpmAnswer {
  Weight objective = 0;
  Matching matching;
};

std::optional<TkpmAnswer> brute_force_tkpm(const Graph& g, int k, int max_vertices = kDefaultMaxVertices);

// Some perfect matching with exactly k red edges. All edges must be colored.
std::optional<Matching> brute_force_em(const Graph& g, int k, int max_vertices = kDefaultMaxVertices);

enum class EmDecision { Yes, ProbablyNo };

struct RandomizedEmResult {
  EmDecision decision = EmDecision::ProbablyNo;
  int trials_run = 0;
};

// Isolation-lemma test. Each trial draws edge weights w_e uniformly from
// [1, 2|E|], builds the skew-symmetric matrix with entries +-2^{w_e} y^{[e red]},
// computes its determinant in Z[y] by fraction-free elimination, takes the
// exact square root to recover the Pfaffian polynomial, and answers Yes if the
// coefficient of y^k is nonzero. Yes is always correct; ProbablyNo is wrong
// with probability at most 2^-trials.
RandomizedEmResult randomized_em(const Graph& g, int k, int trials, std::uint64_t seed);

}  // namespace tkpm::oracle
