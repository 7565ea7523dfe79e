#include <doctest.h>

#include "support/generators.hpp"
#include "support/reference.hpp"
#include "tkpm/matching_engine.hpp"

using namespace tkpm;

TEST_CASE("max cardinality on small shapes") {
  const Graph c4(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
  CHECK(max_cardinality_matching(c4).size() == 2);
  CHECK(has_perfect_matching(c4));
  const Graph star(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
  CHECK(max_cardinality_matching(star).size() == 1);
  CHECK_FALSE(has_perfect_matching(star));
  CHECK(has_perfect_matching(Graph(0, {})));
  CHECK_FALSE(has_perfect_matching(Graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}})));
}

TEST_CASE("max cardinality matches subset enumeration") {
  gen::Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = gen::uniform(rng, 1, 10);
    const Graph g = gen::random_graph(rng, n, n <= 6 ? 0.5 : 0.25, 9);
    if (g.edge_count() > 20) continue;
    const Matching m = max_cardinality_matching(g);
    REQUIRE(is_matching(g, m.edges));
    CHECK(static_cast<int>(m.size()) == ref::max_matching_size(g));
  }
}

TEST_CASE("max weight perfect matching examples") {
  const Graph k2(2, {{0, 1, 4}});
  const auto one = max_weight_perfect_matching(k2);
  REQUIRE(one);
  CHECK(total_weight(k2, *one) == 4);

  const Graph c4(4, {{0, 1, 1}, {1, 2, 2}, {2, 3, 1}, {3, 0, 2}});
  const auto m = max_weight_perfect_matching(c4);
  REQUIRE(m);
  CHECK(total_weight(c4, *m) == 4);

  CHECK_FALSE(max_weight_perfect_matching(Graph(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}})));
  CHECK_FALSE(max_weight_perfect_matching(Graph(2, {})));
  CHECK(max_weight_perfect_matching(Graph(0, {}))->empty());
}

TEST_CASE("max weight perfect matching handles zero weights") {
  const Graph g(4, {{0, 1, 0}, {2, 3, 0}, {0, 2, 0}});
  const auto m = max_weight_perfect_matching(g);
  REQUIRE(m);
  CHECK(is_perfect_matching(g, *m));
}

TEST_CASE("max weight perfect matching matches pairing enumeration") {
  gen::Rng rng(99);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 * gen::uniform(rng, 1, 5);
    const Graph g = gen::random_graph(rng, n, gen::uniform(rng, 3, 9) / 10.0, 100);
    const auto m = max_weight_perfect_matching(g);
    const auto best = ref::best_pm_weight(g);
    REQUIRE(m.has_value() == best.has_value());
    if (m) {
      CHECK(is_perfect_matching(g, *m));
      CHECK(total_weight(g, *m) == *best);
    }
  }
}

TEST_CASE("max weight perfect matching is deterministic") {
  gen::Rng rng(3);
  const Graph g = gen::random_graph(rng, 12, 0.6, 5);
  const auto a = max_weight_perfect_matching(g);
  const auto b = max_weight_perfect_matching(g);
  REQUIRE(a.has_value() == b.has_value());
  if (a) CHECK(total_weight(g, *a) == total_weight(g, *b));
}

TEST_CASE("weight shift overflow is rejected") {
  const Weight huge = Weight{1} << 60;
  const Graph g(4, {{0, 1, huge}, {2, 3, huge}});
  CHECK_THROWS_AS(max_weight_perfect_matching(g), InputError);
}
