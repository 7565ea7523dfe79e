#include <doctest.h>

#include "support/generators.hpp"
#include "support/reference.hpp"
#include "tkpm/oracle.hpp"

using namespace tkpm;
using namespace tkpm::oracle;

TEST_CASE("perfect matching enumeration") {
  const Graph k4(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
  int count = 0;
  for_each_perfect_matching(k4, [&](std::span<const EdgeId> m) {
    CHECK(m.size() == 2);
    ++count;
    return true;
  });
  CHECK(count == 3);
  int stopped = 0;
  for_each_perfect_matching(k4, [&](std::span<const EdgeId>) { return ++stopped < 2; });
  CHECK(stopped == 2);
  CHECK_THROWS_AS(for_each_perfect_matching(Graph(22, {}), [](std::span<const EdgeId>) { return true; }),
                  InputError);
}

TEST_CASE("brute-force top-k examples") {
  const Graph c4(4, {{0, 1, 1}, {1, 2, 2}, {2, 3, 1}, {3, 0, 2}});
  const auto r = brute_force_tkpm(c4, 2);
  REQUIRE(r);
  CHECK(r->objective == 4);
  CHECK_FALSE(brute_force_tkpm(Graph(2, {}), 1));
  CHECK_THROWS_AS(brute_force_tkpm(Graph(4, {}), 1, 2), InputError);
}

TEST_CASE("brute-force exact matching examples") {
  const Graph rb(4, {{0, 1, 1, Color::Red}, {2, 3, 1, Color::Blue}});
  CHECK(brute_force_em(rb, 1));
  CHECK_FALSE(brute_force_em(rb, 0));
  CHECK_FALSE(brute_force_em(rb, 2));
  const Graph blue(4, {{0, 1, 1, Color::Blue}, {2, 3, 1, Color::Blue}, {0, 2, 1, Color::Blue}, {1, 3, 1, Color::Blue}});
  CHECK(brute_force_em(blue, 0));
  CHECK_THROWS_AS(brute_force_em(Graph(2, {{0, 1, 1}}), 0), InputError);
}

TEST_CASE("brute-force top-k is invariant under relabeling") {
  gen::Rng rng(4);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 2 * gen::uniform(rng, 1, 5);
    const Graph g = gen::random_graph(rng, n, 0.6, 50);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const Graph h = gen::relabel(g, perm);
    for (int k = 0; k <= n / 2; ++k) {
      const auto a = brute_force_tkpm(g, k);
      const auto b = brute_force_tkpm(h, k);
      REQUIRE(a.has_value() == b.has_value());
      if (a) CHECK(a->objective == b->objective);
      const auto r = ref::best_topk(g, k);
      REQUIRE(a.has_value() == r.has_value());
      if (a) CHECK(a->objective == *r);
    }
  }
}

TEST_CASE("randomized exact matching examples") {
  const Graph rb(4, {{0, 1, 1, Color::Red}, {2, 3, 1, Color::Blue}});
  const auto yes = randomized_em(rb, 1, 20, 1);
  CHECK(yes.decision == EmDecision::Yes);
  CHECK(yes.trials_run >= 1);
  for (int k : {0, 2}) CHECK(randomized_em(rb, k, 20, 1).decision == EmDecision::ProbablyNo);
  CHECK(randomized_em(Graph(2, {}), 0, 5, 1).decision == EmDecision::ProbablyNo);
  CHECK(randomized_em(Graph(0, {}), 0, 5, 1).decision == EmDecision::Yes);
  CHECK_THROWS_AS(randomized_em(Graph(2, {{0, 1, 1}}), 0, 5, 1), InputError);
}

TEST_CASE("randomized exact matching is one-sided and detects yes instances") {
  gen::Rng rng(6);
  int yes_instances = 0, detected = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 * gen::uniform(rng, 1, 6);
    const Graph g = gen::random_graph(rng, n, 0.5, 1, true);
    for (int k = 0; k <= n / 2; ++k) {
      const bool truth = brute_force_em(g, k).has_value();
      CHECK(truth == ref::has_em(g, k));
      const auto r = randomized_em(g, k, 20, static_cast<std::uint64_t>(trial * 31 + k));
      if (!truth) CHECK(r.decision == EmDecision::ProbablyNo);
      if (truth) {
        ++yes_instances;
        detected += r.decision == EmDecision::Yes;
      }
    }
  }
  CHECK(detected == yes_instances);
}

TEST_CASE("randomized exact matching is deterministic under a seed") {
  gen::Rng rng(66);
  const Graph g = gen::random_graph(rng, 10, 0.5, 1, true);
  for (int k = 0; k <= 5; ++k) {
    const auto a = randomized_em(g, k, 3, 123);
    const auto b = randomized_em(g, k, 3, 123);
    CHECK(a.decision == b.decision);
    CHECK(a.trials_run == b.trials_run);
  }
}
