#include <doctest.h>

#include "support/generators.hpp"
#include "support/reference.hpp"
#include "tkpm/matching_engine.hpp"
#include "tkpm/nd_solver.hpp"
#include "tkpm/oracle.hpp"
#include "tkpm/recursive_solver.hpp"

using namespace tkpm;

namespace {

std::vector<BlobId> identity(int n) {
  std::vector<BlobId> o(static_cast<std::size_t>(n));
  std::iota(o.begin(), o.end(), 0);
  return o;
}

RecursionOptions small_base(int limit) {
  RecursionOptions o;
  o.base_blob_limit = limit;
  return o;
}

}  // namespace

TEST_CASE("band threshold") {
  CHECK(band_threshold(16, 0.5) == 4);
  CHECK(band_threshold(17, 0.5) == 5);
  CHECK(band_threshold(1, 0.5) == 1);
  CHECK(band_threshold(8, 12.0 / 13.0) == 7);
  CHECK(band_threshold(100, 1.0) == 100);
}

TEST_CASE("tight set enumeration") {
  const auto sets = enumerate_tight_sets(3, 2);
  CHECK(sets.size() == 7);
  CHECK(sets.front().empty());
  CHECK(sets[1] == std::vector<BandId>{0});
  CHECK(sets.back() == std::vector<BandId>{1, 2});
  CHECK(enumerate_tight_sets(0, 3).size() == 1);
  CHECK(enumerate_tight_sets(4, 0).size() == 1);
}

TEST_CASE("base case delegates to the exact solver") {
  gen::Rng rng(2);
  const Prototype p = gen::path_or_cycle(rng, 4, false, 3);
  Prototype q = p;
  gen::fix_sizes(q, 12);
  const auto b = blow_up(q, UniformWeight{40, 5});
  for (int k = 0; k <= b.graph.vertex_count() / 2; ++k) {
    const auto r = bbb(b.graph, q, *q.ordering, 1, {}, k, 0);
    const auto e = tkpm_exact_nd(b.graph, k);
    REQUIRE(r.matching.has_value() == e.matching.has_value());
    CHECK(r.objective == e.objective);
    CHECK(r.stats.base_cases == (e.matching ? 1u : 0u));
  }
}

TEST_CASE("heavy edge example on a path of six pairs") {
  Prototype p;
  for (int i = 0; i < 6; ++i) p.blobs.push_back(Blob{2, ClassKind::Independent});
  for (int i = 0; i + 1 < 6; ++i) p.bands.push_back(Band{i, i + 1});
  const auto plain = blow_up(p, ConstantWeight{1});
  for (int heavy = 0; heavy < plain.graph.edge_count(); ++heavy) {
    std::vector<Weight> w(static_cast<std::size_t>(plain.graph.edge_count()), 1);
    w[static_cast<std::size_t>(heavy)] = 50;
    const auto b = blow_up(p, ExplicitWeights{w});
    const auto r = tkpm_recursive(b.graph, p, identity(6), 1, small_base(0));
    const auto truth = oracle::brute_force_tkpm(b.graph, 1);
    REQUIRE(truth);
    CHECK(r.objective == truth->objective);
    bool through = false;
    oracle::for_each_perfect_matching(b.graph, [&](std::span<const EdgeId> m) {
      through = through || std::find(m.begin(), m.end(), heavy) != m.end();
      return !through;
    });
    CHECK((r.objective == 50) == through);
  }
}

TEST_CASE("prototype without bands reduces to the base case") {
  Prototype p;
  for (int i = 0; i < 3; ++i) p.blobs.push_back(Blob{2, ClassKind::Clique});
  const auto b = blow_up(p, UniformWeight{9, 1});
  const auto r = tkpm_recursive(b.graph, p, identity(3), 2);
  CHECK(r.stats.tight_sets == 1);
  CHECK(r.stats.base_cases == 1);
  CHECK(r.objective == tkpm_exact_nd(b.graph, 2).objective);
}

TEST_CASE("recursion exercises separators and matches the oracle") {
  gen::Rng rng(19);
  int split = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const bool cycle = trial % 3 == 0;
    Prototype p = gen::path_or_cycle(rng, gen::uniform(rng, 7, 8), cycle, 2);
    gen::fix_sizes(p, 16);
    if (p.total_size() % 2 != 0) continue;
    const auto b = blow_up(p, UniformWeight{100, rng()});
    const int n = b.graph.vertex_count() / 2;
    const int k = gen::uniform(rng, 0, std::min(n, 3));
    const auto r = tkpm_recursive(b.graph, p, *p.ordering, k, small_base(0));
    const auto truth = ref::best_topk(b.graph, k);
    REQUIRE(r.matching.has_value() == truth.has_value());
    if (truth) {
      CHECK(r.objective == *truth);
      CHECK(is_perfect_matching(b.graph, *r.matching));
    }
    split += r.stats.separators > 0;
  }
  CHECK(split > 0);
}

TEST_CASE("recursive solver rejects bad input") {
  Prototype p;
  p.blobs = {Blob{1, ClassKind::Independent}, Blob{2, ClassKind::Independent}};
  p.bands = {Band{0, 1}};
  const auto b = blow_up(p);
  CHECK_THROWS_AS(tkpm_recursive(b.graph, p, identity(2), 1), InputError);
  Prototype q = p;
  q.blobs[0].size = 2;
  CHECK_THROWS_AS(tkpm_recursive(b.graph, q, identity(2), 1), InputError);
}

TEST_CASE("exact matching recursion examples") {
  Prototype p;
  p.blobs = {Blob{2, ClassKind::Independent}, Blob{2, ClassKind::Independent}};
  p.bands = {Band{0, 1}};
  const auto blue = blow_up(p, ConstantWeight{1}, ExplicitColors{{Color::Blue, Color::Blue, Color::Blue, Color::Blue}});
  CHECK(em_recursive(blue.graph, p, identity(2), 0, brute_force_em_base()).matching);
  CHECK_FALSE(em_recursive(blue.graph, p, identity(2), 1, brute_force_em_base()).matching);

  Prototype two;
  two.blobs = {Blob{2, ClassKind::Clique}, Blob{2, ClassKind::Clique}};
  const auto rb = blow_up(two, ConstantWeight{1}, ExplicitColors{{Color::Red, Color::Blue}});
  const auto r = em_recursive(rb.graph, two, identity(2), 1, brute_force_em_base());
  REQUIRE(r.matching);
  CHECK(red_count(rb.graph, *r.matching) == 1);
  CHECK_THROWS_AS(em_recursive(blow_up(p).graph, p, identity(2), 0, brute_force_em_base()), InputError);
}

TEST_CASE("exact matching recursion agrees with enumeration") {
  gen::Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    Prototype p = gen::path_or_cycle(rng, gen::uniform(rng, 3, 8), trial % 2 == 0, 2);
    gen::fix_sizes(p, 14);
    if (p.total_size() % 2 != 0) continue;
    const auto b = blow_up(p, ConstantWeight{1}, RandomColors{0.5, rng()});
    for (int k = 0; k <= b.graph.vertex_count() / 2; ++k) {
      const auto r = em_recursive(b.graph, p, *p.ordering, k, brute_force_em_base(), small_base(trial % 2 ? 0 : 16));
      CHECK(r.matching.has_value() == ref::has_em(b.graph, k));
      if (r.matching) {
        CHECK(is_perfect_matching(b.graph, *r.matching));
        CHECK(red_count(b.graph, *r.matching) == k);
      }
    }
  }
}

TEST_CASE("exact matching recursion finds the red count of some perfect matching") {
  gen::Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    Prototype p = gen::path_or_cycle(rng, gen::uniform(rng, 3, 7), false, 2);
    gen::fix_sizes(p, 14);
    if (p.total_size() % 2 != 0) continue;
    const auto colored = blow_up(p, ConstantWeight{1}, RandomColors{0.5, rng()});
    std::vector<Edge> edges(colored.graph.edges().begin(), colored.graph.edges().end());
    for (auto& e : edges) e.w = e.color == Color::Red ? 1 : 0;
    const Graph red_weight(colored.graph.vertex_count(), edges);
    const auto m = max_weight_perfect_matching(red_weight);
    if (!m) continue;
    const int k = red_count(colored.graph, *m);
    CHECK(em_recursive(colored.graph, p, *p.ordering, k, brute_force_em_base(), small_base(0)).matching);
  }
}
