#include <doctest.h>

#include <random>

#include "support/generators.hpp"
#include "support/reference.hpp"
#include "tkpm/kernels.hpp"

using namespace tkpm;
namespace k = tkpm::kernels;

TEST_CASE("scalar and avx2 xor-popcount agree") {
  std::mt19937_64 rng(7);
  for (std::size_t words : {0u, 1u, 3u, 4u, 5u, 8u, 13u, 64u, 257u}) {
    std::vector<std::uint64_t> a(words), b(words);
    for (int trial = 0; trial < 20; ++trial) {
      for (auto& x : a) x = rng();
      for (auto& x : b) x = trial % 3 == 0 ? ~std::uint64_t{0} : rng();
      const auto scalar = k::xor_popcount_scalar(a.data(), b.data(), words);
      std::uint64_t expect = 0;
      for (std::size_t i = 0; i < words; ++i) expect += static_cast<std::uint64_t>(__builtin_popcountll(a[i] ^ b[i]));
      CHECK(scalar == expect);
#ifdef TKPM_HAVE_AVX2_KERNELS
      if (k::cpu_has_avx2()) CHECK(k::xor_popcount_avx2(a.data(), b.data(), words) == scalar);
#endif
    }
  }
}

TEST_CASE("isa selection can be forced and reset") {
  k::force_isa(k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  CHECK(k::isa_name(k::Isa::Scalar) == "scalar");
  k::force_isa(k::Isa::Avx2);
  CHECK(k::active_isa() == (k::cpu_has_avx2() ? k::Isa::Avx2 : k::Isa::Scalar));
  k::reset_isa();
  CHECK(k::active_isa() == (k::cpu_has_avx2() ? k::Isa::Avx2 : k::Isa::Scalar));
}

TEST_CASE("bit adjacency and twin test under both variants") {
  gen::Rng rng(17);
  for (auto isa : {k::Isa::Scalar, k::Isa::Avx2}) {
    k::force_isa(isa);
    for (int trial = 0; trial < 60; ++trial) {
      const int n = gen::uniform(rng, 1, 300);
      const Graph g = trial % 2 ? gen::random_graph(rng, n, 0.1, 1)
                                : blow_up(gen::random_prototype(rng, gen::uniform(rng, 1, 6), 6, 0.5, 40)).graph;
      const k::BitAdjacency adj(g);
      const auto matrix = ref::edge_matrix(g);
      CHECK(adj.words_per_row() % 4 == 0);
      for (int s = 0; s < 50; ++s) {
        const int u = gen::uniform(rng, 0, g.vertex_count() - 1);
        const int v = gen::uniform(rng, 0, g.vertex_count() - 1);
        if (u == v) continue;
        CHECK(adj.test(u, v) == g.has_edge(u, v));
        CHECK(k::are_twins(adj, u, v) == ref::twins(matrix, u, v));
      }
    }
  }
  k::reset_isa();
}
