#include "tkpm/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <bit>

namespace tkpm::kernels {
namespace {

XorPopcountFn detect() {
#ifdef TKPM_HAVE_AVX2_KERNELS
  if (cpu_has_avx2()) return &xor_popcount_avx2;
#endif
  return &xor_popcount_scalar;
}

std::atomic<XorPopcountFn>& active_fn() {
  static std::atomic<XorPopcountFn> fn{detect()};
  return fn;
}

}  // namespace

std::uint64_t xor_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t words) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < words; ++i) count += static_cast<std::uint64_t>(std::popcount(a[i] ^ b[i]));
  return count;
}

bool cpu_has_avx2() {
#if defined(TKPM_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() {
  return active_fn().load() == &xor_popcount_scalar ? Isa::Scalar : Isa::Avx2;
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) {
#ifdef TKPM_HAVE_AVX2_KERNELS
  if (isa == Isa::Avx2 && cpu_has_avx2()) {
    active_fn().store(&xor_popcount_avx2);
    return;
  }
#endif
  (void)isa;
  active_fn().store(&xor_popcount_scalar);
}

void reset_isa() { active_fn().store(detect()); }

std::uint64_t xor_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return active_fn().load(std::memory_order_relaxed)(a.data(), b.data(), std::min(a.size(), b.size()));
}

BitAdjacency::BitAdjacency(const Graph& g) {
  const std::size_t n = static_cast<std::size_t>(g.vertex_count());
  words_ = ((n + 63) / 64 + 3) / 4 * 4;
  if (words_ == 0) words_ = 4;
  bits_.assign(n * words_, 0);
  for (const Edge& e : g.edges()) {
    const auto u = static_cast<std::size_t>(e.u);
    const auto v = static_cast<std::size_t>(e.v);
    bits_[u * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
    bits_[v * words_ + u / 64] |= std::uint64_t{1} << (u % 64);
  }
}

bool are_twins(const BitAdjacency& adj, VertexId u, VertexId v) {
  if (u == v) return true;
  // The rows differ at positions u and v exactly when u and v are adjacent.
  const std::uint64_t expected = adj.test(u, v) ? 2 : 0;
  return xor_popcount(adj.row(u), adj.row(v)) == expected;
}

}  // namespace tkpm::kernels
