#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tkpm/graph.hpp"

// Bit-row kernels used by the twin (neighborhood type) test. A scalar
// reference and an AVX2 variant are compiled; the variant is picked once at
// runtime from CPUID.
namespace tkpm::kernels {

enum class Isa { Scalar, Avx2 };

using XorPopcountFn = std::uint64_t (*)(const std::uint64_t*, const std::uint64_t*, std::size_t);

std::uint64_t xor_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t words);
#if defined(__x86_64__) || defined(_M_X64)
#define TKPM_HAVE_AVX2_KERNELS 1
std::uint64_t xor_popcount_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t words);
#endif

bool cpu_has_avx2();
Isa active_isa();
std::string_view isa_name(Isa isa);
// Forces a variant (tests and benchmarks). Requesting Avx2 on a CPU without
// it falls back to Scalar.
void force_isa(Isa isa);
void reset_isa();

// Number of bit positions where the two rows differ.
std::uint64_t xor_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

// Dense adjacency matrix, one bit row per vertex, rows padded to a multiple
// of four words.
class BitAdjacency {
 public:
  explicit BitAdjacency(const Graph& g);

  std::size_t words_per_row() const { return words_; }
  std::span<const std::uint64_t> row(VertexId v) const {
    return {bits_.data() + static_cast<std::size_t>(v) * words_, words_};
  }
  bool test(VertexId u, VertexId v) const {
    return (row(u)[static_cast<std::size_t>(v) / 64] >> (static_cast<std::size_t>(v) % 64)) & 1u;
  }

 private:
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// N(u) \ {v} == N(v) \ {u}
bool are_twins(const BitAdjacency& adj, VertexId u, VertexId v);

}  // namespace tkpm::kernels
