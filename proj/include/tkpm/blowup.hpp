#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "tkpm/graph.hpp"
#include "tkpm/nd_solver.hpp"

namespace tkpm {

using BlobId = int;
using BandId = int;

struct Blob {
  int size = 1;
  ClassKind kind = ClassKind::Independent;
};

struct Band {
  BlobId a = 0;
  BlobId b = 0;
};

// The graph before blow-up: blobs are its vertices, bands its edges.
struct Prototype {
  std::vector<Blob> blobs;
  std::vector<Band> bands;
  std::optional<std::vector<BlobId>> ordering;  // bandwidth witness, if known

  int blob_count() const { return static_cast<int>(blobs.size()); }
  int total_size() const;
  // Throws InputError on self-loops, duplicate bands, bad ids or sizes.
  void validate() const;
  // Blobs adjacent to each blob.
  std::vector<std::vector<BlobId>> neighbors() const;
};

// Where an edge of the blown-up graph came from.
struct EdgeOrigin {
  bool intra_blob = false;
  int id = 0;  // BandId, or BlobId when intra_blob
};

struct BlowupMap {
  std::vector<BlobId> blob_of;          // per vertex
  std::vector<EdgeOrigin> origin;       // per edge
  std::vector<std::vector<VertexId>> members;  // per blob, ascending
};

struct ConstantWeight {
  Weight value = 1;
};
struct UniformWeight {
  Weight max = 100;  // weights drawn from [1, max]
  std::uint64_t seed = 0;
};
struct ExplicitWeights {
  std::vector<Weight> values;  // in blow-up edge order
};
using WeightRule = std::variant<ConstantWeight, UniformWeight, ExplicitWeights>;

struct NoColors {};
struct RandomColors {
  double red_probability = 0.5;
  std::uint64_t seed = 0;
};
struct ExplicitColors {
  std::vector<Color> values;
};
using ColorRule = std::variant<NoColors, RandomColors, ExplicitColors>;

struct BlownUp {
  Graph graph;
  BlowupMap map;
};

// Blob i occupies a consecutive vertex range in blob-id order. Edges are
// emitted blob by blob (clique interiors) and then band by band, each group
// in lexicographic vertex order.
BlownUp blow_up(const Prototype& p, const WeightRule& weights = ConstantWeight{},
                const ColorRule& colors = NoColors{});

// Recovers the blow-up map of a graph claimed to be a blow-up of p under the
// consecutive-range vertex convention. Throws InputError if the edge set
// differs from the blow-up's.
BlowupMap derive_blowup_map(const Graph& g, const Prototype& p);

int bandwidth_of_ordering(const Prototype& p, const std::vector<BlobId>& ordering);

// Exact minimum-bandwidth ordering for up to kMaxExactBandwidthBlobs blobs
// (branch and bound); larger prototypes must carry their own ordering.
inline constexpr int kMaxExactBandwidthBlobs = 12;
std::vector<BlobId> find_bandwidth_ordering(const Prototype& p);

struct Separator {
  std::vector<BlobId> blobs;  // consecutive window of the ordering
  std::vector<BlobId> left;   // blobs before the window
  std::vector<BlobId> right;  // blobs after the window
};

// Scans disjoint windows of `phi` consecutive blobs between positions
// ceil(n'/4)+1 and floor(3n'/4)-1 (1-based) and returns the first one that no
// band in `tight` touches.
std::optional<Separator> find_loose_separator(const Prototype& p, const std::vector<BlobId>& ordering,
                                              const std::vector<BandId>& tight, int phi);

// floor((n'/2 - 3) / phi), the number of disjoint candidate windows the
// separator scan is guaranteed to have.
int separator_window_bound(int blob_count, int phi);

}  // namespace tkpm
