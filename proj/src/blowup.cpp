#include "tkpm/blowup.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <unordered_set>

namespace tkpm {

int Prototype::total_size() const {
  int s = 0;
  for (const Blob& b : blobs) s += b.size;
  return s;
}

void Prototype::validate() const {
  std::set<std::pair<int, int>> seen;
  for (const Blob& b : blobs)
    if (b.size < 1) throw InputError("blob sizes must be positive");
  for (const Band& band : bands) {
    if (band.a < 0 || band.b < 0 || band.a >= blob_count() || band.b >= blob_count())
      throw InputError("band refers to an unknown blob");
    if (band.a == band.b) throw InputError("band is a self-loop");
    if (!seen.emplace(std::min(band.a, band.b), std::max(band.a, band.b)).second)
      throw InputError("duplicate band " + std::to_string(band.a) + " " + std::to_string(band.b));
  }
  if (ordering) {
    std::vector<BlobId> sorted = *ordering;
    std::sort(sorted.begin(), sorted.end());
    std::vector<BlobId> ids(static_cast<std::size_t>(blob_count()));
    std::iota(ids.begin(), ids.end(), 0);
    if (sorted != ids) throw InputError("ordering is not a permutation of the blobs");
  }
}

std::vector<std::vector<BlobId>> Prototype::neighbors() const {
  std::vector<std::vector<BlobId>> nb(static_cast<std::size_t>(blob_count()));
  for (const Band& band : bands) {
    nb[static_cast<std::size_t>(band.a)].push_back(band.b);
    nb[static_cast<std::size_t>(band.b)].push_back(band.a);
  }
  return nb;
}

namespace {

std::vector<int> blob_offsets(const Prototype& p) {
  std::vector<int> offset(static_cast<std::size_t>(p.blob_count()) + 1, 0);
  for (int i = 0; i < p.blob_count(); ++i)
    offset[static_cast<std::size_t>(i) + 1] = offset[static_cast<std::size_t>(i)] + p.blobs[static_cast<std::size_t>(i)].size;
  return offset;
}

struct Skeleton {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  BlowupMap map;
};

Skeleton skeleton(const Prototype& p) {
  p.validate();
  const auto offset = blob_offsets(p);
  Skeleton s;
  s.map.members.resize(static_cast<std::size_t>(p.blob_count()));
  for (int b = 0; b < p.blob_count(); ++b)
    for (int v = offset[static_cast<std::size_t>(b)]; v < offset[static_cast<std::size_t>(b) + 1]; ++v) {
      s.map.blob_of.push_back(b);
      s.map.members[static_cast<std::size_t>(b)].push_back(v);
    }
  for (int b = 0; b < p.blob_count(); ++b) {
    if (p.blobs[static_cast<std::size_t>(b)].kind != ClassKind::Clique) continue;
    const auto& m = s.map.members[static_cast<std::size_t>(b)];
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        s.pairs.emplace_back(m[i], m[j]);
        s.map.origin.push_back(EdgeOrigin{true, b});
      }
  }
  for (int id = 0; id < static_cast<int>(p.bands.size()); ++id) {
    const Band& band = p.bands[static_cast<std::size_t>(id)];
    const auto& ma = s.map.members[static_cast<std::size_t>(std::min(band.a, band.b))];
    const auto& mb = s.map.members[static_cast<std::size_t>(std::max(band.a, band.b))];
    for (VertexId u : ma)
      for (VertexId v : mb) {
        s.pairs.emplace_back(u, v);
        s.map.origin.push_back(EdgeOrigin{false, id});
      }
  }
  return s;
}

}  // namespace

BlownUp blow_up(const Prototype& p, const WeightRule& weights, const ColorRule& colors) {
  Skeleton s = skeleton(p);
  const std::size_t m = s.pairs.size();
  std::vector<Weight> w(m, 1);
  if (const auto* c = std::get_if<ConstantWeight>(&weights)) {
    if (c->value < 0) throw InputError("weights must be nonnegative");
    std::fill(w.begin(), w.end(), c->value);
  } else if (const auto* u = std::get_if<UniformWeight>(&weights)) {
    if (u->max < 1) throw InputError("uniform weight bound must be at least 1");
    std::mt19937_64 rng(u->seed);
    std::uniform_int_distribution<Weight> dist(1, u->max);
    for (auto& x : w) x = dist(rng);
  } else {
    const auto& values = std::get<ExplicitWeights>(weights).values;
    if (values.size() != m)
      throw InputError("expected " + std::to_string(m) + " explicit weights, got " + std::to_string(values.size()));
    w = values;
  }
  std::vector<Color> col(m, Color::Uncolored);
  if (const auto* r = std::get_if<RandomColors>(&colors)) {
    std::mt19937_64 rng(r->seed);
    std::bernoulli_distribution red(r->red_probability);
    for (auto& c : col) c = red(rng) ? Color::Red : Color::Blue;
  } else if (const auto* e = std::get_if<ExplicitColors>(&colors)) {
    if (e->values.size() != m)
      throw InputError("expected " + std::to_string(m) + " explicit colors, got " + std::to_string(e->values.size()));
    col = e->values;
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) edges.push_back(Edge{s.pairs[i].first, s.pairs[i].second, w[i], col[i]});
  return BlownUp{Graph(p.total_size(), std::move(edges)), std::move(s.map)};
}

BlowupMap derive_blowup_map(const Graph& g, const Prototype& p) {
  Skeleton s = skeleton(p);
  if (g.vertex_count() != p.total_size())
    throw InputError("blob sizes sum to " + std::to_string(p.total_size()) + " but the graph has " +
                     std::to_string(g.vertex_count()) + " vertices");
  if (static_cast<std::size_t>(g.edge_count()) != s.pairs.size())
    throw InputError("graph is not the blow-up of its prototype (edge count mismatch)");
  std::vector<EdgeOrigin> origin(s.pairs.size());
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    const auto id = g.find_edge(s.pairs[i].first, s.pairs[i].second);
    if (!id)
      throw InputError("graph is not the blow-up of its prototype (missing edge " +
                       std::to_string(s.pairs[i].first) + " " + std::to_string(s.pairs[i].second) + ")");
    origin[static_cast<std::size_t>(*id)] = s.map.origin[i];
  }
  s.map.origin = std::move(origin);
  return s.map;
}

int bandwidth_of_ordering(const Prototype& p, const std::vector<BlobId>& ordering) {
  if (static_cast<int>(ordering.size()) != p.blob_count()) throw InputError("ordering has the wrong length");
  std::vector<int> pos(ordering.size(), -1);
  for (std::size_t i = 0; i < ordering.size(); ++i) {
    const BlobId b = ordering[i];
    if (b < 0 || b >= p.blob_count() || pos[static_cast<std::size_t>(b)] != -1)
      throw InputError("ordering is not a permutation of the blobs");
    pos[static_cast<std::size_t>(b)] = static_cast<int>(i);
  }
  int width = 0;
  for (const Band& band : p.bands)
    width = std::max(width, std::abs(pos[static_cast<std::size_t>(band.a)] - pos[static_cast<std::size_t>(band.b)]));
  return width;
}

namespace {

// Left-to-right placement search for an ordering of width <= phi.
class BandwidthSearch {
 public:
  BandwidthSearch(const Prototype& p, int phi) : n_(p.blob_count()), phi_(phi) {
    nb_mask_.assign(static_cast<std::size_t>(n_), 0);
    for (const Band& band : p.bands) {
      nb_mask_[static_cast<std::size_t>(band.a)] |= 1u << band.b;
      nb_mask_[static_cast<std::size_t>(band.b)] |= 1u << band.a;
    }
  }

  std::optional<std::vector<BlobId>> run() {
    order_.clear();
    failed_.clear();
    if (place(0)) return order_;
    return std::nullopt;
  }

 private:
  std::uint64_t key(std::uint32_t mask) const {
    std::uint64_t k = mask;
    const std::size_t from = order_.size() > static_cast<std::size_t>(phi_) ? order_.size() - static_cast<std::size_t>(phi_) : 0;
    for (std::size_t i = from; i < order_.size(); ++i) k = k * 16 + static_cast<std::uint64_t>(order_[i]);
    return k ^ (static_cast<std::uint64_t>(order_.size() - from) << 58);
  }

  bool place(std::uint32_t mask) {
    const int pos = static_cast<int>(order_.size());
    if (pos == n_) return true;
    const std::uint64_t k = key(mask);
    if (failed_.count(k)) return false;
    // The blob that falls out of reach at this step must have no unplaced neighbor
    // other than the one placed now.
    const int leaving = pos - phi_;
    for (BlobId x = 0; x < n_; ++x) {
      if (mask & (1u << x)) continue;
      const std::uint32_t next = mask | (1u << x);
      bool ok = true;
      for (int q = 0; q < pos && ok; ++q) {
        const BlobId y = order_[static_cast<std::size_t>(q)];
        if (q <= leaving && (nb_mask_[static_cast<std::size_t>(y)] & ~next)) ok = false;
        if ((nb_mask_[static_cast<std::size_t>(x)] >> y & 1u) && pos - q > phi_) ok = false;
      }
      if (!ok) continue;
      order_.push_back(x);
      if (place(next)) return true;
      order_.pop_back();
    }
    failed_.insert(k);
    return false;
  }

  int n_;
  int phi_;
  std::vector<std::uint32_t> nb_mask_;
  std::vector<BlobId> order_;
  std::unordered_set<std::uint64_t> failed_;
};

}  // namespace

std::vector<BlobId> find_bandwidth_ordering(const Prototype& p) {
  p.validate();
  const int n = p.blob_count();
  if (n > kMaxExactBandwidthBlobs) {
    if (!p.ordering)
      throw InputError("ordering required: prototypes with more than " +
                       std::to_string(kMaxExactBandwidthBlobs) + " blobs must supply one");
    return *p.ordering;
  }
  if (p.bands.empty()) {
    std::vector<BlobId> id(static_cast<std::size_t>(n));
    std::iota(id.begin(), id.end(), 0);
    return id;
  }
  std::size_t max_degree = 0;
  for (const auto& nb : p.neighbors()) max_degree = std::max(max_degree, nb.size());
  for (int phi = std::max<int>(1, static_cast<int>((max_degree + 1) / 2)); phi < n; ++phi) {
    if (auto order = BandwidthSearch(p, phi).run()) return *order;
  }
  std::vector<BlobId> id(static_cast<std::size_t>(n));
  std::iota(id.begin(), id.end(), 0);
  return id;
}

int separator_window_bound(int blob_count, int phi) {
  if (phi < 1) throw InputError("bandwidth must be at least 1");
  // floor((n'/2 - 3) / phi) == floor((n' - 6) / (2 phi)), rounding toward -inf.
  const int num = blob_count - 6;
  const int den = 2 * phi;
  return num >= 0 ? num / den : -((-num + den - 1) / den);
}

std::optional<Separator> find_loose_separator(const Prototype& p, const std::vector<BlobId>& ordering,
                                              const std::vector<BandId>& tight, int phi) {
  if (phi < 1) throw InputError("bandwidth must be at least 1");
  if (bandwidth_of_ordering(p, ordering) > phi) throw InputError("ordering does not witness the given bandwidth");
  const int n = p.blob_count();
  std::vector<bool> touched(static_cast<std::size_t>(n), false);
  for (BandId id : tight) {
    const Band& band = p.bands.at(static_cast<std::size_t>(id));
    touched[static_cast<std::size_t>(band.a)] = touched[static_cast<std::size_t>(band.b)] = true;
  }
  const int first = (n + 3) / 4 + 1;  // ceil(n/4) + 1
  const int last = (3 * n) / 4 - 1;
  for (int start = first; start + phi - 1 <= last; start += phi) {
    bool loose = true;
    for (int pos = start; pos < start + phi && loose; ++pos)
      if (touched[static_cast<std::size_t>(ordering[static_cast<std::size_t>(pos - 1)])]) loose = false;
    if (!loose) continue;
    Separator s;
    s.left.assign(ordering.begin(), ordering.begin() + (start - 1));
    s.blobs.assign(ordering.begin() + (start - 1), ordering.begin() + (start - 1 + phi));
    s.right.assign(ordering.begin() + (start - 1 + phi), ordering.end());
    return s;
  }
  return std::nullopt;
}

}  // namespace tkpm
