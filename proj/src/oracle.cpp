#include "tkpm/oracle.hpp"

#include <gmpxx.h>

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace tkpm::oracle {
namespace {

void check_size(const Graph& g, int max_vertices) {
  if (g.vertex_count() > max_vertices)
    throw InputError("oracle refuses graphs with more than " + std::to_string(max_vertices) +
                     " vertices (got " + std::to_string(g.vertex_count()) + ")");
}

class Enumerator {
 public:
  Enumerator(const Graph& g, const std::function<bool(std::span<const EdgeId>)>& visit)
      : g_(g), visit_(visit), used_(static_cast<std::size_t>(g.vertex_count()), false) {}

  void run() {
    if (g_.vertex_count() % 2 != 0) return;
    recurse(0);
  }

 private:
  bool recurse(VertexId from) {
    while (from < g_.vertex_count() && used_[static_cast<std::size_t>(from)]) ++from;
    if (from == g_.vertex_count()) return visit_(stack_);
    used_[static_cast<std::size_t>(from)] = true;
    for (EdgeId id : g_.incident(from)) {
      const VertexId to = g_.other(id, from);
      if (used_[static_cast<std::size_t>(to)]) continue;
      used_[static_cast<std::size_t>(to)] = true;
      stack_.push_back(id);
      const bool go_on = recurse(from + 1);
      stack_.pop_back();
      used_[static_cast<std::size_t>(to)] = false;
      if (!go_on) {
        used_[static_cast<std::size_t>(from)] = false;
        return false;
      }
    }
    used_[static_cast<std::size_t>(from)] = false;
    return true;
  }

  const Graph& g_;
  const std::function<bool(std::span<const EdgeId>)>& visit_;
  std::vector<bool> used_;
  std::vector<EdgeId> stack_;
};

// Dense polynomial in y with big-integer coefficients; trailing zeros trimmed.
using Poly = std::vector<mpz_class>;

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

Poly sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

// a / b where the division is known to be exact in Z[y].
Poly exact_div(Poly a, const Poly& b) {
  if (b.empty()) throw std::logic_error("division by zero polynomial");
  if (a.empty()) return {};
  if (a.size() < b.size()) throw std::logic_error("inexact polynomial division");
  Poly q(a.size() - b.size() + 1, 0);
  for (std::size_t i = q.size(); i-- > 0;) {
    const mpz_class& lead = a[i + b.size() - 1];
    if (lead == 0) continue;
    mpz_class c;
    mpz_divexact(c.get_mpz_t(), lead.get_mpz_t(), b.back().get_mpz_t());
    q[i] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[i + j] -= c * b[j];
  }
  trim(a);
  if (!a.empty()) throw std::logic_error("inexact polynomial division");
  trim(q);
  return q;
}

// Bareiss fraction-free elimination over Z[y].
Poly determinant(std::vector<std::vector<Poly>> m) {
  const std::size_t n = m.size();
  if (n == 0) return {mpz_class(1)};
  bool negate = false;
  Poly prev{mpz_class(1)};
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].empty()) {
      std::size_t swap_with = k + 1;
      while (swap_with < n && m[swap_with][k].empty()) ++swap_with;
      if (swap_with == n) return {};
      std::swap(m[k], m[swap_with]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = exact_div(sub(mul(m[i][j], m[k][k]), mul(m[i][k], m[k][j])), prev);
    prev = m[k][k];
  }
  Poly det = m[n - 1][n - 1];
  if (negate)
    for (auto& c : det) c = -c;
  return det;
}

// P with P^2 == d (up to sign), or nullopt if d is not a square.
std::optional<Poly> poly_sqrt(const Poly& d) {
  if (d.empty()) return Poly{};
  std::size_t low = 0;
  while (d[low] == 0) ++low;
  if (low % 2 != 0 || (d.size() - 1) % 2 != 0) return std::nullopt;
  if (mpz_perfect_square_p(d[low].get_mpz_t()) == 0) return std::nullopt;
  const std::size_t base = low / 2;
  const std::size_t top = (d.size() - 1) / 2;
  Poly p(top + 1, 0);
  p[base] = sqrt(d[low]);
  const mpz_class twice = 2 * p[base];
  for (std::size_t j = 1; base + j <= top; ++j) {
    mpz_class rest = d[low + j];
    for (std::size_t i = 1; i < j; ++i) rest -= p[base + i] * p[base + j - i];
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), rest.get_mpz_t(), twice.get_mpz_t());
    p[base + j] = q;
  }
  if (mul(p, p) != d) return std::nullopt;
  return p;
}

}  // namespace

void for_each_perfect_matching(const Graph& g, const std::function<bool(std::span<const EdgeId>)>& visit,
                               int max_vertices) {
  check_size(g, max_vertices);
  Enumerator(g, visit).run();
}

std::optional<TkpmAnswer> brute_force_tkpm(const Graph& g, int k, int max_vertices) {
  if (k < 0) throw InputError("k must be nonnegative");
  std::optional<TkpmAnswer> best;
  for_each_perfect_matching(
      g,
      [&](std::span<const EdgeId> edges) {
        Matching m = make_matching({edges.begin(), edges.end()});
        const Weight value = topk_value(g, m, static_cast<std::size_t>(k));
        if (!best || value > best->objective) best = TkpmAnswer{value, std::move(m)};
        return true;
      },
      max_vertices);
  return best;
}

std::optional<Matching> brute_force_em(const Graph& g, int k, int max_vertices) {
  if (!g.fully_colored()) throw InputError("exact matching needs every edge colored red or blue");
  std::optional<Matching> found;
  for_each_perfect_matching(
      g,
      [&](std::span<const EdgeId> edges) {
        int red = 0;
        for (EdgeId id : edges) red += g.edge(id).color == Color::Red ? 1 : 0;
        if (red != k) return true;
        found = make_matching({edges.begin(), edges.end()});
        return false;
      },
      max_vertices);
  return found;
}

RandomizedEmResult randomized_em(const Graph& g, int k, int trials, std::uint64_t seed) {
  if (!g.fully_colored()) throw InputError("exact matching needs every edge colored red or blue");
  if (trials < 1) throw InputError("trials must be positive");
  RandomizedEmResult result;
  const std::size_t n = static_cast<std::size_t>(g.vertex_count());
  if (n % 2 != 0 || k < 0 || 2 * static_cast<std::size_t>(k) > n) {
    result.trials_run = 0;
    return result;
  }
  const long max_weight = std::max<long>(1, 2L * g.edge_count());
  for (int t = 0; t < trials; ++t) {
    ++result.trials_run;
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(t + 1)));
    std::uniform_int_distribution<long> draw(1, max_weight);
    std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n));
    for (const Edge& e : g.edges()) {
      const std::size_t lo = static_cast<std::size_t>(std::min(e.u, e.v));
      const std::size_t hi = static_cast<std::size_t>(std::max(e.u, e.v));
      mpz_class value;
      mpz_ui_pow_ui(value.get_mpz_t(), 2, static_cast<unsigned long>(draw(rng)));
      const std::size_t degree = e.color == Color::Red ? 1 : 0;
      Poly p(degree + 1, 0);
      p[degree] = value;
      m[lo][hi] = p;
      p[degree] = -value;
      m[hi][lo] = p;
    }
    const Poly det = determinant(std::move(m));
    if (det.empty()) continue;
    const auto pf = poly_sqrt(det);
    if (!pf) throw std::logic_error("determinant of a skew-symmetric matrix is not a square");
    if (static_cast<std::size_t>(k) < pf->size() && (*pf)[static_cast<std::size_t>(k)] != 0) {
      result.decision = EmDecision::Yes;
      return result;
    }
  }
  return result;
}

}  // namespace tkpm::oracle
