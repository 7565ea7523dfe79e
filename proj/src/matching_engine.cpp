#include "tkpm/matching_engine.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

namespace tkpm {
namespace {

class CardinalityBlossom {
 public:
  explicit CardinalityBlossom(const Graph& g) : n_(g.vertex_count()), adj_(n_) {
    for (const Edge& e : g.edges()) {
      adj_[e.u].push_back(e.v);
      adj_[e.v].push_back(e.u);
    }
    match_.assign(n_, -1);
    parent_.assign(n_, -1);
    base_.resize(n_);
    used_.assign(n_, false);
    in_blossom_.assign(n_, false);
  }

  std::vector<int> run() {
    // Greedy warm start.
    for (int v = 0; v < n_; ++v) {
      if (match_[v] != -1) continue;
      for (int to : adj_[v]) {
        if (match_[to] == -1) {
          match_[to] = v;
          match_[v] = to;
          break;
        }
      }
    }
    for (int root = 0; root < n_; ++root) {
      if (match_[root] != -1) continue;
      int v = find_path(root);
      while (v != -1) {
        const int pv = parent_[v];
        const int ppv = match_[pv];
        match_[v] = pv;
        match_[pv] = v;
        v = ppv;
      }
    }
    return match_;
  }

 private:
  int lca(int a, int b) {
    std::vector<bool> seen(n_, false);
    for (;;) {
      a = base_[a];
      seen[a] = true;
      if (match_[a] == -1) break;
      a = parent_[match_[a]];
    }
    for (;;) {
      b = base_[b];
      if (seen[b]) return b;
      b = parent_[match_[b]];
    }
  }

  void mark_path(int v, int b, int child) {
    while (base_[v] != b) {
      in_blossom_[base_[v]] = in_blossom_[base_[match_[v]]] = true;
      parent_[v] = child;
      child = match_[v];
      v = parent_[match_[v]];
    }
  }

  int find_path(int root) {
    std::fill(used_.begin(), used_.end(), false);
    std::fill(parent_.begin(), parent_.end(), -1);
    for (int i = 0; i < n_; ++i) base_[i] = i;
    used_[root] = true;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int to : adj_[v]) {
        if (base_[v] == base_[to] || match_[v] == to) continue;
        if (to == root || (match_[to] != -1 && parent_[match_[to]] != -1)) {
          const int cur = lca(v, to);
          std::fill(in_blossom_.begin(), in_blossom_.end(), false);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (int i = 0; i < n_; ++i) {
            if (!in_blossom_[base_[i]]) continue;
            base_[i] = cur;
            if (!used_[i]) {
              used_[i] = true;
              q.push(i);
            }
          }
        } else if (parent_[to] == -1) {
          parent_[to] = v;
          if (match_[to] == -1) return to;
          used_[match_[to]] = true;
          q.push(match_[to]);
        }
      }
    }
    return -1;
  }

  int n_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> match_, parent_, base_;
  std::vector<bool> used_, in_blossom_;
};

// O(V^3) primal-dual weighted blossom (Gabow's formulation with explicit
// blossom bookkeeping). Vertices are 1..n, blossoms n+1..2n; an edge weight
// of 0 means "no edge", so callers must pass strictly positive weights.
class WeightedBlossom {
 public:
  using W = std::int64_t;

  explicit WeightedBlossom(int n)
      : n_(n),
        size_(2 * n + 1),
        g_(static_cast<std::size_t>(size_) * size_),
        lab_(size_, 0),
        match_(size_, 0),
        slack_(size_, 0),
        st_(size_, 0),
        pa_(size_, 0),
        flower_from_(static_cast<std::size_t>(size_) * (n + 1), 0),
        s_(size_, -1),
        vis_(size_, 0),
        flower_(size_) {
    for (int u = 1; u <= n_; ++u)
      for (int v = 1; v <= n_; ++v) at(u, v) = Arc{u, v, 0};
  }

  void set_edge(int u, int v, W w) {
    at(u, v).w = w;
    at(v, u).w = w;
  }

  // Returns mate per vertex (1-based, 0 = unmatched).
  std::vector<int> solve() {
    n_x_ = n_;
    for (int u = 0; u <= n_; ++u) {
      st_[u] = u;
      flower_[u].clear();
    }
    W w_max = 0;
    for (int u = 1; u <= n_; ++u)
      for (int v = 1; v <= n_; ++v) {
        from(u, v) = (u == v ? u : 0);
        w_max = std::max(w_max, at(u, v).w);
      }
    for (int u = 1; u <= n_; ++u) lab_[u] = w_max;
    while (augment_once()) {
    }
    return std::vector<int>(match_.begin(), match_.begin() + n_ + 1);
  }

 private:
  struct Arc {
    int u = 0, v = 0;
    W w = 0;
  };

  Arc& at(int u, int v) { return g_[static_cast<std::size_t>(u) * size_ + v]; }
  int& from(int b, int x) { return flower_from_[static_cast<std::size_t>(b) * (n_ + 1) + x]; }
  W dist(const Arc& e) const { return lab_[e.u] + lab_[e.v] - e.w * 2; }

  void update_slack(int u, int x) {
    if (!slack_[x] || dist(at(u, x)) < dist(at(slack_[x], x))) slack_[x] = u;
  }
  void set_slack(int x) {
    slack_[x] = 0;
    for (int u = 1; u <= n_; ++u)
      if (at(u, x).w > 0 && st_[u] != x && s_[st_[u]] == 0) update_slack(u, x);
  }
  void q_push(int x) {
    if (x <= n_) {
      q_.push_back(x);
      return;
    }
    for (int y : flower_[x]) q_push(y);
  }
  void set_st(int x, int b) {
    st_[x] = b;
    if (x <= n_) return;
    for (int y : flower_[x]) set_st(y, b);
  }
  int get_pr(int b, int xr) {
    auto& fl = flower_[b];
    const int pr = static_cast<int>(std::find(fl.begin(), fl.end(), xr) - fl.begin());
    if (pr % 2 == 1) {
      std::reverse(fl.begin() + 1, fl.end());
      return static_cast<int>(fl.size()) - pr;
    }
    return pr;
  }
  void set_match(int u, int v) {
    match_[u] = at(u, v).v;
    if (u <= n_) return;
    const Arc e = at(u, v);
    const int xr = from(u, e.u);
    const int pr = get_pr(u, xr);
    for (int i = 0; i < pr; ++i) set_match(flower_[u][i], flower_[u][i ^ 1]);
    set_match(xr, v);
    std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
  }
  void augment(int u, int v) {
    for (;;) {
      const int xnv = st_[match_[u]];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, st_[pa_[xnv]]);
      u = st_[pa_[xnv]];
      v = xnv;
    }
  }
  int get_lca(int u, int v) {
    for (++stamp_; u || v; std::swap(u, v)) {
      if (u == 0) continue;
      if (vis_[u] == stamp_) return u;
      vis_[u] = stamp_;
      u = st_[match_[u]];
      if (u) u = st_[pa_[u]];
    }
    return 0;
  }
  void add_blossom(int u, int lca, int v) {
    int b = n_ + 1;
    while (b <= n_x_ && st_[b]) ++b;
    if (b > n_x_) ++n_x_;
    lab_[b] = 0;
    s_[b] = 0;
    match_[b] = match_[lca];
    auto& fl = flower_[b];
    fl.clear();
    fl.push_back(lca);
    for (int x = u, y; x != lca; x = st_[pa_[y]]) {
      fl.push_back(x);
      fl.push_back(y = st_[match_[x]]);
      q_push(y);
    }
    std::reverse(fl.begin() + 1, fl.end());
    for (int x = v, y; x != lca; x = st_[pa_[y]]) {
      fl.push_back(x);
      fl.push_back(y = st_[match_[x]]);
      q_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= n_x_; ++x) at(b, x).w = at(x, b).w = 0;
    for (int x = 1; x <= n_; ++x) from(b, x) = 0;
    for (int xs : fl) {
      for (int x = 1; x <= n_x_; ++x)
        if (at(b, x).w == 0 || dist(at(xs, x)) < dist(at(b, x))) {
          at(b, x) = at(xs, x);
          at(x, b) = at(x, xs);
        }
      for (int x = 1; x <= n_; ++x)
        if (from(xs, x)) from(b, x) = xs;
    }
    set_slack(b);
  }
  void expand_blossom(int b) {
    for (int y : flower_[b]) set_st(y, y);
    const int xr = from(b, at(b, pa_[b]).u);
    const int pr = get_pr(b, xr);
    for (int i = 0; i < pr; i += 2) {
      const int xs = flower_[b][i];
      const int xns = flower_[b][i + 1];
      pa_[xs] = at(xns, xs).u;
      s_[xs] = 1;
      s_[xns] = 0;
      slack_[xs] = 0;
      set_slack(xns);
      q_push(xns);
    }
    s_[xr] = 1;
    pa_[xr] = pa_[b];
    for (std::size_t i = static_cast<std::size_t>(pr) + 1; i < flower_[b].size(); ++i) {
      const int xs = flower_[b][i];
      s_[xs] = -1;
      set_slack(xs);
    }
    st_[b] = 0;
  }
  bool on_found_edge(const Arc& e) {
    const int u = st_[e.u];
    const int v = st_[e.v];
    if (s_[v] == -1) {
      pa_[v] = e.u;
      s_[v] = 1;
      const int nu = st_[match_[v]];
      slack_[v] = slack_[nu] = 0;
      s_[nu] = 0;
      q_push(nu);
    } else if (s_[v] == 0) {
      const int lca = get_lca(u, v);
      if (!lca) {
        augment(u, v);
        augment(v, u);
        return true;
      }
      add_blossom(u, lca, v);
    }
    return false;
  }
  bool augment_once() {
    std::fill(s_.begin() + 1, s_.begin() + n_x_ + 1, -1);
    std::fill(slack_.begin() + 1, slack_.begin() + n_x_ + 1, 0);
    q_.clear();
    for (int x = 1; x <= n_x_; ++x)
      if (st_[x] == x && !match_[x]) {
        pa_[x] = 0;
        s_[x] = 0;
        q_push(x);
      }
    if (q_.empty()) return false;
    for (;;) {
      while (!q_.empty()) {
        const int u = q_.front();
        q_.pop_front();
        if (s_[st_[u]] == 1) continue;
        for (int v = 1; v <= n_; ++v)
          if (at(u, v).w > 0 && st_[u] != st_[v]) {
            if (dist(at(u, v)) == 0) {
              if (on_found_edge(at(u, v))) return true;
            } else {
              update_slack(u, st_[v]);
            }
          }
      }
      W d = std::numeric_limits<W>::max() / 4;
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && s_[b] == 1) d = std::min(d, lab_[b] / 2);
      for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && slack_[x]) {
          if (s_[x] == -1)
            d = std::min(d, dist(at(slack_[x], x)));
          else if (s_[x] == 0)
            d = std::min(d, dist(at(slack_[x], x)) / 2);
        }
      for (int u = 1; u <= n_; ++u) {
        if (s_[st_[u]] == 0) {
          if (lab_[u] <= d) return false;
          lab_[u] -= d;
        } else if (s_[st_[u]] == 1) {
          lab_[u] += d;
        }
      }
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b) {
          if (s_[st_[b]] == 0)
            lab_[b] += d * 2;
          else if (s_[st_[b]] == 1)
            lab_[b] -= d * 2;
        }
      q_.clear();
      for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && slack_[x] && st_[slack_[x]] != x && dist(at(slack_[x], x)) == 0)
          if (on_found_edge(at(slack_[x], x))) return true;
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && s_[b] == 1 && lab_[b] == 0) expand_blossom(b);
    }
  }

  int n_;
  int size_;
  int n_x_ = 0;
  int stamp_ = 0;
  std::vector<Arc> g_;
  std::vector<W> lab_;
  std::vector<int> match_, slack_, st_, pa_, flower_from_, s_, vis_;
  std::vector<std::vector<int>> flower_;
  std::deque<int> q_;
};

Matching mates_to_matching(const Graph& g, const std::vector<int>& mate, int offset) {
  std::vector<EdgeId> out;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const int m = mate[static_cast<std::size_t>(v + offset)] - offset;
    if (m > v) out.push_back(*g.find_edge(v, m));
  }
  return make_matching(std::move(out));
}

}  // namespace

Matching max_cardinality_matching(const Graph& g) {
  CardinalityBlossom solver(g);
  return mates_to_matching(g, solver.run(), 0);
}

bool has_perfect_matching(const Graph& g) {
  if (g.vertex_count() % 2 != 0) return false;
  return 2 * max_cardinality_matching(g).size() == static_cast<std::size_t>(g.vertex_count());
}

std::optional<Matching> max_weight_perfect_matching(const Graph& g) {
  const int nv = g.vertex_count();
  if (nv % 2 != 0) return std::nullopt;
  if (nv == 0) return Matching{};
  const Weight max_w = g.max_weight();
  const __int128 shift = static_cast<__int128>(nv / 2) * max_w + 1;
  // Duals and doubled slacks stay below 4 * (shift + max_w) * (nv + 1).
  const __int128 bound = (shift + max_w) * 4 * (nv + 1);
  if (bound >= (static_cast<__int128>(1) << 62))
    throw InputError("weights too large for exact maximum-weight perfect matching");

  WeightedBlossom solver(nv);
  for (const Edge& e : g.edges())
    solver.set_edge(e.u + 1, e.v + 1, static_cast<Weight>(shift) + e.w);
  const auto mate = solver.solve();
  Matching m = mates_to_matching(g, mate, 1);
  if (2 * m.size() != static_cast<std::size_t>(nv)) return std::nullopt;
  return m;
}

}  // namespace tkpm
