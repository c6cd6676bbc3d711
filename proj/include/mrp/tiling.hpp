#pragma once

#include <set>
#include <sstream>

#include "rotatesort.hpp"

namespace mrp {

struct Tiling {
  GridDims dims;
  int d = 1;
  std::vector<int> xs{0, 1};  // strip boundaries, xs.front() = 0, xs.back() = n1
  std::vector<int> ys{0, 1};
  std::vector<int> col_of_x, row_of_y;

  int kx() const { return int(xs.size()) - 1; }
  int ky() const { return int(ys.size()) - 1; }
  int count() const { return kx() * ky(); }
  int id(int i, int j) const { return j * kx() + i; }
  int col(int t) const { return t % kx(); }
  int row(int t) const { return t / kx(); }
  int tile_of(Pos p) const { return id(col_of_x[p.x], row_of_y[p.y]); }
  Rect rect(int t) const {
    int i = col(t), j = row(t);
    return {xs[i], ys[j], xs[i + 1] - xs[i], ys[j + 1] - ys[j]};
  }
  bool valid_ij(int i, int j) const { return i >= 0 && j >= 0 && i < kx() && j < ky(); }
  // 8-neighbourhood, distinct tiles
  bool adjacent(int a, int b) const {
    if (a == b) return false;
    return std::abs(col(a) - col(b)) <= 1 && std::abs(row(a) - row(b)) <= 1;
  }
  bool diagonal(int a, int b) const { return col(a) != col(b) && row(a) != row(b); }
  // tile center scaled by 2 so it stays integral
  Pos center2(int t) const {
    Rect r = rect(t);
    return {2 * r.x0 + r.w, 2 * r.y0 + r.h};
  }
};

inline std::vector<int> cut_strips(int n, int d) {
  const int unit = 12 * d;
  int k = n / unit;
  std::vector<int> b{0};
  for (int i = 1; i < k; ++i) b.push_back(i * unit);
  b.push_back(n);
  return b;
}

inline Tiling build_tiling(GridDims dims, int d) {
  if (d < 1) throw Error(ErrorCode::InfeasibleParams, "tiling needs d >= 1");
  Tiling t;
  t.dims = dims;
  t.d = d;
  t.xs = cut_strips(dims.n1, d);
  t.ys = cut_strips(dims.n2, d);
  t.col_of_x.resize(dims.n1);
  t.row_of_y.resize(dims.n2);
  for (int i = 0; i < t.kx(); ++i)
    for (int x = t.xs[i]; x < t.xs[i + 1]; ++x) t.col_of_x[x] = i;
  for (int j = 0; j < t.ky(); ++j)
    for (int y = t.ys[j]; y < t.ys[j + 1]; ++y) t.row_of_y[y] = j;
  return t;
}

using Edge = std::pair<int, int>;

struct FlowGraph {
  int ntiles = 0;
  std::map<Edge, long long> w;

  long long weight(int a, int b) const {
    auto it = w.find({a, b});
    return it == w.end() ? 0 : it->second;
  }
  void add(int a, int b, long long v) {
    if (v == 0) return;
    long long& x = w[{a, b}];
    x += v;
    MRP_ASSERT(x >= 0, "negative flow");
    if (x == 0) w.erase({a, b});
  }
  bool empty() const { return w.empty(); }
  long long max_weight() const {
    long long m = 0;
    for (auto& [e, v] : w) m = std::max(m, v);
    return m;
  }
  bool is_circulation() const {
    std::map<int, long long> bal;
    for (auto& [e, v] : w) {
      bal[e.first] -= v;
      bal[e.second] += v;
    }
    for (auto& [n, b] : bal)
      if (b != 0) return false;
    return true;
  }
  friend bool operator==(const FlowGraph& a, const FlowGraph& b) { return a.w == b.w; }

  std::string to_dot(const Tiling* t = nullptr) const {
    std::ostringstream os;
    os << "digraph flow {\n";
    for (int n = 0; n < ntiles; ++n) {
      os << "  " << n;
      if (t) os << " [label=\"" << t->col(n) << "," << t->row(n) << "\"]";
      os << ";\n";
    }
    for (auto& [e, v] : w) os << "  " << e.first << " -> " << e.second << " [weight=" << v << ", label=" << v << "];\n";
    os << "}\n";
    return os.str();
  }
};

inline FlowGraph build_flow(const std::vector<Pos>& pos, const std::vector<Pos>& target, const Tiling& t) {
  FlowGraph f;
  f.ntiles = t.count();
  for (std::size_t r = 0; r < pos.size(); ++r) {
    int a = t.tile_of(pos[r]), b = t.tile_of(target[r]);
    if (a == b) continue;
    if (!t.adjacent(a, b)) throw Error(ErrorCode::NonAdjacentTiles, "robot " + std::to_string(r) + " crosses more than one tile");
    f.add(a, b, 1);
  }
  return f;
}

inline FlowGraph build_flow(const Instance& inst, const Tiling& t) { return build_flow(inst.start, inst.target, t); }

// Two diagonal edges cross iff they lie in the same 2x2 tile block on different diagonals.
inline bool edges_cross(const Tiling& t, Edge e, Edge g) {
  if (!t.diagonal(e.first, e.second) || !t.diagonal(g.first, g.second)) return false;
  auto block = [&](Edge x) {
    return std::make_pair(std::min(t.col(x.first), t.col(x.second)), std::min(t.row(x.first), t.row(x.second)));
  };
  if (block(e) != block(g)) return false;
  auto line = [&](Edge x) { return (t.col(x.first) < t.col(x.second)) == (t.row(x.first) < t.row(x.second)); };
  return line(e) != line(g);
}

inline bool has_crossings(const FlowGraph& f, const Tiling& t) {
  std::vector<Edge> diag;
  for (auto& [e, v] : f.w)
    if (t.diagonal(e.first, e.second)) diag.push_back(e);
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j)
      if (edges_cross(t, diag[i], diag[j])) return true;
  return false;
}

inline bool has_bidirectional(const FlowGraph& f) {
  for (auto& [e, v] : f.w)
    if (f.weight(e.second, e.first) > 0) return true;
  return false;
}

// Distance from a cell to the part of tile `a` facing tile `b` (side or corner).
inline int distance_to_neighbor(const Tiling& t, Pos p, int a, int b) {
  Rect r = t.rect(a);
  int di = t.col(b) - t.col(a), dj = t.row(b) - t.row(a);
  int dx = di > 0 ? r.x1() - 1 - p.x : di < 0 ? p.x - r.x0 : 0;
  int dy = dj > 0 ? r.y1() - 1 - p.y : dj < 0 ? p.y - r.y0 : 0;
  return dx + dy;
}

// Exchanges of robot pairs between tiles of a common 2x2 tile block, realized as four
// rounds of parallel region permutations.
inline Phase exchange_phase(const GridState& st, const Tiling& t, const std::vector<std::pair<int, int>>& pairs) {
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> by_block;
  for (auto [a, b] : pairs) {
    int ta = t.tile_of(st.pos(a)), tb = t.tile_of(st.pos(b));
    MRP_ASSERT(ta == tb || t.adjacent(ta, tb), "exchange between non-adjacent tiles");
    int bx = std::clamp(std::min(t.col(ta), t.col(tb)), 0, std::max(0, t.kx() - 2));
    int by = std::clamp(std::min(t.row(ta), t.row(tb)), 0, std::max(0, t.ky() - 2));
    by_block[{bx, by}].push_back({a, b});
  }
  Phase out;
  for (int parity = 0; parity < 4; ++parity) {
    Phase round;
    for (auto& [blk, prs] : by_block) {
      if ((blk.first % 2) + 2 * (blk.second % 2) != parity) continue;
      int i1 = std::min(blk.first + 1, t.kx() - 1), j1 = std::min(blk.second + 1, t.ky() - 1);
      Rect lo = t.rect(t.id(blk.first, blk.second)), hi = t.rect(t.id(i1, j1));
      Rect reg{lo.x0, lo.y0, hi.x1() - lo.x0, hi.y1() - lo.y0};
      std::vector<int> dest(reg.area());
      std::iota(dest.begin(), dest.end(), 0);
      for (auto [a, b] : prs) {
        int ca = reg.local(st.pos(a)), cb = reg.local(st.pos(b));
        MRP_ASSERT(dest[ca] == ca && dest[cb] == cb, "robot in two exchanges");
        dest[ca] = cb;
        dest[cb] = ca;
      }
      merge_phase(round, permute_region(reg, dest));
    }
    append_phase(out, round);
  }
  return out;
}

// Picks k robots among `cands` in tile a nearest to neighbour b (ties by index).
inline std::vector<int> pick_near(const GridState& st, const Tiling& t, std::vector<int> cands, int a, int b, std::size_t k) {
  std::stable_sort(cands.begin(), cands.end(), [&](int r, int q) {
    int dr = distance_to_neighbor(t, st.pos(r), a, b), dq = distance_to_neighbor(t, st.pos(q), a, b);
    return dr != dq ? dr < dq : r < q;
  });
  cands.resize(std::min(k, cands.size()));
  return cands;
}

// Chooses k disjoint pairs (a from xs, b from ys) with minimum total Manhattan distance.
// Candidates are first cut down to those nearest the shared border of tiles ta and tb.
inline std::vector<std::pair<int, int>> pair_min_cost(const GridState& st, const Tiling& t, const std::vector<int>& xs, int ta,
                                                      const std::vector<int>& ys, int tb, std::size_t k) {
  if (k == 0) return {};
  std::size_t pool = 2 * k + 4;
  auto a = pick_near(st, t, xs, ta, tb, std::min(pool, xs.size()));
  auto b = pick_near(st, t, ys, tb, ta, std::min(pool, ys.size()));
  MRP_ASSERT(a.size() >= k && b.size() >= k, "not enough robots to pair");
  const std::size_t n = std::max(a.size(), b.size());
  const long long big = 1LL << 30;
  // rows: a plus dummies; columns: b plus dummies; dummy-dummy pairs are forbidden so
  // exactly k real pairs are chosen when |a| = |b| = k, otherwise the cheapest k among them
  std::vector<std::vector<long long>> cost(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i < a.size() && j < b.size()) cost[i][j] = manhattan(st.pos(a[i]), st.pos(b[j]));
      else cost[i][j] = (i < a.size() || j < b.size()) ? big : 0;
    }
  auto m = detail::hungarian(cost);
  std::vector<std::pair<long long, std::pair<int, int>>> real;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::size_t(m[i]) < b.size()) real.push_back({cost[i][m[i]], {a[i], b[m[i]]}});
  std::stable_sort(real.begin(), real.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  MRP_ASSERT(real.size() >= k, "pairing failed");
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(real[i].second);
  return out;
}

// Live planning state shared by the pipeline stages.
struct PlanState {
  Tiling tiling;
  PhaseRunner runner;
  std::vector<Pos> target;

  PlanState(const Tiling& t, const std::vector<Pos>& start, std::vector<Pos> tgt)
      : tiling(t), runner(t.dims, start), target(std::move(tgt)) {}
  const GridState& state() const { return runner.state(); }
  int cur_tile(int r) const { return tiling.tile_of(runner.state().pos(r)); }
  int tgt_tile(int r) const { return tiling.tile_of(target[r]); }
  FlowGraph flow() const { return build_flow(runner.state().positions(), target, tiling); }
  // robots grouped by (current tile, target tile)
  std::map<Edge, std::vector<int>> edge_robots() const {
    std::map<Edge, std::vector<int>> m;
    for (std::size_t r = 0; r < target.size(); ++r) {
      int a = cur_tile(int(r)), b = tgt_tile(int(r));
      if (a != b) m[{a, b}].push_back(int(r));
    }
    return m;
  }
};

inline void do_remove_crossings(PlanState& ps) {
  const Tiling& t = ps.tiling;
  const GridState& st = ps.state();
  auto robots = ps.edge_robots();
  std::map<Edge, std::size_t> used;  // robots already taken from each edge list
  std::map<Edge, long long> rem;
  for (auto& [e, v] : robots) rem[e] = (long long)v.size();
  std::vector<std::pair<int, int>> pairs;
  for (int bj = 0; bj + 1 < t.ky(); ++bj)
    for (int bi = 0; bi + 1 < t.kx(); ++bi) {
      int BL = t.id(bi, bj), BR = t.id(bi + 1, bj), TL = t.id(bi, bj + 1), TR = t.id(bi + 1, bj + 1);
      const std::array<Edge, 2> line1{Edge{BL, TR}, Edge{TR, BL}};
      const std::array<Edge, 2> line2{Edge{BR, TL}, Edge{TL, BR}};
      for (;;) {
        Edge e{-1, -1}, g{-1, -1};
        for (auto x : line1)
          if (rem[x] > 0 && (e.first < 0 || rem[x] > rem[e])) e = x;
        for (auto x : line2)
          if (rem[x] > 0 && (g.first < 0 || rem[x] > rem[g])) g = x;
        if (e.first < 0 || g.first < 0) break;
        // sources of crossing diagonals always share a side
        MRP_ASSERT(t.adjacent(e.first, g.first) && !t.diagonal(e.first, g.first), "crossing diagonals with non-adjacent sources");
        long long k = std::min(rem[e], rem[g]);
        std::vector<int> ce(robots[e].begin() + used[e], robots[e].end());
        std::vector<int> cg(robots[g].begin() + used[g], robots[g].end());
        auto prs = pair_min_cost(st, t, ce, e.first, cg, g.first, std::size_t(k));
        auto drop = [&](Edge x, std::vector<int> taken) {
          auto& lst = robots[x];
          std::stable_partition(lst.begin() + used[x], lst.end(),
                                [&](int r) { return std::find(taken.begin(), taken.end(), r) != taken.end(); });
          used[x] += taken.size();
          rem[x] -= (long long)taken.size();
        };
        std::vector<int> te, tg;
        for (auto [x, y] : prs) te.push_back(x), tg.push_back(y);
        drop(e, te);
        drop(g, tg);
        pairs.insert(pairs.end(), prs.begin(), prs.end());
      }
    }
  ps.runner.run(exchange_phase(st, t, pairs));
}

inline void do_remove_bidirectional(PlanState& ps) {
  const Tiling& t = ps.tiling;
  const GridState& st = ps.state();
  auto robots = ps.edge_robots();
  std::vector<std::pair<int, int>> pairs;
  for (auto& [e, lst] : robots) {
    if (e.first > e.second) continue;
    auto it = robots.find({e.second, e.first});
    if (it == robots.end()) continue;
    std::size_t k = std::min(lst.size(), it->second.size());
    auto prs = pair_min_cost(st, t, lst, e.first, it->second, e.second, k);
    pairs.insert(pairs.end(), prs.begin(), prs.end());
  }
  ps.runner.run(exchange_phase(st, t, pairs));
}

struct PreprocessResult {
  Schedule schedule;
  std::vector<Pos> config;
  FlowGraph flow;
};

// `state.start` is the current configuration and `state.target` the robots' targets.
inline PreprocessResult remove_crossings(const Instance& state, const Tiling& t) {
  if (!state.fully_occupied()) throw Error(ErrorCode::NotFullyOccupied, "preprocessing needs a full grid");
  PlanState ps(t, state.start, state.target);
  do_remove_crossings(ps);
  return {ps.runner.take(), ps.state().positions(), ps.flow()};
}

inline PreprocessResult remove_bidirectional(const Instance& state, const Tiling& t) {
  if (!state.fully_occupied()) throw Error(ErrorCode::NotFullyOccupied, "preprocessing needs a full grid");
  PlanState ps(t, state.start, state.target);
  do_remove_bidirectional(ps);
  return {ps.runner.take(), ps.state().positions(), ps.flow()};
}

}  // namespace mrp
