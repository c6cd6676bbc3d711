#pragma once

#include <deque>

#include "partition.hpp"

namespace mrp {

enum class Side { Bottom = 0, Right = 1, Top = 2, Left = 3 };

// Side of tile t facing the orthogonal neighbour w.
inline Side side_toward(const Tiling& t, int a, int b) {
  int di = t.col(b) - t.col(a), dj = t.row(b) - t.row(a);
  MRP_ASSERT(std::abs(di) + std::abs(dj) == 1, "side_toward needs orthogonal neighbours");
  if (dj < 0) return Side::Bottom;
  if (di > 0) return Side::Right;
  if (dj > 0) return Side::Top;
  return Side::Left;
}

// Cell at `depth` rings inside the tile, in the line orthogonal to side s through coordinate c.
inline Pos side_cell(const Rect& r, Side s, int c, int depth) {
  switch (s) {
    case Side::Bottom: return {c, r.y0 + depth};
    case Side::Top: return {c, r.y1() - 1 - depth};
    case Side::Left: return {r.x0 + depth, c};
    default: return {r.x1() - 1 - depth, c};
  }
}

inline Move outward(Side s) {
  switch (s) {
    case Side::Bottom: return Move::South;
    case Side::Top: return Move::North;
    case Side::Left: return Move::West;
    default: return Move::East;
  }
}

struct Terminal {
  Side side;
  int coord;  // x for bottom/top, y for left/right
  bool in;
};

struct TunnelPair {
  int in_term = -1, out_term = -1;
  int hull = 0;
  std::vector<Pos> path;  // from the in-terminal cell to the out-terminal cell
};

struct TunnelPlan {
  bool feasible = true;
  std::vector<TunnelPair> pairs;
};

namespace detail {

inline int perimeter_param(const Rect& r, const Terminal& t) {
  switch (t.side) {
    case Side::Bottom: return t.coord - r.x0;
    case Side::Right: return r.w + (t.coord - r.y0);
    case Side::Top: return r.w + r.h + (r.x1() - 1 - t.coord);
    default: return 2 * r.w + r.h + (r.y1() - 1 - t.coord);
  }
}

// Cells of hull H (1 = outermost ring) in counterclockwise order from its bottom-left corner.
inline std::vector<Pos> ring_cells(const Rect& r, int H) {
  int xa = r.x0 + H - 1, xb = r.x1() - H, ya = r.y0 + H - 1, yb = r.y1() - H;
  std::vector<Pos> ring;
  if (xb <= xa || yb <= ya) return ring;
  for (int x = xa; x <= xb; ++x) ring.push_back({x, ya});
  for (int y = ya + 1; y <= yb; ++y) ring.push_back({xb, y});
  for (int x = xb - 1; x >= xa; --x) ring.push_back({x, yb});
  for (int y = yb - 1; y > ya; --y) ring.push_back({xa, y});
  return ring;
}

struct Matched {
  int open, close, height;
};

inline std::vector<Matched> parenthesize(const std::vector<int>& order, const std::vector<Terminal>& terms, bool opener_in) {
  const int n = int(order.size());
  int sum = 0, best = 0, best_at = 0;
  for (int i = 0; i < n; ++i) {
    sum += terms[order[i]].in == opener_in ? 1 : -1;
    if (sum < best) best = sum, best_at = i + 1;
  }
  std::vector<Matched> out;
  std::vector<std::pair<int, int>> stack;  // (terminal, max child height)
  for (int k = 0; k < n; ++k) {
    int idx = order[(best_at + k) % n];
    if (terms[idx].in == opener_in) {
      stack.push_back({idx, 0});
    } else {
      MRP_ASSERT(!stack.empty(), "unbalanced terminals");
      auto [o, mc] = stack.back();
      stack.pop_back();
      out.push_back({o, idx, mc + 1});
      if (!stack.empty()) stack.back().second = std::max(stack.back().second, mc + 1);
    }
  }
  MRP_ASSERT(stack.empty(), "unbalanced terminals");
  return out;
}

}  // namespace detail

// Non-crossing matching of in/out terminals on the border of `r` with one tunnel per pair.
// Tunnel hull = base + nesting height; base keeps tunnels clear of the stacked rows.
inline TunnelPlan boundary_matching(const Rect& r, const std::vector<Terminal>& terms, int base) {
  TunnelPlan plan;
  long long nin = std::count_if(terms.begin(), terms.end(), [](const Terminal& t) { return t.in; });
  if (2 * nin != (long long)terms.size()) throw Error(ErrorCode::CardinalityMismatch, "in/out terminal counts differ");
  if (terms.empty()) return plan;
  std::vector<int> order(terms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return detail::perimeter_param(r, terms[a]) < detail::perimeter_param(r, terms[b]);
  });
  auto a = detail::parenthesize(order, terms, true);
  auto b = detail::parenthesize(order, terms, false);
  auto maxh = [](const std::vector<detail::Matched>& m) {
    int h = 0;
    for (auto& x : m) h = std::max(h, x.height);
    return h;
  };
  bool opener_in = maxh(a) <= maxh(b);
  const auto& m = opener_in ? a : b;
  std::map<int, std::vector<Pos>> rings;
  for (const auto& mt : m) {
    TunnelPair tp;
    tp.in_term = opener_in ? mt.open : mt.close;
    tp.out_term = opener_in ? mt.close : mt.open;
    tp.hull = base + mt.height;
    const int H = tp.hull;
    auto& ring = rings[H];
    if (ring.empty()) ring = detail::ring_cells(r, H);
    const Terminal& ti = terms[tp.in_term];
    const Terminal& to = terms[tp.out_term];
    auto fits = [&](const Terminal& t) {
      int lo = (t.side == Side::Bottom || t.side == Side::Top) ? r.x0 : r.y0;
      int len = (t.side == Side::Bottom || t.side == Side::Top) ? r.w : r.h;
      return t.coord - lo >= H - 1 && t.coord - lo <= len - H;
    };
    if (ring.empty() || !fits(ti) || !fits(to)) {
      plan.feasible = false;
      plan.pairs.clear();
      return plan;
    }
    for (int k = 0; k < H - 1; ++k) tp.path.push_back(side_cell(r, ti.side, ti.coord, k));
    Pos ein = side_cell(r, ti.side, ti.coord, H - 1), eout = side_cell(r, to.side, to.coord, H - 1);
    int ia = int(std::find(ring.begin(), ring.end(), ein) - ring.begin());
    int ib = int(std::find(ring.begin(), ring.end(), eout) - ring.begin());
    MRP_ASSERT(ia < int(ring.size()) && ib < int(ring.size()), "terminal misses its hull");
    const int L = int(ring.size());
    int step = opener_in ? 1 : L - 1;
    for (int i = ia;; i = (i + step) % L) {
      tp.path.push_back(ring[i]);
      if (i == ib) break;
    }
    for (int k = H - 2; k >= 0; --k) tp.path.push_back(side_cell(r, to.side, to.coord, k));
    plan.pairs.push_back(std::move(tp));
  }
  return plan;
}

namespace detail {

// Horizontal neighbour of w in the 2x2 block spanned by the diagonal w->v.
inline int detour_tile(const Tiling& t, int w, int v) { return t.id(t.col(v), t.row(w)); }

inline std::map<Edge, long long> eliminate_weights(const Tiling& t, const std::map<Edge, long long>& w) {
  std::map<Edge, long long> out;
  for (auto& [e, f] : w) {
    if (!t.diagonal(e.first, e.second)) {
      out[e] += f;
      continue;
    }
    int u = detour_tile(t, e.first, e.second);
    out[{e.first, u}] += f;
    out[{u, e.second}] += f;
  }
  return out;
}

// Terminal columns along the border between orthogonal neighbours a and b.
struct BorderCols {
  std::vector<int> fwd, bwd;  // a->b and b->a columns
};

struct SequenceLayout {
  std::vector<std::map<Edge, long long>> weights;    // per subflow, orthogonal edges only
  std::map<Edge, int> width;                         // max over subflows of the edge weight
  std::map<Edge, std::vector<int>> cols;             // ordered pair -> border coordinates
  std::map<int, int> base;                           // tile -> deepest stack
  std::vector<std::map<int, TunnelPlan>> tunnels;    // per step, per tile
  std::vector<std::map<int, std::vector<Terminal>>> terms;
  std::vector<std::map<int, std::vector<std::pair<Edge, int>>>> term_owner;  // (edge, column) per terminal
  bool feasible = true;
};

inline SequenceLayout layout_sequence(const Tiling& t, const std::vector<const std::map<Edge, long long>*>& raw) {
  SequenceLayout L;
  for (auto* w : raw) L.weights.push_back(eliminate_weights(t, *w));
  for (auto& wj : L.weights)
    for (auto& [e, f] : wj) L.width[e] = std::max<int>(L.width[e], int(f));
  std::set<Edge> borders;
  for (auto& [e, m] : L.width) borders.insert({std::min(e.first, e.second), std::max(e.first, e.second)});
  for (auto [a, b] : borders) {
    int mf = L.width.count({a, b}) ? L.width[{a, b}] : 0;
    int mb = L.width.count({b, a}) ? L.width[{b, a}] : 0;
    Rect ra = t.rect(a);
    Side s = side_toward(t, a, b);
    bool horiz = s == Side::Bottom || s == Side::Top;
    int lo = horiz ? ra.x0 : ra.y0, len = horiz ? ra.w : ra.h;
    if (mf + mb > len) {
      L.feasible = false;
      return L;
    }
    int start = lo + (len - mf - mb) / 2;
    for (int i = 0; i < mf; ++i) L.cols[{a, b}].push_back(start + i);
    for (int i = 0; i < mb; ++i) L.cols[{b, a}].push_back(start + mf + i);
  }
  for (auto& [e, m] : L.width) {
    int depth = 0;
    for (auto& wj : L.weights) {
      auto it = wj.find(e);
      depth += it != wj.end() && it->second > 0;
    }
    L.base[e.first] = std::max(L.base[e.first], depth);
  }
  const std::size_t steps = L.weights.size();
  L.tunnels.resize(steps);
  L.terms.resize(steps);
  L.term_owner.resize(steps);
  for (std::size_t j = 0; j < steps; ++j) {
    for (auto& [e, f] : L.weights[j]) {
      const auto& cl = L.cols[e];
      for (int q = 0; q < f; ++q) {
        int a = e.first, b = e.second;
        L.terms[j][a].push_back({side_toward(t, a, b), cl[q], false});
        L.term_owner[j][a].push_back({e, q});
        L.terms[j][b].push_back({side_toward(t, b, a), cl[q], true});
        L.term_owner[j][b].push_back({e, q});
      }
    }
    for (auto& [tile, tv] : L.terms[j]) {
      int base = std::max(1, L.base.count(tile) ? L.base[tile] : 0);
      TunnelPlan tp = boundary_matching(t.rect(tile), tv, base);
      if (!tp.feasible) {
        L.feasible = false;
        return L;
      }
      L.tunnels[j][tile] = std::move(tp);
    }
  }
  return L;
}

}  // namespace detail

inline std::map<Edge, long long> weights_of(const std::vector<Cycle>& cycles) {
  std::map<Edge, long long> w;
  for (const auto& c : cycles)
    for (auto e : cycle_edges(c)) w[e] += c.count;
  return w;
}

// Checks the stacked layout of a subflow sequence against the tile sizes.
inline bool sequence_fits(const Tiling& t, const std::vector<Subflow>& seq) {
  std::vector<const std::map<Edge, long long>*> raw;
  for (const auto& s : seq) raw.push_back(&s.w);
  return detail::layout_sequence(t, raw).feasible;
}

// Moves every robot of the given subflows one tile along its flow edge.
inline void do_realize_sequence(PlanState& ps, const std::vector<Subflow>& seq, int d) {
  if (int(seq.size()) > d) throw Error(ErrorCode::TooManySubflows, "sequence longer than d");
  const Tiling& t = ps.tiling;
  std::vector<const std::map<Edge, long long>*> raw;
  for (const auto& s : seq) raw.push_back(&s.w);
  auto L = detail::layout_sequence(t, raw);
  if (!L.feasible) throw Error(ErrorCode::TileTooSmall, "tunnels do not fit into the tiles");
  const int n = int(ps.target.size());
  // (1) pick robots for every subflow edge
  std::vector<int> sub(n, -1);
  std::vector<Edge> edge_of(n, {-1, -1});
  {
    auto avail = ps.edge_robots();
    std::map<Edge, std::size_t> head;
    for (auto& [e, lst] : avail) {
      int toward = t.diagonal(e.first, e.second) ? detail::detour_tile(t, e.first, e.second) : e.second;
      lst = pick_near(ps.state(), t, lst, e.first, toward, lst.size());
    }
    for (std::size_t j = 0; j < seq.size(); ++j)
      for (auto& [e, f] : seq[j].w) {
        auto& lst = avail[e];
        for (long long k = 0; k < f; ++k) {
          MRP_ASSERT(head[e] < lst.size(), "subflow exceeds robots on an edge");
          int r = lst[head[e]++];
          sub[r] = int(j);
          edge_of[r] = e;
        }
      }
  }
  // (2) diagonal robots trade places with idle robots of the detour tile
  {
    std::vector<std::pair<int, int>> pairs;
    std::map<std::pair<int, int>, std::vector<int>> idle_near;  // (u, w) -> idle robots of u near w
    std::vector<char> idle_used(n, 0);
    std::map<Edge, std::vector<int>> diag;
    for (int r = 0; r < n; ++r)
      if (sub[r] >= 0 && t.diagonal(edge_of[r].first, edge_of[r].second)) diag[edge_of[r]].push_back(r);
    for (auto& [e, rs] : diag) {
      int w = e.first, v = e.second, u = detail::detour_tile(t, w, v);
      auto key = std::make_pair(u, w);
      if (!idle_near.count(key)) {
        std::vector<int> idle;
        Rect ru = t.rect(u);
        for (int y = ru.y0; y < ru.y1(); ++y)
          for (int x = ru.x0; x < ru.x1(); ++x) {
            int q = ps.state().robot_at({x, y});
            if (q >= 0 && ps.tgt_tile(q) == u) idle.push_back(q);
          }
        idle_near[key] = pick_near(ps.state(), t, idle, u, w, idle.size());
      }
      std::vector<int> free_idle;
      for (int q : idle_near[key])
        if (!idle_used[q]) free_idle.push_back(q);
      auto prs = pair_min_cost(ps.state(), t, rs, w, free_idle, u, rs.size());
      for (auto [r, q] : prs) idle_used[q] = 1;
      for (auto [r, q] : prs) {
        pairs.push_back({r, q});
        sub[q] = sub[r];
        edge_of[q] = {w, u};
        edge_of[r] = {u, v};
      }
    }
    if (!pairs.empty()) ps.runner.run(exchange_phase(ps.state(), t, pairs));
  }
  // (3) stack leaving robots in the columns next to their border
  std::vector<Pos> want(n, Pos{-1, -1});
  {
    std::map<std::pair<Edge, int>, std::vector<int>> by;  // (edge, subflow) -> robots
    for (int r = 0; r < n; ++r)
      if (sub[r] >= 0) by[{edge_of[r], sub[r]}].push_back(r);
    for (auto& [key, rs] : by) {
      auto [e, j] = key;
      MRP_ASSERT(L.weights[j].count(e) && L.weights[j].at(e) == (long long)rs.size(), "edge robot count mismatch");
      Side s = side_toward(t, e.first, e.second);
      bool horiz = s == Side::Bottom || s == Side::Top;
      std::sort(rs.begin(), rs.end(), [&](int a, int b) {
        Pos pa = ps.state().pos(a), pb = ps.state().pos(b);
        return horiz ? std::make_pair(pa.x, pa.y) < std::make_pair(pb.x, pb.y) : std::make_pair(pa.y, pa.x) < std::make_pair(pb.y, pb.x);
      });
      const auto& cl = L.cols.at(e);
      for (std::size_t q = 0; q < rs.size(); ++q) {
        int depth = 0;
        for (int jj = 0; jj < j; ++jj) {
          auto it = L.weights[jj].find(e);
          depth += it != L.weights[jj].end() && it->second > (long long)q;
        }
        want[rs[q]] = side_cell(t.rect(e.first), s, cl[q], depth);
      }
    }
    Phase place;
    for (int tile = 0; tile < t.count(); ++tile) {
      Rect R = t.rect(tile);
      std::vector<char> reserved(R.area(), 0);
      bool any = false;
      for (int r = 0; r < n; ++r)
        if (want[r].x >= 0 && R.contains(want[r])) reserved[R.local(want[r])] = 1, any = true;
      if (!any) continue;
      std::vector<int> dest(R.area(), -1);
      std::vector<int> displaced;
      std::vector<int> freed;
      for (int c = 0; c < R.area(); ++c) {
        int r = ps.state().robot_at(R.global(c));
        if (want[r].x >= 0) {
          MRP_ASSERT(R.contains(want[r]), "stack robot outside its tile");
          dest[c] = R.local(want[r]);
          if (!reserved[c]) freed.push_back(c);
        } else if (reserved[c]) {
          displaced.push_back(c);
        } else {
          dest[c] = c;
        }
      }
      MRP_ASSERT(freed.size() == displaced.size(), "placement imbalance");
      if (!displaced.empty()) {
        std::vector<std::vector<long long>> cost(displaced.size(), std::vector<long long>(freed.size()));
        for (std::size_t a = 0; a < displaced.size(); ++a)
          for (std::size_t b = 0; b < freed.size(); ++b) cost[a][b] = manhattan(R.global(displaced[a]), R.global(freed[b]));
        auto m = detail::hungarian(cost);
        for (std::size_t a = 0; a < displaced.size(); ++a) dest[displaced[a]] = freed[m[a]];
      }
      merge_phase(place, permute_region(R, dest));
    }
    ps.runner.run(place);
  }
  // (4) one tunnel push per subflow
  for (std::size_t j = 0; j < seq.size(); ++j) {
    CellStep cs;
    for (auto& [tile, plan] : L.tunnels[j]) {
      const auto& terms = L.terms[j].at(tile);
      const auto& owner = L.term_owner[j].at(tile);
      for (const auto& tp : plan.pairs) {
        for (std::size_t k = 0; k + 1 < tp.path.size(); ++k) cs.push_back({tp.path[k], move_between(tp.path[k], tp.path[k + 1])});
        const Terminal& to = terms[tp.out_term];
        Pos last = tp.path.back();
        int r = ps.state().robot_at(last);
        MRP_ASSERT(sub[r] == int(j) && edge_of[r] == owner[tp.out_term].first, "stack order broken at an out terminal");
        cs.push_back({last, outward(to.side)});
      }
    }
    ps.runner.run_step(cs);
  }
  for (int r = 0; r < n; ++r)
    if (sub[r] >= 0) MRP_ASSERT(ps.cur_tile(r) == ps.tgt_tile(r), "robot missed its target tile");
}

namespace detail {

inline std::pair<Subflow, Subflow> split_subflow(const Subflow& s) {
  std::vector<Cycle> units;
  for (const auto& c : s.cycles)
    for (long long k = 0; k < c.count; ++k) units.push_back({c.nodes, 1});
  MRP_ASSERT(units.size() >= 2, "cannot split a single cycle");
  Subflow a, b;
  std::size_t h = units.size() / 2;
  for (std::size_t i = 0; i < units.size(); ++i) (i < h ? a : b).cycles.push_back(units[i]);
  a.w = weights_of(a.cycles);
  b.w = weights_of(b.cycles);
  return {a, b};
}

}  // namespace detail

inline void do_realize_all(PlanState& ps, const SubflowPartition& part, int d) {
  std::deque<std::vector<Subflow>> todo;
  for (std::size_t i = 0; i < part.size(); i += d)
    todo.emplace_back(part.begin() + i, part.begin() + std::min(part.size(), i + std::size_t(d)));
  while (!todo.empty()) {
    auto seq = std::move(todo.front());
    todo.pop_front();
    if (sequence_fits(ps.tiling, seq)) {
      do_realize_sequence(ps, seq, d);
      continue;
    }
    if (seq.size() > 1) {
      std::size_t h = seq.size() / 2;
      todo.emplace_front(seq.begin() + h, seq.end());
      todo.emplace_front(seq.begin(), seq.begin() + h);
      continue;
    }
    std::size_t units = 0;
    for (auto& c : seq[0].cycles) units += c.count;
    if (units < 2) throw Error(ErrorCode::TileTooSmall, "a single cycle does not fit its tiles");
    auto [a, b] = detail::split_subflow(seq[0]);
    todo.push_front({b});
    todo.push_front({a});
  }
}

// Public wrappers: `state.start` is the current configuration, `state.target` the targets.
inline std::pair<Schedule, Subflow> eliminate_diagonals(const Instance& state, const Subflow& s, const Tiling& t) {
  PlanState ps(t, state.start, state.target);
  auto avail = ps.edge_robots();
  std::vector<std::pair<int, int>> pairs;
  std::vector<char> used(state.size(), 0);
  for (auto& [e, f] : s.w) {
    if (!t.diagonal(e.first, e.second)) continue;
    int w = e.first, u = detail::detour_tile(t, w, e.second);
    auto rs = pick_near(ps.state(), t, avail[e], w, u, std::size_t(f));
    MRP_ASSERT((long long)rs.size() == f, "subflow exceeds robots on an edge");
    std::vector<int> idle;
    Rect ru = t.rect(u);
    for (int y = ru.y0; y < ru.y1(); ++y)
      for (int x = ru.x0; x < ru.x1(); ++x) {
        int q = ps.state().robot_at({x, y});
        if (ps.tgt_tile(q) == u && !used[q]) idle.push_back(q);
      }
    auto prs = pair_min_cost(ps.state(), t, rs, w, idle, u, std::size_t(f));
    for (auto [r, q] : prs) used[q] = 1;
    pairs.insert(pairs.end(), prs.begin(), prs.end());
  }
  if (!pairs.empty()) ps.runner.run(exchange_phase(ps.state(), t, pairs));
  Subflow out;
  out.w = detail::eliminate_weights(t, s.w);
  return {ps.runner.take(), out};
}

inline Schedule realize_sequence(const Instance& state, const std::vector<Subflow>& seq, const Tiling& t, int d) {
  PlanState ps(t, state.start, state.target);
  do_realize_sequence(ps, seq, d);
  return ps.runner.take();
}

inline Schedule realize_subflow(const Instance& state, const Subflow& s, const Tiling& t) {
  return realize_sequence(state, {s}, t, std::max(1, t.d));
}

inline Schedule realize_all(const Instance& state, const SubflowPartition& part, const Tiling& t) {
  PlanState ps(t, state.start, state.target);
  do_realize_all(ps, part, t.d);
  return ps.runner.take();
}

}  // namespace mrp
