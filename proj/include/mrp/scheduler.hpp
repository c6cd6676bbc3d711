#pragma once

#include <future>
#include <thread>

#include "matching.hpp"
#include "realization.hpp"
#include "search.hpp"

namespace mrp {

struct PlanOptions {
  // Return the shorter of the tiled pipeline and one whole-grid rotatesort.
  bool portfolio = true;
  // Use the tiled pipeline only (ignored when the grid is too small to tile).
  bool force_pipeline = false;
};

inline Schedule region_to_targets(PlanState& ps) {
  const Tiling& t = ps.tiling;
  Phase fin;
  for (int tile = 0; tile < t.count(); ++tile) {
    Rect R = t.rect(tile);
    std::vector<int> dest(R.area());
    for (int c = 0; c < R.area(); ++c) {
      int r = ps.state().robot_at(R.global(c));
      MRP_ASSERT(R.contains(ps.target[r]), "robot outside its target tile before the final sort");
      dest[c] = R.local(ps.target[r]);
    }
    merge_phase(fin, permute_region(R, dest));
  }
  ps.runner.run(fin);
  return {};
}

// Tiling, preprocessing, partition, realization and final in-tile sorting.
inline Schedule plan_pipeline(const Instance& inst) {
  const int d = max_distance(inst);
  if (d == 0) return {};
  Tiling t = build_tiling(inst.dims, d);
  if (t.kx() < 2 || t.ky() < 2) return plan_rotatesort(inst);
  PlanState ps(t, inst.start, inst.target);
  do_remove_crossings(ps);
  do_remove_bidirectional(ps);
  FlowGraph f = ps.flow();
  MRP_ASSERT(!has_crossings(f, t) && !has_bidirectional(f) && f.is_circulation(), "preprocessing left an invalid flow");
  SubflowPartition part = partition_subflows(f, t, d);
  do_realize_all(ps, part, d);
  region_to_targets(ps);
  return ps.runner.take();
}

// Single-row or single-column grid: robots cannot pass each other, so the instance is
// solvable iff the order along the line is kept; then straight motion is optimal.
inline Schedule plan_line(const Instance& inst) {
  check_instance(inst);
  const GridDims g = inst.dims;
  MRP_ASSERT(g.n1 == 1 || g.n2 == 1, "plan_line needs a one-wide grid");
  auto key = [&](Pos p) { return g.n2 == 1 ? p.x : p.y; };
  std::vector<int> ord(inst.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](int a, int b) { return key(inst.start[a]) < key(inst.start[b]); });
  for (std::size_t k = 1; k < ord.size(); ++k)
    if (key(inst.target[ord[k - 1]]) >= key(inst.target[ord[k]]))
      throw Error(ErrorCode::InfeasibleDims, "robots on a one-wide grid cannot pass each other");
  Schedule out;
  std::vector<Pos> cur = inst.start;
  for (int d = max_distance(inst); d > 0; --d) {
    Step st;
    st.moves.assign(inst.size(), Move::Wait);
    for (std::size_t r = 0; r < inst.size(); ++r)
      if (cur[r] != inst.target[r]) {
        Pos t = inst.target[r];
        Pos nx = cur[r];
        if (t.x != nx.x) nx.x += t.x > nx.x ? 1 : -1;
        else nx.y += t.y > nx.y ? 1 : -1;
        st.moves[r] = move_between(cur[r], nx);
        cur[r] = nx;
      }
    out.steps.push_back(std::move(st));
  }
  return out;
}

// 2x2 grid: exhaustive search over its at most 24 configurations.
inline Schedule plan_tiny(const Instance& inst) {
  auto res = bfs_search(inst, 64, true);
  if (res.status != SearchResult::Exact) throw Error(ErrorCode::InfeasibleDims, "target unreachable on this grid");
  return *res.schedule;
}

inline Schedule plan_full(const Instance& inst, const PlanOptions& opt = {}) {
  check_instance(inst);
  if (!inst.fully_occupied()) throw Error(ErrorCode::NotFullyOccupied, "plan_full needs a fully occupied grid");
  const int d = max_distance(inst);
  if (d == 0) return {};
  if (infeasible_shape(inst.dims)) return inst.dims.n1 == 2 && inst.dims.n2 == 2 ? plan_tiny(inst) : plan_line(inst);
  Tiling t = build_tiling(inst.dims, d);
  if (t.kx() < 2 || t.ky() < 2) return plan_rotatesort(inst);
  Schedule pipe = plan_pipeline(inst);
  if (!opt.portfolio || opt.force_pipeline) return pipe;
  Schedule direct = plan_rotatesort(inst);
  return direct.makespan() < pipe.makespan() ? direct : pipe;
}

namespace detail {

// Strictly increasing values of a fixed parity, each as close as possible to the wish.
inline std::vector<int> spread_values(const std::vector<int>& wish, int lo, int hi) {
  const int n = int(wish.size());
  std::vector<int> v(n);
  for (int k = 0; k < n; ++k) {
    int w = std::clamp(wish[k], lo, hi);
    if ((w - lo) % 2) w = (w + 1 <= hi) ? w + 1 : w - 1;
    v[k] = w;
  }
  for (int k = 1; k < n; ++k) v[k] = std::max(v[k], v[k - 1] + 2);
  if (n) v[n - 1] = std::min(v[n - 1], hi);
  for (int k = n - 2; k >= 0; --k) v[k] = std::min(v[k], v[k + 1] - 2);
  MRP_ASSERT(n == 0 || v[0] >= lo, "not enough columns to spread robots");
  return v;
}

// Moves robots to distinct columns of the given parity, then to rows of the given parity.
// Returns the schedule and the reached configuration.
inline std::pair<Schedule, std::vector<Pos>> spread_out(GridDims g, const std::vector<Pos>& from, int parity, int row_hi) {
  const int n = int(from.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return from[a] < from[b]; });
  int col_hi = g.n1 - 1;
  if ((col_hi - parity) % 2) --col_hi;
  std::vector<int> wish(n);
  for (int k = 0; k < n; ++k) wish[k] = from[order[k]].x;
  auto cols = spread_values(wish, parity, col_hi);
  std::vector<Pos> mid = from;
  for (int k = 0; k < n; ++k) mid[order[k]].x = cols[k];
  std::vector<Pos> end = mid;
  for (int r = 0; r < n; ++r) {
    int y = std::clamp(from[r].y, parity, row_hi);
    if ((y - parity) % 2) y = (y + 1 <= row_hi) ? y + 1 : y - 1;
    end[r].y = y;
  }
  Schedule s;
  std::vector<Pos> cur = from;
  auto walk = [&](const std::vector<Pos>& goal) {
    for (;;) {
      Step st;
      st.moves.assign(n, Move::Wait);
      bool moved = false;
      for (int r = 0; r < n; ++r) {
        Pos c = cur[r], q = goal[r];
        Move m = q.x > c.x ? Move::East : q.x < c.x ? Move::West : q.y > c.y ? Move::North : q.y < c.y ? Move::South : Move::Wait;
        st.moves[r] = m;
        if (m != Move::Wait) moved = true, cur[r] = apply_move(c, m);
      }
      if (!moved) break;
      s.steps.push_back(std::move(st));
    }
  };
  walk(mid);
  walk(end);
  return {s, end};
}

}  // namespace detail

inline bool sparse_case(std::size_t N, GridDims g, int d) {
  return N >= 1 && long(N) <= (g.n1 + 3) / 4 && long(N) <= d && g.n1 >= 2 && g.n2 >= 2;
}

// Coordinate-sweep schedule for few robots: odd spread, lane moves, even spread reversed.
inline Schedule plan_sparse(const Instance& inst) {
  check_instance(inst);
  const GridDims g = inst.dims;
  const int n = int(inst.size());
  const int d = max_distance(inst);
  if (d == 0) return {};
  if (!sparse_case(inst.size(), g, d)) throw Error(ErrorCode::CaseBoundsViolated, "sparse case needs N <= ceil(n1/4), N <= d");
  // odd rows keep a free even lane above (or below when the grid has two rows)
  int odd_hi = g.n2 >= 3 ? ((g.n2 - 2) % 2 ? g.n2 - 2 : g.n2 - 3) : 1;
  auto [s1, co] = detail::spread_out(g, inst.start, 1, odd_hi);
  int even_hi = (g.n2 - 1) % 2 ? g.n2 - 2 : g.n2 - 1;
  auto [s3rev, ce] = detail::spread_out(g, inst.target, 0, even_hi);
  Schedule out = s1;
  std::vector<Pos> cur = co;
  auto lane_of = [&](int y) { return y + 1 < g.n2 ? y + 1 : y - 1; };
  auto run = [&](auto&& choose) {
    for (;;) {
      Step st;
      st.moves.assign(n, Move::Wait);
      bool moved = false;
      for (int r = 0; r < n; ++r) {
        Move m = choose(r);
        st.moves[r] = m;
        if (m != Move::Wait) moved = true;
      }
      if (!moved) break;
      for (int r = 0; r < n; ++r) cur[r] = apply_move(cur[r], st.moves[r]);
      out.steps.push_back(std::move(st));
    }
  };
  // horizontal stage, right movers then left movers, each via the lane next to its row
  for (int dir : {+1, -1}) {
    std::vector<int> phase(n, 0);  // 0 lift, 1 travel, 2 drop, 3 done
    for (int r = 0; r < n; ++r)
      if ((ce[r].x - co[r].x) * dir <= 0) phase[r] = 3;
    run([&](int r) -> Move {
      int lane = lane_of(co[r].y);
      switch (phase[r]) {
        case 0:
          phase[r] = 1;
          return move_between(cur[r], {cur[r].x, lane});
        case 1:
          if (cur[r].x != ce[r].x) return dir > 0 ? Move::East : Move::West;
          phase[r] = 3;
          return move_between(cur[r], {cur[r].x, co[r].y});
        default: return Move::Wait;
      }
    });
  }
  // vertical stage: every robot owns its column
  run([&](int r) -> Move {
    if (cur[r].y < ce[r].y) return Move::North;
    if (cur[r].y > ce[r].y) return Move::South;
    return Move::Wait;
  });
  append(out, reversed(s3rev));
  return out;
}

namespace detail {

struct Cluster {
  Rect rect;
  std::vector<int> robots;
};

inline Rect inflate_to(Rect r, GridDims g, int mw, int mh) {
  while (r.w < mw && r.w < g.n1) {
    if (r.x1() < g.n1) ++r.w;
    else --r.x0, ++r.w;
  }
  while (r.h < mh && r.h < g.n2) {
    if (r.y1() < g.n2) ++r.h;
    else --r.y0, ++r.h;
  }
  return r;
}

inline Rect hull(const Rect& a, const Rect& b) {
  int x0 = std::min(a.x0, b.x0), y0 = std::min(a.y0, b.y0);
  int x1 = std::max(a.x1(), b.x1()), y1 = std::max(a.y1(), b.y1());
  return {x0, y0, x1 - x0, y1 - y0};
}

inline std::vector<Rect> merge_disjoint(std::vector<Rect> rs) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(rs.begin(), rs.end(), [](const Rect& a, const Rect& b) { return std::tie(a.x0, a.y0) < std::tie(b.x0, b.y0); });
    std::vector<Rect> out;
    for (const Rect& r : rs) {
      Rect cur = r;
      bool merged = true;
      while (merged) {
        merged = false;
        for (std::size_t i = 0; i < out.size(); ++i)
          if (out[i].intersects(cur)) {
            cur = hull(cur, out[i]);
            out.erase(out.begin() + i);
            merged = changed = true;
            break;
          }
      }
      out.push_back(cur);
    }
    rs = std::move(out);
  }
  return rs;
}

}  // namespace detail

inline std::vector<detail::Cluster> cluster_robots(const Instance& inst) {
  const GridDims g = inst.dims;
  std::vector<Rect> boxes;
  for (std::size_t r = 0; r < inst.size(); ++r) {
    if (inst.start[r] == inst.target[r]) continue;
    Pos a = inst.start[r], b = inst.target[r];
    Rect box{std::min(a.x, b.x), std::min(a.y, b.y), std::abs(a.x - b.x) + 1, std::abs(a.y - b.y) + 1};
    boxes.push_back(detail::inflate_to(box, g, 2, 2));
  }
  std::vector<Rect> rects;
  for (;;) {
    rects = detail::merge_disjoint(boxes);
    bool grew = false;
    for (Rect& r : rects)
      if (r.w == 2 && r.h == 2) {
        Rect big = detail::inflate_to(r, g, 3, 2);
        if (big == r) big = detail::inflate_to(r, g, 2, 3);
        if (!(big == r)) r = big, grew = true;
      }
    if (!grew) break;
    boxes = rects;
  }
  std::vector<detail::Cluster> cl;
  for (const Rect& r : rects) cl.push_back({r, {}});
  for (std::size_t r = 0; r < inst.size(); ++r) {
    for (auto& c : cl)
      if (c.rect.contains(inst.start[r])) {
        c.robots.push_back(int(r));
        break;
      }
  }
  return cl;
}

// Pads a cluster rectangle with fillers for empty cells and plans it as a full grid.
// Fillers stand for empty cells, so their moves are dropped from the result.
inline Schedule plan_cluster(const Instance& inst, const Rect& R, const std::vector<int>& robots, const PlanOptions& opt) {
  GridDims local{R.w, R.h};
  std::vector<char> busy_s(R.area(), 0), busy_t(R.area(), 0);
  for (int r : robots) {
    MRP_ASSERT(R.contains(inst.start[r]) && R.contains(inst.target[r]), "robot leaves its cluster");
    busy_s[R.local(inst.start[r])] = 1;
    busy_t[R.local(inst.target[r])] = 1;
  }
  Instance sub;
  sub.dims = local;
  auto loc = [&](Pos p) { return Pos{p.x - R.x0, p.y - R.y0}; };
  for (std::size_t k = 0; k < robots.size(); ++k) sub.add(int(k), loc(inst.start[robots[k]]), loc(inst.target[robots[k]]));
  std::vector<Pos> fs, ft;
  for (int c = 0; c < R.area(); ++c) {
    Pos p = local.at(c);
    if (!busy_s[c] && !busy_t[c]) sub.add(int(sub.size()), p, p);
    else {
      if (!busy_s[c]) fs.push_back(p);
      if (!busy_t[c]) ft.push_back(p);
    }
  }
  auto bm = bottleneck_matching(fs, ft);
  for (std::size_t i = 0; i < fs.size(); ++i) sub.add(int(sub.size()), fs[i], ft[bm.match[i]]);
  Schedule s = plan_full(sub, opt);
  Schedule out;
  out.steps.resize(s.steps.size());
  for (std::size_t k = 0; k < s.steps.size(); ++k) {
    auto& m = out.steps[k].moves;
    m.assign(inst.size(), Move::Wait);
    for (std::size_t i = 0; i < robots.size(); ++i) m[robots[i]] = s.steps[k].get(i);
  }
  return out;
}

inline bool use_sparse(const Instance& inst) { return sparse_case(inst.size(), inst.dims, max_distance(inst)); }

inline Schedule plan_auto(const Instance& inst, const PlanOptions& opt = {}) {
  check_instance(inst);
  if (max_distance(inst) == 0) return {};
  if (inst.dims.n1 == 1 || inst.dims.n2 == 1) return plan_line(inst);
  if (inst.dims.n1 == 2 && inst.dims.n2 == 2) return plan_tiny(inst);
  if (use_sparse(inst)) return plan_sparse(inst);
  if (inst.fully_occupied()) return plan_full(inst, opt);
  auto clusters = cluster_robots(inst);
  for (std::size_t a = 0; a < clusters.size(); ++a)
    for (std::size_t b = a + 1; b < clusters.size(); ++b)
      MRP_ASSERT(!clusters[a].rect.intersects(clusters[b].rect), "cluster rectangles overlap");
  std::vector<const detail::Cluster*> work;
  for (const auto& c : clusters)
    if (!c.robots.empty()) work.push_back(&c);
  const std::size_t K = std::min<std::size_t>(work.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::future<Schedule>> jobs;
  for (std::size_t k = 0; k < K; ++k)
    jobs.push_back(std::async(K > 1 ? std::launch::async : std::launch::deferred, [&, k] {
      Schedule part;
      for (std::size_t i = k; i < work.size(); i += K) merge_into(part, plan_cluster(inst, work[i]->rect, work[i]->robots, opt));
      return part;
    }));
  Schedule out;
  for (auto& j : jobs) merge_into(out, j.get());
  for (auto& st : out.steps) st.moves.resize(inst.size(), Move::Wait);
  return out;
}

}  // namespace mrp
