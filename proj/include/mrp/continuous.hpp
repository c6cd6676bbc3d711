#pragma once

#include <cmath>
#include <future>
#include <thread>

#include "scheduler.hpp"

namespace mrp {

struct Vec2 {
  double x = 0, y = 0;
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

inline double dist(Vec2 a, Vec2 b) { return (a - b).norm(); }

// Unit-disk robots in the plane; `ids` maps index to external label.
struct ContinuousInstance {
  std::vector<int> ids;
  std::vector<Vec2> start;
  std::vector<Vec2> target;
  std::size_t size() const { return start.size(); }
  void add(int id, Vec2 s, Vec2 t) {
    ids.push_back(id);
    start.push_back(s);
    target.push_back(t);
  }
};

inline double continuous_distance(const ContinuousInstance& inst) {
  double d = 0;
  for (std::size_t r = 0; r < inst.size(); ++r) d = std::max(d, dist(inst.start[r], inst.target[r]));
  return d;
}

// Smallest pairwise distance of a point set (infinity for fewer than two points).
inline double min_separation(const std::vector<Vec2>& pts) {
  std::vector<std::size_t> ord(pts.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](auto a, auto b) { return pts[a].x < pts[b].x; });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ord.size(); ++i)
    for (std::size_t j = i + 1; j < ord.size() && pts[ord[j]].x - pts[ord[i]].x < best; ++j)
      best = std::min(best, dist(pts[ord[i]], pts[ord[j]]));
  return best;
}

struct Breakpoint {
  double t = 0;
  Vec2 p;
};

// Piecewise-linear motion; the robot rests at its last point after the final breakpoint.
struct Trajectory {
  std::vector<Breakpoint> pts;
  double end_time() const { return pts.empty() ? 0.0 : pts.back().t; }
  Vec2 at(double t) const {
    if (pts.empty()) return {};
    if (t <= pts.front().t) return pts.front().p;
    if (t >= pts.back().t) return pts.back().p;
    auto it = std::upper_bound(pts.begin(), pts.end(), t, [](double v, const Breakpoint& b) { return v < b.t; });
    const Breakpoint& b = *it;
    const Breakpoint& a = *(it - 1);
    double u = b.t > a.t ? (t - a.t) / (b.t - a.t) : 1.0;
    return a.p + (b.p - a.p) * u;
  }
  // Appends a breakpoint, dropping the previous one when it lies on a constant-velocity run.
  void push(double t, Vec2 p) {
    if (!pts.empty() && t <= pts.back().t + 1e-12) {
      pts.back().p = p;
      return;
    }
    if (pts.size() >= 2) {
      const Breakpoint& a = pts[pts.size() - 2];
      const Breakpoint& b = pts.back();
      Vec2 v1 = (b.p - a.p) * (1.0 / (b.t - a.t));
      Vec2 v2 = (p - b.p) * (1.0 / (t - b.t));
      if ((v1 - v2).norm() < 1e-12) {
        pts.back() = {t, p};
        return;
      }
    }
    pts.push_back({t, p});
  }
};

struct TrajectorySet {
  std::vector<Trajectory> robots;
  double makespan() const {
    double m = 0;
    for (const auto& t : robots) m = std::max(m, t.end_time());
    return m;
  }
};

struct TrajectoryReport {
  bool ok = true;
  double min_distance = std::numeric_limits<double>::infinity();
  int pair_a = -1, pair_b = -1;
  double at_time = 0;
  double max_speed = 0;
  int speed_robot = -1;
  double endpoint_error = 0;
  int endpoint_robot = -1;
  std::string describe() const {
    std::string s = ok ? "ok" : "violation";
    s += " min_distance=" + std::to_string(min_distance);
    if (pair_a >= 0) s += " pair=" + std::to_string(pair_a) + "," + std::to_string(pair_b) + " t=" + std::to_string(at_time);
    s += " max_speed=" + std::to_string(max_speed);
    if (endpoint_robot >= 0) s += " endpoint_error=" + std::to_string(endpoint_error) + " robot=" + std::to_string(endpoint_robot);
    return s;
  }
};

namespace detail {

// Minimum distance between two robots over [lo, hi], exact on each co-linear piece.
inline std::pair<double, double> pair_min_distance(const Trajectory& A, const Trajectory& B, double hi) {
  std::vector<double> ts{0.0, hi};
  for (const auto& b : A.pts) ts.push_back(b.t);
  for (const auto& b : B.pts) ts.push_back(b.t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  double best = std::numeric_limits<double>::infinity(), when = 0;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    double t0 = ts[k], t1 = ts[k + 1];
    if (t0 < 0 || t1 > hi) continue;
    Vec2 p0 = A.at(t0) - B.at(t0);
    Vec2 p1 = A.at(t1) - B.at(t1);
    Vec2 v = p1 - p0;
    double u = 0;
    double vv = v.dot(v);
    if (vv > 0) u = std::clamp(-p0.dot(v) / vv, 0.0, 1.0);
    double dmin = (p0 + v * u).norm();
    if (dmin < best) best = dmin, when = t0 + u * (t1 - t0);
  }
  if (ts.size() == 1 || hi == 0) {
    double d0 = (A.at(0) - B.at(0)).norm();
    if (d0 < best) best = d0, when = 0;
  }
  return {best, when};
}

struct Box {
  double x0, y0, x1, y1;
};

inline Box bounds(const Trajectory& t) {
  Box b{1e300, 1e300, -1e300, -1e300};
  for (const auto& p : t.pts) {
    b.x0 = std::min(b.x0, p.p.x), b.y0 = std::min(b.y0, p.p.y);
    b.x1 = std::max(b.x1, p.p.x), b.y1 = std::max(b.y1, p.p.y);
  }
  return b;
}

}  // namespace detail

// Endpoints, speed limit and pairwise separation of 2; never throws on bad input.
inline TrajectoryReport validate_trajectories(const TrajectorySet& ts, const ContinuousInstance& inst, double eps = 1e-9) {
  TrajectoryReport rep;
  const std::size_t n = inst.size();
  if (ts.robots.size() != n) {
    rep.ok = false;
    rep.endpoint_error = std::numeric_limits<double>::infinity();
    return rep;
  }
  for (std::size_t r = 0; r < n; ++r) {
    const auto& pts = ts.robots[r].pts;
    if (pts.empty() || std::abs(pts.front().t) > eps) {
      rep.ok = false;
      rep.endpoint_error = std::numeric_limits<double>::infinity();
      rep.endpoint_robot = int(r);
      continue;
    }
    double e = std::max(dist(pts.front().p, inst.start[r]), dist(pts.back().p, inst.target[r]));
    if (e > rep.endpoint_error) rep.endpoint_error = e, rep.endpoint_robot = e > eps ? int(r) : rep.endpoint_robot;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      double dt = pts[k + 1].t - pts[k].t;
      double dl = dist(pts[k + 1].p, pts[k].p);
      double sp = dt > 0 ? dl / dt : (dl > 0 ? std::numeric_limits<double>::infinity() : 0.0);
      if (sp > rep.max_speed) rep.max_speed = sp, rep.speed_robot = int(r);
    }
  }
  if (rep.endpoint_error > eps || rep.max_speed > 1.0 + eps) rep.ok = false;
  const double hi = ts.makespan();
  std::vector<detail::Box> box(n);
  for (std::size_t r = 0; r < n; ++r) box[r] = detail::bounds(ts.robots[r]);
  std::vector<std::size_t> ord(n);
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](auto a, auto b) { return box[a].x0 < box[b].x0; });
  struct Worst {
    double d = std::numeric_limits<double>::infinity();
    int a = -1, b = -1;
    double t = 0;
  };
  auto scan = [&](std::size_t from, std::size_t step) {
    Worst w;
    for (std::size_t i = from; i < n; i += step) {
      std::size_t a = ord[i];
      for (std::size_t j = i + 1; j < n && box[ord[j]].x0 < box[a].x1 + 2.0 + eps; ++j) {
        std::size_t b = ord[j];
        if (box[b].y0 > box[a].y1 + 2.0 + eps || box[a].y0 > box[b].y1 + 2.0 + eps) continue;
        auto [dm, t] = detail::pair_min_distance(ts.robots[a], ts.robots[b], hi);
        if (dm < w.d) w = {dm, int(std::min(a, b)), int(std::max(a, b)), t};
      }
    }
    return w;
  };
  const std::size_t K = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), n / 64 + 1));
  std::vector<std::future<Worst>> jobs;
  for (std::size_t k = 0; k < K; ++k) jobs.push_back(std::async(K > 1 ? std::launch::async : std::launch::deferred, scan, k, K));
  for (auto& j : jobs) {
    Worst w = j.get();
    if (w.d < rep.min_distance) rep.min_distance = w.d, rep.pair_a = w.a, rep.pair_b = w.b, rep.at_time = w.t;
  }
  if (rep.min_distance < 2.0 - eps) rep.ok = false;
  return rep;
}

namespace detail {

constexpr double kMesh = 2.8284271247461903;  // 2*sqrt(2)

inline void require_separation(const ContinuousInstance& inst, double sep) {
  if (min_separation(inst.start) < sep - 1e-9 || min_separation(inst.target) < sep - 1e-9)
    throw Error(ErrorCode::SeparationViolated, "start or target centers closer than " + std::to_string(sep));
}

// Grid origin such that no coordinate lies within 1e-9 of a mesh line.
inline Vec2 pick_offset(const std::vector<Vec2>& pts, double h) {
  auto clear = [&](double o, bool use_x) {
    for (const auto& p : pts) {
      double v = ((use_x ? p.x : p.y) - o) / h;
      if (std::abs(v - std::round(v)) * h < 1e-9) return false;
    }
    return true;
  };
  auto search = [&](bool use_x) {
    for (int k = 0; k < 100000; ++k) {
      double o = h * std::fmod(0.5 + 0.6180339887498949 * k, 1.0);
      if (clear(o, use_x)) return o;
    }
    throw Error(ErrorCode::Internal, "no clear grid offset found");
  };
  return {search(true), search(false)};
}

// Lattice point (i, j) of mesh h with origin o, shifted by `base`.
struct Lattice {
  Vec2 origin;
  double h;
  Pos base{0, 0};
  Vec2 point(Pos c, Vec2 within = {0, 0}) const {
    return {origin.x + (c.x + base.x + within.x) * h, origin.y + (c.y + base.y + within.y) * h};
  }
};

// Expands a discrete schedule into synchronous motions of duration h per step.
inline void expand_discrete(TrajectorySet& ts, const Instance& di, const Schedule& s, const Lattice& L, Vec2 within, double t0) {
  std::vector<Pos> cur = di.start;
  double t = t0;
  for (const Step& st : s.steps) {
    t += L.h;
    for (std::size_t r = 0; r < cur.size(); ++r) {
      cur[r] = apply_move(cur[r], st.get(r));
      ts.robots[r].push(t, L.point(cur[r], within));
    }
  }
}

inline std::pair<Instance, Pos> lattice_instance(const std::vector<Pos>& s, const std::vector<Pos>& t) {
  int x0 = INT32_MAX, y0 = INT32_MAX, x1 = INT32_MIN, y1 = INT32_MIN;
  for (const auto* v : {&s, &t})
    for (Pos p : *v) x0 = std::min(x0, p.x), y0 = std::min(y0, p.y), x1 = std::max(x1, p.x), y1 = std::max(y1, p.y);
  // one free line of cells on every side
  Pos base{x0 - 1, y0 - 1};
  Instance di;
  di.dims = {x1 - x0 + 3, y1 - y0 + 3};
  for (std::size_t r = 0; r < s.size(); ++r)
    di.add(int(r), {s[r].x - base.x, s[r].y - base.y}, {t[r].x - base.x, t[r].y - base.y});
  return {di, base};
}

}  // namespace detail

// 4-separated disks: snap to cell centers of a 2*sqrt(2) mesh, plan on the grid, snap out.
inline TrajectorySet plan_separated(const ContinuousInstance& inst) {
  detail::require_separation(inst, 4.0);
  const std::size_t n = inst.size();
  TrajectorySet ts;
  ts.robots.resize(n);
  if (n == 0) return ts;
  const double h = detail::kMesh;
  std::vector<Vec2> all = inst.start;
  all.insert(all.end(), inst.target.begin(), inst.target.end());
  Vec2 o = detail::pick_offset(all, h);
  auto cell = [&](Vec2 p) { return Pos{int(std::floor((p.x - o.x) / h)), int(std::floor((p.y - o.y) / h))}; };
  std::vector<Pos> cs(n), ct(n);
  for (std::size_t r = 0; r < n; ++r) cs[r] = cell(inst.start[r]), ct[r] = cell(inst.target[r]);
  auto [di, base] = detail::lattice_instance(cs, ct);
  MRP_ASSERT(valid_configuration(di.dims, di.start) && valid_configuration(di.dims, di.target), "two centers share a mesh cell");
  Schedule s = plan_auto(di);
  detail::Lattice L{o, h, base};
  const Vec2 mid{0.5, 0.5};
  // snapping moves at most half a cell diagonal, which is 2
  const double snap = 2.0;
  for (std::size_t r = 0; r < n; ++r) {
    ts.robots[r].push(0, inst.start[r]);
    ts.robots[r].push(snap, L.point(di.start[r], mid));
  }
  detail::expand_discrete(ts, di, s, L, mid, snap);
  const double t_end = snap + h * double(s.makespan()) + snap;
  for (std::size_t r = 0; r < n; ++r) ts.robots[r].push(t_end, inst.target[r]);
  return ts;
}

namespace detail {

// Spreads a 2-separated point set so that every pair differs by 4*sqrt(2) in x or y.
// Returns the motion as two synchronous stages plus the spread positions.
struct Spread {
  std::vector<Vec2> after_x;
  std::vector<Vec2> after_y;
  double tx = 0, ty = 0;
};

inline Spread spread_points(const std::vector<Vec2>& pts) {
  const std::size_t n = pts.size();
  const double gap = 2 * kMesh;
  Spread sp;
  sp.after_x = pts;
  if (n == 0) return sp;
  const std::size_t q = std::size_t(std::ceil(std::sqrt(double(n))));
  std::vector<std::size_t> ord(n);
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](auto a, auto b) {
    return std::make_pair(pts[a].x, pts[a].y) < std::make_pair(pts[b].x, pts[b].y);
  });
  std::vector<std::vector<std::size_t>> slices;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % q == 0) slices.emplace_back();
    slices.back().push_back(ord[i]);
    double shift = gap * double(slices.size() - 1);
    sp.after_x[ord[i]].x += shift;
    sp.tx = std::max(sp.tx, shift);
  }
  sp.after_y = sp.after_x;
  for (auto& sl : slices) {
    std::sort(sl.begin(), sl.end(), [&](auto a, auto b) {
      return std::make_pair(pts[a].y, pts[a].x) < std::make_pair(pts[b].y, pts[b].x);
    });
    for (std::size_t k = 1; k < sl.size(); ++k) {
      double& y = sp.after_y[sl[k]].y;
      y = std::max(y, sp.after_y[sl[k - 1]].y + gap);
      sp.ty = std::max(sp.ty, y - pts[sl[k]].y);
    }
  }
  return sp;
}

// Moves every robot by a per-robot offset at unit speed, all starting at t0.
inline void push_stage(TrajectorySet& ts, const std::vector<Vec2>& from, const std::vector<Vec2>& to, double t0, double dur) {
  for (std::size_t r = 0; r < from.size(); ++r) {
    double len = dist(from[r], to[r]);
    ts.robots[r].push(t0 + len, to[r]);
    ts.robots[r].push(t0 + dur, to[r]);
  }
}

}  // namespace detail

// 2-separated disks: slice and spread, snap to mesh vertices, plan on the grid, then undo
// the spreading on the target side.
inline TrajectorySet plan_dense(const ContinuousInstance& inst) {
  detail::require_separation(inst, 2.0);
  const std::size_t n = inst.size();
  TrajectorySet ts;
  ts.robots.resize(n);
  if (n == 0) return ts;
  if (n == 1) {
    double len = dist(inst.start[0], inst.target[0]);
    ts.robots[0].push(0, inst.start[0]);
    ts.robots[0].push(len, inst.target[0]);
    return ts;
  }
  const double h = detail::kMesh;
  auto S = detail::spread_points(inst.start);
  auto T = detail::spread_points(inst.target);
  std::vector<Vec2> all = S.after_y;
  all.insert(all.end(), T.after_y.begin(), T.after_y.end());
  Vec2 o = detail::pick_offset(all, h);
  auto vertex = [&](Vec2 p) { return Pos{int(std::floor((p.x - o.x) / h)), int(std::floor((p.y - o.y) / h))}; };
  std::vector<Pos> vs(n), vt(n);
  for (std::size_t r = 0; r < n; ++r) vs[r] = vertex(S.after_y[r]), vt[r] = vertex(T.after_y[r]);
  auto [di, base] = detail::lattice_instance(vs, vt);
  MRP_ASSERT(valid_configuration(di.dims, di.start) && valid_configuration(di.dims, di.target), "two robots snap to one vertex");
  Schedule s = plan_auto(di);
  detail::Lattice L{o, h, base};
  // a snap moves at most one cell diagonal, which is 4
  const double snap = 4.0;
  double t = 0;
  for (std::size_t r = 0; r < n; ++r) ts.robots[r].push(0, inst.start[r]);
  detail::push_stage(ts, inst.start, S.after_x, t, S.tx);
  t += S.tx;
  detail::push_stage(ts, S.after_x, S.after_y, t, S.ty);
  t += S.ty;
  std::vector<Vec2> snapped(n);
  for (std::size_t r = 0; r < n; ++r) snapped[r] = L.point(di.start[r]);
  detail::push_stage(ts, S.after_y, snapped, t, snap);
  detail::expand_discrete(ts, di, s, L, {0, 0}, t + snap);
  t += snap + h * double(s.makespan());
  std::vector<Vec2> tsnap(n);
  for (std::size_t r = 0; r < n; ++r) tsnap[r] = L.point(di.target[r]);
  // reverse of the target-side spreading, each stage replayed backwards in time
  auto back_stage = [&](const std::vector<Vec2>& from, const std::vector<Vec2>& to, double dur) {
    for (std::size_t r = 0; r < n; ++r) {
      double len = dist(from[r], to[r]);
      ts.robots[r].push(t + dur - len, from[r]);
      ts.robots[r].push(t + dur, to[r]);
    }
    t += dur;
  };
  back_stage(tsnap, T.after_y, snap);
  back_stage(T.after_y, T.after_x, T.ty);
  back_stage(T.after_x, inst.target, T.tx);
  return ts;
}

}  // namespace mrp
