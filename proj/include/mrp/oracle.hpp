#pragma once

#include <array>
#include <random>
#include <unordered_map>

#include "continuous.hpp"

namespace mrp {

// ---------------------------------------------------------------------------
// Exact makespan by breadth-first search over configurations

using OracleResult = SearchResult;

inline const char* oracle_status_name(OracleResult::Status s) { return search_status_name(s); }

// Exact minimum makespan, or Unknown when it exceeds `cap`.
inline OracleResult optimal_makespan(const Instance& inst, int cap, double work_budget = 5e8) {
  return bfs_search(inst, cap, false, work_budget);
}

// ---------------------------------------------------------------------------
// Random instances

enum class GenMode { Auto, Sparse, Clustered };

namespace detail {

inline std::vector<int> ring_of(GridDims g, const Rect& b) {
  std::vector<int> ring;
  for (int x = b.x0; x < b.x1(); ++x) ring.push_back(int(g.index({x, b.y0})));
  for (int y = b.y0 + 1; y < b.y1(); ++y) ring.push_back(int(g.index({b.x1() - 1, y})));
  for (int x = b.x1() - 2; x >= b.x0; --x) ring.push_back(int(g.index({x, b.y1() - 1})));
  for (int y = b.y1() - 2; y > b.y0; --y) ring.push_back(int(g.index({b.x0, y})));
  return ring;
}

// Random target within distance d_max of `from` that no earlier robot claimed.
inline std::optional<Pos> random_target(GridDims g, Pos from, int d_max, const std::vector<char>& taken, std::mt19937_64& rng) {
  std::vector<Pos> opts;
  for (int dy = -d_max; dy <= d_max; ++dy)
    for (int dx = -(d_max - std::abs(dy)); dx <= d_max - std::abs(dy); ++dx) {
      Pos p{from.x + dx, from.y + dy};
      if (g.contains(p) && !taken[g.index(p)]) opts.push_back(p);
    }
  if (opts.empty()) return std::nullopt;
  return opts[std::uniform_int_distribution<std::size_t>(0, opts.size() - 1)(rng)];
}

}  // namespace detail

// Deterministic per seed. A full grid gets disjoint local ring rotations and block
// shuffles; fewer robots get scattered (Sparse/Auto) or grouped (Clustered) starts.
inline Instance gen_random(GridDims dims, std::size_t N, int d_max, std::uint64_t seed, GenMode mode = GenMode::Auto) {
  if (dims.n1 < 1 || dims.n2 < 1 || long(N) > dims.cells() || d_max < 0)
    throw Error(ErrorCode::InfeasibleParams, "need N <= n1*n2 and d_max >= 0");
  std::mt19937_64 rng(seed);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Instance inst;
  inst.dims = dims;
  const int cells = int(dims.cells());
  if (long(N) == cells) {
    std::vector<int> dest(cells);
    std::iota(dest.begin(), dest.end(), 0);
    std::vector<char> used(cells, 0);
    const int side = d_max + 2;
    for (int tries = 0; d_max >= 1 && tries < cells; ++tries) {
      int w = uni(2, std::max(2, std::min(side, dims.n1))), h = uni(2, std::max(2, std::min(side, dims.n2)));
      if (w > dims.n1 || h > dims.n2) continue;
      Rect b{uni(0, dims.n1 - w), uni(0, dims.n2 - h), w, h};
      bool free = true;
      for (int y = b.y0; y < b.y1() && free; ++y)
        for (int x = b.x0; x < b.x1() && free; ++x) free = !used[dims.index({x, y})];
      if (!free) continue;
      for (int y = b.y0; y < b.y1(); ++y)
        for (int x = b.x0; x < b.x1(); ++x) used[dims.index({x, y})] = 1;
      if ((w - 1) + (h - 1) <= d_max && uni(0, 1)) {
        std::vector<int> cs;
        for (int y = b.y0; y < b.y1(); ++y)
          for (int x = b.x0; x < b.x1(); ++x) cs.push_back(int(dims.index({x, y})));
        std::vector<int> img = cs;
        std::shuffle(img.begin(), img.end(), rng);
        for (std::size_t i = 0; i < cs.size(); ++i) dest[cs[i]] = img[i];
      } else {
        auto ring = detail::ring_of(dims, b);
        int L = int(ring.size());
        int k = uni(1, std::min(d_max, L - 1));
        if (uni(0, 1)) k = L - k;
        for (int i = 0; i < L; ++i) dest[ring[i]] = ring[(i + k) % L];
      }
    }
    for (int c = 0; c < cells; ++c) inst.add(c + 1, dims.at(c), dims.at(dest[c]));
    return inst;
  }
  std::vector<int> order(cells);
  std::iota(order.begin(), order.end(), 0);
  if (mode == GenMode::Clustered && N > 0) {
    int k = std::max(1, int(std::sqrt(double(N)) / 2));
    std::vector<Pos> centers;
    for (int i = 0; i < k; ++i) centers.push_back(dims.at(uni(0, cells - 1)));
    std::vector<std::pair<double, int>> key;
    for (int c = 0; c < cells; ++c) {
      int best = INT32_MAX;
      for (Pos q : centers) best = std::min(best, manhattan(q, dims.at(c)));
      key.push_back({best + std::uniform_real_distribution<double>(0, 1)(rng), c});
    }
    std::sort(key.begin(), key.end());
    for (int c = 0; c < cells; ++c) order[c] = key[c].second;
  } else {
    std::shuffle(order.begin(), order.end(), rng);
  }
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<char> taken(cells, 0);
    Instance cand;
    cand.dims = dims;
    bool ok = true;
    for (std::size_t r = 0; r < N && ok; ++r) {
      Pos s = dims.at(order[r]);
      auto t = detail::random_target(dims, s, d_max, taken, rng);
      if (!t) {
        ok = false;
        break;
      }
      taken[dims.index(*t)] = 1;
      cand.add(int(r) + 1, s, *t);
    }
    if (ok) return cand;
  }
  throw Error(ErrorCode::InfeasibleParams, "could not place targets within d_max");
}

// Random points with pairwise distance >= sep in a square sized for the density; targets
// independent (d_max <= 0) or within d_max of their start.
inline ContinuousInstance gen_continuous(std::size_t N, double sep, double d_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double L = std::sqrt(double(N) * sep * sep * 2.5) + sep;
  std::uniform_real_distribution<double> U(0, L);
  auto far_enough = [&](const std::vector<Vec2>& pts, Vec2 p) {
    for (const auto& q : pts)
      if (dist(p, q) < sep) return false;
    return true;
  };
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Vec2> s, t;
    bool ok = true;
    for (std::size_t i = 0; i < N && ok; ++i) {
      int k = 0;
      Vec2 p;
      do p = {U(rng), U(rng)};
      while (!far_enough(s, p) && ++k < 20000);
      ok = k < 20000;
      s.push_back(p);
    }
    for (std::size_t i = 0; i < N && ok; ++i) {
      int k = 0;
      Vec2 p;
      std::uniform_real_distribution<double> A(0, 2 * M_PI), R(0, std::max(d_max, 0.0));
      do {
        if (d_max > 0) {
          double a = A(rng), rad = R(rng);
          p = s[i] + Vec2{std::cos(a), std::sin(a)} * rad;
        } else {
          p = {U(rng), U(rng)};
        }
      } while (!far_enough(t, p) && ++k < 20000);
      ok = k < 20000;
      t.push_back(p);
    }
    if (!ok) continue;
    ContinuousInstance inst;
    for (std::size_t i = 0; i < N; ++i) inst.add(int(i) + 1, s[i], t[i]);
    return inst;
  }
  throw Error(ErrorCode::InfeasibleParams, "could not sample separated points");
}

// ---------------------------------------------------------------------------
// Hexagonal packing instance with d = 2

// N sites of the touching-disk hexagonal lattice closest to the origin; even rows
// shift two units right, odd rows two units left.
inline ContinuousInstance gen_hex(std::size_t N) {
  const double s3 = std::sqrt(3.0);
  int R = 1;
  while (3 * R * (R + 1) + 1 < int(N)) ++R;
  struct Site {
    int a, b;
    Vec2 p;
  };
  std::vector<Site> sites;
  for (int b = -R - 1; b <= R + 1; ++b)
    for (int a = -2 * R - 2; a <= 2 * R + 2; ++a) sites.push_back({a, b, {2.0 * a + b, s3 * b}});
  std::stable_sort(sites.begin(), sites.end(), [](const Site& u, const Site& v) {
    double nu = u.p.norm(), nv = v.p.norm();
    if (std::abs(nu - nv) > 1e-9) return nu < nv;
    return std::atan2(u.p.y, u.p.x) < std::atan2(v.p.y, v.p.x);
  });
  ContinuousInstance inst;
  for (std::size_t i = 0; i < N; ++i) {
    const Site& s = sites[i];
    double shift = (s.b % 2 == 0) ? 2.0 : -2.0;
    inst.add(int(i) + 1, s.p, s.p + Vec2{shift, 0});
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Monotone 3-SAT reduction

struct Cnf {
  int n = 0;
  std::vector<std::vector<int>> clauses;  // literals +-(j+1)
};

inline void check_monotone3(const Cnf& f) {
  for (const auto& c : f.clauses) {
    if (c.size() != 3) throw Error(ErrorCode::BadArity, "every clause needs exactly 3 literals");
    std::set<int> vars;
    for (int l : c) {
      if (l == 0 || std::abs(l) > f.n) throw Error(ErrorCode::BadArity, "literal out of range");
      vars.insert(std::abs(l));
    }
    if (vars.size() != 3) throw Error(ErrorCode::BadArity, "clause repeats a variable");
    if (!((c[0] > 0 && c[1] > 0 && c[2] > 0) || (c[0] < 0 && c[1] < 0 && c[2] < 0)))
      throw Error(ErrorCode::NotMonotone, "clause mixes positive and negative literals");
  }
}

inline bool satisfies(const Cnf& f, const std::vector<bool>& a) {
  for (const auto& c : f.clauses) {
    bool ok = false;
    for (int l : c) ok = ok || (l > 0 ? a[l - 1] : !a[-l - 1]);
    if (!ok) return false;
  }
  return true;
}

// Exhaustive search over all assignments; meant for small n.
inline std::optional<std::vector<bool>> brute_force_sat(const Cnf& f) {
  if (f.n > 24) throw Error(ErrorCode::BudgetExceeded, "too many variables for exhaustive search");
  std::vector<bool> a(f.n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << f.n); ++mask) {
    for (int j = 0; j < f.n; ++j) a[j] = (mask >> j) & 1;
    if (satisfies(f, a)) return a;
  }
  return std::nullopt;
}

inline Cnf random_monotone3(int n, int m, std::uint64_t seed) {
  if (n < 3 || m < 0) throw Error(ErrorCode::InfeasibleParams, "need n >= 3");
  std::mt19937_64 rng(seed);
  Cnf f;
  f.n = n;
  for (int i = 0; i < m; ++i) {
    std::vector<int> vs(n);
    std::iota(vs.begin(), vs.end(), 1);
    std::shuffle(vs.begin(), vs.end(), rng);
    int sign = (rng() & 1) ? 1 : -1;
    f.clauses.push_back({sign * vs[0], sign * vs[1], sign * vs[2]});
  }
  return f;
}

struct SatInstance {
  Instance instance;
  int M = 0;
  std::optional<Schedule> witness;
  Pos offset;  // added to every construction coordinate
};

enum SatRole { kVariable = 1, kChecker = 2, kOther = 3 };

// Builds the reduction instance; with an assignment, also the makespan-M witness.
inline SatInstance gen_sat_instance(const Cnf& f, const std::optional<std::vector<bool>>& assignment = std::nullopt) {
  check_monotone3(f);
  const int n = f.n, m = int(f.clauses.size());
  if (n < 1) throw Error(ErrorCode::BadArity, "formula needs at least one variable");
  if (assignment && (int(assignment->size()) != n || !satisfies(f, *assignment)))
    throw Error(ErrorCode::InvalidInstance, "assignment does not satisfy the formula");
  const int M = 6 * n * (m + 2);
  struct Proto {
    Pos s, t;
    int color;
    std::vector<Move> moves;
  };
  std::vector<Proto> ps;
  auto straight = [&](Move mv, int k) { return std::vector<Move>(k, mv); };
  const bool wit = assignment.has_value();
  for (int j = 0; j < n; ++j) {
    std::vector<Move> mv;
    if (wit) {
      bool val = (*assignment)[j];
      mv.push_back(val ? Move::Wait : Move::North);
      for (int k = 0; k < M - 2; ++k) mv.push_back(Move::East);
      if (!val) mv.push_back(Move::South);
    }
    ps.push_back({{0, 6 * j}, {M - 2, 6 * j}, kVariable, mv});
    ps.push_back({{1, 6 * j + 1}, {1, 6 * j + 1 - M}, kOther, straight(Move::South, M)});
    ps.push_back({{M - 3, -M + 6 * j + 1}, {M - 3, 6 * j + 1}, kOther, straight(Move::North, M)});
  }
  for (int i = 1; i <= m; ++i) {
    std::vector<int> c = f.clauses[i - 1];
    std::sort(c.begin(), c.end(), [](int a, int b) { return std::abs(a) < std::abs(b); });
    const bool negative = c[0] < 0;
    const int fi = negative ? 1 : 0;
    int jv[3];
    for (int k = 0; k < 3; ++k) jv[k] = std::abs(c[k]) - 1;
    const int s[3] = {3 * (jv[2] - jv[0]) + 2, 3 * (jv[2] - jv[1]) + 1, 0};
    bool waited[3];
    Pos t1{};
    for (int k = 0; k < 3; ++k) {
      Pos a{6 * (n * i + jv[k]), -6 * n * i - fi};
      Pos t{a.x + s[k], a.y + M - 1 - s[k]};
      if (k == 0) t1 = t;
      bool lit = wit && ((*assignment)[jv[k]] != negative);
      waited[k] = wit && !lit;
      std::vector<Move> mv;
      if (wit) {
        const int X = a.x + s[k];  // column the checker rises in
        mv = straight(Move::East, s[k]);
        for (int up = 0; up < t.y - a.y;) {
          if (waited[k] && int(mv.size()) == X) {
            mv.push_back(Move::Wait);
            continue;
          }
          mv.push_back(Move::North);
          ++up;
        }
      }
      ps.push_back({a, t, kChecker, mv});
      // staircase forcing the side steps of the first two checkers
      for (int q = 0; q < s[k]; ++q) ps.push_back({{a.x + q, a.y + 1 + q}, {a.x + q, a.y + 1 + q - M}, kOther, straight(Move::South, M)});
    }
    std::vector<Move> mv;
    if (wit) {
      int downs_first = !waited[2] ? 0 : !waited[1] ? 1 : 2;
      MRP_ASSERT(!(waited[0] && waited[1] && waited[2]), "unsatisfied clause");
      mv = straight(Move::South, downs_first);
      for (int k = 0; k < M - 2; ++k) mv.push_back(Move::West);
      for (int k = downs_first; k < 2; ++k) mv.push_back(Move::South);
    }
    ps.push_back({{t1.x + M - 5, t1.y - 1}, {t1.x - 3, t1.y - 3}, kOther, mv});
  }
  int x0 = INT32_MAX, y0 = INT32_MAX, x1 = INT32_MIN, y1 = INT32_MIN;
  for (const auto& p : ps)
    for (Pos q : {p.s, p.t}) x0 = std::min(x0, q.x), y0 = std::min(y0, q.y), x1 = std::max(x1, q.x), y1 = std::max(y1, q.y);
  SatInstance out;
  out.M = M;
  out.offset = {1 - x0, 1 - y0};
  out.instance.dims = {x1 - x0 + 3, y1 - y0 + 3};
  for (std::size_t r = 0; r < ps.size(); ++r) {
    auto sh = [&](Pos p) { return Pos{p.x + out.offset.x, p.y + out.offset.y}; };
    out.instance.add(int(r) + 1, sh(ps[r].s), sh(ps[r].t), ps[r].color);
  }
  if (wit) {
    Schedule w;
    w.steps.resize(M);
    for (int k = 0; k < M; ++k) {
      w.steps[k].moves.assign(ps.size(), Move::Wait);
      for (std::size_t r = 0; r < ps.size(); ++r)
        if (k < int(ps[r].moves.size())) w.steps[k].moves[r] = ps[r].moves[k];
    }
    out.witness = std::move(w);
  }
  return out;
}

}  // namespace mrp
