#pragma once

#include "tiling.hpp"

namespace mrp {

// Closed walk over tile ids; the edge from nodes.back() to nodes.front() is implicit.
struct Cycle {
  std::vector<int> nodes;
  long long count = 1;
};

struct Subflow {
  std::map<Edge, long long> w;
  std::vector<Cycle> cycles;
  long long max_weight() const {
    long long m = 0;
    for (auto& [e, v] : w) m = std::max(m, v);
    return m;
  }
  bool empty() const { return w.empty(); }
};

using SubflowPartition = std::vector<Subflow>;

inline std::vector<Edge> cycle_edges(const Cycle& c) {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) out.push_back({c.nodes[i], c.nodes[(i + 1) % c.nodes.size()]});
  return out;
}

inline bool is_simple(const Cycle& c) {
  std::set<int> s(c.nodes.begin(), c.nodes.end());
  return s.size() == c.nodes.size() && c.nodes.size() >= 2;
}

// Twice the signed area over tile centers; positive means counterclockwise.
inline long long signed_area2(const Cycle& c, const Tiling& t) {
  long long a = 0;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    Pos p = t.center2(c.nodes[i]), q = t.center2(c.nodes[(i + 1) % c.nodes.size()]);
    a += (long long)p.x * q.y - (long long)q.x * p.y;
  }
  return a;
}

enum class Orientation { CCW, CW };

inline Orientation orientation(const Cycle& c, const Tiling& t) {
  return signed_area2(c, t) > 0 ? Orientation::CCW : Orientation::CW;
}

inline std::vector<Cycle> decompose_cycles(const FlowGraph& f) {
  if (!f.is_circulation()) throw Error(ErrorCode::NotCirculation, "flow violates conservation");
  std::map<Edge, long long> rem = f.w;
  std::map<int, std::vector<int>> out;
  for (auto& [e, v] : rem) out[e.first].push_back(e.second);
  std::vector<Cycle> cycles;
  auto next_of = [&](int v) {
    for (int x : out[v])
      if (rem[{v, x}] > 0) return x;
    return -1;
  };
  for (auto& [e0, v0] : f.w) {
    while (rem[e0] > 0) {
      std::vector<int> path{e0.first};
      std::map<int, std::size_t> where{{e0.first, 0}};
      int x = e0.second;
      for (;;) {
        auto it = where.find(x);
        if (it != where.end()) {
          Cycle c;
          c.nodes.assign(path.begin() + it->second, path.end());
          long long amt = std::numeric_limits<long long>::max();
          for (auto e : cycle_edges(c)) amt = std::min(amt, rem[e]);
          for (auto e : cycle_edges(c)) rem[e] -= amt;
          c.count = amt;
          cycles.push_back(c);
          break;
        }
        where[x] = path.size();
        path.push_back(x);
        int y = next_of(x);
        if (y < 0) throw Error(ErrorCode::NotCirculation, "walk stuck");
        x = y;
      }
    }
  }
  return cycles;
}

inline std::vector<Cycle> split_self_intersections(const Cycle& c) {
  std::vector<Cycle> out;
  std::vector<int> stack;
  std::map<int, std::size_t> where;
  auto push = [&](int v) {
    auto it = where.find(v);
    if (it != where.end()) {
      Cycle piece;
      piece.count = c.count;
      piece.nodes.assign(stack.begin() + it->second, stack.end());
      for (std::size_t i = it->second + 1; i < stack.size(); ++i) where.erase(stack[i]);
      stack.resize(it->second + 1);
      out.push_back(piece);
      return;
    }
    where[v] = stack.size();
    stack.push_back(v);
  };
  for (int v : c.nodes) push(v);
  if (!c.nodes.empty()) push(c.nodes.front());
  // the closing push leaves the start vertex alone on the stack
  return out;
}

namespace detail {

// Faces of the tile-center lattice: each unit square is cut into 4 triangles by its diagonals.
struct FaceLattice {
  const Tiling& t;
  int sw, sh;  // squares per row / column
  explicit FaceLattice(const Tiling& tt) : t(tt), sw(std::max(0, tt.kx() - 1)), sh(std::max(0, tt.ky() - 1)) {}
  int faces() const { return 4 * sw * sh; }
  // face containing a point given in lattice units scaled by 8; -1 = outer face
  int face_at(int px, int py) const {
    int i = px >= 0 ? px / 8 : -1, j = py >= 0 ? py / 8 : -1;
    if (i < 0 || j < 0 || i >= sw || j >= sh) return -1;
    int a = px - 8 * i, b = py - 8 * j;
    int k;
    if (b < a && b < 8 - a) k = 0;        // S
    else if (b < a) k = 1;                // E
    else if (b > 8 - a) k = 2;            // N
    else k = 3;                           // W
    return 4 * (j * sw + i) + k;
  }
  std::pair<int, int> probe_point(int f) const {
    int sq = f / 4, k = f % 4;
    int i = sq % sw, j = sq / sw;
    static const int ox[4] = {4, 7, 4, 1}, oy[4] = {1, 4, 7, 4};
    return {8 * i + ox[k], 8 * j + oy[k]};
  }
  // faces left and right of the directed lattice edge u->v, probed at a quarter and three quarters
  std::array<int, 4> sides(int u, int v) const {
    int ux = 8 * t.col(u), uy = 8 * t.row(u);
    int dx = t.col(v) - t.col(u), dy = t.row(v) - t.row(u);
    std::array<int, 4> r{};
    for (int h = 0; h < 2; ++h) {
      int qx = ux + (2 + 4 * h) * dx, qy = uy + (2 + 4 * h) * dy;
      r[2 * h] = face_at(qx - dy, qy + dx);      // left
      r[2 * h + 1] = face_at(qx + dy, qy - dx);  // right
    }
    return r;
  }
  std::vector<std::uint64_t> inside(const Cycle& c) const {
    std::vector<std::uint64_t> bits((faces() + 63) / 64, 0);
    const std::size_t n = c.nodes.size();
    std::vector<std::pair<int, int>> poly(n);
    for (std::size_t i = 0; i < n; ++i) poly[i] = {8 * t.col(c.nodes[i]), 8 * t.row(c.nodes[i])};
    for (int f = 0; f < faces(); ++f) {
      auto [px, py] = probe_point(f);
      bool in = false;
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        auto [xi, yi] = poly[i];
        auto [xj, yj] = poly[j];
        if ((yi > py) != (yj > py)) {
          // x of the crossing compared without division
          long long lhs = (long long)(px - xi) * (yj - yi);
          long long rhs = (long long)(xj - xi) * (py - yi);
          if ((yj - yi) > 0 ? lhs < rhs : lhs > rhs) in = !in;
        }
      }
      if (in) bits[f / 64] |= 1ULL << (f % 64);
    }
    return bits;
  }
};

inline bool subset_of(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

inline std::vector<int> canonical(const std::vector<int>& nodes) {
  auto it = std::min_element(nodes.begin(), nodes.end());
  std::vector<int> out(it, nodes.end());
  out.insert(out.end(), nodes.begin(), it);
  return out;
}

inline void add_merged(std::vector<Cycle>& set, std::map<std::vector<int>, std::size_t>& index, const Cycle& c) {
  auto key = canonical(c.nodes);
  auto it = index.find(key);
  if (it == index.end()) {
    index[key] = set.size();
    set.push_back({key, c.count});
  } else {
    set[it->second].count += c.count;
  }
}

}  // namespace detail

struct PeelResult {
  std::vector<Cycle> outer;  // same orientation as the input
  std::vector<Cycle> holes;  // opposite orientation
  int iterations = 0;
};

// Repeatedly strips the region covered by at least one cycle; its boundary pieces form
// nested families. All input cycles must be simple and share `o`.
inline PeelResult peel(const std::vector<Cycle>& cycles, Orientation o, const Tiling& t) {
  PeelResult res;
  detail::FaceLattice L(t);
  const int F = L.faces();
  std::vector<long long> w(F, 0);
  for (const auto& c : cycles) {
    if (!is_simple(c)) throw Error(ErrorCode::NonSimpleInput, "peel needs simple cycles");
    if (orientation(c, t) != o) throw Error(ErrorCode::NonSimpleInput, "peel needs one orientation");
    auto in = L.inside(c);
    for (int f = 0; f < F; ++f)
      if (in[f / 64] >> (f % 64) & 1) w[f] += c.count;
  }
  // every directed lattice edge with its side faces
  std::vector<std::pair<Edge, std::array<int, 4>>> lattice;
  for (int u = 0; u < t.count(); ++u)
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        if (!di && !dj) continue;
        int i = t.col(u) + di, j = t.row(u) + dj;
        if (!t.valid_ij(i, j)) continue;
        int v = t.id(i, j);
        lattice.push_back({{u, v}, L.sides(u, v)});
      }
  std::map<std::vector<int>, std::size_t> idx_out, idx_hole;
  for (;;) {
    bool any = false;
    for (long long x : w) any |= x > 0;
    if (!any) break;
    ++res.iterations;
    auto inA = [&](int f) { return f >= 0 && w[f] >= 1; };
    std::map<int, std::vector<int>> adj;
    long long nedges = 0;
    for (auto& [e, s] : lattice) {
      auto half = [&](int h) {
        bool l = inA(s[2 * h]), r = inA(s[2 * h + 1]);
        return o == Orientation::CW ? (r && !l) : (l && !r);
      };
      bool b0 = half(0), b1 = half(1);
      if (b0 != b1) throw Error(ErrorCode::NonSimpleInput, "crossing diagonals inside one orientation class");
      if (b0) {
        adj[e.first].push_back(e.second);
        ++nedges;
      }
    }
    // closed walks over the boundary edges
    while (nedges > 0) {
      int start = -1;
      for (auto& [u, vs] : adj)
        if (!vs.empty()) {
          start = u;
          break;
        }
      Cycle walk;
      int u = start;
      do {
        auto& vs = adj[u];
        MRP_ASSERT(!vs.empty(), "boundary is not Eulerian");
        int v = vs.front();
        vs.erase(vs.begin());
        --nedges;
        walk.nodes.push_back(u);
        u = v;
      } while (u != start);
      for (auto& piece : split_self_intersections(walk)) {
        piece.count = 1;
        if (orientation(piece, t) == o) detail::add_merged(res.outer, idx_out, piece);
        else detail::add_merged(res.holes, idx_hole, piece);
      }
    }
    for (int f = 0; f < F; ++f)
      if (w[f] >= 1) --w[f];
  }
  return res;
}

// Depth of every unit copy in the containment order of a cycle family; copies of the same
// cycle occupy consecutive depths.
inline std::vector<long long> nesting_depths(const std::vector<Cycle>& set, const Tiling& t) {
  detail::FaceLattice L(t);
  std::vector<std::vector<std::uint64_t>> reg;
  for (const auto& c : set) reg.push_back(L.inside(c));
  std::vector<long long> depth(set.size(), 0);
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t b = 0; b < set.size(); ++b) {
      if (a == b) continue;
      bool b_in_a = detail::subset_of(reg[b], reg[a]), a_in_b = detail::subset_of(reg[a], reg[b]);
      if (a_in_b && (!b_in_a || b < a)) depth[a] += set[b].count;
    }
  return depth;
}

inline SubflowPartition partition_subflows(const FlowGraph& flow, const Tiling& t, int d) {
  if (d < 1) throw Error(ErrorCode::InfeasibleParams, "partition needs d >= 1");
  const long long modulus = 576LL * d;
  std::vector<Cycle> by_or[2];
  for (const auto& c : decompose_cycles(flow))
    for (const auto& s : split_self_intersections(c)) {
      if (s.nodes.size() < 3) throw Error(ErrorCode::NonSimpleInput, "antiparallel edges remain");
      by_or[orientation(s, t) == Orientation::CW].push_back(s);
    }
  std::vector<std::vector<Cycle>> sets;
  for (int o = 0; o < 2; ++o) {
    if (by_or[o].empty()) continue;
    auto pr = peel(by_or[o], o ? Orientation::CW : Orientation::CCW, t);
    sets.push_back(std::move(pr.outer));
    sets.push_back(std::move(pr.holes));
  }
  SubflowPartition out;
  for (const auto& set : sets) {
    auto depth = nesting_depths(set, t);
    std::map<long long, Subflow> by_label;
    for (std::size_t i = 0; i < set.size(); ++i)
      for (long long k = 0; k < set[i].count; ++k) {
        long long label = (depth[i] + k) % modulus;
        Subflow& sf = by_label[label];
        for (auto e : cycle_edges(set[i])) sf.w[e] += 1;
        if (!sf.cycles.empty() && sf.cycles.back().nodes == set[i].nodes) ++sf.cycles.back().count;
        else sf.cycles.push_back({set[i].nodes, 1});
      }
    for (auto& [l, sf] : by_label) out.push_back(std::move(sf));
  }
  return out;
}

inline bool partition_sums_to(const SubflowPartition& p, const FlowGraph& f) {
  std::map<Edge, long long> sum;
  for (const auto& sf : p)
    for (auto& [e, v] : sf.w) sum[e] += v;
  return sum == f.w;
}

}  // namespace mrp
