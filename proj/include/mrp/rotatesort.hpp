#pragma once

#include <array>
#include <limits>
#include <mutex>
#include <numeric>

#include "grid.hpp"

namespace mrp {

struct Rect {
  int x0 = 0, y0 = 0, w = 0, h = 0;
  int x1() const { return x0 + w; }
  int y1() const { return y0 + h; }
  bool contains(Pos p) const { return p.x >= x0 && p.y >= y0 && p.x < x0 + w && p.y < y0 + h; }
  int local(Pos p) const { return (p.y - y0) * w + (p.x - x0); }
  Pos global(int idx) const { return {x0 + idx % w, y0 + idx / w}; }
  long area() const { return long(w) * h; }
  bool intersects(const Rect& o) const {
    return x0 < o.x1() && o.x0 < x1() && y0 < o.y1() && o.y0 < y1();
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

// Moves addressed by the cell a robot occupies when the step starts.
using CellMove = std::pair<Pos, Move>;
using CellStep = std::vector<CellMove>;
using Phase = std::vector<CellStep>;

inline void merge_phase(Phase& dst, const Phase& src) {
  if (dst.size() < src.size()) dst.resize(src.size());
  for (std::size_t k = 0; k < src.size(); ++k) dst[k].insert(dst[k].end(), src[k].begin(), src[k].end());
}

inline void append_phase(Phase& dst, const Phase& src) { dst.insert(dst.end(), src.begin(), src.end()); }

// Applies cell-addressed phases to a live configuration and records robot-indexed steps.
class PhaseRunner {
 public:
  PhaseRunner(GridDims dims, std::vector<Pos> pos) : state_(dims, std::move(pos)) {
    if (!state_.valid()) throw Error(ErrorCode::InvalidInstance, "invalid configuration");
  }
  void run(const Phase& ph) {
    for (const auto& cs : ph) run_step(cs);
  }
  void run_step(const CellStep& cs) {
    if (cs.empty()) return;
    Step st;
    st.moves.assign(state_.size(), Move::Wait);
    for (const auto& [cell, m] : cs) {
      int r = state_.robot_at(cell);
      MRP_ASSERT(r >= 0, "phase moves an empty cell");
      MRP_ASSERT(st.moves[r] == Move::Wait, "phase moves a robot twice");
      st.moves[r] = m;
    }
    Violation v = state_.apply(st);
    MRP_ASSERT(v.kind == Violation::None, "planner emitted an illegal step: " + v.describe());
    sched_.steps.push_back(std::move(st));
  }
  const GridState& state() const { return state_; }
  GridState& state() { return state_; }
  Schedule& schedule() { return sched_; }
  Schedule take() { return std::move(sched_); }

 private:
  GridState state_;
  Schedule sched_;
};

// Optimal solver for fully occupied 6-cell boards (2x3 or 3x2) by BFS over all 720 arrangements.
class GadgetTable {
 public:
  static constexpr int kCells = 6;
  static constexpr int kStates = 720;

  GadgetTable(int w, int h) : w_(w), h_(h) {
    if (w * h != kCells) throw Error(ErrorCode::WrongDims, "gadget table needs 6 cells");
    enumerate_steps();
    bfs();
  }

  int width() const { return w_; }
  int height() const { return h_; }
  int diameter() const { return diameter_; }
  const std::vector<std::array<int, kCells>>& steps() const { return steps_; }

  // perm[c] = cell the token at c must reach.
  int distance(const std::array<int, kCells>& perm) const { return dist_[rank(perm)]; }

  // Sequence of cell permutations (cell -> new cell) solving `perm`.
  std::vector<std::array<int, kCells>> solve(std::array<int, kCells> perm) const {
    std::vector<std::array<int, kCells>> out;
    for (int guard = 0; guard < 64; ++guard) {
      int s = rank(perm);
      if (dist_[s] == 0) return out;
      const auto& sig = steps_[next_[s]];
      std::array<int, kCells> np{};
      for (int c = 0; c < kCells; ++c) np[sig[c]] = perm[c];
      perm = np;
      out.push_back(sig);
    }
    throw Error(ErrorCode::Internal, "gadget solve did not converge");
  }

  static int rank(const std::array<int, kCells>& p) {
    int r = 0;
    for (int i = 0; i < kCells; ++i) {
      int smaller = 0;
      for (int j = i + 1; j < kCells; ++j) smaller += p[j] < p[i];
      r = r * (kCells - i) + smaller;
    }
    return r;
  }

  static std::array<int, kCells> unrank(int r) {
    std::array<int, kCells> digits{};
    for (int i = kCells - 1; i >= 0; --i) {
      digits[i] = r % (kCells - i);
      r /= (kCells - i);
    }
    std::vector<int> pool(kCells);
    std::iota(pool.begin(), pool.end(), 0);
    std::array<int, kCells> p{};
    for (int i = 0; i < kCells; ++i) {
      p[i] = pool[digits[i]];
      pool.erase(pool.begin() + digits[i]);
    }
    return p;
  }

 private:
  void enumerate_steps() {
    int total = 1;
    for (int i = 0; i < kCells; ++i) total *= 5;
    for (int code = 0; code < total; ++code) {
      std::array<int, kCells> sig{};
      int cc = code;
      bool ok = true, moved = false;
      for (int c = 0; c < kCells && ok; ++c) {
        Move m = Move(cc % 5);
        cc /= 5;
        Pos p{c % w_, c / w_};
        Pos q = apply_move(p, m);
        if (q.x < 0 || q.y < 0 || q.x >= w_ || q.y >= h_) ok = false;
        sig[c] = q.y * w_ + q.x;
        moved |= m != Move::Wait;
      }
      if (!ok || !moved) continue;
      std::array<int, kCells> seen{};
      for (int c = 0; c < kCells && ok; ++c) ok = !seen[sig[c]]++;
      for (int c = 0; c < kCells && ok; ++c) ok = !(sig[c] != c && sig[sig[c]] == c);
      if (ok) steps_.push_back(sig);
    }
  }

  void bfs() {
    dist_.assign(kStates, -1);
    next_.assign(kStates, -1);
    std::array<int, kCells> id{};
    std::iota(id.begin(), id.end(), 0);
    std::vector<int> queue{rank(id)};
    dist_[queue[0]] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int s = queue[qi];
      auto p = unrank(s);
      for (std::size_t k = 0; k < steps_.size(); ++k) {
        // predecessor q with q[c] = p[sig[c]] reaches p by applying sig
        std::array<int, kCells> q{};
        for (int c = 0; c < kCells; ++c) q[c] = p[steps_[k][c]];
        int t = rank(q);
        if (dist_[t] >= 0) continue;
        dist_[t] = dist_[s] + 1;
        next_[t] = int(k);
        diameter_ = std::max(diameter_, dist_[t]);
        queue.push_back(t);
      }
    }
    for (int s = 0; s < kStates; ++s)
      if (dist_[s] < 0) throw Error(ErrorCode::Internal, "gadget graph not connected");
  }

  int w_, h_;
  int diameter_ = 0;
  std::vector<std::array<int, kCells>> steps_;
  std::vector<int> dist_;
  std::vector<int> next_;
};

inline const GadgetTable& gadget(int w, int h) {
  static const GadgetTable wide(3, 2);
  static const GadgetTable tall(2, 3);
  if (w == 3 && h == 2) return wide;
  if (w == 2 && h == 3) return tall;
  throw Error(ErrorCode::WrongDims, "gadget exists only for 2x3 and 3x2");
}

// Cell moves for one gadget solution placed at `origin`.
inline Phase gadget_phase(const GadgetTable& g, Pos origin, const std::array<int, 6>& perm) {
  Phase out;
  for (const auto& sig : g.solve(perm)) {
    CellStep cs;
    for (int c = 0; c < 6; ++c) {
      if (sig[c] == c) continue;
      Pos a{origin.x + c % g.width(), origin.y + c / g.width()};
      Pos b{origin.x + sig[c] % g.width(), origin.y + sig[c] / g.width()};
      cs.push_back({a, move_between(a, b)});
    }
    out.push_back(std::move(cs));
  }
  return out;
}

// Optimal schedule for a fully occupied 2x3 or 3x2 instance.
inline Schedule solve_small(const Instance& inst) {
  const GridDims g = inst.dims;
  if (!((g.n1 == 3 && g.n2 == 2) || (g.n1 == 2 && g.n2 == 3)) || inst.size() != 6)
    throw Error(ErrorCode::WrongDims, "solve_small needs a fully occupied 2x3 or 3x2 grid");
  check_instance(inst);
  std::array<int, 6> perm{};
  for (std::size_t r = 0; r < 6; ++r) perm[g.index(inst.start[r])] = g.index(inst.target[r]);
  PhaseRunner run(g, inst.start);
  run.run(gadget_phase(gadget(g.n1, g.n2), {0, 0}, perm));
  return run.take();
}

using SwapPair = std::pair<Pos, Pos>;

namespace detail {

struct BlockClass {
  int bw, bh, ax, ay;
};

inline const std::array<BlockClass, 12>& block_classes() {
  static const std::array<BlockClass, 12> cls = [] {
    std::array<BlockClass, 12> c{};
    int k = 0;
    for (int ay = 0; ay < 2; ++ay)
      for (int ax = 0; ax < 3; ++ax) c[k++] = {3, 2, ax, ay};
    for (int ay = 0; ay < 3; ++ay)
      for (int ax = 0; ax < 2; ++ax) c[k++] = {2, 3, ax, ay};
    return c;
  }();
  return cls;
}

inline int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// Block of class `bc` holding both swap cells inside `region`, if any.
inline std::optional<Rect> covering_block(const Rect& region, const BlockClass& bc, const SwapPair& s) {
  int lx = std::min(s.first.x, s.second.x) - region.x0;
  int ly = std::min(s.first.y, s.second.y) - region.y0;
  int bx = floor_div(lx - bc.ax, bc.bw) * bc.bw + bc.ax;
  int by = floor_div(ly - bc.ay, bc.bh) * bc.bh + bc.ay;
  int hx = std::max(s.first.x, s.second.x) - region.x0;
  int hy = std::max(s.first.y, s.second.y) - region.y0;
  if (bx < 0 || by < 0 || bx + bc.bw > region.w || by + bc.bh > region.h) return std::nullopt;
  if (hx >= bx + bc.bw || hy >= by + bc.bh) return std::nullopt;
  return Rect{region.x0 + bx, region.y0 + by, bc.bw, bc.bh};
}

}  // namespace detail

// Exchanges the given disjoint adjacent cell pairs inside a fully occupied region;
// every other cell ends where it began.
inline Phase swap_batch_phase(const Rect& region, const std::vector<SwapPair>& swaps) {
  if (swaps.empty()) return {};
  if (region.w < 2 || region.h < 2 || (region.w < 3 && region.h < 3))
    throw Error(ErrorCode::InfeasibleDims, "swap_batch needs a region with sides >= 2 and one side >= 3");
  std::vector<char> used(region.area(), 0);
  for (const auto& s : swaps) {
    if (manhattan(s.first, s.second) != 1) throw Error(ErrorCode::NonAdjacentPair, "swap cells not adjacent");
    if (!region.contains(s.first) || !region.contains(s.second))
      throw Error(ErrorCode::NonAdjacentPair, "swap cell outside region");
    for (Pos p : {s.first, s.second}) {
      if (used[region.local(p)]++) throw Error(ErrorCode::OverlappingSwaps, "swap pairs overlap");
    }
  }
  const auto& classes = detail::block_classes();
  const std::size_t n = swaps.size();
  std::vector<char> done(n, 0);
  std::size_t remaining = n;
  // blocks chosen in greedy order; each carries its swaps
  std::vector<std::pair<Rect, std::vector<std::size_t>>> blocks;
  while (remaining > 0) {
    std::array<std::size_t, 12> cover{};
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      for (int c = 0; c < 12; ++c) cover[c] += detail::covering_block(region, classes[c], swaps[i]).has_value();
    }
    int best = int(std::max_element(cover.begin(), cover.end()) - cover.begin());
    if (cover[best] == 0) throw Error(ErrorCode::InfeasibleDims, "swap cannot be covered by a gadget block");
    std::map<std::pair<int, int>, std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      auto b = detail::covering_block(region, classes[best], swaps[i]);
      if (!b) continue;
      auto key = std::make_pair(b->y0, b->x0);
      auto it = idx.find(key);
      if (it == idx.end()) {
        it = idx.emplace(key, blocks.size()).first;
        blocks.push_back({*b, {}});
      }
      blocks[it->second].second.push_back(i);
      done[i] = 1;
      --remaining;
    }
  }
  // first-fit packing of blocks into layers of pairwise disjoint blocks
  std::vector<std::vector<std::size_t>> layers;
  std::vector<std::vector<char>> layer_used;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Rect& r = blocks[b].first;
    std::size_t L = 0;
    for (; L < layers.size(); ++L) {
      bool free = true;
      for (int y = r.y0; y < r.y1() && free; ++y)
        for (int x = r.x0; x < r.x1() && free; ++x) free = !layer_used[L][region.local({x, y})];
      if (free) break;
    }
    if (L == layers.size()) {
      layers.emplace_back();
      layer_used.emplace_back(region.area(), 0);
    }
    layers[L].push_back(b);
    for (int y = r.y0; y < r.y1(); ++y)
      for (int x = r.x0; x < r.x1(); ++x) layer_used[L][region.local({x, y})] = 1;
  }
  Phase out;
  for (const auto& layer : layers) {
    Phase lp;
    for (std::size_t b : layer) {
      const Rect& r = blocks[b].first;
      std::array<int, 6> perm{};
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t i : blocks[b].second) {
        int a = r.local(swaps[i].first), c = r.local(swaps[i].second);
        std::swap(perm[a], perm[c]);
      }
      merge_phase(lp, gadget_phase(gadget(r.w, r.h), {r.x0, r.y0}, perm));
    }
    append_phase(out, lp);
  }
  return out;
}

inline Schedule swap_batch(GridDims dims, const std::vector<Pos>& config, const std::vector<SwapPair>& swaps) {
  if (long(config.size()) != dims.cells()) throw Error(ErrorCode::NotFullyOccupied, "swap_batch needs a full grid");
  PhaseRunner run(dims, config);
  run.run(swap_batch_phase({0, 0, dims.n1, dims.n2}, swaps));
  return run.take();
}

namespace detail {

// Minimum-cost perfect assignment on a square matrix (potentials method).
inline std::vector<int> hungarian(const std::vector<std::vector<long long>>& a) {
  const int n = int(a.size());
  const long long INF = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1), v(n + 1);
  std::vector<int> p(n + 1), way(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<long long> minv(n + 1, INF);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      long long delta = INF;
      for (int j = 1; j <= n; ++j)
        if (!used[j]) {
          long long cur = a[i0 - 1][j - 1] - u[i0] - v[j];
          if (cur < minv[j]) minv[j] = cur, way[j] = j0;
          if (minv[j] < delta) delta = minv[j], j1 = j;
        }
      for (int j = 0; j <= n; ++j)
        if (used[j]) u[p[j]] += delta, v[j] -= delta;
        else minv[j] -= delta;
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j]) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

// Tokens on a W x H board (row-major); src/dst are (line, position) coordinates in
// the frame where pass 1 runs along lines. Returns the intermediate position for
// each token so that pass 1 (along lines), pass 2 (across lines), pass 3 (along lines)
// sorts the board.
inline std::vector<int> hall_positions(int L, int H, const std::vector<int>& src_line,
                                       const std::vector<int>& dst_line, const std::vector<int>& src_pos,
                                       const std::vector<int>& dst_pos) {
  // L = tokens per line (positions), H = number of lines
  const long long INF = 1LL << 40;
  const int n = int(src_line.size());
  std::vector<std::vector<std::vector<int>>> bucket(H, std::vector<std::vector<int>>(H));
  for (int t = 0; t < n; ++t) bucket[src_line[t]][dst_line[t]].push_back(t);
  // ideal intermediate position, scaled by 2 to stay integral
  std::vector<long long> ideal(n);
  for (int t = 0; t < n; ++t) ideal[t] = src_pos[t] + dst_pos[t];
  for (auto& row : bucket)
    for (auto& b : row) std::sort(b.begin(), b.end(), [&](int a, int c) { return ideal[a] != ideal[c] ? ideal[a] < ideal[c] : a < c; });
  std::vector<std::vector<std::size_t>> head(H, std::vector<std::size_t>(H, 0));
  std::vector<int> out(n, -1);
  std::vector<std::vector<long long>> cost(H, std::vector<long long>(H));
  for (int c = 0; c < L; ++c) {
    for (int i = 0; i < H; ++i)
      for (int j = 0; j < H; ++j) {
        const auto& b = bucket[i][j];
        cost[i][j] = head[i][j] < b.size() ? ideal[b[head[i][j]]] : INF;
      }
    auto match = hungarian(cost);
    for (int i = 0; i < H; ++i) {
      int j = match[i];
      MRP_ASSERT(head[i][j] < bucket[i][j].size(), "hall assignment failed");
      out[bucket[i][j][head[i][j]++]] = c;
    }
  }
  return out;
}

// Odd-even transposition rounds sorting every line by key; returns swap rounds.
// lines[l][p] = key of the token at position p of line l.
inline std::vector<std::vector<std::pair<int, int>>> odd_even_rounds(std::vector<std::vector<int>> lines, int first_parity) {
  std::vector<std::vector<std::pair<int, int>>> rounds;
  auto sorted = [&]() {
    for (const auto& ln : lines)
      for (std::size_t p = 1; p < ln.size(); ++p)
        if (ln[p - 1] > ln[p]) return false;
    return true;
  };
  int parity = first_parity;
  int idle = 0;
  while (!sorted()) {
    std::vector<std::pair<int, int>> sw;
    for (std::size_t l = 0; l < lines.size(); ++l) {
      auto& ln = lines[l];
      for (std::size_t p = parity; p + 1 < ln.size(); p += 2)
        if (ln[p] > ln[p + 1]) {
          std::swap(ln[p], ln[p + 1]);
          sw.push_back({int(l), int(p)});
        }
    }
    if (!sw.empty()) {
      rounds.push_back(std::move(sw));
      idle = 0;
    } else {
      MRP_ASSERT(++idle < 3, "odd-even transposition stalled");
    }
    parity ^= 1;
  }
  return rounds;
}

inline std::vector<std::vector<std::pair<int, int>>> best_rounds(const std::vector<std::vector<int>>& lines) {
  auto a = odd_even_rounds(lines, 0);
  auto b = odd_even_rounds(lines, 1);
  return a.size() <= b.size() ? a : b;
}

struct SortPlan {
  bool rows_first = true;  // true: row, column, row passes
  std::array<std::vector<std::vector<std::pair<int, int>>>, 3> rounds;
  std::size_t total() const { return rounds[0].size() + rounds[1].size() + rounds[2].size(); }
};

// Three-pass plan for the permutation dest (local cell -> local cell) of a w x h board.
inline SortPlan plan_passes(int w, int h, const std::vector<int>& dest, bool rows_first) {
  const int n = w * h;
  SortPlan sp;
  sp.rows_first = rows_first;
  // transpose into a frame where pass 1 runs along "lines" of length L
  const int L = rows_first ? w : h;
  const int H = rows_first ? h : w;
  auto line_of = [&](int cell) { return rows_first ? cell / w : cell % w; };
  auto pos_of = [&](int cell) { return rows_first ? cell % w : cell / w; };
  std::vector<int> sl(n), dl(n), sp0(n), dp(n);
  for (int c = 0; c < n; ++c) {
    sl[c] = line_of(c);
    sp0[c] = pos_of(c);
    dl[c] = line_of(dest[c]);
    dp[c] = pos_of(dest[c]);
  }
  std::vector<int> mid = hall_positions(L, H, sl, dl, sp0, dp);
  // pass 1: along lines, key = mid
  std::vector<std::vector<int>> lines(H, std::vector<int>(L));
  for (int c = 0; c < n; ++c) lines[sl[c]][sp0[c]] = mid[c];
  sp.rounds[0] = best_rounds(lines);
  // pass 2: across lines (position fixed = mid), key = destination line
  std::vector<std::vector<int>> cross(L, std::vector<int>(H));
  for (int c = 0; c < n; ++c) cross[mid[c]][sl[c]] = dl[c];
  // the pass-1 permutation moves each token within its line to position mid
  sp.rounds[1] = best_rounds(cross);
  // pass 3: along lines, key = destination position
  std::vector<std::vector<int>> fin(H, std::vector<int>(L));
  for (int c = 0; c < n; ++c) fin[dl[c]][mid[c]] = dp[c];
  sp.rounds[2] = best_rounds(fin);
  return sp;
}

}  // namespace detail

inline bool is_identity(const std::vector<int>& dest) {
  for (std::size_t i = 0; i < dest.size(); ++i)
    if (dest[i] != int(i)) return false;
  return true;
}

// Permutes a fully occupied region: the robot on local cell c ends on local cell dest[c].
inline Phase permute_region(const Rect& r, const std::vector<int>& dest) {
  MRP_ASSERT(long(dest.size()) == r.area(), "dest size mismatch");
  if (is_identity(dest)) return {};
  const int w = r.w, h = r.h;
  if ((w == 3 && h == 2) || (w == 2 && h == 3)) {
    std::array<int, 6> perm{};
    std::copy(dest.begin(), dest.end(), perm.begin());
    return gadget_phase(gadget(w, h), {r.x0, r.y0}, perm);
  }
  if (w == 2 && h == 2) {
    // only the four cyclic rotations are reachable
    const std::array<int, 4> ring{0, 1, 3, 2};  // counterclockwise cell order
    for (int k = 1; k < 4; ++k) {
      bool match = true;
      for (int i = 0; i < 4 && match; ++i) match = dest[ring[i]] == ring[(i + k) % 4];
      if (!match) continue;
      Phase out;
      int steps = k <= 2 ? k : 1;
      int dir = k <= 2 ? 1 : 3;
      for (int s = 0; s < steps; ++s) {
        CellStep cs;
        for (int i = 0; i < 4; ++i) {
          Pos a = r.global(ring[i]), b = r.global(ring[(i + dir) % 4]);
          cs.push_back({a, move_between(a, b)});
        }
        out.push_back(cs);
      }
      return out;
    }
    throw Error(ErrorCode::InfeasibleDims, "permutation unreachable on a 2x2 grid");
  }
  if (w < 2 || h < 2) throw Error(ErrorCode::InfeasibleDims, "permutation unreachable on a 1-wide grid");
  auto a = detail::plan_passes(w, h, dest, true);
  auto b = detail::plan_passes(w, h, dest, false);
  const detail::SortPlan& sp = a.total() <= b.total() ? a : b;
  Phase out;
  for (int pass = 0; pass < 3; ++pass) {
    // pass 0 and 2 run along the primary lines, pass 1 across
    bool along_rows = (pass == 1) != sp.rows_first;
    for (const auto& round : sp.rounds[pass]) {
      std::vector<SwapPair> swaps;
      swaps.reserve(round.size());
      for (auto [line, p] : round) {
        Pos u = along_rows ? Pos{r.x0 + p, r.y0 + line} : Pos{r.x0 + line, r.y0 + p};
        Pos v = along_rows ? Pos{u.x + 1, u.y} : Pos{u.x, u.y + 1};
        swaps.push_back({u, v});
      }
      append_phase(out, swap_batch_phase(r, swaps));
    }
  }
  return out;
}

inline Schedule plan_rotatesort(const Instance& inst) {
  check_instance(inst);
  if (!inst.fully_occupied()) throw Error(ErrorCode::NotFullyOccupied, "rotatesort needs a fully occupied grid");
  const GridDims g = inst.dims;
  std::vector<int> dest(g.cells());
  for (std::size_t r = 0; r < inst.size(); ++r) dest[g.index(inst.start[r])] = g.index(inst.target[r]);
  if (is_identity(dest)) return {};
  if (infeasible_shape(g) && !(g.n1 == 2 && g.n2 == 2))
    throw Error(ErrorCode::InfeasibleDims, "1-wide grids admit no permutation");
  PhaseRunner run(g, inst.start);
  run.run(permute_region({0, 0, g.n1, g.n2}, dest));
  return run.take();
}

}  // namespace mrp
