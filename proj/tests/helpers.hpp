#pragma once

#include <random>

#include "mrp/mrp.hpp"

namespace mrp::test {

// Instance whose start is `inst`'s configuration after `s`.
inline Instance advanced(const Instance& inst, const Schedule& s) {
  Instance out = inst;
  ScheduleReport rep = apply_schedule(inst, s);
  out.start = rep.final_config;
  return out;
}

// Rotate the robots on the ring of cells [x0, x0+w) x [y0, y0+h) by `shift` positions
// (positive = counterclockwise).
inline void rotate_ring(std::vector<Pos>& target_of_cell, GridDims g, int x0, int y0, int w, int h, int shift = 1) {
  std::vector<Pos> ring;
  for (int x = x0; x < x0 + w; ++x) ring.push_back({x, y0});
  for (int y = y0 + 1; y < y0 + h; ++y) ring.push_back({x0 + w - 1, y});
  for (int x = x0 + w - 2; x >= x0; --x) ring.push_back({x, y0 + h - 1});
  for (int y = y0 + h - 2; y > y0; --y) ring.push_back({x0, y});
  const long n = long(ring.size());
  for (long i = 0; i < n; ++i) target_of_cell[g.index(ring[i])] = ring[((i + shift) % n + n) % n];
}

inline void swap_cells(std::vector<Pos>& target_of_cell, GridDims g, Pos a, Pos b) {
  target_of_cell[g.index(a)] = b;
  target_of_cell[g.index(b)] = a;
}

// Full instance from a cell -> target map, ids 1..N in row-major order.
inline Instance from_map(GridDims g, const std::vector<Pos>& target_of_cell) {
  Instance inst;
  inst.dims = g;
  for (int c = 0; c < g.cells(); ++c) inst.add(c + 1, g.at(c), target_of_cell[c]);
  return inst;
}

inline std::vector<Pos> identity_map(GridDims g) {
  std::vector<Pos> m(g.cells());
  for (int c = 0; c < g.cells(); ++c) m[c] = g.at(c);
  return m;
}

// Full instance with random concentric ring rotations (shift <= d) around the interior
// corners of the d-tiling, so the tile flow is a non-trivial circulation.
inline Instance corner_rings(GridDims g, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Tiling t = build_tiling(g, d);
  auto m = identity_map(g);
  for (int i = 1; i < t.kx(); ++i)
    for (int j = 1; j < t.ky(); ++j) {
      const int cx = t.xs[i], cy = t.ys[j];
      const int rings = int(rng() % std::uint64_t(6 * d));
      for (int k = 1; k <= rings; ++k) {
        int shift = 1 + int(rng() % std::uint64_t(d));
        if (rng() % 3 == 0) shift = -shift;
        rotate_ring(m, g, cx - k, cy - k, 2 * k, 2 * k, shift);
      }
    }
  return from_map(g, m);
}

// Full instance with concentric rings around one random centre, each rotated by a random
// shift in [-d, d]; large rings cross many tiles and nest deeply.
inline Instance concentric_rings(GridDims g, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto m = identity_map(g);
  const int cx = 1 + int(rng() % std::uint64_t(g.n1 - 1)), cy = 1 + int(rng() % std::uint64_t(g.n2 - 1));
  const int K = std::min({cx, cy, g.n1 - cx, g.n2 - cy});
  for (int k = 1; k <= K; ++k) {
    if (rng() % 10 < 3) continue;
    int shift = 1 + int(rng() % std::uint64_t(d));
    if (rng() % 2) shift = -shift;
    rotate_ring(m, g, cx - k, cy - k, 2 * k, 2 * k, shift);
  }
  return from_map(g, m);
}

// 26 x 32 full grid, d = 1: 2x2 rotations tiled over the grid, including blocks
// straddling both cut lines so every tile exchanges robots with its neighbours.
inline Instance four_tile_instance() {
  GridDims g{26, 32};
  auto m = identity_map(g);
  for (int y = 1; y + 1 < g.n2; y += 2)
    for (int x = 1; x + 1 < g.n1; x += 2) rotate_ring(m, g, x, y, 2, 2);
  return from_map(g, m);
}

// Fully occupied 2x3 board with robots at (0,0) and (0,1) exchanging cells.
inline Instance adjacent_transposition() {
  GridDims g{2, 3};
  auto m = identity_map(g);
  swap_cells(m, g, {0, 0}, {0, 1});
  return from_map(g, m);
}

// Frozen regression constants.
inline const io::json& frozen() {
  static const io::json j = io::load(std::string(MRP_CONFIG_DIR) + "/frozen.json");
  return j;
}

// Robots whose current tile (under `config`) differs from their target tile.
inline int off_target_tiles(const Tiling& t, const std::vector<Pos>& config, const std::vector<Pos>& target) {
  int n = 0;
  for (std::size_t r = 0; r < config.size(); ++r) n += t.tile_of(config[r]) != t.tile_of(target[r]);
  return n;
}

inline bool valid_plan(const Instance& inst, const Schedule& s) { return apply_schedule(inst, s).ok(); }

}  // namespace mrp::test
