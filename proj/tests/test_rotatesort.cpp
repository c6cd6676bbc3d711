#include <doctest.h>

#include "helpers.hpp"

using namespace mrp;

namespace {

// Every robot not named in a swap ends where it started.
bool others_stationary(const Instance& inst, const Schedule& s) {
  auto rep = apply_schedule(inst, s);
  for (std::size_t r = 0; r < inst.size(); ++r)
    if (rep.final_config[r] != inst.target[r]) return false;
  return rep.ok();
}

Instance swapped(GridDims g, const std::vector<SwapPair>& swaps) {
  auto m = test::identity_map(g);
  for (auto [a, b] : swaps) test::swap_cells(m, g, a, b);
  return test::from_map(g, m);
}

}  // namespace

TEST_SUITE("rotatesort") {
  TEST_CASE("gadget distances") {
    const GadgetTable& tall = gadget(2, 3);
    const GadgetTable& wide = gadget(3, 2);
    CHECK(tall.distance({0, 1, 2, 3, 4, 5}) == 0);
    CHECK(tall.distance({2, 1, 0, 3, 4, 5}) == 3);  // along the long side
    CHECK(tall.distance({1, 0, 2, 3, 4, 5}) == 5);  // across the short side
    CHECK(wide.distance({1, 0, 2, 3, 4, 5}) == 3);
    CHECK(tall.diameter() <= 7);
    CHECK(wide.diameter() == tall.diameter());
  }

  TEST_CASE("small boards are solved exactly") {
    Instance inst = test::adjacent_transposition();
    Schedule s = solve_small(inst);
    CHECK(s.makespan() == 3);
    CHECK(test::valid_plan(inst, s));
  }

  TEST_CASE("empty swap set") {
    GridDims g{4, 4};
    CHECK(swap_batch(g, test::identity_map(g), {}).makespan() == 0);
  }

  TEST_CASE("one horizontal swap inside 3x3") {
    GridDims g{3, 3};
    std::vector<SwapPair> sw{{{0, 1}, {1, 1}}};
    Instance inst = swapped(g, sw);
    Schedule s = swap_batch(g, inst.start, sw);
    CHECK(s.makespan() <= 7);
    CHECK(others_stationary(inst, s));
  }

  TEST_CASE("ten disjoint swaps on 12x12") {
    GridDims g{12, 12};
    std::vector<SwapPair> sw;
    for (int k = 0; k < 5; ++k) sw.push_back({{2 * k, k}, {2 * k + 1, k}});
    for (int k = 0; k < 5; ++k) sw.push_back({{10 + k % 2, 2 * k + 1}, {10 + k % 2, 2 * k + 2}});
    Instance inst = swapped(g, sw);
    Schedule s = swap_batch(g, inst.start, sw);
    CHECK(s.makespan() <= 12 * 7);
    CHECK(others_stationary(inst, s));
  }

  TEST_CASE("overlapping or non-adjacent swaps are rejected") {
    GridDims g{4, 4};
    auto id = test::identity_map(g);
    CHECK_THROWS_AS(swap_batch(g, id, {{{0, 0}, {1, 0}}, {{1, 0}, {2, 0}}}), Error);
    CHECK_THROWS_AS(swap_batch(g, id, {{{0, 0}, {2, 0}}}), Error);
  }

  TEST_CASE("identity needs no steps") {
    GridDims g{5, 4};
    CHECK(plan_rotatesort(test::from_map(g, test::identity_map(g))).makespan() == 0);
  }

  TEST_CASE("reversal on 4x4") {
    GridDims g{4, 4};
    std::vector<Pos> m(g.cells());
    for (int c = 0; c < g.cells(); ++c) m[c] = g.at(int(g.cells()) - 1 - c);
    Instance inst = test::from_map(g, m);
    Schedule s = plan_rotatesort(inst);
    CHECK(test::valid_plan(inst, s));
  }

  TEST_CASE("random permutations of rectangles") {
    std::mt19937_64 rng(7);
    for (auto [w, h] : {std::pair{6, 6}, std::pair{7, 5}, std::pair{3, 10}, std::pair{12, 9}, std::pair{2, 8}}) {
      GridDims g{w, h};
      auto m = test::identity_map(g);
      std::shuffle(m.begin(), m.end(), rng);
      Instance inst = test::from_map(g, m);
      Schedule s = plan_rotatesort(inst);
      CHECK(test::valid_plan(inst, s));
      CHECK(s.makespan() <= std::size_t(60 * (w + h)));
    }
  }

  TEST_CASE("hungarian assignment") {
    std::vector<std::vector<long long>> a{{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
    auto p = detail::hungarian(a);
    long long cost = 0;
    for (int i = 0; i < 3; ++i) cost += a[i][p[i]];
    CHECK(cost == 5);
  }
}
