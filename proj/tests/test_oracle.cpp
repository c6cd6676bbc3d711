#include <doctest.h>

#include "helpers.hpp"

using namespace mrp;

TEST_SUITE("oracle") {
  TEST_CASE("exact optimum examples") {
    Instance still;
    still.dims = {3, 3};
    still.add(1, {1, 1}, {1, 1});
    CHECK(optimal_makespan(still, 10).value == 0);

    Instance one;
    one.dims = {3, 3};
    one.add(1, {0, 0}, {2, 2});
    auto r = optimal_makespan(one, 10);
    CHECK(r.status == OracleResult::Exact);
    CHECK(r.value == 4);

    CHECK(optimal_makespan(test::adjacent_transposition(), 10).value == 3);
  }

  TEST_CASE("unreachable and capped searches") {
    Instance line;
    line.dims = {3, 1};
    line.add(1, {0, 0}, {1, 0});
    line.add(2, {1, 0}, {0, 0});
    CHECK(optimal_makespan(line, 20).status == OracleResult::Unreachable);
    Instance far;
    far.dims = {9, 1};
    far.add(1, {0, 0}, {8, 0});
    CHECK(optimal_makespan(far, 3).status == OracleResult::Unknown);
  }

  TEST_CASE("oversized searches are refused") {
    GridDims g{6, 6};
    Instance big = test::from_map(g, test::identity_map(g));
    CHECK_THROWS_AS(optimal_makespan(big, 5), Error);
  }

  TEST_CASE("generator is seed-stable and respects d") {
    Instance a = gen_random({30, 20}, 600, 4, 77), b = gen_random({30, 20}, 600, 4, 77);
    CHECK(a.start == b.start);
    CHECK(a.target == b.target);
    CHECK(max_distance(a) <= 4);
    CHECK_NOTHROW(check_instance(a));
    CHECK(gen_random({5, 5}, 0, 2, 1).size() == 0);
    Instance s = gen_random({50, 50}, 40, 6, 3, GenMode::Clustered);
    CHECK(s.size() == 40);
    CHECK(max_distance(s) <= 6);
    CHECK_NOTHROW(check_instance(s));
  }

  TEST_CASE("continuous generators") {
    ContinuousInstance c = gen_continuous(30, 2.0, 0.0, 8);
    CHECK(c.size() == 30);
    CHECK(min_separation(c.start) >= 2.0);
    CHECK(min_separation(c.target) >= 2.0);
    ContinuousInstance h = gen_hex(1);
    REQUIRE(h.size() == 1);
    CHECK(continuous_distance(h) == doctest::Approx(2.0));
    ContinuousInstance h7 = gen_hex(7);
    CHECK(min_separation(h7.start) >= 2.0 - 1e-12);
    CHECK(min_separation(h7.target) >= 2.0 - 1e-12);
  }

  TEST_CASE("monotone 3-CNF checks") {
    Cnf ok{3, {{1, 2, 3}, {-1, -2, -3}}};
    CHECK_NOTHROW(check_monotone3(ok));
    CHECK_THROWS_AS(check_monotone3(Cnf{3, {{1, -2, 3}}}), Error);
    CHECK_THROWS_AS(check_monotone3(Cnf{3, {{1, 2}}}), Error);
    auto a = brute_force_sat(ok);
    REQUIRE(a);
    CHECK(satisfies(ok, *a));
  }

  TEST_CASE("reduction size and witness") {
    Cnf f{3, {{1, 2, 3}}};
    SatInstance si = gen_sat_instance(f, brute_force_sat(f));
    CHECK(si.M == 54);
    REQUIRE(si.witness);
    CHECK(si.witness->makespan() == 54);
    CHECK(apply_schedule(si.instance, *si.witness).ok());
    CHECK(max_distance(si.instance) == 54);
    CHECK_FALSE(gen_sat_instance(f).witness);
  }

  TEST_CASE("random satisfiable formulas give valid witnesses of makespan M") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      const int n = 3 + int(seed % 3), m = 2 + int(seed % 4);
      Cnf f = random_monotone3(n, m, seed);
      auto a = brute_force_sat(f);
      if (!a) continue;
      SatInstance si = gen_sat_instance(f, a);
      CHECK(si.M == 6 * n * (m + 2));
      REQUIRE(si.witness);
      CHECK(si.witness->makespan() == std::size_t(si.M));
      CHECK(apply_schedule(si.instance, *si.witness).ok());
    }
  }
}
