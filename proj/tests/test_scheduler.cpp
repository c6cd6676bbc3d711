#include <doctest.h>

#include "helpers.hpp"

using namespace mrp;

TEST_SUITE("scheduler") {
  TEST_CASE("identity instances need no steps") {
    GridDims g{30, 30};
    Instance inst = test::from_map(g, test::identity_map(g));
    CHECK(plan_full(inst).makespan() == 0);
    CHECK(plan_auto(inst).makespan() == 0);
  }

  TEST_CASE("four-tile instance") {
    Instance inst = test::four_tile_instance();
    PlanOptions pipeline;
    pipeline.portfolio = false;
    pipeline.force_pipeline = true;
    Schedule a = plan_full(inst, pipeline);
    CHECK(test::valid_plan(inst, a));
    Schedule b = plan_full(inst);
    CHECK(test::valid_plan(inst, b));
    CHECK(b.makespan() <= a.makespan());
  }

  TEST_CASE("pipeline on corner-ring circulations") {
    PlanOptions pipeline;
    pipeline.portfolio = false;
    pipeline.force_pipeline = true;
    for (auto [n, d] : {std::pair{72, 1}, std::pair{72, 2}, std::pair{96, 3}}) {
      Instance inst = test::corner_rings({n, n + 4}, d, 17);
      Schedule s = plan_full(inst, pipeline);
      CHECK(test::valid_plan(inst, s));
    }
  }

  TEST_CASE("random full permutations on 96x96") {
    const double c_str = test::frozen()["c_full_stretch"].get<double>();
    for (int d = 1; d <= 5; ++d) {
      Instance inst = gen_random({96, 96}, 96 * 96, d, 100 + d);
      Schedule s = plan_full(inst);
      REQUIRE(test::valid_plan(inst, s));
      CHECK(stretch(inst, s).value() <= c_str);
    }
  }

  TEST_CASE("full grids of infeasible shape") {
    Instance line;
    line.dims = {5, 1};
    for (int x = 0; x < 5; ++x) line.add(x + 1, {x, 0}, {x, 0});
    CHECK(plan_full(line).makespan() == 0);
    Instance swapped = line;
    std::swap(swapped.target[1], swapped.target[2]);
    CHECK_THROWS_AS(plan_full(swapped), Error);
    Instance rot;
    rot.dims = {2, 2};
    rot.add(1, {0, 0}, {1, 0});
    rot.add(2, {1, 0}, {1, 1});
    rot.add(3, {1, 1}, {0, 1});
    rot.add(4, {0, 1}, {0, 0});
    Schedule s = plan_full(rot);
    CHECK(s.makespan() == 1);
    CHECK(test::valid_plan(rot, s));
    std::swap(rot.target[0], rot.target[1]);
    CHECK_THROWS_AS(plan_full(rot), Error);
  }

  TEST_CASE("sparse lines keep order and move straight") {
    Instance inst;
    inst.dims = {10, 1};
    inst.add(1, {0, 0}, {4, 0});
    inst.add(2, {2, 0}, {9, 0});
    Schedule s = plan_auto(inst);
    CHECK(s.makespan() == 7);
    CHECK(test::valid_plan(inst, s));
  }

  TEST_CASE("single robot straight move") {
    Instance inst;
    inst.dims = {20, 20};
    inst.add(1, {2, 5}, {14, 5});
    REQUIRE(use_sparse(inst));
    Schedule s = plan_sparse(inst);
    CHECK(test::valid_plan(inst, s));
    CHECK(s.makespan() <= std::size_t(12 + 8));
  }

  TEST_CASE("sweep with several robots") {
    Instance inst;
    inst.dims = {40, 30};
    inst.add(1, {3, 3}, {20, 10});
    inst.add(2, {20, 10}, {3, 3});
    inst.add(3, {10, 25}, {30, 5});
    inst.add(4, {31, 6}, {11, 26});
    REQUIRE(use_sparse(inst));
    Schedule s = plan_auto(inst);
    CHECK(test::valid_plan(inst, s));
  }

  TEST_CASE("random sparse instances on 200x200") {
    const double c_sp = test::frozen()["c_sparse"].get<double>();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Instance inst = gen_random({200, 200}, 10, 50, seed, GenMode::Sparse);
      REQUIRE(use_sparse(inst));
      Schedule s = plan_auto(inst);
      REQUIRE(test::valid_plan(inst, s));
      CHECK(stretch(inst, s).value() <= c_sp);
    }
  }

  TEST_CASE("far-apart groups form separate clusters") {
    Instance inst;
    inst.dims = {60, 60};
    int id = 1;
    for (int k = 0; k < 6; ++k) inst.add(id++, {2 + k, 2}, {2 + k, 3});
    for (int k = 0; k < 6; ++k) inst.add(id++, {50 + k, 50}, {50 + k, 48});
    REQUIRE_FALSE(use_sparse(inst));
    auto cl = cluster_robots(inst);
    int nonempty = 0;
    for (auto& c : cl) nonempty += !c.robots.empty();
    CHECK(nonempty == 2);
    Schedule s = plan_auto(inst);
    CHECK(test::valid_plan(inst, s));
  }

  TEST_CASE("random clustered and scattered instances") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      GenMode mode = seed % 2 ? GenMode::Clustered : GenMode::Sparse;
      Instance inst = gen_random({40, 36}, 20 + seed * 7, 1 + int(seed % 6), seed, mode);
      Schedule s = plan_auto(inst);
      CHECK(test::valid_plan(inst, s));
    }
  }

  TEST_CASE("stretch helper agrees with makespan over distance") {
    Instance inst = gen_random({30, 30}, 900, 2, 4);
    Schedule s = plan_auto(inst);
    auto r = stretch(inst, s);
    CHECK(r.num == (long long)s.makespan());
    CHECK(r.den == max_distance(inst));
  }
}
