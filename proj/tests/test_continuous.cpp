#include <doctest.h>

#include "helpers.hpp"

using namespace mrp;

namespace {

Trajectory line(Vec2 a, Vec2 b, double t0, double t1) {
  Trajectory t;
  t.push(0, a);
  if (t0 > 0) t.push(t0, a);
  t.push(t1, b);
  return t;
}

// Smallest sampled pairwise distance, an independent lower-resolution check.
double sampled_min(const TrajectorySet& ts, int samples) {
  const double T = ts.makespan();
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= samples; ++k) {
    std::vector<Vec2> p;
    for (const auto& tr : ts.robots) p.push_back(tr.at(T * k / samples));
    best = std::min(best, min_separation(p));
  }
  return best;
}

}  // namespace

TEST_SUITE("continuous") {
  TEST_CASE("trajectory interpolation and run merging") {
    Trajectory t;
    t.push(0, {0, 0});
    t.push(1, {1, 0});
    t.push(2, {2, 0});
    t.push(3, {2, 1});
    CHECK(t.pts.size() == 3);
    CHECK(t.at(0.5).x == doctest::Approx(0.5));
    CHECK(t.at(2.5).y == doctest::Approx(0.5));
    CHECK(t.at(10).y == doctest::Approx(1.0));
  }

  TEST_CASE("touching stationary robots are compatible") {
    ContinuousInstance inst;
    inst.add(1, {0, 0}, {0, 0});
    inst.add(2, {2, 0}, {2, 0});
    TrajectorySet ts;
    ts.robots = {line({0, 0}, {0, 0}, 0, 1), line({2, 0}, {2, 0}, 0, 1)};
    auto rep = validate_trajectories(ts, inst);
    CHECK(rep.ok);
    CHECK(rep.min_distance == doctest::Approx(2.0));
  }

  TEST_CASE("head-on exchange collides at the midpoint") {
    ContinuousInstance inst;
    inst.add(1, {0, 0}, {4, 0});
    inst.add(2, {4, 0}, {0, 0});
    TrajectorySet ts;
    ts.robots = {line({0, 0}, {4, 0}, 0, 4), line({4, 0}, {0, 0}, 0, 4)};
    auto rep = validate_trajectories(ts, inst);
    CHECK_FALSE(rep.ok);
    CHECK(rep.min_distance == doctest::Approx(0.0));
    CHECK(rep.at_time == doctest::Approx(2.0));
  }

  TEST_CASE("speed and endpoint violations") {
    ContinuousInstance inst;
    inst.add(1, {0, 0}, {4, 0});
    TrajectorySet fast;
    fast.robots = {line({0, 0}, {4, 0}, 0, 2)};
    auto rep = validate_trajectories(fast, inst);
    CHECK_FALSE(rep.ok);
    CHECK(rep.max_speed == doctest::Approx(2.0));
    TrajectorySet short_of;
    short_of.robots = {line({0, 0}, {3, 0}, 0, 3)};
    CHECK_FALSE(validate_trajectories(short_of, inst).ok);
  }

  TEST_CASE("separated planner") {
    ContinuousInstance still;
    still.add(1, {0.3, 0.7}, {0.3, 0.7});
    still.add(2, {5.1, 0.2}, {5.1, 0.2});
    TrajectorySet a = plan_separated(still);
    CHECK(validate_trajectories(a, still).ok);
    CHECK(a.makespan() <= 4.0 + 1e-9);

    ContinuousInstance swap;
    swap.add(1, {0, 0}, {30, 12});
    swap.add(2, {30, 12}, {0, 0});
    swap.add(3, {10, 5}, {14, 1});
    TrajectorySet b = plan_separated(swap);
    auto rep = validate_trajectories(b, swap);
    CHECK(rep.ok);
    CHECK(sampled_min(b, 4000) >= rep.min_distance - 1e-9);

    ContinuousInstance tight;
    tight.add(1, {0, 0}, {0, 0});
    tight.add(2, {3, 0}, {3, 0});
    CHECK_THROWS_AS(plan_separated(tight), Error);
  }

  TEST_CASE("dense planner") {
    ContinuousInstance one;
    one.add(1, {1, 2}, {7, 10});
    TrajectorySet a = plan_dense(one);
    CHECK(validate_trajectories(a, one).ok);
    CHECK(a.makespan() == doctest::Approx(10.0));

    ContinuousInstance hex = gen_hex(19);
    TrajectorySet h = plan_dense(hex);
    CHECK(validate_trajectories(h, hex).ok);

    ContinuousInstance tight;
    tight.add(1, {0, 0}, {0, 0});
    tight.add(2, {1.5, 0}, {3, 3});
    CHECK_THROWS_AS(plan_dense(tight), Error);
  }

  TEST_CASE("random instances for both planners") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      ContinuousInstance d = gen_continuous(25, 2.0, 0.0, seed);
      TrajectorySet td = plan_dense(d);
      auto rd = validate_trajectories(td, d);
      CHECK(rd.ok);
      CHECK(rd.max_speed <= 1.0 + 1e-9);
      CHECK(sampled_min(td, 2000) >= rd.min_distance - 1e-9);
      ContinuousInstance s = gen_continuous(25, 4.0, 10.0, seed);
      CHECK(validate_trajectories(plan_separated(s), s).ok);
    }
  }
}
