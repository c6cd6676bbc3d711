#include <doctest.h>

#include "helpers.hpp"

using namespace mrp;

namespace {

// Flow preprocessing followed by partitioning; returns the preprocessed state.
struct Prepared {
  Instance state;
  Tiling tiling;
  SubflowPartition part;
  int d;
};

Prepared prepare(const Instance& inst) {
  const int d = std::max(1, max_distance(inst));
  Tiling t = build_tiling(inst.dims, d);
  Instance st = inst;
  st.start = remove_crossings(st, t).config;
  auto b = remove_bidirectional(st, t);
  st.start = b.config;
  return {st, t, partition_subflows(b.flow, t, d), d};
}

bool paths_disjoint(const TunnelPlan& p) {
  std::set<Pos> seen;
  for (const auto& tp : p.pairs)
    for (Pos c : tp.path)
      if (!seen.insert(c).second) return false;
  return true;
}

}  // namespace

TEST_SUITE("realization") {
  TEST_CASE("orthogonal-only subflow has no diagonals to remove") {
    Instance inst = test::four_tile_instance();
    auto pr = prepare(inst);
    for (const auto& sf : pr.part) {
      auto [s, out] = eliminate_diagonals(pr.state, sf, pr.tiling);
      CHECK(s.makespan() == 0);
      CHECK(out.w == sf.w);
    }
  }

  TEST_CASE("a diagonal of weight 2 becomes two orthogonal edges") {
    // two 3-cycles through the centre corner of a 96x96 grid cut at 48
    GridDims g{96, 96};
    auto m = test::identity_map(g);
    auto cycle3 = [&](Pos a, Pos b, Pos c) {
      m[g.index(a)] = b;
      m[g.index(b)] = c;
      m[g.index(c)] = a;
    };
    cycle3({47, 47}, {48, 48}, {48, 47});
    cycle3({46, 47}, {48, 49}, {49, 47});
    Instance inst = test::from_map(g, m);
    Tiling t = build_tiling(g, 4);
    REQUIRE(t.count() == 4);
    FlowGraph f = build_flow(inst, t);
    REQUIRE(f.weight(0, 3) == 2);
    Subflow sf;
    sf.w = f.w;
    auto [s, out] = eliminate_diagonals(inst, sf, t);
    for (auto& [e, v] : out.w) CHECK_FALSE(t.diagonal(e.first, e.second));
    CHECK(out.w.at({0, 1}) == 2);
    CHECK(out.w.at({1, 3}) == 2);
    auto rep = apply_schedule(inst, s);
    CHECK(rep.kind != ScheduleReport::StepViolation);
    CHECK(build_flow(rep.final_config, inst.target, t).w == out.w);
  }

  TEST_CASE("boundary matching without terminals") {
    CHECK(boundary_matching({0, 0, 36, 36}, {}, 1).pairs.empty());
  }

  TEST_CASE("unbalanced terminals are rejected") {
    std::vector<Terminal> terms{{Side::Bottom, 5, true}};
    CHECK_THROWS_AS(boundary_matching({0, 0, 36, 36}, terms, 1), Error);
  }

  TEST_CASE("random terminal sets give disjoint tunnels") {
    const Rect r{0, 0, 36, 36};
    const int d = 3;
    std::mt19937_64 rng(3);
    int feasible = 0;
    for (int it = 0; it < 300; ++it) {
      const int k = 1 + int(rng() % 6);
      std::set<std::pair<int, int>> used;
      std::vector<Terminal> terms;
      while (int(terms.size()) < 2 * k) {
        Side s = Side(rng() % 4);
        int c = d + int(rng() % (36 - 2 * d));
        if (!used.insert({int(s), c}).second) continue;
        terms.push_back({s, c, int(terms.size()) < k});
      }
      auto plan = boundary_matching(r, terms, d);
      if (!plan.feasible) continue;
      ++feasible;
      CHECK(plan.pairs.size() == std::size_t(k));
      CHECK(paths_disjoint(plan));
      for (const auto& tp : plan.pairs) {
        for (std::size_t i = 0; i + 1 < tp.path.size(); ++i) CHECK(manhattan(tp.path[i], tp.path[i + 1]) == 1);
        for (Pos c : tp.path) CHECK(r.contains(c));
      }
    }
    CHECK(feasible > 200);
  }

  TEST_CASE("empty subflow and empty partition") {
    Instance inst = test::four_tile_instance();
    Tiling t = build_tiling(inst.dims, 1);
    CHECK(realize_subflow(inst, Subflow{}, t).makespan() == 0);
    CHECK(realize_all(inst, {}, t).makespan() == 0);
  }

  TEST_CASE("single corner rotation crosses one robot per edge") {
    GridDims g{24, 24};
    auto m = test::identity_map(g);
    test::rotate_ring(m, g, 11, 11, 2, 2);
    Instance inst = test::from_map(g, m);
    auto pr = prepare(inst);
    REQUIRE(pr.part.size() == 1);
    Schedule s = realize_subflow(pr.state, pr.part[0], pr.tiling);
    auto rep = apply_schedule(pr.state, s);
    REQUIRE(rep.kind != ScheduleReport::StepViolation);
    CHECK(test::off_target_tiles(pr.tiling, rep.final_config, inst.target) == 0);
  }

  TEST_CASE("four-tile instance reaches its target tiles") {
    auto pr = prepare(test::four_tile_instance());
    Schedule s = realize_all(pr.state, pr.part, pr.tiling);
    auto rep = apply_schedule(pr.state, s);
    REQUIRE(rep.kind != ScheduleReport::StepViolation);
    CHECK(test::off_target_tiles(pr.tiling, rep.final_config, pr.state.target) == 0);
  }

  TEST_CASE("random corner-ring instances at d = 3 reach their target tiles") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      Instance inst = test::corner_rings({108, 90}, 3, seed);
      REQUIRE(max_distance(inst) <= 3);
      auto pr = prepare(inst);
      Schedule s = realize_all(pr.state, pr.part, pr.tiling);
      auto rep = apply_schedule(pr.state, s);
      REQUIRE(rep.kind != ScheduleReport::StepViolation);
      CHECK(test::off_target_tiles(pr.tiling, rep.final_config, inst.target) == 0);
    }
  }

  TEST_CASE("sequence of one equals a single subflow") {
    auto pr = prepare(test::corner_rings({72, 72}, 2, 5));
    REQUIRE_FALSE(pr.part.empty());
    Schedule a = realize_subflow(pr.state, pr.part[0], pr.tiling);
    Schedule b = realize_sequence(pr.state, {pr.part[0]}, pr.tiling, pr.tiling.d);
    CHECK(a.makespan() == b.makespan());
    CHECK(apply_schedule(pr.state, a).final_config == apply_schedule(pr.state, b).final_config);
  }
}
