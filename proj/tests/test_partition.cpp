#include <doctest.h>

#include "helpers.hpp"

using namespace mrp;

namespace {

FlowGraph flow_of(const Tiling& t, const std::vector<Cycle>& cycles) {
  FlowGraph f;
  f.ntiles = t.count();
  for (const auto& c : cycles)
    for (auto e : cycle_edges(c)) f.add(e.first, e.second, c.count);
  return f;
}

// Net flow with antiparallel pairs cancelled.
std::map<Edge, long long> net(const std::map<Edge, long long>& w) {
  std::map<Edge, long long> raw;
  for (auto& [e, v] : w) raw[e] += v, raw[{e.second, e.first}] -= v;
  std::map<Edge, long long> out;
  for (auto& [e, v] : raw)
    if (v > 0) out[e] = v;
  return out;
}

std::map<Edge, long long> edge_sum(const std::vector<Cycle>& cs) {
  std::map<Edge, long long> m;
  for (const auto& c : cs)
    for (auto e : cycle_edges(c)) m[e] += c.count;
  return m;
}

}  // namespace

TEST_SUITE("partition") {
  const Tiling t5 = build_tiling({60, 60}, 1);  // 5 x 5 tiles

  TEST_CASE("empty flow") {
    FlowGraph f;
    f.ntiles = t5.count();
    CHECK(decompose_cycles(f).empty());
    CHECK(partition_subflows(f, t5, 1).empty());
  }

  TEST_CASE("single 4-cycle of weight 3") {
    FlowGraph f = flow_of(t5, {{{0, 1, 6, 5}, 3}});
    auto cs = decompose_cycles(f);
    CHECK(edge_sum(cs) == f.w);
    long long copies = 0;
    for (auto& c : cs) {
      copies += c.count;
      CHECK(c.nodes.size() == 4);
    }
    CHECK(copies == 3);
  }

  TEST_CASE("non-circulations are rejected") {
    FlowGraph f;
    f.ntiles = t5.count();
    f.add(0, 1, 1);
    CHECK_THROWS_AS(decompose_cycles(f), Error);
  }

  TEST_CASE("simple cycle splits into itself") {
    Cycle c{{0, 1, 6, 5}, 1};
    auto parts = split_self_intersections(c);
    REQUIRE(parts.size() == 1);
    CHECK(edge_sum(parts) == edge_sum({c}));
  }

  TEST_CASE("figure eight splits at the shared vertex") {
    Cycle c{{4, 5, 2, 1, 4, 7, 6, 3}, 1};
    auto parts = split_self_intersections(c);
    REQUIRE(parts.size() == 2);
    for (auto& p : parts) CHECK(is_simple(p));
    CHECK(edge_sum(parts) == edge_sum({c}));
  }

  TEST_CASE("random closed walks split into simple cycles with the same edges") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 200; ++it) {
      std::vector<int> walk{12};
      for (int k = 0; k < 30; ++k) {
        std::vector<int> nb;
        for (int v = 0; v < t5.count(); ++v)
          if (t5.adjacent(walk.back(), v)) nb.push_back(v);
        walk.push_back(nb[rng() % nb.size()]);
      }
      // walk back along a shortest route to close the loop
      while (walk.back() != 12) {
        int cur = walk.back(), best = -1;
        for (int v = 0; v < t5.count(); ++v)
          if (t5.adjacent(cur, v) &&
              (best < 0 || std::max(std::abs(t5.col(v) - 2), std::abs(t5.row(v) - 2)) <
                               std::max(std::abs(t5.col(best) - 2), std::abs(t5.row(best) - 2))))
            best = v;
        walk.push_back(best);
      }
      walk.pop_back();
      Cycle c{walk, 1};
      auto parts = split_self_intersections(c);
      for (auto& p : parts) CHECK(is_simple(p));
      CHECK(edge_sum(parts) == edge_sum({c}));
    }
  }

  TEST_CASE("disjoint cycles peel into the outer set") {
    std::vector<Cycle> cs{{{0, 1, 6, 5}, 1}, {{18, 19, 24, 23}, 1}};
    auto pr = peel(cs, Orientation::CCW, t5);
    CHECK(pr.holes.empty());
    CHECK(edge_sum(pr.outer) == edge_sum(cs));
  }

  TEST_CASE("annulus peels into an outer ring and a hole") {
    // unit squares around the centre square of a 4 x 4 tile lattice
    const Tiling t4 = build_tiling({48, 48}, 1);
    std::vector<Cycle> cs;
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) {
        if (i == 1 && j == 1) continue;
        int a = t4.id(i, j);
        cs.push_back({{a, a + 1, a + 5, a + 4}, 1});
      }
    for (auto& c : cs) REQUIRE(orientation(c, t4) == Orientation::CCW);
    auto pr = peel(cs, Orientation::CCW, t4);
    REQUIRE(pr.outer.size() == 1);
    REQUIRE(pr.holes.size() == 1);
    CHECK(pr.outer[0].nodes.size() == 12);
    CHECK(pr.holes[0].nodes.size() == 4);
    CHECK(orientation(pr.holes[0], t4) == Orientation::CW);
    std::vector<Cycle> both = pr.outer;
    both.insert(both.end(), pr.holes.begin(), pr.holes.end());
    CHECK(net(edge_sum(both)) == net(edge_sum(cs)));
  }

  TEST_CASE("a single weight-1 cycle is its own partition") {
    FlowGraph f = flow_of(t5, {{{6, 7, 8, 13, 18, 17, 16, 11}, 1}});
    auto p = partition_subflows(f, t5, 1);
    CHECK(p.size() == 1);
    CHECK(partition_sums_to(p, f));
  }

  TEST_CASE("many copies of one ring are spread over subflows") {
    for (int d : {2, 3}) {
      FlowGraph f = flow_of(t5, {{{6, 7, 12, 11}, 600LL * d}});
      auto p = partition_subflows(f, t5, d);
      CHECK(partition_sums_to(p, f));
      CHECK(p.size() <= std::size_t(4 * 576 * d));
      for (auto& sf : p) CHECK(sf.max_weight() <= d);
    }
  }

  TEST_CASE("nested rings of both orientations") {
    const Tiling t7 = build_tiling({84, 84}, 1);
    std::vector<Cycle> cs;
    for (int k = 1; k <= 3; ++k) {
      std::vector<int> ring;
      int lo = 3 - k, hi = 3 + k;
      for (int i = lo; i < hi; ++i) ring.push_back(t7.id(i, lo));
      for (int j = lo; j < hi; ++j) ring.push_back(t7.id(hi, j));
      for (int i = hi; i > lo; --i) ring.push_back(t7.id(i, hi));
      for (int j = hi; j > lo; --j) ring.push_back(t7.id(lo, j));
      if (k == 2) std::reverse(ring.begin(), ring.end());
      cs.push_back({ring, 2});
    }
    FlowGraph f = flow_of(t7, cs);
    auto p = partition_subflows(f, t7, 1);
    CHECK(partition_sums_to(p, f));
    for (auto& sf : p) CHECK(sf.max_weight() <= 1);
  }

  TEST_CASE("preprocessed flows of random instances") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Instance inst = test::corner_rings({108, 90}, 3, seed);
      const int d = std::max(1, max_distance(inst));
      Tiling t = build_tiling(inst.dims, d);
      auto a = remove_crossings(inst, t);
      Instance mid = inst;
      mid.start = a.config;
      auto b = remove_bidirectional(mid, t);
      auto p = partition_subflows(b.flow, t, d);
      CHECK(partition_sums_to(p, b.flow));
      for (auto& sf : p) CHECK(sf.max_weight() <= d);
    }
  }
}
