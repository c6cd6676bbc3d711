#include <doctest.h>

#include "helpers.hpp"

using namespace mrp;

namespace {

Image random_image(GridDims g, int colors, std::mt19937_64& rng) {
  Image im{g, std::vector<int>(g.cells(), 0)};
  for (auto& c : im.cells) c = int(rng() % std::uint64_t(colors + 1));
  return im;
}

Image shuffled(Image im, std::mt19937_64& rng) {
  std::shuffle(im.cells.begin(), im.cells.end(), rng);
  return im;
}

int brute_bottleneck(const std::vector<Pos>& A, const std::vector<Pos>& B) {
  std::vector<int> p(A.size());
  std::iota(p.begin(), p.end(), 0);
  int best = std::numeric_limits<int>::max();
  do {
    int v = 0;
    for (std::size_t i = 0; i < A.size(); ++i) v = std::max(v, manhattan(A[i], B[p[i]]));
    best = std::min(best, v);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

void check_plan(const Image& a, const Image& b) {
  ColoredPlan cp = plan_colored(a, b);
  auto rep = apply_schedule(cp.labeled, cp.schedule);
  REQUIRE(rep.ok());
  const int filler = std::max(a.max_color(), b.max_color()) + 1;
  CHECK(image_of(cp.labeled, rep.final_config, filler).cells == b.cells);
  CHECK(image_of(cp.labeled, cp.labeled.start, filler).cells == a.cells);
  CHECK(cp.bottleneck == max_distance(cp.labeled));
}

}  // namespace

TEST_SUITE("colored") {
  TEST_CASE("compatibility") {
    std::mt19937_64 rng(1);
    Image a = random_image({8, 6}, 3, rng);
    CHECK(check_compatible(a, a));
    Image b = a;
    b.cells[5] = b.cells[5] == 1 ? 2 : 1;
    CHECK_FALSE(check_compatible(a, b));
    CHECK(check_compatible(a, shuffled(a, rng)));
    Image c{{6, 8}, a.cells};
    CHECK_THROWS_AS(check_compatible(a, c), Error);
    CHECK_THROWS_AS(plan_colored(a, b), Error);
  }

  TEST_CASE("bottleneck matching examples") {
    std::vector<Pos> A{{0, 0}, {3, 4}, {7, 1}};
    CHECK(bottleneck_matching(A, A).value == 0);
    auto r = bottleneck_matching({{0, 0}, {10, 0}}, {{1, 0}, {9, 0}});
    CHECK(r.value == 1);
    CHECK(r.match == std::vector<int>{0, 1});
    CHECK_THROWS_AS(bottleneck_matching({{0, 0}}, {}), Error);
  }

  TEST_CASE("bottleneck matching equals exhaustive search") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 200; ++it) {
      const int n = 1 + int(rng() % 7);
      std::vector<Pos> A, B;
      for (int i = 0; i < n; ++i) A.push_back({int(rng() % 15), int(rng() % 15)}), B.push_back({int(rng() % 15), int(rng() % 15)});
      auto r = bottleneck_matching(A, B);
      CHECK(r.value == brute_bottleneck(A, B));
      int v = 0;
      for (int i = 0; i < n; ++i) v = std::max(v, manhattan(A[i], B[r.match[i]]));
      CHECK(v == r.value);
    }
  }

  TEST_CASE("identical images need no steps") {
    std::mt19937_64 rng(2);
    Image a = random_image({10, 10}, 3, rng);
    ColoredPlan cp = plan_colored(a, a);
    CHECK(cp.schedule.makespan() == 0);
    CHECK(cp.bottleneck == 0);
  }

  TEST_CASE("one coloured robot among empty cells") {
    Image a{{12, 12}, std::vector<int>(144, 0)}, b = a;
    a.cells[a.dims.index({2, 3})] = 1;
    b.cells[b.dims.index({7, 5})] = 1;
    check_plan(a, b);
  }

  TEST_CASE("random three-colour 20x20 pairs") {
    std::mt19937_64 rng(9);
    for (int it = 0; it < 3; ++it) {
      Image a = random_image({20, 20}, 3, rng);
      check_plan(a, shuffled(a, rng));
    }
  }

  TEST_CASE("local recolourings keep a small bottleneck") {
    std::mt19937_64 rng(4);
    Image a = random_image({30, 24}, 2, rng), b = a;
    for (int y = 0; y + 1 < 24; y += 2)
      for (int x = 0; x + 1 < 30; x += 2) std::swap(b.cells[b.dims.index({x, y})], b.cells[b.dims.index({x + 1, y + 1})]);
    ColoredPlan cp = plan_colored(a, b);
    CHECK(cp.bottleneck <= 2);
    CHECK(apply_schedule(cp.labeled, cp.schedule).ok());
  }
}
