#include <doctest.h>

#include "helpers.hpp"

using namespace mrp;

TEST_SUITE("io") {
  TEST_CASE("instance and schedule round trip") {
    Instance inst = gen_random({10, 8}, 80, 2, 3);
    Schedule s = plan_auto(inst);
    Instance back = io::instance_from_json(io::parse(io::to_json(inst).dump()));
    CHECK(back.start == inst.start);
    CHECK(back.target == inst.target);
    CHECK(back.ids == inst.ids);
    Schedule sb = io::schedule_from_json(io::parse(io::to_json(s, inst).dump()), back);
    REQUIRE(sb.makespan() == s.makespan());
    for (std::size_t k = 0; k < s.makespan(); ++k)
      for (std::size_t r = 0; r < inst.size(); ++r) CHECK(sb.steps[k].get(r) == s.steps[k].get(r));
  }

  TEST_CASE("colours survive a round trip") {
    Instance inst;
    inst.dims = {3, 3};
    inst.add(7, {0, 0}, {1, 0}, 2);
    inst.add(9, {2, 2}, {2, 1}, 1);
    Instance back = io::instance_from_json(io::to_json(inst));
    CHECK(back.color == inst.color);
  }

  TEST_CASE("malformed documents are parse errors") {
    auto code = [](auto&& f) {
      try {
        f();
      } catch (const Error& e) {
        return e.code();
      }
      return ErrorCode::Internal;
    };
    CHECK(code([] { io::parse("{not json"); }) == ErrorCode::Parse);
    CHECK(code([] { io::instance_from_json(io::parse(R"({"format":"mrp-schedule/1","steps":[]})")); }) == ErrorCode::Parse);
    CHECK(code([] { io::instance_from_json(io::parse(R"({"dims":[2,2],"robots":[{"id":1,"start":[0,0]}]})")); }) ==
          ErrorCode::Parse);
    CHECK(code([] {
            io::instance_from_json(io::parse(
                R"({"dims":[2,2],"robots":[{"id":1,"start":[0,0],"target":[0,0]},{"id":1,"start":[1,0],"target":[1,0]}]})"));
          }) == ErrorCode::Parse);
    Instance inst;
    inst.dims = {2, 2};
    inst.add(1, {0, 0}, {1, 0});
    CHECK(code([&] { io::schedule_from_json(io::parse(R"({"steps":[{"2":"E"}]})"), inst); }) == ErrorCode::Parse);
    CHECK(code([&] { io::schedule_from_json(io::parse(R"({"steps":[{"1":"X"}]})"), inst); }) == ErrorCode::Parse);
    CHECK(code([] { io::read_file("/nonexistent/file.json"); }) == ErrorCode::Io);
  }

  TEST_CASE("images and image pairs") {
    Image a{{3, 2}, {1, 0, 2, 0, 3, 1}};
    Image back = io::image_from_json(io::to_json(a));
    CHECK(back.cells == a.cells);
    CHECK(io::to_json(a)["cells"][0] == io::json::array({1, 0, 2}));
    auto [x, y] = io::image_pair_from_json(io::image_pair_to_json(a, back));
    CHECK(x.cells == y.cells);
    CHECK_THROWS_AS(io::image_from_json(io::parse(R"({"dims":[2,2],"cells":[[1,2]]})")), Error);
  }

  TEST_CASE("continuous documents") {
    ContinuousInstance c = gen_continuous(12, 4.0, 0.0, 2);
    ContinuousInstance cb = io::continuous_from_json(io::to_json(c));
    REQUIRE(cb.size() == c.size());
    for (std::size_t r = 0; r < c.size(); ++r) CHECK(dist(cb.start[r], c.start[r]) == 0.0);
    TrajectorySet ts = plan_separated(c);
    TrajectorySet tb = io::trajectories_from_json(io::parse(io::to_json(ts, c).dump()), cb);
    CHECK(validate_trajectories(tb, cb).ok);
    CHECK(tb.makespan() == doctest::Approx(ts.makespan()));
  }

  TEST_CASE("DIMACS") {
    Cnf f = io::parse_dimacs("c comment\np cnf 4 2\n1 2 3 0\n-2 -3 -4 0\n");
    CHECK(f.n == 4);
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.clauses[1] == std::vector<int>{-2, -3, -4});
    Cnf g = io::parse_dimacs(io::to_dimacs(f));
    CHECK(g.clauses == f.clauses);
    CHECK_THROWS_AS(io::parse_dimacs("1 2 3 0\n"), Error);
    CHECK_THROWS_AS(io::parse_dimacs("p cnf 3 1\n1 x 3 0\n"), Error);
  }

  TEST_CASE("rendering frame counts") {
    Instance inst = test::adjacent_transposition();
    CHECK(render_frames(inst, {}).size() == 1);
    auto r = bfs_search(inst, 8, true);
    REQUIRE(r.schedule);
    auto frames = render_frames(inst, *r.schedule);
    CHECK(frames.size() == r.schedule->makespan() + 1);
    CHECK(frames[0].find("<svg") == 0);
    CHECK(render_animated(inst, *r.schedule).find("<animate") != std::string::npos);
  }

  TEST_CASE("colour classes set the fill") {
    Instance inst;
    inst.dims = {2, 1};
    inst.add(1, {0, 0}, {0, 0}, 1);
    inst.add(2, {1, 0}, {1, 0}, 1);
    std::string svg = render_frame(inst, inst.start, nullptr);
    auto fills = [](const std::string& doc) {
      std::vector<std::string> out;
      for (auto p = doc.find("<circle"); p != std::string::npos; p = doc.find("<circle", p + 1)) {
        auto f = doc.find("fill=\"", p) + 6;
        out.push_back(doc.substr(f, doc.find('"', f) - f));
      }
      return out;
    };
    auto same = fills(render_frame(inst, inst.start, nullptr));
    REQUIRE(same.size() == 2);
    CHECK(same[0] == same[1]);
    inst.color[1] = 2;
    auto diff = fills(render_frame(inst, inst.start, nullptr));
    CHECK(diff[0] != diff[1]);
  }
}
