#pragma once

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "colored.hpp"
#include "continuous.hpp"
#include "oracle.hpp"

namespace mrp::io {

using json = nlohmann::json;

inline constexpr const char* kInstanceFormat = "mrp-instance/1";
inline constexpr const char* kScheduleFormat = "mrp-schedule/1";
inline constexpr const char* kImageFormat = "mrp-image/1";
inline constexpr const char* kImagePairFormat = "mrp-image-pair/1";
inline constexpr const char* kContinuousFormat = "mrp-continuous/1";
inline constexpr const char* kTrajectoryFormat = "mrp-trajectories/1";

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

inline json load(const std::string& path) { return parse(read_file(path)); }

// Format tag of a document, or "" when absent.
inline std::string format_of(const json& j) { return j.is_object() && j.contains("format") ? j["format"].get<std::string>() : ""; }

namespace detail {

inline void expect_format(const json& j, const char* want) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, std::string("expected a JSON object for ") + want);
  std::string f = format_of(j);
  if (!f.empty() && f != want) throw Error(ErrorCode::Parse, "format is " + f + ", expected " + want);
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

inline Pos pos_of(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::Parse, "position must be [x, y]");
  return {j[0].get<int>(), j[1].get<int>()};
}

inline Vec2 vec_of(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::Parse, "point must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline GridDims dims_of(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::Parse, "dims must be [n1, n2]");
  GridDims g{j[0].get<int>(), j[1].get<int>()};
  if (g.n1 < 1 || g.n2 < 1) throw Error(ErrorCode::Parse, "dims must be positive");
  return g;
}

}  // namespace detail

// ----- labelled instances and schedules

inline json to_json(const Instance& inst) {
  json robots = json::array();
  for (std::size_t r = 0; r < inst.size(); ++r) {
    json o = {{"id", inst.ids[r]}, {"start", {inst.start[r].x, inst.start[r].y}}, {"target", {inst.target[r].x, inst.target[r].y}}};
    if (!inst.color.empty()) o["color"] = inst.color[r];
    robots.push_back(o);
  }
  return {{"format", kInstanceFormat}, {"dims", {inst.dims.n1, inst.dims.n2}}, {"robots", robots}};
}

inline Instance instance_from_json(const json& j) {
  detail::expect_format(j, kInstanceFormat);
  return detail::guarded([&] {
    Instance inst;
    inst.dims = detail::dims_of(j.at("dims"));
    std::set<int> ids;
    for (const auto& r : j.at("robots")) {
      int id = r.at("id").get<int>();
      if (!ids.insert(id).second) throw Error(ErrorCode::Parse, "duplicate robot id " + std::to_string(id));
      inst.add(id, detail::pos_of(r.at("start")), detail::pos_of(r.at("target")), r.contains("color") ? r["color"].get<int>() : -1);
    }
    return inst;
  });
}

inline json to_json(const Schedule& s, const Instance& inst) {
  json steps = json::array();
  for (const Step& st : s.steps) {
    json o = json::object();
    for (std::size_t r = 0; r < inst.size(); ++r)
      if (st.get(r) != Move::Wait) o[std::to_string(inst.ids[r])] = std::string(1, move_char(st.get(r)));
    steps.push_back(o);
  }
  return {{"format", kScheduleFormat}, {"steps", steps}};
}

inline Schedule schedule_from_json(const json& j, const Instance& inst) {
  detail::expect_format(j, kScheduleFormat);
  return detail::guarded([&] {
    std::map<int, std::size_t> index;
    for (std::size_t r = 0; r < inst.size(); ++r) index[inst.ids[r]] = r;
    Schedule s;
    for (const auto& st : j.at("steps")) {
      Step step;
      step.moves.assign(inst.size(), Move::Wait);
      for (const auto& [key, val] : st.items()) {
        int id = 0;
        try {
          id = std::stoi(key);
        } catch (const std::exception&) {
          throw Error(ErrorCode::Parse, "robot key is not an integer: " + key);
        }
        auto it = index.find(id);
        if (it == index.end()) throw Error(ErrorCode::Parse, "schedule names unknown robot " + key);
        std::string m = val.get<std::string>();
        auto mv = m.size() == 1 ? move_from_char(m[0]) : std::nullopt;
        if (!mv) throw Error(ErrorCode::Parse, "bad move '" + m + "' for robot " + key);
        step.moves[it->second] = *mv;
      }
      s.steps.push_back(std::move(step));
    }
    return s;
  });
}

// ----- images; cells[y][x] with row y = 0 listed first

inline json to_json(const Image& im) {
  json rows = json::array();
  for (int y = 0; y < im.dims.n2; ++y) {
    json row = json::array();
    for (int x = 0; x < im.dims.n1; ++x) row.push_back(im.at({x, y}));
    rows.push_back(row);
  }
  return {{"format", kImageFormat}, {"dims", {im.dims.n1, im.dims.n2}}, {"cells", rows}};
}

inline Image image_from_json(const json& j) {
  detail::expect_format(j, kImageFormat);
  return detail::guarded([&] {
    Image im;
    im.dims = detail::dims_of(j.at("dims"));
    const auto& rows = j.at("cells");
    if (!rows.is_array() || int(rows.size()) != im.dims.n2) throw Error(ErrorCode::Parse, "cells must have n2 rows");
    im.cells.assign(im.dims.cells(), 0);
    for (int y = 0; y < im.dims.n2; ++y) {
      if (!rows[y].is_array() || int(rows[y].size()) != im.dims.n1) throw Error(ErrorCode::Parse, "every row needs n1 cells");
      for (int x = 0; x < im.dims.n1; ++x) {
        int c = rows[y][x].get<int>();
        if (c < 0) throw Error(ErrorCode::Parse, "colours must be >= 0");
        im.cells[im.dims.index({x, y})] = c;
      }
    }
    return im;
  });
}

inline std::pair<Image, Image> image_pair_from_json(const json& j) {
  detail::expect_format(j, kImagePairFormat);
  return detail::guarded([&] { return std::make_pair(image_from_json(j.at("source")), image_from_json(j.at("target"))); });
}

inline json image_pair_to_json(const Image& a, const Image& b) {
  return {{"format", kImagePairFormat}, {"source", to_json(a)}, {"target", to_json(b)}};
}

// ----- continuous instances and trajectories

inline json to_json(const ContinuousInstance& inst) {
  json robots = json::array();
  for (std::size_t r = 0; r < inst.size(); ++r)
    robots.push_back({{"id", inst.ids[r]}, {"start", {inst.start[r].x, inst.start[r].y}}, {"target", {inst.target[r].x, inst.target[r].y}}});
  return {{"format", kContinuousFormat}, {"robots", robots}};
}

inline ContinuousInstance continuous_from_json(const json& j) {
  detail::expect_format(j, kContinuousFormat);
  return detail::guarded([&] {
    ContinuousInstance inst;
    for (const auto& r : j.at("robots")) inst.add(r.at("id").get<int>(), detail::vec_of(r.at("start")), detail::vec_of(r.at("target")));
    return inst;
  });
}

inline json to_json(const TrajectorySet& ts, const ContinuousInstance& inst) {
  json robots = json::array();
  for (std::size_t r = 0; r < ts.robots.size(); ++r) {
    json pts = json::array();
    for (const auto& b : ts.robots[r].pts) pts.push_back({b.t, b.p.x, b.p.y});
    robots.push_back({{"id", inst.ids[r]}, {"points", pts}});
  }
  return {{"format", kTrajectoryFormat}, {"robots", robots}};
}

inline TrajectorySet trajectories_from_json(const json& j, const ContinuousInstance& inst) {
  detail::expect_format(j, kTrajectoryFormat);
  return detail::guarded([&] {
    std::map<int, std::size_t> index;
    for (std::size_t r = 0; r < inst.size(); ++r) index[inst.ids[r]] = r;
    TrajectorySet ts;
    ts.robots.resize(inst.size());
    for (const auto& r : j.at("robots")) {
      int id = r.at("id").get<int>();
      auto it = index.find(id);
      if (it == index.end()) throw Error(ErrorCode::Parse, "trajectory for unknown robot " + std::to_string(id));
      for (const auto& p : r.at("points")) {
        if (!p.is_array() || p.size() != 3) throw Error(ErrorCode::Parse, "breakpoint must be [t, x, y]");
        ts.robots[it->second].pts.push_back({p[0].get<double>(), {p[1].get<double>(), p[2].get<double>()}});
      }
    }
    return ts;
  });
}

// ----- DIMACS CNF ("p cnf <vars> <clauses>", clauses end with 0, 'c' lines are comments)

inline Cnf parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Cnf f;
  bool header = false;
  std::vector<int> cur;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c" || tok[0] == 'c' || tok == "%") continue;
    if (tok == "p") {
      std::string kind;
      int m = 0;
      if (!(ls >> kind >> f.n >> m) || kind != "cnf") throw Error(ErrorCode::Parse, "bad DIMACS header");
      header = true;
      continue;
    }
    if (!header) throw Error(ErrorCode::Parse, "clause before DIMACS header");
    std::istringstream all(line);
    int lit;
    while (all >> lit) {
      if (lit == 0) {
        f.clauses.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(lit);
      }
    }
    if (!all.eof()) throw Error(ErrorCode::Parse, "non-integer token in clause line");
  }
  if (!header) throw Error(ErrorCode::Parse, "missing DIMACS header");
  if (!cur.empty()) f.clauses.push_back(cur);
  return f;
}

inline std::string to_dimacs(const Cnf& f) {
  std::ostringstream out;
  out << "p cnf " << f.n << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses) {
    for (int l : c) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

}  // namespace mrp::io
