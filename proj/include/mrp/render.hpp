#pragma once

#include <cstdio>
#include <sstream>

#include "grid.hpp"

namespace mrp {

namespace detail {

inline std::string hsl(double h, double s, double l) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "hsl(%.0f,%.0f%%,%.0f%%)", h, s, l);
  return buf;
}

// Fill colour: colour classes get a fixed palette, labels a hashed hue.
inline std::string robot_fill(const Instance& inst, std::size_t r) {
  static const char* palette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
  if (!inst.color.empty()) return palette[std::size_t(std::max(0, inst.color[r])) % 10];
  std::uint32_t h = std::uint32_t(inst.ids[r]) * 2654435761u;
  return hsl(double(h % 360), 65, 55);
}

}  // namespace detail

struct RenderOptions {
  int cell = 20;  // pixels per grid cell
};

// One frame: grid, robots at `config`, arrows for the moves of `next` (if any).
inline std::string render_frame(const Instance& inst, const std::vector<Pos>& config, const Step* next,
                                const RenderOptions& opt = {}) {
  const int c = opt.cell, W = inst.dims.n1 * c, H = inst.dims.n2 * c;
  auto cx = [&](Pos p) { return p.x * c + c / 2.0; };
  auto cy = [&](Pos p) { return H - (p.y * c + c / 2.0); };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H
    << "\">\n<defs><marker id=\"a\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" refY=\"3\" orient=\"auto\">"
       "<path d=\"M0,0 L6,3 L0,6 z\" fill=\"#222\"/></marker></defs>\n"
    << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"#fff\"/>\n<g stroke=\"#ddd\" stroke-width=\"1\">\n";
  for (int x = 0; x <= inst.dims.n1; ++x) o << "<line x1=\"" << x * c << "\" y1=\"0\" x2=\"" << x * c << "\" y2=\"" << H << "\"/>\n";
  for (int y = 0; y <= inst.dims.n2; ++y) o << "<line x1=\"0\" y1=\"" << y * c << "\" x2=\"" << W << "\" y2=\"" << y * c << "\"/>\n";
  o << "</g>\n";
  for (std::size_t r = 0; r < config.size(); ++r)
    o << "<circle cx=\"" << cx(config[r]) << "\" cy=\"" << cy(config[r]) << "\" r=\"" << c * 0.4 << "\" fill=\""
      << detail::robot_fill(inst, r) << "\"><title>" << inst.ids[r] << "</title></circle>\n";
  if (next)
    for (std::size_t r = 0; r < config.size(); ++r) {
      Move m = next->get(r);
      if (m == Move::Wait) continue;
      Pos a = config[r], b = apply_move(a, m);
      o << "<line x1=\"" << cx(a) << "\" y1=\"" << cy(a) << "\" x2=\"" << (cx(a) + cx(b)) / 2 << "\" y2=\"" << (cy(a) + cy(b)) / 2
        << "\" stroke=\"#222\" stroke-width=\"1.5\" marker-end=\"url(#a)\"/>\n";
    }
  o << "</svg>\n";
  return o.str();
}

// k+1 frames for a k-step schedule; moves are applied unchecked.
inline std::vector<std::string> render_frames(const Instance& inst, const Schedule& s, const RenderOptions& opt = {}) {
  std::vector<std::string> frames;
  std::vector<Pos> cur = inst.start;
  for (std::size_t k = 0; k <= s.steps.size(); ++k) {
    frames.push_back(render_frame(inst, cur, k < s.steps.size() ? &s.steps[k] : nullptr, opt));
    if (k < s.steps.size())
      for (std::size_t r = 0; r < cur.size(); ++r) cur[r] = apply_move(cur[r], s.steps[k].get(r));
  }
  return frames;
}

// Single SVG animating every robot along its cells, half a second per step.
inline std::string render_animated(const Instance& inst, const Schedule& s, const RenderOptions& opt = {}) {
  const int c = opt.cell, W = inst.dims.n1 * c, H = inst.dims.n2 * c;
  const double dur = std::max<double>(1, double(s.steps.size())) * 0.5;
  std::vector<std::vector<Pos>> path(inst.size());
  std::vector<Pos> cur = inst.start;
  for (std::size_t r = 0; r < cur.size(); ++r) path[r].push_back(cur[r]);
  for (const Step& st : s.steps)
    for (std::size_t r = 0; r < cur.size(); ++r) path[r].push_back(cur[r] = apply_move(cur[r], st.get(r)));
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n<rect width=\"" << W
    << "\" height=\"" << H << "\" fill=\"#fff\" stroke=\"#ddd\"/>\n";
  for (std::size_t r = 0; r < inst.size(); ++r) {
    std::ostringstream xs, ys;
    for (std::size_t k = 0; k < path[r].size(); ++k) {
      xs << (k ? ";" : "") << path[r][k].x * c + c / 2.0;
      ys << (k ? ";" : "") << H - (path[r][k].y * c + c / 2.0);
    }
    o << "<circle r=\"" << c * 0.4 << "\" fill=\"" << detail::robot_fill(inst, r) << "\" cx=\"" << path[r][0].x * c + c / 2.0
      << "\" cy=\"" << H - (path[r][0].y * c + c / 2.0) << "\">"
      << "<animate attributeName=\"cx\" dur=\"" << dur << "s\" fill=\"freeze\" values=\"" << xs.str() << "\"/>"
      << "<animate attributeName=\"cy\" dur=\"" << dur << "s\" fill=\"freeze\" values=\"" << ys.str() << "\"/></circle>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace mrp
