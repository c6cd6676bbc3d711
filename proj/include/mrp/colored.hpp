#pragma once

#include <future>

#include "matching.hpp"
#include "scheduler.hpp"

namespace mrp {

// Row-major colour map (index y*n1+x); 0 marks an empty cell.
struct Image {
  GridDims dims;
  std::vector<int> cells;
  int at(Pos p) const { return cells[dims.index(p)]; }
  int max_color() const { return cells.empty() ? 0 : *std::max_element(cells.begin(), cells.end()); }
};

inline std::map<int, long> color_counts(const Image& im) {
  std::map<int, long> c;
  for (int v : im.cells) ++c[v];
  return c;
}

inline bool check_compatible(const Image& a, const Image& b) {
  if (a.dims.n1 != b.dims.n1 || a.dims.n2 != b.dims.n2 || long(a.cells.size()) != a.dims.cells() ||
      long(b.cells.size()) != b.dims.cells())
    throw Error(ErrorCode::DimsMismatch, "images differ in size");
  return color_counts(a) == color_counts(b);
}

struct ColoredPlan {
  Instance labeled;   // colour k+1 marks filler robots standing for empty cells
  Schedule schedule;
  int bottleneck = 0;  // largest matched distance over all colour classes
};

// Per-colour bottleneck matchings give a labelled instance, which plan_full solves.
inline ColoredPlan plan_colored(const Image& src, const Image& dst, const PlanOptions& opt = {}) {
  if (!check_compatible(src, dst)) throw Error(ErrorCode::Incompatible, "colour class sizes differ");
  const GridDims g = src.dims;
  const int filler = std::max(src.max_color(), dst.max_color()) + 1;
  std::map<int, std::pair<std::vector<Pos>, std::vector<Pos>>> cls;
  for (long c = 0; c < g.cells(); ++c) {
    int a = src.cells[c] == 0 ? filler : src.cells[c];
    int b = dst.cells[c] == 0 ? filler : dst.cells[c];
    cls[a].first.push_back(g.at(c));
    cls[b].second.push_back(g.at(c));
  }
  std::vector<std::pair<int, std::future<BottleneckResult>>> jobs;
  for (auto& [color, sets] : cls)
    jobs.push_back({color, std::async(std::launch::async, [&sets = sets] { return bottleneck_matching(sets.first, sets.second); })});
  ColoredPlan out;
  out.labeled.dims = g;
  int id = 1;
  for (auto& [color, fut] : jobs) {
    BottleneckResult bm = fut.get();
    const auto& [A, B] = cls[color];
    out.bottleneck = std::max(out.bottleneck, bm.value);
    for (std::size_t i = 0; i < A.size(); ++i) out.labeled.add(id++, A[i], B[bm.match[i]], color);
  }
  out.schedule = plan_full(out.labeled, opt);
  return out;
}

// Image drawn by a labelled configuration (filler colour mapped back to empty).
inline Image image_of(const Instance& inst, const std::vector<Pos>& config, int filler) {
  Image im{inst.dims, std::vector<int>(inst.dims.cells(), 0)};
  for (std::size_t r = 0; r < config.size(); ++r) {
    int c = inst.color.empty() ? 1 : inst.color[r];
    im.cells[inst.dims.index(config[r])] = c == filler ? 0 : c;
  }
  return im;
}

}  // namespace mrp
