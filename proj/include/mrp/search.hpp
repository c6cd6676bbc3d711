#pragma once

#include <unordered_map>

#include "grid.hpp"

namespace mrp {

struct SearchResult {
  enum Status { Exact, Unknown, Unreachable } status = Unknown;
  int value = -1;
  std::size_t states = 0;
  std::optional<Schedule> schedule;  // a shortest schedule when requested and found
};

inline const char* search_status_name(SearchResult::Status s) {
  switch (s) {
    case SearchResult::Exact: return "Exact";
    case SearchResult::Unreachable: return "Unreachable";
    default: return "Unknown";
  }
}

// Breadth-first search over configurations up to depth `cap`.
// Work is bounded by cells!/(cells-N)! * 5^N successor checks.
inline SearchResult bfs_search(const Instance& inst, int cap, bool want_schedule = false, double work_budget = 5e8) {
  check_instance(inst);
  const int n = int(inst.size());
  const int cells = int(inst.dims.cells());
  const int n1 = inst.dims.n1, n2 = inst.dims.n2;
  double states = 1, combos = 1;
  for (int k = 0; k < n; ++k) states *= double(cells - k), combos *= 5;
  if (n > 12 || states * combos > work_budget)
    throw Error(ErrorCode::BudgetExceeded, "configuration space too large for exhaustive search");
  auto encode = [&](const std::vector<int>& c) {
    std::uint64_t code = 0;
    for (int r = n - 1; r >= 0; --r) code = code * std::uint64_t(cells) + std::uint64_t(c[r]);
    return code;
  };
  std::vector<int> s(n), t(n);
  for (int r = 0; r < n; ++r) s[r] = int(inst.dims.index(inst.start[r])), t[r] = int(inst.dims.index(inst.target[r]));
  const std::uint64_t goal = encode(t), root = encode(s);
  SearchResult res;
  if (root == goal) {
    res.status = SearchResult::Exact;
    res.value = 0;
    res.states = 1;
    if (want_schedule) res.schedule = Schedule{};
    return res;
  }
  // code -> (parent code, encoded move vector)
  std::unordered_map<std::uint64_t, std::pair<std::uint64_t, std::uint32_t>> seen;
  seen[root] = {root, 0};
  std::vector<std::vector<int>> frontier{s}, next;
  std::vector<int> occ(cells, -1), land(cells, -1), nxt(n), mv(n);
  const int dx[5] = {0, 0, 1, 0, -1}, dy[5] = {0, 1, 0, -1, 0};  // indexed like Move
  auto finish = [&](int depth) {
    res.status = SearchResult::Exact;
    res.value = depth;
    res.states = seen.size();
    if (!want_schedule) return;
    Schedule sch;
    for (std::uint64_t c = goal; c != root;) {
      auto [par, code] = seen.at(c);
      Step st;
      st.moves.resize(n);
      for (int r = 0; r < n; ++r, code /= 5) st.moves[r] = Move(code % 5);
      sch.steps.push_back(std::move(st));
      c = par;
    }
    std::reverse(sch.steps.begin(), sch.steps.end());
    res.schedule = std::move(sch);
  };
  for (int depth = 1; depth <= cap; ++depth) {
    next.clear();
    for (const auto& cur : frontier) {
      const std::uint64_t cur_code = encode(cur);
      for (int r = 0; r < n; ++r) occ[cur[r]] = r;
      std::fill(mv.begin(), mv.end(), 0);
      for (;;) {
        bool ok = true;
        int r = 0;
        for (; r < n; ++r) {
          int x = cur[r] % n1 + dx[mv[r]], y = cur[r] / n1 + dy[mv[r]];
          if (x < 0 || y < 0 || x >= n1 || y >= n2) {
            ok = false;
            break;
          }
          nxt[r] = y * n1 + x;
          if (land[nxt[r]] != -1) {
            ok = false;
            break;
          }
          land[nxt[r]] = r;
        }
        for (int a = 0; ok && a < n; ++a) {
          int q = occ[nxt[a]];
          if (q != -1 && q != a && nxt[q] == cur[a]) ok = false;
        }
        for (int k = 0; k < r; ++k) land[nxt[k]] = -1;
        if (ok) {
          std::uint64_t code = encode(nxt);
          std::uint32_t mcode = 0;
          for (int k = n - 1; k >= 0; --k) mcode = mcode * 5 + std::uint32_t(mv[k]);
          if (seen.emplace(code, std::make_pair(cur_code, mcode)).second) {
            if (code == goal) {
              finish(depth);
              return res;
            }
            next.push_back(nxt);
          }
        }
        int k = 0;
        while (k < n && ++mv[k] == 5) mv[k++] = 0;
        if (k == n) break;
      }
      for (int q = 0; q < n; ++q) occ[cur[q]] = -1;
    }
    if (next.empty()) {
      res.status = SearchResult::Unreachable;
      res.states = seen.size();
      return res;
    }
    frontier.swap(next);
  }
  res.states = seen.size();
  return res;
}

}  // namespace mrp
