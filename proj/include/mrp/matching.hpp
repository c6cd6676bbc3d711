#pragma once

#include <queue>

#include "grid.hpp"

namespace mrp {

// Maximum bipartite matching (Hopcroft-Karp); adj[u] lists right vertices of left vertex u.
inline std::vector<int> hopcroft_karp(const std::vector<std::vector<int>>& adj, int nright, int* size_out = nullptr) {
  const int nl = int(adj.size());
  const int INF = std::numeric_limits<int>::max();
  std::vector<int> ml(nl, -1), mr(nright, -1), dist(nl);
  auto bfs = [&]() {
    std::queue<int> q;
    bool found = false;
    for (int u = 0; u < nl; ++u) {
      if (ml[u] < 0) dist[u] = 0, q.push(u);
      else dist[u] = INF;
    }
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        int w = mr[v];
        if (w < 0) found = true;
        else if (dist[w] == INF) dist[w] = dist[u] + 1, q.push(w);
      }
    }
    return found;
  };
  std::function<bool(int)> dfs = [&](int u) {
    for (int v : adj[u]) {
      int w = mr[v];
      if (w < 0 || (dist[w] == dist[u] + 1 && dfs(w))) {
        ml[u] = v;
        mr[v] = u;
        return true;
      }
    }
    dist[u] = INF;
    return false;
  };
  int size = 0;
  while (bfs())
    for (int u = 0; u < nl; ++u)
      if (ml[u] < 0 && dfs(u)) ++size;
  if (size_out) *size_out = size;
  return ml;
}

struct BottleneckResult {
  std::vector<int> match;  // match[i] = index into B for A[i]
  int value = 0;           // largest matched Manhattan distance
};

// Perfect matching between equal-size point sets minimising the largest Manhattan distance.
inline BottleneckResult bottleneck_matching(const std::vector<Pos>& A, const std::vector<Pos>& B) {
  if (A.size() != B.size()) throw Error(ErrorCode::SizeMismatch, "point sets differ in size");
  const int n = int(A.size());
  BottleneckResult res;
  if (n == 0) return res;
  std::vector<int> ds;
  ds.reserve(std::size_t(n) * n);
  for (const Pos& a : A)
    for (const Pos& b : B) ds.push_back(manhattan(a, b));
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  auto attempt = [&](int thr, std::vector<int>& m) {
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (manhattan(A[i], B[j]) <= thr) adj[i].push_back(j);
    int sz = 0;
    m = hopcroft_karp(adj, n, &sz);
    return sz == n;
  };
  std::size_t lo = 0, hi = ds.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    std::vector<int> m;
    if (attempt(ds[mid], m)) hi = mid;
    else lo = mid + 1;
  }
  attempt(ds[lo], res.match);
  res.value = ds[lo];
  return res;
}

}  // namespace mrp
