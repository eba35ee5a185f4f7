#pragma once

// Shared fixtures and independent oracles. Oracles use only plain integer
// arithmetic and never call into the library's algorithms.

#include "ggt/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ggt::testing {

inline std::string data_path(const std::string& name) { return std::string(GGT_TEST_DATA_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i) e.emplace_back(std::min<Vertex>(i, (i + 1) % n), std::max<Vertex>(i, (i + 1) % n));
  return Graph(n, e);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

/// Three legs of length `leg` from center 0.
inline Graph tripod(std::size_t leg) {
  std::vector<Edge> e;
  Vertex next = 1;
  for (int l = 0; l < 3; ++l) {
    Vertex prev = 0;
    for (std::size_t i = 0; i < leg; ++i, ++next) {
      e.emplace_back(prev, next);
      prev = next;
    }
  }
  return Graph(next, e);
}

/// Chain of blocks (K2, K3, K4, C4, C5, C6), each glued at one vertex of the
/// previous block.
inline Graph block_graph(std::mt19937_64& rng, int blocks) {
  std::vector<Edge> edges;
  Vertex n = 1, attach = 0;
  std::uniform_int_distribution<int> kind(0, 5);
  for (int b = 0; b < blocks; ++b) {
    const int k = kind(rng);
    std::vector<Vertex> vs{attach};
    const int size = k < 3 ? k + 2 : k + 1;
    for (int i = 1; i < size; ++i) vs.push_back(n++);
    auto add = [&](Vertex a, Vertex c) { edges.emplace_back(std::min(a, c), std::max(a, c)); };
    if (k < 3) {
      for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) add(vs[i], vs[j]);
    } else {
      for (std::size_t i = 0; i < vs.size(); ++i) add(vs[i], vs[(i + 1) % vs.size()]);
    }
    std::uniform_int_distribution<std::size_t> pick(1, vs.size() - 1);
    attach = vs[pick(rng)];
  }
  return Graph(n, edges);
}

using DistMatrix = std::vector<std::vector<int>>;

/// Floyd-Warshall over the edge list.
inline DistMatrix floyd_warshall(const Graph& g) {
  const std::size_t n = g.vertex_count();
  const int inf = 1 << 20;
  DistMatrix d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [a, b] : g.edges()) d[a][b] = d[b][a] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

/// Cylinder oracle: support = interval between x and y; theta from an
/// explicit geodesic listing.
struct OracleCylinder {
  Vertex x = 0, y = 0;
  std::vector<Vertex> support;
  int theta = 0;
  bool contains(Vertex v) const { return std::binary_search(support.begin(), support.end(), v); }
};

inline void oracle_geodesics(const Graph& g, const DistMatrix& d, Vertex y, std::vector<Vertex>& path,
                             std::vector<std::vector<Vertex>>& out) {
  const Vertex u = path.back();
  if (u == y) {
    out.push_back(path);
    return;
  }
  for (auto [a, b] : g.edges()) {
    for (auto [p, q] : {std::pair{a, b}, std::pair{b, a}}) {
      if (p != u || d[q][y] != d[u][y] - 1) continue;
      path.push_back(q);
      oracle_geodesics(g, d, y, path, out);
      path.pop_back();
    }
  }
}

inline OracleCylinder oracle_cylinder(const Graph& g, const DistMatrix& d, Vertex x, Vertex y) {
  OracleCylinder c{x, y, {}, 0};
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (d[x][v] + d[v][y] == d[x][y]) c.support.push_back(v);
  std::vector<Vertex> path{x};
  std::vector<std::vector<Vertex>> geos;
  oracle_geodesics(g, d, y, path, geos);
  for (const auto& gamma : geos)
    for (Vertex v : c.support) {
      int best = 1 << 20;
      for (Vertex w : gamma) best = std::min(best, d[v][w]);
      c.theta = std::max(c.theta, best);
    }
  return c;
}

/// Four-term difference from set definitions, with a caller-supplied theta.
inline std::int64_t oracle_diff(const OracleCylinder& c, const DistMatrix& d, int theta, Vertex u, Vertex v) {
  auto side = [&](Vertex end, Vertex p) {
    std::set<Vertex> s;
    for (Vertex w : c.support)
      if (d[w][end] <= d[p][end] && d[p][w] >= 5 * theta) s.insert(w);
    return s;
  };
  auto minus = [](const std::set<Vertex>& a, const std::set<Vertex>& b) {
    std::int64_t k = 0;
    for (Vertex w : a) k += b.count(w) == 0;
    return k;
  };
  const auto lu = side(c.x, u), lv = side(c.x, v), ru = side(c.y, u), rv = side(c.y, v);
  return minus(lu, lv) - minus(lv, lu) + minus(rv, ru) - minus(ru, rv);
}

/// Exact fraction over int64 in lowest terms, denominator positive.
struct Frac {
  std::int64_t p = 0, q = 1;
  Frac() = default;
  Frac(std::int64_t num, std::int64_t den = 1) : p(num), q(den) {
    if (q < 0) p = -p, q = -q;
    const std::int64_t g = std::gcd(p, q);
    if (g > 1) p /= g, q /= g;
  }
  friend Frac operator+(Frac a, Frac b) { return Frac(a.p * b.q + b.p * a.q, a.q * b.q); }
  friend Frac operator-(Frac a, Frac b) { return Frac(a.p * b.q - b.p * a.q, a.q * b.q); }
  friend Frac operator*(Frac a, Frac b) { return Frac(a.p * b.p, a.q * b.q); }
  friend bool operator==(Frac a, Frac b) { return a.p == b.p && a.q == b.q; }
  std::string str() const { return q == 1 ? std::to_string(p) : std::to_string(p) + "/" + std::to_string(q); }
};

/// Bareiss fraction-free determinant of a small integer matrix.
inline std::int64_t bareiss_det(std::vector<std::vector<std::int64_t>> a) {
  const std::size_t n = a.size();
  std::int64_t sign = 1, prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace ggt::testing
