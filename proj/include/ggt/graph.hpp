#pragma once

#include "ggt/exact.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ggt {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;
using VertexSet = std::vector<Vertex>;  // sorted, no duplicates

/// Finite simple undirected connected graph. Immutable after construction.
class Graph {
 public:
  /// Throws InputError on self-loops, repeated edges, out-of-range endpoints
  /// or a disconnected result.
  Graph(std::size_t vertex_count, std::vector<Edge> edges, std::vector<std::string> labels = {});

  std::size_t vertex_count() const { return n_; }
  /// Edges as (min, max) pairs in lexicographic order.
  std::span<const Edge> edges() const { return edges_; }
  /// Neighbours in increasing order.
  std::span<const Vertex> neighbors(Vertex v) const;
  bool adjacent(Vertex u, Vertex v) const { return adjacency_[u * n_ + v] != 0; }
  const std::vector<std::string>& labels() const { return labels_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> neighbor_list_;
  std::vector<char> adjacency_;
  std::vector<std::string> labels_;
};

/// Line format: `v <n>` first, then `e <i> <j>` lines; `#` lines are comments.
Graph parse_graph(std::string_view text);
/// `v` line followed by `e` lines sorted lexicographically.
std::string serialize_graph(const Graph& g);

/// Edge-count path metric.
class Metric {
 public:
  Metric(std::size_t vertex_count, std::vector<int> distances);

  std::size_t vertex_count() const { return n_; }
  int operator()(Vertex u, Vertex v) const { return d_[u * n_ + v]; }
  int diameter() const { return diameter_; }

  /// Vertices at distance <= radius from center, sorted.
  VertexSet ball(Vertex center, std::int64_t radius) const;

 private:
  std::size_t n_;
  std::vector<int> d_;
  int diameter_ = 0;
};

Metric all_pairs_distances(const Graph& g);

/// (y.z)_x = (d(x,y) + d(x,z) - d(y,z)) / 2, exact.
HalfInt gromov_product(const Metric& m, Vertex x, Vertex y, Vertex z);

struct HyperbolicityReport {
  /// Smallest delta with: the two largest of the three pair sums of every
  /// quadruple differ by at most 2*delta.
  HalfInt delta4;
  /// A quadruple attaining the maximum gap (all zeros when delta4 == 0).
  std::array<Vertex, 4> witness{};
};

HyperbolicityReport four_point_delta(const Metric& m);

inline constexpr std::size_t kDefaultGeodesicCap = 1'000'000;

struct GeodesicSet {
  Vertex x = 0;
  Vertex y = 0;
  /// Lexicographic order; each path has d(x,y)+1 vertices.
  std::vector<std::vector<Vertex>> geodesics;
  bool truncated = false;
};

/// Depth-first over distance-decreasing neighbours. Stops after `cap` paths
/// and flags truncation if more exist.
GeodesicSet enumerate_geodesics(const Graph& g, const Metric& m, Vertex x, Vertex y,
                                std::size_t cap = kDefaultGeodesicCap);

}  // namespace ggt
