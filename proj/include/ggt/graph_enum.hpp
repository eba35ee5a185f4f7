#pragma once

#include "ggt/graph.hpp"

#include <cstdint>
#include <vector>

namespace ggt {

/// Small graphs (n <= 11) are encoded as upper-triangle adjacency bitmasks:
/// bit pair_bit(i, j) for i < j.
inline constexpr std::size_t kMaxEnumeratedVertices = 11;

constexpr unsigned pair_bit(unsigned i, unsigned j) {
  // Column-major over the upper triangle: (0,1),(0,2),(1,2),(0,3),...
  return j * (j - 1) / 2 + i;
}

Graph graph_from_code(std::size_t n, std::uint64_t code);
std::uint64_t code_from_graph(const Graph& g);

/// Canonical code of the graph: equal for isomorphic graphs, distinct otherwise.
std::uint64_t canonical_code(std::size_t n, std::uint64_t code);

/// One canonical code per isomorphism class of connected graphs on n vertices,
/// in increasing order. Built by vertex augmentation from n-1.
std::vector<std::uint64_t> connected_graph_codes(std::size_t n);

}  // namespace ggt
