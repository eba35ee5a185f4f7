#include "ggt/graph_enum.hpp"

#include "ggt/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <unordered_set>

namespace ggt {

Graph graph_from_code(std::size_t n, std::uint64_t code) {
  std::vector<Edge> edges;
  for (unsigned j = 1; j < n; ++j)
    for (unsigned i = 0; i < j; ++i)
      if (code >> pair_bit(i, j) & 1U) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

std::uint64_t code_from_graph(const Graph& g) {
  if (g.vertex_count() > kMaxEnumeratedVertices) throw InputError("graph too large to encode");
  std::uint64_t code = 0;
  for (const auto& [u, v] : g.edges()) code |= std::uint64_t{1} << pair_bit(u, v);
  return code;
}

namespace {

using Cell = std::vector<std::uint8_t>;
using Partition = std::vector<Cell>;

class Canonizer {
 public:
  Canonizer(std::size_t n, std::uint64_t code) : n_(static_cast<unsigned>(n)) {
    adj_.fill(0);
    for (unsigned j = 1; j < n_; ++j)
      for (unsigned i = 0; i < j; ++i)
        if (code >> pair_bit(i, j) & 1U) {
          adj_[i] |= static_cast<std::uint16_t>(1U << j);
          adj_[j] |= static_cast<std::uint16_t>(1U << i);
        }
  }

  std::uint64_t run() {
    Partition start(1);
    for (unsigned v = 0; v < n_; ++v) start[0].push_back(static_cast<std::uint8_t>(v));
    refine(start);
    search(start);
    return best_;
  }

 private:
  // Equitable refinement: split cells by neighbour counts into every cell,
  // ordering the pieces by that count vector. Label independent.
  void refine(Partition& p) const {
    while (true) {
      std::vector<std::uint16_t> masks(p.size(), 0);
      for (std::size_t c = 0; c < p.size(); ++c)
        for (auto v : p[c]) masks[c] |= static_cast<std::uint16_t>(1U << v);

      Partition next;
      next.reserve(n_);
      for (const Cell& cell : p) {
        if (cell.size() == 1) {
          next.push_back(cell);
          continue;
        }
        std::vector<std::pair<std::vector<std::uint8_t>, std::uint8_t>> keyed;
        keyed.reserve(cell.size());
        for (auto v : cell) {
          std::vector<std::uint8_t> sig(p.size());
          for (std::size_t c = 0; c < p.size(); ++c)
            sig[c] = static_cast<std::uint8_t>(std::popcount(static_cast<unsigned>(adj_[v] & masks[c])));
          keyed.emplace_back(std::move(sig), v);
        }
        std::sort(keyed.begin(), keyed.end());
        for (std::size_t i = 0; i < keyed.size();) {
          std::size_t j = i;
          Cell piece;
          while (j < keyed.size() && keyed[j].first == keyed[i].first) piece.push_back(keyed[j++].second);
          next.push_back(std::move(piece));
          i = j;
        }
      }
      const bool stable = next.size() == p.size();
      p = std::move(next);
      if (stable) return;
    }
  }

  void search(const Partition& p) {
    if (p.size() == n_) {
      std::array<unsigned, 16> pos{};
      for (unsigned i = 0; i < n_; ++i) pos[p[i][0]] = i;
      std::uint64_t code = 0;
      for (unsigned u = 0; u < n_; ++u) {
        unsigned row = adj_[u];
        while (row) {
          const unsigned v = static_cast<unsigned>(std::countr_zero(row));
          row &= row - 1;
          if (u < v) {
            const unsigned a = std::min(pos[u], pos[v]);
            const unsigned b = std::max(pos[u], pos[v]);
            code |= std::uint64_t{1} << pair_bit(a, b);
          }
        }
      }
      if (!have_ || code < best_) {
        best_ = code;
        have_ = true;
      }
      return;
    }
    // Target: the first smallest non-singleton cell.
    std::size_t target = p.size();
    for (std::size_t c = 0; c < p.size(); ++c) {
      if (p[c].size() > 1 && (target == p.size() || p[c].size() < p[target].size())) target = c;
    }
    for (auto v : p[target]) {
      Partition child;
      child.reserve(p.size() + 1);
      for (std::size_t c = 0; c < p.size(); ++c) {
        if (c != target) {
          child.push_back(p[c]);
          continue;
        }
        child.push_back(Cell{v});
        Cell rest;
        for (auto w : p[c])
          if (w != v) rest.push_back(w);
        child.push_back(std::move(rest));
      }
      refine(child);
      search(child);
    }
  }

  unsigned n_;
  std::array<std::uint16_t, 16> adj_{};
  std::uint64_t best_ = 0;
  bool have_ = false;
};

}  // namespace

std::uint64_t canonical_code(std::size_t n, std::uint64_t code) {
  if (n == 0 || n > kMaxEnumeratedVertices) throw InputError("canonical_code supports 1..11 vertices");
  return Canonizer(n, code).run();
}

std::vector<std::uint64_t> connected_graph_codes(std::size_t n) {
  if (n == 0 || n > kMaxEnumeratedVertices) throw InputError("enumeration supports 1..11 vertices");
  std::vector<std::uint64_t> level{0};  // K1
  for (std::size_t k = 2; k <= n; ++k) {
    // Every connected graph has a non-cut vertex; deleting it leaves a
    // connected graph, so augmenting connected graphs reaches all classes.
    std::unordered_set<std::uint64_t> seen;
    const unsigned fresh = static_cast<unsigned>(k - 1);
    for (std::uint64_t base : level) {
      for (std::uint32_t nbrs = 1; nbrs < (1U << fresh); ++nbrs) {
        std::uint64_t code = base;
        for (unsigned i = 0; i < fresh; ++i)
          if (nbrs >> i & 1U) code |= std::uint64_t{1} << pair_bit(i, fresh);
        seen.insert(canonical_code(k, code));
      }
    }
    level.assign(seen.begin(), seen.end());
    std::sort(level.begin(), level.end());
  }
  return level;
}

}  // namespace ggt
