#include "ggt/graph.hpp"

#include "ggt/error.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>

namespace ggt {

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges, std::vector<std::string> labels)
    : n_(vertex_count), labels_(std::move(labels)) {
  if (n_ == 0) throw InputError("graph must have at least one vertex");
  if (!labels_.empty() && labels_.size() != n_) {
    throw InputError("label count does not match vertex count");
  }
  for (auto& [u, v] : edges) {
    if (u >= n_ || v >= n_) {
      throw InputError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") has an endpoint out of range");
    }
    if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
    throw InputError("multi-edge between " + std::to_string(dup->first) + " and " +
                     std::to_string(dup->second));
  }
  edges_ = std::move(edges);

  adjacency_.assign(n_ * n_, 0);
  std::vector<std::size_t> degree(n_, 0);
  for (const auto& [u, v] : edges_) {
    adjacency_[u * n_ + v] = adjacency_[v * n_ + u] = 1;
    ++degree[u];
    ++degree[v];
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  neighbor_list_.reserve(offsets_[n_]);
  for (std::size_t v = 0; v < n_; ++v) {
    for (std::size_t w = 0; w < n_; ++w) {
      if (adjacency_[v * n_ + w]) neighbor_list_.push_back(static_cast<Vertex>(w));
    }
  }

  std::vector<char> seen(n_, 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != n_) throw InputError("graph is disconnected");
}

std::span<const Vertex> Graph::neighbors(Vertex v) const {
  return std::span<const Vertex>(neighbor_list_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<std::uint64_t> parse_index(std::string_view token) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

Graph parse_graph(std::string_view text) {
  std::optional<std::size_t> n;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (!n) {
      if (tokens[0] != "v" || tokens.size() != 2) fail_at(line_no, "expected 'v <n>'");
      auto count = parse_index(tokens[1]);
      if (!count || *count == 0) fail_at(line_no, "vertex count must be a positive integer");
      n = *count;
      continue;
    }
    if (tokens[0] != "e" || tokens.size() != 3) fail_at(line_no, "expected 'e <i> <j>'");
    auto u = parse_index(tokens[1]);
    auto v = parse_index(tokens[2]);
    if (!u || !v) fail_at(line_no, "edge endpoints must be non-negative integers");
    if (*u >= *n || *v >= *n) fail_at(line_no, "edge endpoint out of range");
    if (*u == *v) fail_at(line_no, "self-loop at vertex " + std::to_string(*u));
    Edge e{static_cast<Vertex>(std::min(*u, *v)), static_cast<Vertex>(std::max(*u, *v))};
    if (std::find(edges.begin(), edges.end(), e) != edges.end()) {
      fail_at(line_no, "multi-edge between " + std::to_string(e.first) + " and " +
                           std::to_string(e.second));
    }
    edges.push_back(e);
  }
  if (!n) throw InputError("missing 'v <n>' line");
  return Graph(*n, std::move(edges));
}

std::string serialize_graph(const Graph& g) {
  std::ostringstream out;
  out << "v " << g.vertex_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << "e " << u << ' ' << v << '\n';
  return out.str();
}

Metric::Metric(std::size_t vertex_count, std::vector<int> distances)
    : n_(vertex_count), d_(std::move(distances)) {
  if (d_.size() != n_ * n_) throw InputError("distance matrix has the wrong size");
  diameter_ = d_.empty() ? 0 : *std::max_element(d_.begin(), d_.end());
}

VertexSet Metric::ball(Vertex center, std::int64_t radius) const {
  VertexSet out;
  if (radius < 0) return out;
  for (Vertex v = 0; v < n_; ++v) {
    if ((*this)(center, v) <= radius) out.push_back(v);
  }
  return out;
}

Metric all_pairs_distances(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<int> d(n * n, -1);
  std::vector<Vertex> queue(n);
  for (Vertex s = 0; s < n; ++s) {
    int* row = d.data() + s * n;
    std::size_t head = 0, tail = 0;
    row[s] = 0;
    queue[tail++] = s;
    while (head < tail) {
      const Vertex v = queue[head++];
      for (Vertex w : g.neighbors(v)) {
        if (row[w] < 0) {
          row[w] = row[v] + 1;
          queue[tail++] = w;
        }
      }
    }
  }
  return Metric(n, std::move(d));
}

HalfInt gromov_product(const Metric& m, Vertex x, Vertex y, Vertex z) {
  return HalfInt::from_twice(m(x, y) + m(x, z) - m(y, z));
}

HyperbolicityReport four_point_delta(const Metric& m) {
  // Quadruples with a repeated vertex have gap 0 by the triangle inequality,
  // so distinct 4-subsets suffice.
  const Vertex n = static_cast<Vertex>(m.vertex_count());
  HyperbolicityReport report;
  int best = 0;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      for (Vertex c = b + 1; c < n; ++c)
        for (Vertex d = c + 1; d < n; ++d) {
          std::array<int, 3> s{m(a, b) + m(c, d), m(a, c) + m(b, d), m(a, d) + m(b, c)};
          std::sort(s.begin(), s.end());
          const int gap = s[2] - s[1];
          if (gap > best) {
            best = gap;
            report.witness = {a, b, c, d};
          }
        }
  report.delta4 = HalfInt::from_twice(best);
  return report;
}

GeodesicSet enumerate_geodesics(const Graph& g, const Metric& m, Vertex x, Vertex y,
                                std::size_t cap) {
  if (x >= g.vertex_count() || y >= g.vertex_count()) throw InputError("vertex out of range");
  if (cap == 0) throw InputError("geodesic cap must be positive");
  GeodesicSet out;
  out.x = x;
  out.y = y;
  std::vector<Vertex> path{x};
  // Iterative DFS: frame = next neighbour index to try at each depth.
  std::vector<std::size_t> next{0};
  while (!next.empty()) {
    const Vertex v = path.back();
    if (v == y) {
      if (out.geodesics.size() == cap) {
        out.truncated = true;
        break;
      }
      out.geodesics.push_back(path);
      path.pop_back();
      next.pop_back();
      continue;
    }
    auto nbrs = g.neighbors(v);
    std::size_t& i = next.back();
    while (i < nbrs.size() && m(nbrs[i], y) != m(v, y) - 1) ++i;
    if (i == nbrs.size()) {
      path.pop_back();
      next.pop_back();
      continue;
    }
    path.push_back(nbrs[i++]);
    next.push_back(0);
  }
  return out;
}

}  // namespace ggt
