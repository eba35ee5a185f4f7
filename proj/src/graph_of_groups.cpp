#include "ggt/graph_of_groups.hpp"

#include "ggt/error.hpp"

#include <boost/pending/disjoint_sets.hpp>

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>

namespace ggt {

std::size_t MultiGraph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (const auto& [a, b] : edges) d += (a == v) + (b == v);
  return d;
}

bool MultiGraph::connected() const {
  if (vertex_count == 0) return true;
  boost::disjoint_sets_with_storage<> sets(vertex_count);
  std::size_t parts = vertex_count;
  for (const auto& [a, b] : edges) {
    if (sets.find_set(a) != sets.find_set(b)) {
      sets.union_set(a, b);
      --parts;
    }
  }
  return parts == 1;
}

GraphOfGroups::GraphOfGroups(MultiGraph graph, std::vector<GroupOrder> vertex_orders,
                             std::vector<std::uint64_t> edge_orders, std::vector<std::string> vertex_names,
                             std::vector<std::string> edge_names)
    : graph_(std::move(graph)),
      vertex_orders_(std::move(vertex_orders)),
      edge_orders_(std::move(edge_orders)),
      vertex_names_(std::move(vertex_names)),
      edge_names_(std::move(edge_names)) {
  if (vertex_orders_.size() != graph_.vertex_count) throw InputError("one order per vertex required");
  if (edge_orders_.size() != graph_.edges.size()) throw InputError("one order per edge required");
  if (vertex_names_.empty())
    for (std::size_t v = 0; v < graph_.vertex_count; ++v) vertex_names_.push_back("v" + std::to_string(v));
  if (edge_names_.empty())
    for (std::size_t e = 0; e < graph_.edges.size(); ++e) edge_names_.push_back("e" + std::to_string(e));
  if (vertex_names_.size() != graph_.vertex_count || edge_names_.size() != graph_.edges.size()) {
    throw InputError("name count mismatch");
  }
  for (const auto& o : vertex_orders_)
    if (!o.infinite && o.value == 0) throw InputError("vertex orders must be positive");
  for (std::size_t e = 0; e < graph_.edges.size(); ++e) {
    const auto [a, b] = graph_.edges[e];
    if (a >= graph_.vertex_count || b >= graph_.vertex_count) throw InputError("edge endpoint out of range");
    const std::uint64_t k = edge_orders_[e];
    if (k == 0) throw InputError("edge orders must be positive");
    for (std::size_t v : {a, b}) {
      const auto& o = vertex_orders_[v];
      if (!o.infinite && o.value % k != 0) {
        throw InputError("edge " + edge_names_[e] + " order " + std::to_string(k) + " does not divide vertex " +
                         vertex_names_[v] + " order " + std::to_string(o.value));
      }
    }
  }
}

namespace {

std::uint64_t parse_positive(const std::string& token, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || v == 0) {
    throw InputError("line " + std::to_string(line) + ": expected a positive integer, got '" + token + "'");
  }
  return v;
}

}  // namespace

GraphOfGroups parse_graph_of_groups(std::string_view text) {
  MultiGraph g;
  std::vector<GroupOrder> vo;
  std::vector<std::uint64_t> eo;
  std::vector<std::string> vn, en;
  std::map<std::string, std::size_t> vertex_index;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ls(raw);
    std::vector<std::string> t;
    std::string tok;
    while (ls >> tok) t.push_back(tok);
    if (t.empty() || t[0].front() == '#') continue;
    const std::string where = "line " + std::to_string(line) + ": ";
    if (t[0] == "vertex") {
      if (t.size() != 3) throw InputError(where + "expected 'vertex <name> <order|inf>'");
      if (!en.empty()) throw InputError(where + "vertex lines must precede edge lines");
      if (vertex_index.count(t[1])) throw InputError(where + "duplicate vertex '" + t[1] + "'");
      vertex_index[t[1]] = vn.size();
      vn.push_back(t[1]);
      vo.push_back(t[2] == "inf" ? GroupOrder::infinity() : GroupOrder::finite(parse_positive(t[2], line)));
    } else if (t[0] == "edge") {
      if (t.size() != 5) throw InputError(where + "expected 'edge <name> <v1> <v2> <order>'");
      if (std::find(en.begin(), en.end(), t[1]) != en.end()) throw InputError(where + "duplicate edge '" + t[1] + "'");
      auto a = vertex_index.find(t[2]), b = vertex_index.find(t[3]);
      if (a == vertex_index.end() || b == vertex_index.end()) throw InputError(where + "unknown vertex");
      en.push_back(t[1]);
      g.edges.emplace_back(a->second, b->second);
      eo.push_back(parse_positive(t[4], line));
    } else {
      throw InputError(where + "unrecognised line '" + t[0] + "'");
    }
  }
  g.vertex_count = vn.size();
  if (g.vertex_count == 0) throw InputError("graph of groups has no vertices");
  return GraphOfGroups(std::move(g), std::move(vo), std::move(eo), std::move(vn), std::move(en));
}

std::string serialize_graph_of_groups(const GraphOfGroups& g) {
  std::ostringstream out;
  for (std::size_t v = 0; v < g.graph().vertex_count; ++v)
    out << "vertex " << g.vertex_names()[v] << ' ' << g.vertex_orders()[v].str() << '\n';
  for (std::size_t e = 0; e < g.graph().edges.size(); ++e) {
    const auto [a, b] = g.graph().edges[e];
    out << "edge " << g.edge_names()[e] << ' ' << g.vertex_names()[a] << ' ' << g.vertex_names()[b] << ' '
        << g.edge_orders()[e] << '\n';
  }
  return out.str();
}

Rational chi(const GraphOfGroups& g) {
  Rational sum = 0;
  for (const auto& o : g.vertex_orders()) sum += o.reciprocal();
  for (auto k : g.edge_orders()) sum -= Rational(1, k);
  return sum;
}

Rational chi_plus(const GraphOfGroups& g, std::size_t v) {
  if (v >= g.graph().vertex_count) throw InputError("vertex out of range");
  Rational edge_sum = 0;
  for (std::size_t e = 0; e < g.graph().edges.size(); ++e) {
    const auto [a, b] = g.graph().edges[e];
    const int incidences = (a == v) + (b == v);
    edge_sum += Rational(incidences, g.edge_orders()[e]);
  }
  return g.vertex_orders()[v].reciprocal() - edge_sum / 2;
}

ReducedReport is_reduced(const GraphOfGroups& g) {
  ReducedReport r;
  for (std::size_t e = 0; e < g.graph().edges.size(); ++e) {
    const auto [a, b] = g.graph().edges[e];
    if (a == b) continue;
    for (std::size_t v : {a, b}) {
      const auto& o = g.vertex_orders()[v];
      if (!o.infinite && o.value == g.edge_orders()[e]) r.violations.push_back({e, v});
    }
  }
  return r;
}

const char* to_string(SignClass c) {
  switch (c) {
    case SignClass::Negative: return "negative";
    case SignClass::Isolated: return "isolated";
    case SignClass::TwoEdges: return "case1_two_edges";
    case SignClass::Loop: return "case2_loop";
    case SignClass::HalfOrderLeaf: return "case3_half_order_leaf";
    case SignClass::Unclassified: return "unclassified";
  }
  return "?";
}

namespace {

// Degree-1 vertex v on edge e with |G_v| = 2 |G_e|.
bool half_order_leaf(const GraphOfGroups& g, std::size_t v, std::size_t e) {
  const auto& o = g.vertex_orders()[v];
  return g.graph().degree(v) == 1 && !o.infinite && o.value == 2 * g.edge_orders()[e];
}

}  // namespace

SignReport sign_analysis(const GraphOfGroups& g) {
  if (!is_reduced(g).reduced()) throw InputError("sign analysis requires a reduced graph of groups");
  const auto& mg = g.graph();
  SignReport r;
  r.chi = chi(g);
  Rational total = 0;
  r.nonpositive_at_degree_two = true;
  for (std::size_t v = 0; v < mg.vertex_count; ++v) {
    SignReport::VertexSign s;
    s.chi_plus = chi_plus(g, v);
    s.degree = mg.degree(v);
    total += s.chi_plus;
    std::vector<std::size_t> incident;
    for (std::size_t e = 0; e < mg.edges.size(); ++e)
      if (mg.edges[e].first == v || mg.edges[e].second == v) incident.push_back(e);
    const auto& o = g.vertex_orders()[v];
    auto equal_order = [&](std::size_t e) { return !o.infinite && o.value == g.edge_orders()[e]; };
    if (s.degree == 0) {
      s.cls = SignClass::Isolated;
    } else if (s.chi_plus < 0) {
      s.cls = SignClass::Negative;
    } else if (s.chi_plus > 0) {
      s.cls = SignClass::Unclassified;
    } else if (s.degree == 2 && incident.size() == 2 && equal_order(incident[0]) && equal_order(incident[1])) {
      s.cls = SignClass::TwoEdges;
    } else if (s.degree == 2 && incident.size() == 1 && equal_order(incident[0])) {
      s.cls = SignClass::Loop;
    } else if (s.degree == 1 && half_order_leaf(g, v, incident[0])) {
      s.cls = SignClass::HalfOrderLeaf;
      const auto [a, b] = mg.edges[incident[0]];
      s.partner_matches = half_order_leaf(g, a == v ? b : a, incident[0]);
    } else {
      s.cls = SignClass::Unclassified;
    }
    if (s.degree >= 2 && s.chi_plus > 0) r.nonpositive_at_degree_two = false;
    if (s.cls == SignClass::Loop || s.cls == SignClass::HalfOrderLeaf) r.virtually_cyclic_pattern = true;
    if (s.cls == SignClass::Unclassified) ++r.unclassified;
    r.vertices.push_back(std::move(s));
  }
  if (total != r.chi) throw InvariantViolation("chi differs from the sum of chi_plus");
  return r;
}

GraphOfGroups subdivide(const GraphOfGroups& g, std::size_t edge) {
  if (edge >= g.graph().edges.size()) throw InputError("edge out of range");
  MultiGraph mg = g.graph();
  auto vo = g.vertex_orders();
  auto eo = g.edge_orders();
  auto vn = g.vertex_names();
  auto en = g.edge_names();
  const auto [a, b] = mg.edges[edge];
  const std::size_t x = mg.vertex_count++;
  vo.push_back(GroupOrder::finite(eo[edge]));
  vn.push_back(en[edge] + "_mid");
  mg.edges[edge] = {a, x};
  mg.edges.emplace_back(x, b);
  eo.push_back(eo[edge]);
  en[edge] += "_0";
  en.push_back(g.edge_names()[edge] + "_1");
  return GraphOfGroups(std::move(mg), std::move(vo), std::move(eo), std::move(vn), std::move(en));
}

GraphCover build_cover(const MultiGraph& base, std::vector<Perm> voltages) {
  if (voltages.size() != base.edges.size()) throw InputError("one voltage per base edge required");
  if (voltages.empty() && base.vertex_count == 0) throw InputError("empty base graph");
  std::size_t n = voltages.empty() ? 1 : voltages[0].degree();
  for (const auto& p : voltages)
    if (p.degree() != n) throw InputError("voltages must share one degree");
  if (n == 0) throw InputError("cover needs at least one sheet");
  GraphCover c;
  c.base = base;
  c.sheets = n;
  c.voltages = std::move(voltages);
  c.total.vertex_count = base.vertex_count * n;
  for (std::size_t e = 0; e < base.edges.size(); ++e) {
    const auto [u, w] = base.edges[e];
    for (std::uint32_t i = 0; i < n; ++i) c.total.edges.emplace_back(u * n + i, w * n + c.voltages[e](i));
  }
  c.connected = c.total.connected();
  return c;
}

GraphOfGroups trivial_groups(const MultiGraph& g) {
  return GraphOfGroups(g, std::vector<GroupOrder>(g.vertex_count, GroupOrder::finite(1)),
                       std::vector<std::uint64_t>(g.edges.size(), 1));
}

std::vector<Perm> parse_voltages(std::string_view text, const GraphOfGroups& base) {
  const std::size_t m = base.graph().edges.size();
  std::vector<std::optional<Perm>> found(m);
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos || raw[first] == '#') continue;
    const std::string where = "line " + std::to_string(line) + ": ";
    const auto colon = raw.find(':');
    if (colon == std::string::npos) throw InputError(where + "expected '<edge>: <images>'");
    std::istringstream name_stream(raw.substr(0, colon));
    std::string name;
    name_stream >> name;
    const auto& names = base.edge_names();
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InputError(where + "unknown edge '" + name + "'");
    const std::size_t e = static_cast<std::size_t>(it - names.begin());
    if (found[e]) throw InputError(where + "duplicate voltage for edge '" + name + "'");
    std::istringstream nums(raw.substr(colon + 1));
    std::vector<std::uint32_t> images;
    std::string tok;
    while (nums >> tok) {
      std::uint32_t v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) throw InputError(where + "bad image '" + tok + "'");
      images.push_back(v);
    }
    try {
      found[e] = Perm(std::move(images));
    } catch (const InputError& err) {
      throw InputError(where + err.what());
    }
  }
  std::vector<Perm> out;
  for (std::size_t e = 0; e < m; ++e) {
    if (!found[e]) throw InputError("missing voltage for edge '" + base.edge_names()[e] + "'");
    out.push_back(std::move(*found[e]));
  }
  return out;
}

namespace {

std::vector<Perm> all_perms(std::size_t n) {
  std::vector<std::uint32_t> images(n);
  std::iota(images.begin(), images.end(), 0U);
  std::vector<Perm> out;
  do {
    out.emplace_back(images);
  } while (std::next_permutation(images.begin(), images.end()));
  return out;
}

// One permutation per cycle type (partition of n), cycles on consecutive points.
std::vector<Perm> class_representatives(std::size_t n) {
  std::vector<Perm> out;
  std::vector<std::size_t> parts;
  auto emit = [&]() {
    std::vector<std::uint32_t> images(n);
    std::uint32_t start = 0;
    for (std::size_t len : parts) {
      for (std::size_t i = 0; i < len; ++i) images[start + i] = static_cast<std::uint32_t>(start + (i + 1) % len);
      start += static_cast<std::uint32_t>(len);
    }
    out.emplace_back(images);
  };
  auto rec = [&](auto&& self, std::size_t remaining, std::size_t max_part) -> void {
    if (remaining == 0) {
      emit();
      return;
    }
    for (std::size_t p = std::min(remaining, max_part); p >= 1; --p) {
      parts.push_back(p);
      self(self, remaining - p, p);
      parts.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

}  // namespace

namespace {

// Reusable scratch state for checking one voltage tuple without allocation.
class CoverChecker {
 public:
  CoverChecker(const MultiGraph& base, std::size_t sheets)
      : base_(base), n_(sheets), parent_(base.vertex_count * sheets), degree_(base.vertex_count * sheets) {
    for (std::size_t v = 0; v < base.vertex_count; ++v) base_degree_.push_back(base.degree(v));
    expected_chi_ = static_cast<std::int64_t>(n_) *
                    (static_cast<std::int64_t>(base.vertex_count) - static_cast<std::int64_t>(base.edges.size()));
  }

  // Adds one cover to the tally.
  void check(const std::vector<const Perm*>& voltages, CoverEnumeration& out) {
    const std::size_t total = parent_.size();
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    std::fill(degree_.begin(), degree_.end(), 0);
    std::size_t parts = total, edges = 0;
    for (std::size_t e = 0; e < base_.edges.size(); ++e) {
      const auto [u, w] = base_.edges[e];
      const Perm& p = *voltages[e];
      for (std::uint32_t i = 0; i < n_; ++i) {
        const std::size_t a = u * n_ + i, b = w * n_ + p(i);
        ++degree_[a];
        ++degree_[b];
        ++edges;
        const std::size_t ra = root(a), rb = root(b);
        if (ra != rb) {
          parent_[ra] = rb;
          --parts;
        }
      }
    }
    ++out.covers;
    if (parts != 1) return;
    ++out.connected;
    bool ok = static_cast<std::int64_t>(total) - static_cast<std::int64_t>(edges) == expected_chi_;
    // Covering map: every lift of v has the degree of v.
    for (std::size_t x = 0; ok && x < total; ++x) ok = degree_[x] == base_degree_[x / n_];
    if (!ok) ++out.failures;
  }

 private:
  std::size_t root(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  const MultiGraph& base_;
  std::size_t n_;
  std::vector<std::size_t> parent_, degree_, base_degree_;
  std::int64_t expected_chi_ = 0;
};

}  // namespace

CoverEnumeration enumerate_covers(const MultiGraph& base, std::size_t sheets, std::size_t limit, std::mt19937_64& rng) {
  if (sheets == 0) throw InputError("cover needs at least one sheet");
  if (base.vertex_count == 0 || !base.connected()) throw InputError("base graph must be nonempty and connected");
  // Spanning tree edges get the identity voltage.
  std::vector<char> tree(base.edges.size(), 0);
  {
    boost::disjoint_sets_with_storage<> sets(base.vertex_count);
    for (std::size_t e = 0; e < base.edges.size(); ++e) {
      const auto [a, b] = base.edges[e];
      if (sets.find_set(a) != sets.find_set(b)) {
        sets.union_set(a, b);
        tree[e] = 1;
      }
    }
  }
  std::vector<std::size_t> free_edges;
  for (std::size_t e = 0; e < base.edges.size(); ++e)
    if (!tree[e]) free_edges.push_back(e);

  const auto perms = all_perms(sheets);
  const auto reps = class_representatives(sheets);
  const Perm id = Perm::identity(sheets);
  CoverChecker checker(base, sheets);
  CoverEnumeration out;
  std::vector<const Perm*> voltages(base.edges.size(), &id);

  if (free_edges.empty()) {
    checker.check(voltages, out);
    return out;
  }
  // Tuple count: |reps| * (n!)^(k-1), compared in floating point to avoid overflow.
  long double space = static_cast<long double>(reps.size());
  for (std::size_t i = 1; i < free_edges.size(); ++i) space *= static_cast<long double>(perms.size());
  if (space > static_cast<long double>(limit)) {
    out.exhaustive = false;
    std::uniform_int_distribution<std::size_t> pick(0, perms.size() - 1);
    for (std::size_t s = 0; s < limit; ++s) {
      for (std::size_t e : free_edges) voltages[e] = &perms[pick(rng)];
      checker.check(voltages, out);
    }
    return out;
  }
  std::vector<std::size_t> odometer(free_edges.size(), 0);
  while (true) {
    voltages[free_edges[0]] = &reps[odometer[0]];
    for (std::size_t i = 1; i < free_edges.size(); ++i) voltages[free_edges[i]] = &perms[odometer[i]];
    checker.check(voltages, out);
    std::size_t i = free_edges.size();
    while (true) {
      --i;
      const std::size_t bound = i == 0 ? reps.size() : perms.size();
      if (++odometer[i] < bound) break;
      odometer[i] = 0;
      if (i == 0) return out;
    }
  }
}

}  // namespace ggt
