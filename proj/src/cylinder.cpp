#include "ggt/cylinder.hpp"

#include "ggt/error.hpp"

#include <algorithm>
#include <limits>

namespace ggt {

bool Cylinder::contains(Vertex v) const { return std::binary_search(support.begin(), support.end(), v); }

Cylinder build_cylinder(const Metric& m, const GeodesicSet& gs) {
  if (gs.truncated) throw InputError("geodesic enumeration was truncated; cylinder would be incomplete");
  if (gs.geodesics.empty()) throw InputError("no geodesics supplied");
  Cylinder c;
  c.x = gs.x;
  c.y = gs.y;
  for (const auto& path : gs.geodesics) c.support.insert(c.support.end(), path.begin(), path.end());
  std::sort(c.support.begin(), c.support.end());
  c.support.erase(std::unique(c.support.begin(), c.support.end()), c.support.end());
  for (const auto& path : gs.geodesics) {
    for (Vertex v : c.support) {
      int nearest = std::numeric_limits<int>::max();
      for (Vertex p : path) nearest = std::min(nearest, m(v, p));
      c.theta = std::max(c.theta, nearest);
    }
  }
  return c;
}

Cylinder build_cylinder(const Graph& g, const Metric& m, Vertex x, Vertex y, std::size_t cap) {
  return build_cylinder(m, enumerate_geodesics(g, m, x, y, cap));
}

Cylinder reversed(const Cylinder& c) {
  Cylinder r = c;
  std::swap(r.x, r.y);
  return r;
}

namespace {

VertexSet side_set(const Cylinder& c, const Metric& m, Vertex u, Vertex end) {
  if (!c.contains(u)) throw InputError("vertex " + std::to_string(u) + " is not in the cylinder");
  VertexSet out;
  for (Vertex w : c.support)
    if (m(w, end) <= m(u, end) && m(u, w) >= 5 * c.theta) out.push_back(w);
  return out;
}

std::int64_t minus_size(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return static_cast<std::int64_t>(out.size());
}

std::int64_t diff_from_sets(const VertexSet& lu, const VertexSet& lv, const VertexSet& ru, const VertexSet& rv) {
  return minus_size(lu, lv) - minus_size(lv, lu) + minus_size(rv, ru) - minus_size(ru, rv);
}

}  // namespace

VertexSet left_set(const Cylinder& c, const Metric& m, Vertex u) { return side_set(c, m, u, c.x); }
VertexSet right_set(const Cylinder& c, const Metric& m, Vertex u) { return side_set(c, m, u, c.y); }

std::int64_t difference(const Cylinder& c, const Metric& m, Vertex u, Vertex v) {
  return diff_from_sets(left_set(c, m, u), left_set(c, m, v), right_set(c, m, u), right_set(c, m, v));
}

std::int64_t SliceDecomposition::diff(Vertex u, Vertex v) const {
  const auto& s = cylinder.support;
  auto pos = [&](Vertex w) {
    auto it = std::lower_bound(s.begin(), s.end(), w);
    if (it == s.end() || *it != w) throw InputError("vertex " + std::to_string(w) + " is not in the cylinder");
    return static_cast<std::size_t>(it - s.begin());
  };
  return diff_table[pos(u) * s.size() + pos(v)];
}

std::size_t SliceDecomposition::slice_of(Vertex u) const {
  for (std::size_t i = 0; i < slices.size(); ++i)
    if (std::binary_search(slices[i].begin(), slices[i].end(), u)) return i;
  throw InputError("vertex " + std::to_string(u) + " is not in the cylinder");
}

SliceDecomposition decompose_slices(const Cylinder& c, const Metric& m) {
  const auto& s = c.support;
  const std::size_t k = s.size();
  std::vector<VertexSet> left(k), right(k);
  for (std::size_t i = 0; i < k; ++i) {
    left[i] = left_set(c, m, s[i]);
    right[i] = right_set(c, m, s[i]);
  }
  SliceDecomposition d;
  d.cylinder = c;
  d.diff_table.assign(k * k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      d.diff_table[i * k + j] = diff_from_sets(left[i], left[j], right[i], right[j]);
  auto at = [&](std::size_t i, std::size_t j) { return d.diff_table[i * k + j]; };

  // Class representatives in support order; each vertex joins the first class
  // it has diff 0 with.
  std::vector<std::size_t> reps;
  std::vector<std::size_t> cls(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t found = reps.size();
    for (std::size_t r = 0; r < reps.size() && found == reps.size(); ++r)
      if (at(i, reps[r]) == 0) found = r;
    if (found == reps.size()) reps.push_back(i);
    cls[i] = found;
  }
  // Rank of a class = number of classes before it; a linear order makes the
  // ranks a permutation.
  std::vector<std::size_t> rank(reps.size(), 0);
  std::vector<char> taken(reps.size(), 0);
  for (std::size_t a = 0; a < reps.size(); ++a) {
    for (std::size_t b = 0; b < reps.size(); ++b)
      if (at(reps[b], reps[a]) < 0) ++rank[a];
    if (taken[rank[a]]) throw InvariantViolation("diff sign does not linearly order the slices");
    taken[rank[a]] = 1;
  }

  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const auto v = at(i, j);
      if (v != -at(j, i)) throw InvariantViolation("diff is not antisymmetric");
      const bool same = cls[i] == cls[j];
      if (same != (v == 0)) throw InvariantViolation("diff = 0 is not an equivalence relation");
      if (!same && (v < 0) != (rank[cls[i]] < rank[cls[j]])) {
        throw InvariantViolation("diff sign does not linearly order the slices");
      }
    }

  d.slices.assign(reps.size(), {});
  for (std::size_t i = 0; i < k; ++i) d.slices[rank[cls[i]]].push_back(s[i]);
  return d;
}

void CylinderAssignment::set(Cylinder c) {
  if (c.x >= n_ || c.y >= n_) throw InputError("cylinder endpoint out of range");
  const auto key = std::make_pair(c.x, c.y);
  cylinders_.insert_or_assign(key, std::move(c));
}

const Cylinder* CylinderAssignment::find(Vertex x, Vertex y) const {
  auto it = cylinders_.find({x, y});
  return it == cylinders_.end() ? nullptr : &it->second;
}

const Cylinder& CylinderAssignment::at(Vertex x, Vertex y) const {
  if (const Cylinder* c = find(x, y)) return *c;
  throw InputError("missing cylinder for pair (" + std::to_string(x) + "," + std::to_string(y) + ")");
}

int CylinderAssignment::global_theta() const {
  int t = 0;
  for (const auto& [key, c] : cylinders_) t = std::max(t, c.theta);
  return t;
}

CylinderAssignment geodesic_union_assignment(const Graph& g, const Metric& m,
                                             const std::optional<std::vector<std::pair<Vertex, Vertex>>>& pairs) {
  CylinderAssignment ca(g.vertex_count());
  if (pairs) {
    for (const auto& [x, y] : *pairs) ca.set(build_cylinder(g, m, x, y));
  } else {
    for (Vertex x = 0; x < g.vertex_count(); ++x)
      for (Vertex y = 0; y < g.vertex_count(); ++y) ca.set(build_cylinder(g, m, x, y));
  }
  return ca;
}

namespace {

// Longest common subsequence of two slice lists under set equality.
std::size_t lcs(std::span<const VertexSet> a, std::span<const VertexSet> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Indices of a matched by one optimal LCS alignment.
std::vector<std::size_t> lcs_matched(std::span<const VertexSet> a, std::span<const VertexSet> b) {
  const std::size_t n = a.size(), k = b.size();
  std::vector<std::size_t> t((n + 1) * (k + 1), 0);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= k; ++j)
      t[i * (k + 1) + j] = a[i - 1] == b[j - 1] ? t[(i - 1) * (k + 1) + j - 1] + 1
                                                : std::max(t[(i - 1) * (k + 1) + j], t[i * (k + 1) + j - 1]);
  std::vector<std::size_t> out;
  for (std::size_t i = n, j = k; i > 0 && j > 0;) {
    if (a[i - 1] == b[j - 1]) {
      out.push_back(i - 1);
      --i;
      --j;
    } else if (t[(i - 1) * (k + 1) + j] >= t[i * (k + 1) + j - 1]) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

StabilityReport triangle_stability(const CylinderAssignment& ca, const Metric& m, Vertex x, Vertex y, Vertex z) {
  const auto xy = decompose_slices(ca.at(x, y), m);
  const auto xz = decompose_slices(ca.at(x, z), m);
  const auto zy = decompose_slices(ca.at(z, y), m);
  const std::span<const VertexSet> a(xy.slices), b(xz.slices), c(zy.slices);
  const std::size_t n = a.size();

  StabilityReport r;
  r.x = x;
  r.y = y;
  r.z = z;
  std::size_t best = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t tail = n - k;
    const std::size_t matched = lcs(a.first(k), b.first(std::min(k, b.size()))) +
                                lcs(a.last(tail), c.last(std::min(tail, c.size())));
    if (matched >= best) {
      best = matched;
      r.k_split = k;
    }
  }
  r.epsilon_observed = n - best;
  const std::size_t k = r.k_split, tail = n - k;
  std::vector<char> matched(n, 0);
  for (auto i : lcs_matched(a.first(k), b.first(std::min(k, b.size())))) matched[i] = 1;
  for (auto i : lcs_matched(a.last(tail), c.last(std::min(tail, c.size())))) matched[k + i] = 1;
  for (std::size_t i = 0; i < n; ++i)
    if (!matched[i]) r.witnesses.push_back(static_cast<Vertex>(i));
  return r;
}

StabilityReport measure_tau_stability(const CylinderAssignment& ca, const Metric& m, Vertex x, Vertex y,
                                      Vertex z) {
  const Cylinder& cy = ca.at(x, y);
  const Cylinder& cz = ca.at(x, z);
  StabilityReport r;
  r.x = x;
  r.y = y;
  r.z = z;
  r.gromov = gromov_product(m, x, y, z);
  r.radius = r.gromov.floor();
  const VertexSet ball = m.ball(x, r.radius);
  VertexSet a, b;
  std::set_intersection(cy.support.begin(), cy.support.end(), ball.begin(), ball.end(), std::back_inserter(a));
  std::set_intersection(cz.support.begin(), cz.support.end(), ball.begin(), ball.end(), std::back_inserter(b));
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.witnesses));
  r.tau_observed = r.witnesses.size();
  return r;
}

SymmetryReport check_assignment_symmetries(const CylinderAssignment& ca, const Metric& m,
                                           const GroupAction& action) {
  if (action.point_count() != ca.vertex_count()) throw InputError("action and assignment have different vertex counts");
  SymmetryReport r;
  for (const auto& [key, c] : ca.cylinders()) {
    ++r.pairs_checked;
    const auto [x, y] = key;
    for (std::size_t e = 0; e < action.order(); ++e) {
      const Perm& g = action.elements()[e];
      const Cylinder& image = ca.at(g(x), g(y));
      VertexSet moved;
      for (Vertex v : c.support) moved.push_back(g(v));
      std::sort(moved.begin(), moved.end());
      if (moved != image.support) r.equivariance.push_back({e, x, y});
    }
    const Cylinder& back = ca.at(y, x);
    if (back.support != c.support) {
      r.inversion.emplace_back(x, y);
      continue;
    }
    auto forward = decompose_slices(c, m).slices;
    const auto backward = decompose_slices(back, m).slices;
    std::reverse(forward.begin(), forward.end());
    if (forward != backward) r.slice_reversal.emplace_back(x, y);
  }
  return r;
}

}  // namespace ggt
