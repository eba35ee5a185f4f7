#include "ggt/foliation.hpp"

#include "ggt/error.hpp"

#include <boost/pending/disjoint_sets.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace ggt {

namespace {

using DisjointSets = boost::disjoint_sets_with_storage<>;

const Graph& require_graph(const PresentationComplex& pc) {
  if (!pc.action.graph()) throw InputError("foliation needs an action on a graph, not a set action");
  return *pc.action.graph();
}

void require_free(const PresentationComplex& pc) {
  if (!verify_free_action(pc.action).free_on_vertices()) {
    throw InputError("the action is not free on vertices");
  }
}

TwoComplex reverse_all(TwoComplex c) {
  for (auto& [tail, head] : c.edges) std::swap(tail, head);
  for (auto& cell : c.cells)
    for (auto& side : cell) side.forward = !side.forward;
  return c;
}

}  // namespace

const char* to_string(LeafType t) {
  switch (t) {
    case LeafType::I: return "I";
    case LeafType::II: return "II";
    case LeafType::III: return "III";
  }
  return "?";
}

std::size_t Foliation::edge_of_point(std::size_t p) const {
  auto it = std::upper_bound(point_offset.begin(), point_offset.end(), p);
  return static_cast<std::size_t>(it - point_offset.begin()) - 1;
}

Foliation build_foliation(const PresentationComplex& pc, Vertex basepoint, FoliationOptions options) {
  if (pc.base.cells.empty()) throw InputError("the presentation complex has no 2-cells; a foliation needs t >= 1");
  const Graph& graph = require_graph(pc);
  if (basepoint >= graph.vertex_count()) throw InputError("basepoint out of range");
  require_free(pc);
  const Metric m = all_pairs_distances(graph);
  const auto& elements = pc.action.elements();
  const std::size_t s = pc.presentation.generators.size();
  const std::size_t n = elements.size();

  Foliation f;
  f.cover = options.cover;
  f.basepoint = basepoint;
  const TwoComplex& chosen = options.cover ? pc.cover : pc.base;
  f.complex = options.reverse_edges ? reverse_all(chosen) : chosen;

  // Slices of each cover edge in the foliation's edge direction.
  std::vector<std::vector<VertexSet>> edge_slices(n * s);
  auto slices_of = [&](std::size_t cover_edge) -> const std::vector<VertexSet>& {
    auto& out = edge_slices[cover_edge];
    if (out.empty()) {
      const auto [tail, head] = pc.cover.edges[cover_edge];
      Vertex from = elements[tail](basepoint), to = elements[head](basepoint);
      if (options.reverse_edges) std::swap(from, to);
      const Cylinder c = build_cylinder(graph, m, from, to);
      f.theta = std::max(f.theta, c.theta);
      out = decompose_slices(c, m).slices;
    }
    return out;
  };

  // Foliation edge e is cover edge e, or base edge e lifted at the identity.
  const std::size_t edge_count = f.complex.edges.size();
  f.point_offset.assign(edge_count + 1, 0);
  for (std::size_t e = 0; e < edge_count; ++e) {
    const auto& sl = slices_of(options.cover ? e : pc.cover_edge(0, static_cast<std::uint32_t>(e)));
    f.point_offset[e + 1] = f.point_offset[e] + sl.size();
    f.point_slice.insert(f.point_slice.end(), sl.begin(), sl.end());
  }

  const std::size_t cell_count = f.complex.cells.size();
  f.cell_incidences.assign(cell_count, 0);
  f.cell_unmatched.assign(cell_count, 0);
  for (std::size_t c = 0; c < cell_count; ++c) {
    // Base cell r is read from the identity: cover cell r.
    const auto& cover_sides = pc.cover.cells[c];
    const auto& sides = f.complex.cells[c];
    struct Incidence {
      std::size_t side, point;
      const VertexSet* slice;
    };
    std::vector<Incidence> incidences;
    for (std::size_t i = 0; i < sides.size(); ++i) {
      const auto& sl = slices_of(cover_sides[i].edge);
      const std::size_t e = sides[i].edge;
      if (sl.size() != f.points_on_edge(e)) throw InvariantViolation("lifted edge has a different slice count");
      for (std::size_t t = 0; t < sl.size(); ++t) {
        const std::size_t j = sides[i].forward ? t : sl.size() - 1 - t;
        incidences.push_back({i, f.point_offset[e] + j, &sl[j]});
      }
    }
    f.cell_incidences[c] = incidences.size();
    std::vector<char> used(incidences.size(), 0);
    for (std::size_t a = 0; a < incidences.size(); ++a) {
      if (used[a]) continue;
      used[a] = 1;
      Arc arc{c, incidences[a].side, incidences[a].point, std::nullopt, std::nullopt};
      for (std::size_t b = a + 1; b < incidences.size(); ++b) {
        if (used[b] || incidences[b].side == incidences[a].side) continue;
        if (*incidences[b].slice != *incidences[a].slice) continue;
        used[b] = 1;
        arc.side_b = incidences[b].side;
        arc.point_b = incidences[b].point;
        break;
      }
      if (arc.singular()) ++f.cell_unmatched[c];
      f.arcs.push_back(arc);
    }
  }
  classify_leaves(f);
  return f;
}

void classify_leaves(Foliation& f) {
  const std::size_t np = f.point_count();
  DisjointSets sets(np);
  for (const Arc& a : f.arcs)
    if (!a.singular()) sets.union_set(a.point_a, *a.point_b);

  std::map<std::size_t, std::size_t> leaf_of_root;
  f.leaf_of_point.assign(np, 0);
  f.leaves.clear();
  for (std::size_t p = 0; p < np; ++p) {
    const std::size_t root = sets.find_set(p);
    auto [it, fresh] = leaf_of_root.emplace(root, f.leaves.size());
    if (fresh) f.leaves.emplace_back();
    f.leaf_of_point[p] = it->second;
    f.leaves[it->second].points.push_back(p);
  }

  // Co-orientation constraints: differ[p] lists (q, must_differ).
  std::vector<std::vector<std::pair<std::size_t, bool>>> constraints(np);
  for (const Arc& a : f.arcs) {
    Leaf& leaf = f.leaves[f.leaf_of_point[a.point_a]];
    if (a.singular()) {
      ++leaf.singular_arcs;
      continue;
    }
    ++leaf.regular_arcs;
    const auto& sides = f.complex.cells[a.cell];
    const bool same_direction = sides[a.side_a].forward == sides[*a.side_b].forward;
    constraints[a.point_a].emplace_back(*a.point_b, same_direction);
    constraints[*a.point_b].emplace_back(a.point_a, same_direction);
  }
  std::vector<int> sign(np, 0);
  std::vector<char> one_sided(f.leaves.size(), 0);
  for (std::size_t start = 0; start < np; ++start) {
    if (sign[start]) continue;
    sign[start] = 1;
    std::deque<std::size_t> queue{start};
    while (!queue.empty()) {
      const std::size_t p = queue.front();
      queue.pop_front();
      for (const auto& [q, differ] : constraints[p]) {
        const int want = differ ? -sign[p] : sign[p];
        if (!sign[q]) {
          sign[q] = want;
          queue.push_back(q);
        } else if (sign[q] != want) {
          one_sided[f.leaf_of_point[p]] = 1;
        }
      }
    }
  }
  for (std::size_t l = 0; l < f.leaves.size(); ++l) {
    Leaf& leaf = f.leaves[l];
    leaf.type = leaf.singular_arcs > 0 ? LeafType::III : one_sided[l] ? LeafType::II : LeafType::I;
  }
}

int max_edge_length(const PresentationComplex& pc, Vertex basepoint) {
  const Graph& graph = require_graph(pc);
  if (basepoint >= graph.vertex_count()) throw InputError("basepoint out of range");
  const Metric m = all_pairs_distances(graph);
  int best = 0;
  for (std::size_t g : pc.generator_element)
    best = std::max(best, m(basepoint, pc.action.elements()[g](basepoint)));
  return best;
}

BasepointChoice optimize_basepoint(const PresentationComplex& pc) {
  const Graph& graph = require_graph(pc);
  require_free(pc);
  const Metric m = all_pairs_distances(graph);
  BasepointChoice best{0, -1};
  for (Vertex x = 0; x < graph.vertex_count(); ++x) {
    int longest = 0;
    for (std::size_t g : pc.generator_element) longest = std::max(longest, m(x, pc.action.elements()[g](x)));
    if (best.max_edge_length < 0 || longest < best.max_edge_length) best = {x, longest};
  }
  return best;
}

LeafCensus census(const Foliation& f, const PresentationComplex& pc) {
  LeafCensus c;
  for (const Leaf& l : f.leaves) {
    switch (l.type) {
      case LeafType::I: ++c.type_i; break;
      case LeafType::II: ++c.type_ii; break;
      case LeafType::III: ++c.type_iii; break;
    }
  }
  for (std::size_t e = 0; e + 1 < f.point_offset.size(); ++e) {
    c.points_per_edge.push_back(f.points_on_edge(e));
    std::size_t regular = 0;
    for (std::size_t p = f.point_offset[e]; p < f.point_offset[e + 1]; ++p)
      if (f.leaves[f.leaf_of_point[p]].type != LeafType::III) ++regular;
    c.regular_points_per_edge.push_back(regular);
  }
  c.unmatched_per_cell = f.cell_unmatched;
  for (auto u : f.cell_unmatched) c.max_unmatched = std::max(c.max_unmatched, u);
  c.epsilon_observed = (c.max_unmatched + 2) / 3;
  c.basepoint = f.basepoint;
  c.max_edge_length = max_edge_length(pc, f.basepoint);
  c.theta = f.theta;
  c.cells = f.complex.cells.size();
  return c;
}

std::vector<std::size_t> conservation_failures(const Foliation& f) {
  std::vector<std::size_t> incidences(f.complex.cells.size(), 0), regular(incidences.size(), 0),
      singular(incidences.size(), 0);
  for (std::size_t c = 0; c < f.complex.cells.size(); ++c)
    for (const auto& side : f.complex.cells[c]) incidences[c] += f.points_on_edge(side.edge);
  for (const Arc& a : f.arcs) ++(a.singular() ? singular : regular)[a.cell];
  std::vector<std::size_t> bad;
  for (std::size_t c = 0; c < incidences.size(); ++c)
    if (incidences[c] != 2 * regular[c] + singular[c] || incidences[c] != f.cell_incidences[c]) bad.push_back(c);
  return bad;
}

EquivarianceReport check_deck_equivariance(const Foliation& cover, const Foliation& quotient,
                                           const PresentationComplex& pc) {
  if (!cover.cover || quotient.cover) throw InputError("expected a cover and a quotient foliation");
  const auto& elements = pc.action.elements();
  const std::size_t n = elements.size();
  const std::size_t s = pc.presentation.generators.size();
  const std::size_t t = pc.presentation.relators.size();
  auto left = [&](std::size_t h, std::size_t g) { return *pc.action.find(elements[h] * elements[g]); };
  // Points of a cover edge are indexed alike in every translate.
  auto move_point = [&](std::size_t h, std::size_t p) {
    const std::size_t e = cover.edge_of_point(p);
    const std::size_t image = left(h, e / s) * s + e % s;
    return cover.point_offset[image] + (p - cover.point_offset[e]);
  };
  using ArcKey = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t>;
  auto key = [](std::size_t cell, std::size_t sa, std::size_t pa, std::size_t sb, std::size_t pb) {
    return ArcKey{cell, sa, pa, sb, pb};
  };
  std::set<ArcKey> arcs;
  for (const Arc& a : cover.arcs)
    arcs.insert(key(a.cell, a.side_a, a.point_a, a.side_b.value_or(~std::size_t{0}), a.point_b.value_or(~std::size_t{0})));

  EquivarianceReport r;
  r.arcs_invariant = true;
  r.leaves_invariant = true;
  for (std::size_t h = 0; h < n; ++h) {
    for (const Arc& a : cover.arcs) {
      const std::size_t cell = left(h, a.cell / t) * t + a.cell % t;
      const auto k = a.singular() ? key(cell, a.side_a, move_point(h, a.point_a), ~std::size_t{0}, ~std::size_t{0})
                                  : key(cell, a.side_a, move_point(h, a.point_a), *a.side_b, move_point(h, *a.point_b));
      if (!arcs.count(k)) r.arcs_invariant = false;
    }
    for (const Leaf& l : cover.leaves) {
      const std::size_t target = cover.leaf_of_point[move_point(h, l.points.front())];
      for (std::size_t p : l.points)
        if (cover.leaf_of_point[move_point(h, p)] != target) r.leaves_invariant = false;
    }
  }
  std::vector<char> seen(cover.leaves.size(), 0);
  for (std::size_t l = 0; l < cover.leaves.size(); ++l) {
    if (seen[l]) continue;
    ++r.cover_leaf_orbits;
    for (std::size_t h = 0; h < n; ++h) seen[cover.leaf_of_point[move_point(h, cover.leaves[l].points.front())]] = 1;
  }
  r.quotient_leaves = quotient.leaves.size();
  return r;
}

std::vector<std::vector<std::pair<std::size_t, VertexSet>>> leaf_signatures(const Foliation& f) {
  std::vector<std::vector<std::pair<std::size_t, VertexSet>>> out;
  for (const Leaf& l : f.leaves) {
    std::vector<std::pair<std::size_t, VertexSet>> sig;
    for (std::size_t p : l.points) sig.emplace_back(f.edge_of_point(p), f.point_slice[p]);
    std::sort(sig.begin(), sig.end());
    out.push_back(std::move(sig));
  }
  std::sort(out.begin(), out.end());
  return out;
}

DualGraph foliation_dual_graph(const Foliation& f) {
  const TwoComplex& cx = f.complex;
  const std::size_t edge_count = cx.edges.size();
  // Piece ids: vertices, then edge segments, then cell regions.
  std::vector<std::size_t> seg_offset(edge_count + 1, cx.vertex_count);
  for (std::size_t e = 0; e < edge_count; ++e) seg_offset[e + 1] = seg_offset[e] + f.points_on_edge(e) + 1;
  std::vector<std::pair<std::size_t, std::size_t>> unions;
  std::size_t pieces = seg_offset[edge_count];
  for (std::size_t e = 0; e < edge_count; ++e) {
    unions.emplace_back(cx.edges[e].first, seg_offset[e]);
    unions.emplace_back(cx.edges[e].second, seg_offset[e] + f.points_on_edge(e));
  }

  DualGraph d;
  std::vector<std::vector<const Arc*>> cell_arcs(cx.cells.size());
  for (const Arc& a : f.arcs)
    if (!a.singular()) cell_arcs[a.cell].push_back(&a);
  for (std::size_t c = 0; c < cx.cells.size(); ++c) {
    // Boundary in order: corner, then segments and points of each side.
    struct Element {
      std::size_t piece;
    };
    std::vector<Element> boundary;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> position;  // (side, point) -> index
    for (std::size_t i = 0; i < cx.cells[c].size(); ++i) {
      const auto& side = cx.cells[c][i];
      const std::size_t m = f.points_on_edge(side.edge);
      boundary.push_back({cx.side_start(side)});
      for (std::size_t t = 0; t <= m; ++t) {
        boundary.push_back({seg_offset[side.edge] + (side.forward ? t : m - t)});
        if (t < m) {
          const std::size_t j = side.forward ? t : m - 1 - t;
          position[{i, f.point_offset[side.edge] + j}] = boundary.size();
          boundary.push_back({~std::size_t{0}});
        }
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> chords;
    for (const Arc* a : cell_arcs[c]) {
      std::size_t x = position.at({a->side_a, a->point_a});
      std::size_t y = position.at({*a->side_b, *a->point_b});
      if (x > y) std::swap(x, y);
      chords.emplace_back(x, y);
    }
    for (std::size_t i = 0; i < chords.size(); ++i)
      for (std::size_t j = i + 1; j < chords.size(); ++j) {
        const auto [a, b] = chords[i];
        const auto [p, q] = chords[j];
        if ((a < p && p < b && b < q) || (p < a && a < q && q < b)) ++d.crossings;
      }
    std::map<std::vector<bool>, std::size_t> region;
    for (std::size_t k = 0; k < boundary.size(); ++k) {
      if (boundary[k].piece == ~std::size_t{0}) continue;
      std::vector<bool> sig(chords.size());
      for (std::size_t i = 0; i < chords.size(); ++i) sig[i] = chords[i].first < k && k < chords[i].second;
      auto [it, fresh] = region.emplace(std::move(sig), pieces);
      if (fresh) ++pieces;
      unions.emplace_back(boundary[k].piece, it->second);
    }
  }

  DisjointSets sets(pieces);
  for (const auto& [a, b] : unions) sets.union_set(a, b);
  std::map<std::size_t, std::size_t> label;
  std::vector<std::size_t> component(pieces);
  for (std::size_t p = 0; p < pieces; ++p) {
    auto [it, fresh] = label.emplace(sets.find_set(p), label.size());
    component[p] = it->second;
  }
  d.components = label.size();
  std::set<std::pair<std::size_t, std::size_t>> inc;
  for (std::size_t e = 0; e < edge_count; ++e)
    for (std::size_t j = 0; j < f.points_on_edge(e); ++j) {
      const std::size_t leaf = f.leaf_of_point[f.point_offset[e] + j];
      inc.emplace(component[seg_offset[e] + j], leaf);
      inc.emplace(component[seg_offset[e] + j + 1], leaf);
    }
  d.incidences.assign(inc.begin(), inc.end());
  return d;
}

LeafDiagnostics leaf_bound_diagnostics(const LeafCensus& c, const Foliation& f, const PresentationComplex& pc) {
  LeafDiagnostics d;
  const Graph& graph = require_graph(pc);
  const Metric m = all_pairs_distances(graph);
  const auto& elements = pc.action.elements();

  // Corner images of each triangular cell lifted at the identity.
  CylinderAssignment ca(graph.vertex_count());
  std::vector<std::array<Vertex, 3>> triangles;
  for (std::size_t r = 0; r < pc.base.cells.size(); ++r) {
    const auto& sides = pc.cover.cells[r];
    if (sides.size() != 3) continue;
    std::array<Vertex, 3> corner{};
    for (std::size_t i = 0; i < 3; ++i) corner[i] = elements[pc.cover.side_start(sides[i])](f.basepoint);
    triangles.push_back(corner);
    for (Vertex u : corner)
      for (Vertex v : corner)
        if (!ca.find(u, v)) ca.set(build_cylinder(graph, m, u, v));
  }
  for (const auto& t : triangles)
    for (std::size_t rot = 0; rot < 3; ++rot) {
      const auto r = triangle_stability(ca, m, t[rot], t[(rot + 2) % 3], t[(rot + 1) % 3]);
      d.triangle_epsilon = std::max(d.triangle_epsilon, r.epsilon_observed);
    }

  const std::size_t t = c.cells;
  d.checks.push_back({"type_iii_le_3eps_t", std::to_string(c.type_iii), std::to_string(3 * c.epsilon_observed * t),
                      c.type_iii <= 3 * c.epsilon_observed * t});
  d.checks.push_back({"type_iii_le_max_unmatched_t", std::to_string(c.type_iii), std::to_string(c.max_unmatched * t),
                      c.type_iii <= c.max_unmatched * t});
  std::size_t max_regular = 0;
  for (auto v : c.regular_points_per_edge) max_regular = std::max(max_regular, v);
  const std::size_t theta_bound = 10 * static_cast<std::size_t>(c.theta) * static_cast<std::size_t>(c.theta);
  d.checks.push_back({"regular_points_per_edge_le_10theta2", std::to_string(max_regular), std::to_string(theta_bound),
                      max_regular <= theta_bound});
  d.checks.push_back({"unmatched_per_cell_le_3eps_triangle", std::to_string(c.max_unmatched),
                      std::to_string(3 * d.triangle_epsilon), c.max_unmatched <= 3 * d.triangle_epsilon});
  d.leaves_per_cell = t ? Rational(c.total(), t) : Rational(0);
  return d;
}

}  // namespace ggt
