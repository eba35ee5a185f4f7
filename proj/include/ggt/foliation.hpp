#pragma once

#include "ggt/cylinder.hpp"
#include "ggt/presentation.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ggt {

enum class LeafType { I, II, III };
const char* to_string(LeafType t);

/// Arc inside a cell. Endpoints are marked points, tagged with the side of the
/// cell they sit on; singular arcs have no second endpoint.
struct Arc {
  std::size_t cell = 0;
  std::size_t side_a = 0;
  std::size_t point_a = 0;
  std::optional<std::size_t> side_b;
  std::optional<std::size_t> point_b;
  bool singular() const { return !point_b.has_value(); }
};

struct Leaf {
  std::vector<std::size_t> points;  // sorted
  std::size_t regular_arcs = 0;
  std::size_t singular_arcs = 0;
  LeafType type = LeafType::I;
};

struct Foliation {
  TwoComplex complex;
  bool cover = false;
  Vertex basepoint = 0;
  /// Points of edge e are point_offset[e] .. point_offset[e+1]-1, in ≺ order
  /// along the edge's direction.
  std::vector<std::size_t> point_offset;
  /// Vertex set in X of each point's slice (for the chosen lift).
  std::vector<VertexSet> point_slice;
  std::vector<Arc> arcs;
  /// Per cell: side incidences and singular arcs.
  std::vector<std::size_t> cell_incidences;
  std::vector<std::size_t> cell_unmatched;
  std::vector<std::size_t> leaf_of_point;
  std::vector<Leaf> leaves;
  /// Largest theta over the edge cylinders used.
  int theta = 0;

  std::size_t point_count() const { return point_slice.size(); }
  std::size_t points_on_edge(std::size_t e) const { return point_offset[e + 1] - point_offset[e]; }
  std::size_t edge_of_point(std::size_t p) const;
};

struct FoliationOptions {
  /// Build in the universal cover instead of the quotient.
  bool cover = false;
  /// Use the reversed cylinder on every edge (points listed in the opposite
  /// order); leaves must not change as sets of (edge, slice).
  bool reverse_edges = false;
};

/// Marked points are the slices of C(Φ(i(e)), Φ(t(e))) with Φ(g) = g x.
/// Within a cell, incidences on distinct sides with equal slice sets are
/// paired greedily in boundary order; the rest get singular arcs.
/// Errors (InputError): no 2-cells, action not free on vertices, basepoint
/// out of range, truncated geodesics.
Foliation build_foliation(const PresentationComplex& pc, Vertex basepoint, FoliationOptions options = {});

/// Groups points into leaves by regular arcs and types them. Two-sidedness:
/// a regular arc between sides i and j (directions ε) forces s(p) s(q) = -ε_i ε_j
/// on point co-orientations s = ±1.
void classify_leaves(Foliation& f);

struct BasepointChoice {
  Vertex basepoint = 0;
  /// max over generators a of d(x, a x)
  int max_edge_length = 0;
};

/// Minimizes the longest edge image over all vertices, ties to the lowest index.
BasepointChoice optimize_basepoint(const PresentationComplex& pc);
int max_edge_length(const PresentationComplex& pc, Vertex basepoint);

struct LeafCensus {
  std::size_t type_i = 0, type_ii = 0, type_iii = 0;
  std::vector<std::size_t> points_per_edge;
  /// Points per edge lying on leaves without singular arcs.
  std::vector<std::size_t> regular_points_per_edge;
  std::vector<std::size_t> unmatched_per_cell;
  std::size_t max_unmatched = 0;
  /// ceil(max_unmatched / 3)
  std::size_t epsilon_observed = 0;
  Vertex basepoint = 0;
  int max_edge_length = 0;
  int theta = 0;
  std::size_t cells = 0;

  std::size_t total() const { return type_i + type_ii + type_iii; }
};

LeafCensus census(const Foliation& f, const PresentationComplex& pc);

/// Exact structural checks; each returns the list of offending cells/leaves.
/// Conservation: incidences = 2 regular + singular in every cell.
std::vector<std::size_t> conservation_failures(const Foliation& f);

struct EquivarianceReport {
  bool arcs_invariant = false;
  bool leaves_invariant = false;
  std::size_t cover_leaf_orbits = 0;
  std::size_t quotient_leaves = 0;
  bool counts_match() const { return cover_leaf_orbits == quotient_leaves; }
};

/// Deck translations g -> h g on a cover foliation; compares leaf orbits with
/// the quotient foliation built from the same basepoint.
EquivarianceReport check_deck_equivariance(const Foliation& cover, const Foliation& quotient,
                                           const PresentationComplex& pc);

/// Leaves as sets of (edge, slice vertex set), for orientation comparisons.
std::vector<std::vector<std::pair<std::size_t, VertexSet>>> leaf_signatures(const Foliation& f);

struct DualGraph {
  std::size_t components = 0;
  /// (component, leaf) pairs, sorted and unique.
  std::vector<std::pair<std::size_t, std::size_t>> incidences;
  /// Pairs of regular arcs in one cell whose endpoints interleave.
  std::size_t crossings = 0;
};

/// Complement pieces: vertices, edge segments between consecutive points, and
/// cell regions cut out by regular arcs (boundary pieces with the same
/// separation pattern lie in one region). Components by union-find.
DualGraph foliation_dual_graph(const Foliation& f);

struct BoundCheck {
  std::string name;
  std::string lhs;
  std::string rhs;
  bool holds = false;
};

struct LeafDiagnostics {
  std::vector<BoundCheck> checks;
  Rational leaves_per_cell;
  /// Largest epsilon_observed of triangle_stability over cell corner images.
  std::size_t triangle_epsilon = 0;
};

/// Diagnostics only; a failing bound is reported, never thrown.
LeafDiagnostics leaf_bound_diagnostics(const LeafCensus& c, const Foliation& f, const PresentationComplex& pc);

}  // namespace ggt
