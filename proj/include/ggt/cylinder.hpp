#pragma once

#include "ggt/graph.hpp"
#include "ggt/group_action.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace ggt {

/// Union of all geodesics from x to y. theta is the least integer with
/// gamma ⊆ support ⊆ N_theta(gamma) for every geodesic gamma.
struct Cylinder {
  Vertex x = 0;
  Vertex y = 0;
  VertexSet support;
  int theta = 0;

  bool contains(Vertex v) const;
  bool operator==(const Cylinder&) const = default;
};

/// Throws InputError if gs is truncated.
Cylinder build_cylinder(const Metric& m, const GeodesicSet& gs);
Cylinder build_cylinder(const Graph& g, const Metric& m, Vertex x, Vertex y,
                        std::size_t cap = kDefaultGeodesicCap);
/// Same support and theta, endpoints swapped.
Cylinder reversed(const Cylinder& c);

/// {w in C : d(w,x) <= d(u,x), d(u,w) >= 5 theta}. Throws InputError if u is
/// not in the support.
VertexSet left_set(const Cylinder& c, const Metric& m, Vertex u);
/// Mirror of left_set with y in place of x.
VertexSet right_set(const Cylinder& c, const Metric& m, Vertex u);

/// |L(u)-L(v)| - |L(v)-L(u)| + |R(v)-R(u)| - |R(u)-R(v)| from explicit sets.
std::int64_t difference(const Cylinder& c, const Metric& m, Vertex u, Vertex v);

struct SliceDecomposition {
  Cylinder cylinder;
  /// Ordered by ≺; each slice sorted.
  std::vector<VertexSet> slices;
  /// diff_table[i * k + j] = diff(support[i], support[j]), k = support size.
  std::vector<std::int64_t> diff_table;

  std::int64_t diff(Vertex u, Vertex v) const;
  std::size_t slice_of(Vertex u) const;
};

/// Throws InvariantViolation if diff = 0 is not an equivalence relation or the
/// sign of diff does not induce a linear order on the classes.
SliceDecomposition decompose_slices(const Cylinder& c, const Metric& m);

/// Cylinders keyed by ordered endpoint pair.
class CylinderAssignment {
 public:
  explicit CylinderAssignment(std::size_t vertex_count) : n_(vertex_count) {}

  std::size_t vertex_count() const { return n_; }
  void set(Cylinder c);
  const Cylinder* find(Vertex x, Vertex y) const;
  /// Throws InputError if the pair is missing.
  const Cylinder& at(Vertex x, Vertex y) const;
  const std::map<std::pair<Vertex, Vertex>, Cylinder>& cylinders() const { return cylinders_; }
  /// Maximum theta over all assigned cylinders.
  int global_theta() const;

 private:
  std::size_t n_;
  std::map<std::pair<Vertex, Vertex>, Cylinder> cylinders_;
};

/// Geodesic-union cylinders on the given pairs, or on all ordered pairs.
CylinderAssignment geodesic_union_assignment(const Graph& g, const Metric& m,
                                             const std::optional<std::vector<std::pair<Vertex, Vertex>>>& pairs = {});

struct StabilityReport {
  Vertex x = 0, y = 0, z = 0;
  std::size_t tau_observed = 0;
  std::size_t epsilon_observed = 0;
  /// Prefix length in C(x,y) (triangle_stability only).
  std::size_t k_split = 0;
  /// Ball radius actually used, floor((y.z)_x) (measure_tau_stability only).
  std::int64_t radius = 0;
  HalfInt gromov;
  /// Exceptional vertices F, or indices of unmatched slices of C(x,y).
  std::vector<Vertex> witnesses;
};

/// For each split k, matches the first k slices of C(x,y) against the first k
/// of C(x,z) and the last n-k against the last n-k of C(z,y), each by longest
/// common subsequence of equal vertex sets. Keeps the best k, ties to the
/// largest.
StabilityReport triangle_stability(const CylinderAssignment& ca, const Metric& m, Vertex x, Vertex y,
                                   Vertex z);

/// F = (C(x,y) ∩ B) Δ (C(x,z) ∩ B), B the ball of radius floor((y.z)_x) at x.
StabilityReport measure_tau_stability(const CylinderAssignment& ca, const Metric& m, Vertex x, Vertex y,
                                      Vertex z);

struct SymmetryReport {
  struct EquivarianceViolation {
    std::size_t element;
    Vertex x, y;
  };
  std::vector<EquivarianceViolation> equivariance;
  /// Pairs whose reversed support differs.
  std::vector<std::pair<Vertex, Vertex>> inversion;
  /// Pairs whose reversed slices are not the slices in reverse order.
  std::vector<std::pair<Vertex, Vertex>> slice_reversal;
  std::size_t pairs_checked = 0;
  bool clean() const { return equivariance.empty() && inversion.empty() && slice_reversal.empty(); }
};

/// Checks g C(x,y) = C(gx,gy) and C(y,x) = reversed C(x,y) over every
/// assigned pair. Throws InputError if an image or reversed pair is missing.
SymmetryReport check_assignment_symmetries(const CylinderAssignment& ca, const Metric& m,
                                           const GroupAction& action);

}  // namespace ggt
