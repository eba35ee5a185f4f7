#pragma once

#include "ggt/exact.hpp"
#include "ggt/graph.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ggt {

/// Bijection of {0..n-1}. Composition is right-to-left: (p * q)(i) = p(q(i)).
class Perm {
 public:
  Perm() = default;
  /// Throws InputError unless `images` is a permutation of 0..n-1.
  explicit Perm(std::vector<std::uint32_t> images);
  static Perm identity(std::size_t degree);

  std::size_t degree() const { return images_.size(); }
  std::uint32_t operator()(std::uint32_t i) const { return images_[i]; }
  const std::vector<std::uint32_t>& images() const { return images_; }

  Perm operator*(const Perm& rhs) const;
  Perm inverse() const;
  bool is_identity() const;

  auto operator<=>(const Perm&) const = default;
  bool operator==(const Perm&) const = default;

 private:
  std::vector<std::uint32_t> images_;
};

std::string to_string(const Perm& p);

struct NamedPerm {
  std::string name;
  Perm perm;
};

/// A finite permutation group acting either on the vertices of a graph (by
/// automorphisms) or on a bare set of points.
class GroupAction {
 public:
  std::size_t point_count() const { return points_; }
  /// Null in set mode.
  const Graph* graph() const { return graph_.get(); }
  std::shared_ptr<const Graph> shared_graph() const { return graph_; }

  const std::vector<NamedPerm>& generators() const { return generators_; }
  const Perm* generator(std::string_view name) const;

  /// Shortlex order over generator words; elements()[0] is the identity.
  const std::vector<Perm>& elements() const { return elements_; }
  std::size_t order() const { return elements_.size(); }
  std::optional<std::size_t> find(const Perm& p) const;
  /// Shortlex-minimal generator word (indices into generators()).
  const std::vector<std::uint32_t>& word(std::size_t element) const { return words_[element]; }

 private:
  friend GroupAction build_action(std::shared_ptr<const Graph>, std::size_t, std::vector<NamedPerm>,
                                  std::size_t);
  std::shared_ptr<const Graph> graph_;
  std::size_t points_ = 0;
  std::vector<NamedPerm> generators_;
  std::vector<Perm> elements_;
  std::vector<std::vector<std::uint32_t>> words_;
  std::map<Perm, std::size_t> index_;
};

inline constexpr std::size_t kDefaultOrderCap = 100'000;

/// Breadth-first closure. Errors: generator not an automorphism, degree
/// mismatch, closure larger than order_cap.
GroupAction generate_group(std::shared_ptr<const Graph> graph, std::vector<NamedPerm> gens,
                           std::size_t order_cap = kDefaultOrderCap);
/// Set action on point_count points (no adjacency to preserve).
GroupAction generate_set_group(std::size_t point_count, std::vector<NamedPerm> gens,
                               std::size_t order_cap = kDefaultOrderCap);

/// Parses the action file format (`perm <name>: <images>`, `graph: <path>` or
/// `set: <n>`). Graph paths are resolved relative to base_dir.
GroupAction parse_action(std::string_view text, const std::string& base_dir);

struct FreenessReport {
  struct VertexFix {
    std::size_t element;
    Vertex vertex;
  };
  struct EdgeFix {
    std::size_t element;
    Edge edge;
  };
  std::vector<VertexFix> vertex_fixers;
  std::vector<EdgeFix> edge_fixers;    // non-identity, both endpoints fixed
  std::vector<EdgeFix> edge_inverters; // non-identity, endpoints swapped
  bool free_on_vertices() const { return vertex_fixers.empty(); }
  bool free_on_edges() const { return edge_fixers.empty() && edge_inverters.empty(); }
};

FreenessReport verify_free_action(const GroupAction& a);

struct OrbitReport {
  struct Orbit {
    std::vector<std::uint32_t> members;  // vertices, or edge indices into graph()->edges()
    std::size_t stabilizer_order = 0;
  };
  std::vector<Orbit> vertex_orbits;
  std::vector<Orbit> edge_orbits;  // empty in set mode
  /// Number of orbits per cell dimension (Vol_X).
  std::vector<std::size_t> volume;
  /// Sum of 1/|stabilizer| per dimension.
  std::vector<Rational> v_by_dimension;
  /// V_X on the vertex (point) set.
  Rational v_invariant;
};

OrbitReport orbit_volume(const GroupAction& a);

struct MultiplicativityReport {
  Rational v_group;
  Rational v_subgroup;
  std::size_t index = 0;
  bool holds = false;
  /// Same identity per cell dimension for Vol_X; only meaningful when both
  /// actions are free.
  bool volume_holds = false;
};

/// Throws InputError if a subgroup generator is not in the group.
MultiplicativityReport check_v_multiplicativity(const GroupAction& a,
                                                const std::vector<NamedPerm>& subgroup_gens);

}  // namespace ggt
