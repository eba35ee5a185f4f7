#pragma once

#include "ggt/exact.hpp"
#include "ggt/group_action.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ggt {

/// Undirected graph allowing loops and parallel edges.
struct MultiGraph {
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  /// Incidences at v; a loop counts twice.
  std::size_t degree(std::size_t v) const;
  bool connected() const;
};

/// Positive integer or infinity.
struct GroupOrder {
  std::uint64_t value = 1;
  bool infinite = false;

  static GroupOrder finite(std::uint64_t v) { return {v, false}; }
  static GroupOrder infinity() { return {0, true}; }
  /// 1/|G|, with 1/∞ = 0.
  Rational reciprocal() const { return infinite ? Rational(0) : Rational(1, value); }
  std::string str() const { return infinite ? "inf" : std::to_string(value); }
  bool operator==(const GroupOrder&) const = default;
};

class GraphOfGroups {
 public:
  /// Throws InputError unless every edge order is positive and divides each
  /// finite endpoint order.
  GraphOfGroups(MultiGraph graph, std::vector<GroupOrder> vertex_orders, std::vector<std::uint64_t> edge_orders,
                std::vector<std::string> vertex_names = {}, std::vector<std::string> edge_names = {});

  const MultiGraph& graph() const { return graph_; }
  const std::vector<GroupOrder>& vertex_orders() const { return vertex_orders_; }
  const std::vector<std::uint64_t>& edge_orders() const { return edge_orders_; }
  const std::vector<std::string>& vertex_names() const { return vertex_names_; }
  const std::vector<std::string>& edge_names() const { return edge_names_; }

 private:
  MultiGraph graph_;
  std::vector<GroupOrder> vertex_orders_;
  std::vector<std::uint64_t> edge_orders_;
  std::vector<std::string> vertex_names_;
  std::vector<std::string> edge_names_;
};

/// `vertex <name> <order|inf>` lines, then `edge <name> <v1> <v2> <order>`.
GraphOfGroups parse_graph_of_groups(std::string_view text);
std::string serialize_graph_of_groups(const GraphOfGroups& g);

/// Σ_v 1/|G_v| - Σ_e 1/|G_e|.
Rational chi(const GraphOfGroups& g);
/// 1/|G_v| - 1/2 Σ_{e ∋ v} 1/|G_e|, loops counted twice.
Rational chi_plus(const GraphOfGroups& g, std::size_t v);

struct ReducedReport {
  struct Violation {
    std::size_t edge;
    std::size_t vertex;
  };
  std::vector<Violation> violations;
  bool reduced() const { return violations.empty(); }
};

/// A violation is a non-loop edge whose order equals an endpoint's order.
ReducedReport is_reduced(const GraphOfGroups& g);

enum class SignClass {
  Negative,
  Isolated,       // degree 0
  TwoEdges,       // degree 2, two distinct edges, equal orders
  Loop,           // degree 2, one loop, equal orders
  HalfOrderLeaf,  // degree 1, |G_v| = 2 |G_e|
  Unclassified,   // chi_plus = 0 outside the patterns above, or chi_plus > 0
};
const char* to_string(SignClass c);

struct SignReport {
  struct VertexSign {
    Rational chi_plus;
    std::size_t degree = 0;
    SignClass cls = SignClass::Negative;
    /// HalfOrderLeaf only: the other endpoint has the same pattern.
    bool partner_matches = false;
  };
  std::vector<VertexSign> vertices;
  Rational chi;
  /// chi_plus <= 0 at every vertex of degree >= 2.
  bool nonpositive_at_degree_two = false;
  /// Some vertex falls in the Loop or HalfOrderLeaf pattern.
  bool virtually_cyclic_pattern = false;
  std::size_t unclassified = 0;
};

/// Throws InputError on a non-reduced input; throws InvariantViolation if
/// chi differs from Σ chi_plus.
SignReport sign_analysis(const GraphOfGroups& g);

/// Replaces edge e = (u, w) by u - x - w with |G_x| = |G_e| on both halves.
GraphOfGroups subdivide(const GraphOfGroups& g, std::size_t edge);

struct GraphCover {
  MultiGraph base;
  std::size_t sheets = 0;
  std::vector<Perm> voltages;
  /// Vertex (v, i) is v * sheets + i; edge e, sheet i joins (u, i) to (w, σ_e(i)).
  MultiGraph total;
  bool connected = false;
};

/// Throws InputError unless there is one permutation of common degree per edge.
GraphCover build_cover(const MultiGraph& base, std::vector<Perm> voltages);

/// Trivial vertex and edge groups on the given graph.
GraphOfGroups trivial_groups(const MultiGraph& g);

/// `<edgename>: <images>` per edge of the base, in any order.
std::vector<Perm> parse_voltages(std::string_view text, const GraphOfGroups& base);

struct CoverEnumeration {
  std::size_t covers = 0;
  std::size_t connected = 0;
  std::size_t failures = 0;
  /// False when the space was too large and a seeded sample was drawn.
  bool exhaustive = true;
};

/// Covers of the base with `sheets` sheets: spanning-tree voltages fixed to the
/// identity, the first remaining voltage ranging over conjugacy class
/// representatives, the rest over all permutations. Above `limit` voltage
/// tuples, draws `limit` uniform samples from `rng` instead. A connected cover
/// fails if V - E differs from sheets * (V - E) of the base or if some lifted
/// vertex has a different degree from its projection.
CoverEnumeration enumerate_covers(const MultiGraph& base, std::size_t sheets, std::size_t limit, std::mt19937_64& rng);

}  // namespace ggt
