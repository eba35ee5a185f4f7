#pragma once

#include "ggt/finite_group.hpp"

#include <optional>
#include <vector>

namespace ggt {

/// Isomorphism test by matching generator images; returns the image of each
/// element of `a` under some isomorphism a -> b.
std::optional<std::vector<Element>> find_isomorphism(const FiniteGroup& a, const FiniteGroup& b);
bool isomorphic(const FiniteGroup& a, const FiniteGroup& b);

/// Automorphisms of g, each as an element-image vector.
std::vector<std::vector<Element>> automorphisms(const FiniteGroup& g);

/// N x| Z_m with the generator of Z_m acting by `alpha` (alpha^m must be the
/// identity). Elements (n, i) are numbered n * m + i.
FiniteGroup semidirect_with_cyclic(const FiniteGroup& n, std::size_t m, const std::vector<Element>& alpha);
/// Dicyclic group of order 4n.
FiniteGroup dicyclic(std::size_t n);

/// One representative per isomorphism class of groups of order <= max_order
/// (max_order <= 24), ordered by order. Built from cyclic groups, direct
/// products, semidirect products with a cyclic complement, and dicyclic groups.
std::vector<FiniteGroup> small_groups(std::size_t max_order);

}  // namespace ggt
