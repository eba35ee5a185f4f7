#pragma once

#include "ggt/exact.hpp"
#include "ggt/group_action.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ggt {

using Element = std::uint32_t;
/// Sorted element list of a subgroup.
using Subgroup = std::vector<Element>;

/// Abstract finite group given by its multiplication table. Element 0 is the
/// identity.
class FiniteGroup {
 public:
  /// Validates identity at 0, Latin-square rows/columns and associativity.
  explicit FiniteGroup(std::size_t order, std::vector<Element> table, std::string name = {});
  static FiniteGroup from_action(const GroupAction& a);
  static FiniteGroup cyclic(std::size_t n);
  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

  std::size_t order() const { return n_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  Element mul(Element a, Element b) const { return table_[a * n_ + b]; }
  Element inverse(Element a) const { return inverse_[a]; }
  std::size_t element_order(Element a) const { return element_order_[a]; }

  Subgroup closure(std::span<const Element> gens) const;
  bool is_subgroup(std::span<const Element> sorted_elements) const;
  /// Every subgroup, sorted by (order, elements).
  std::vector<Subgroup> all_subgroups() const;
  /// Greedy generating set, largest element orders first.
  std::vector<Element> generating_set() const;

  /// Left translation on the underlying set, generated by generating_set().
  GroupAction regular_action() const;
  /// Left translation on the Cayley graph for `gens`.
  GroupAction cayley_action(std::span<const Element> gens) const;
  /// Same graph; the acting generators are the left translations by `gens`,
  /// named by `names` (one per generator).
  GroupAction cayley_action(std::span<const Element> gens, const std::vector<std::string>& names) const;
  /// Permutation of the group's elements given by x -> g x.
  Perm left_translation(Element g) const;

  bool operator==(const FiniteGroup& o) const { return n_ == o.n_ && table_ == o.table_; }

 private:
  struct Trusted {};
  FiniteGroup(Trusted, std::size_t order, std::vector<Element> table, std::string name);
  void derive();

  std::size_t n_;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
  std::vector<std::size_t> element_order_;
  std::string name_;
};

struct DoubleCosetReport {
  struct Term {
    Element representative;
    std::size_t double_coset_size = 0;
    std::size_t h_cap_conj_k = 0;  // |H ∩ gKg^-1| = |Stab_H(gK)|
    std::size_t conj_h_cap_k = 0;  // |g^-1 H g ∩ K| = |Stab_K(Hg)|
    std::size_t k_orbit_size = 0;  // size of the K-orbit of Hg in H\G
    Rational term;                 // |K| / |Stab_H(gK)|
  };
  std::vector<Term> terms;
  Rational sum;
  std::size_t index = 0;  // [G:H]
  bool chain_holds = false;
  bool holds = false;
};

/// Throws InputError if H or K is not a subgroup.
DoubleCosetReport double_coset_check(const FiniteGroup& g, const Subgroup& h, const Subgroup& k);
/// Subgroups given by generator names of the action.
DoubleCosetReport double_coset_check(const GroupAction& a, const std::vector<std::string>& h_gens,
                                     const std::vector<std::string>& k_gens);

}  // namespace ggt
