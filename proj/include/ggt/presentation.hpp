#pragma once

#include "ggt/group_action.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ggt {

struct Letter {
  std::uint32_t generator = 0;
  bool inverse = false;
  bool operator==(const Letter&) const = default;
};
using Word = std::vector<Letter>;

/// Generators are single lowercase letters; in words an uppercase letter is
/// the inverse of its lowercase generator.
struct Presentation {
  std::vector<char> generators;
  /// Freely and cyclically reduced, nonempty.
  std::vector<Word> relators;

  bool triangular() const;
  std::string word_string(const Word& w) const;
  /// `gens a b; rel ...; rel ...`
  std::string str() const;
};

/// Lines (or `;`-separated parts) `gens <letters...>` and `rel <word>`.
/// Without a gens line the generators are the letters used, alphabetically.
/// Throws InputError on unknown symbols or a relator that reduces to nothing.
Presentation parse_presentation(std::string_view text);

Word free_reduce(const Word& w);
Word cyclic_reduce(const Word& w);

struct Triangulation {
  Presentation presentation;
  /// Fresh generator (index into presentation.generators) and the word in
  /// earlier generators it stands for.
  std::vector<std::pair<std::uint32_t, Word>> definitions;
};

/// Relator a1 a2 ... an (n > 3) becomes a1 a2 B1, b1 a3 B2, ..., b_{n-3}
/// a_{n-1} a_n with fresh generators b_i = a1 ... a_{i+1}, named by the next
/// unused lowercase letters. Shorter relators are kept.
Triangulation triangulate_presentation(const Presentation& p);

/// Adds the defined generators to the action by evaluating their words.
GroupAction extend_action(const GroupAction& a, const Presentation& p,
                          const std::vector<std::pair<std::uint32_t, Word>>& definitions);

/// Evaluates a word to a permutation, reading left to right as a product.
Perm evaluate(const Word& w, const std::vector<Perm>& generator_perms, std::size_t degree);

/// Cell complex with directed edges; a cell lists its boundary sides in order.
struct TwoComplex {
  struct Side {
    std::size_t edge = 0;
    bool forward = true;
    bool operator==(const Side&) const = default;
  };
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // tail, head
  std::vector<std::vector<Side>> cells;

  /// Start vertex of a side in boundary order.
  std::size_t side_start(const Side& s) const { return s.forward ? edges[s.edge].first : edges[s.edge].second; }
  std::size_t side_end(const Side& s) const { return s.forward ? edges[s.edge].second : edges[s.edge].first; }
};

struct PresentationComplex {
  Presentation presentation;
  GroupAction action;
  /// Action element realizing each presentation generator.
  std::vector<std::size_t> generator_element;
  /// One vertex, one loop per generator, one cell per relator.
  TwoComplex base;
  /// Vertices = group elements (action element order); edge g*s + a runs from
  /// g to g a; cell g*t + r is r read from g.
  TwoComplex cover;
  /// Cover counts with each involution's edge pair and square bigon pair
  /// identified.
  std::size_t collapsed_edges = 0;
  std::size_t collapsed_cells = 0;

  std::size_t cover_edge(std::size_t element, std::uint32_t generator) const {
    return element * presentation.generators.size() + generator;
  }
};

/// Errors (InputError): relator longer than 3, generator name missing from the
/// action, a generator acting trivially, a relator not trivial in the group,
/// generators not generating the action's group, nontrivial first homology of
/// the cover.
PresentationComplex cayley_complex(const Presentation& p, const GroupAction& a);

}  // namespace ggt
