#pragma once

#include "ggt/exact.hpp"
#include "ggt/graph.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ggt {

inline constexpr std::size_t kDefaultSimplexCap = 2'000'000;

/// Simplices stored per dimension as a flat array of strictly increasing
/// vertex tuples in lexicographic order.
class SimplicialComplex {
 public:
  SimplicialComplex(std::size_t vertex_count, int dim_cap);
  /// Closes `simplices` under faces. Throws InputError on repeated or out of
  /// range vertices, or a simplex above the cap.
  static SimplicialComplex from_simplices(std::size_t vertex_count, int dim_cap,
                                          std::vector<std::vector<Vertex>> simplices);

  std::size_t vertex_count() const { return n_; }
  int dim_cap() const { return dim_cap_; }
  /// Highest dimension with at least one simplex.
  int dimension() const;
  std::size_t count(int k) const;
  std::size_t total() const;
  std::span<const Vertex> simplex(int k, std::size_t i) const;
  /// Position of a sorted tuple within dimension k, or count(k) if absent.
  std::size_t index_of(int k, std::span<const Vertex> s) const;

  bool operator==(const SimplicialComplex& o) const = default;

 private:
  friend SimplicialComplex rips_complex(const Metric&, int, int, std::size_t);
  std::size_t n_;
  int dim_cap_;
  std::vector<std::vector<Vertex>> flat_;  // flat_[k]: count(k) * (k + 1) entries
};

/// All vertex subsets of pairwise distance <= d with at most dim_cap + 1
/// vertices. Throws InputError past `simplex_cap` simplices.
SimplicialComplex rips_complex(const Metric& m, int d, int dim_cap, std::size_t simplex_cap = kDefaultSimplexCap);

/// `dim k` header then one simplex per line.
std::string serialize_complex(const SimplicialComplex& sc);
/// Inverse of serialize_complex; the vertex count is one past the largest
/// vertex. Closes under faces. Errors carry line numbers.
SimplicialComplex parse_complex(std::string_view text, int dim_cap);

class IntegerMatrix {
 public:
  IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  static IntegerMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const BigInt& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  bool is_zero() const;

  IntegerMatrix operator*(const IntegerMatrix& rhs) const;
  bool operator==(const IntegerMatrix& o) const = default;

 private:
  std::size_t rows_, cols_;
  std::vector<BigInt> a_;
};

/// Matrix of the boundary from k-simplices (columns) to (k-1)-simplices
/// (rows); the i-th face has sign (-1)^i. Throws InputError unless
/// 1 <= k <= dim_cap.
IntegerMatrix boundary_matrix(const SimplicialComplex& sc, int k);

struct SmithForm {
  /// Nonzero invariant factors, positive, each dividing the next.
  std::vector<BigInt> factors;
  std::size_t rank = 0;
};

SmithForm smith_normal_form(const IntegerMatrix& m);

struct HomologyGroup {
  std::size_t betti = 0;
  std::vector<BigInt> torsion;  // invariant factors > 1
};

struct HomologyResult {
  std::vector<HomologyGroup> degrees;
  /// b0 = 1 and every other group is zero.
  bool reduced_acyclic() const;
};

/// Homology of the chain complex with chain ranks dims[0..] and boundaries
/// boundaries[k-1] = ∂_k : C_k -> C_{k-1}. Computes degrees 0..up_to; needs
/// ∂_{up_to+1}.
HomologyResult chain_homology(const std::vector<std::size_t>& dims, const std::vector<IntegerMatrix>& boundaries,
                              int up_to);
/// Throws InputError unless 0 <= up_to < dim_cap.
HomologyResult homology(const SimplicialComplex& sc, int up_to);

}  // namespace ggt
