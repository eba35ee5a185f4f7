#pragma once

#include "ggt/exact.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ggt {

using IntRows = std::vector<std::vector<BigInt>>;

/// Finite-index subgroup of Z^n, stored as its row Hermite normal form:
/// upper triangular, positive pivots, entries above a pivot in [0, pivot).
class IntegerLattice {
 public:
  /// Throws InputError unless `basis` is square and nonsingular.
  static IntegerLattice from_basis(const IntRows& basis);
  static IntegerLattice standard(std::size_t rank);

  std::size_t rank() const { return basis_.size(); }
  const IntRows& basis() const { return basis_; }
  /// [Z^n : L], the product of the pivots.
  BigInt index() const;
  bool contains(const std::vector<BigInt>& v) const;
  bool contains(const IntegerLattice& sub) const;
  std::string str() const;

  bool operator==(const IntegerLattice&) const = default;

 private:
  IntRows basis_;
};

/// Row HNF of a nonsingular square integer matrix. Throws InputError on
/// singular or non-square input.
IntRows hnf(IntRows m);

/// Invertible n x n rational matrix acting on row vectors, v -> v M.
class RationalMatrix {
 public:
  /// Throws InputError unless square and nonsingular.
  explicit RationalMatrix(std::vector<std::vector<Rational>> entries);
  static RationalMatrix identity(std::size_t n);

  std::size_t size() const { return a_.size(); }
  const std::vector<std::vector<Rational>>& entries() const { return a_; }
  Rational determinant() const;
  RationalMatrix inverse() const;
  std::vector<Rational> apply(const std::vector<Rational>& row) const;
  std::string str() const;

 private:
  std::vector<std::vector<Rational>> a_;
};

/// One row per line, entries `p` or `p/q`; `#` comments. Errors carry line numbers.
RationalMatrix parse_rational_matrix(std::string_view text);
/// One integer row per line; the lattice spanned by the rows.
IntegerLattice parse_lattice(std::string_view text);

/// Throws InputError on rank mismatch.
IntegerLattice lattice_intersect(const IntegerLattice& l1, const IntegerLattice& l2);
/// L M. Throws InputError if the image is not integral.
IntegerLattice lattice_image(const RationalMatrix& phi, const IntegerLattice& l);
/// {v in domain : v M in L}. Throws InputError unless domain M is integral.
IntegerLattice lattice_preimage(const RationalMatrix& phi, const IntegerLattice& l, const IntegerLattice& domain);
/// Largest sublattice of Z^n with integral image: Z^n ∩ Z^n M^-1.
IntegerLattice integral_domain(const RationalMatrix& phi);
/// [super : sub]; throws InputError unless sub ⊆ super.
BigInt relative_index(const IntegerLattice& super, const IntegerLattice& sub);

struct TowerLevel {
  IntegerLattice a_lattice;
  IntegerLattice b_lattice;
  IntegerLattice a_cap_b;
  BigInt a, b;        // [A_{i-1} : A_i], [B_{i-1} : B_i] with A_0 = B_0 = Z^n
  BigInt abar, bbar;  // a_1 ... a_i, b_1 ... b_i
};

struct CommPowerSequence {
  std::vector<TowerLevel> levels;
};

/// A_1 = A, B_1 = B, A_i = φ^-1(B ∩ A_{i-1}), B_i = φ(A ∩ B_{i-1}).
/// Throws InputError if φ(A) != B or depth == 0; throws InvariantViolation if
/// any index identity, monotonicity, or containment check fails.
CommPowerSequence power_sequence(const RationalMatrix& phi, const IntegerLattice& a, const IntegerLattice& b,
                                 std::size_t depth);

struct RatioSearchResult {
  /// False when a_1 = b_1, so the ratio is constant.
  bool applicable = false;
  /// The inverse tower (φ^-1 from B to A) was used because b_1 < a_1.
  bool inverse = false;
  std::optional<std::size_t> n;
  BigInt abar, bbar;
  std::size_t depth_reached = 0;
};

/// Smallest n <= cap with bbar_n / abar_n > lambda (on the tower whose first
/// ratio exceeds 1).
RatioSearchResult ratio_search(const RationalMatrix& phi, const IntegerLattice& a, const IntegerLattice& b,
                               const Rational& lambda, std::size_t cap);

}  // namespace ggt
