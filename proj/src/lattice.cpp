#include "ggt/lattice.hpp"

#include "ggt/error.hpp"

#include <boost/integer/common_factor.hpp>

#include <sstream>
#include <utility>

namespace ggt {

namespace {

// (g, s, t) with s a + t b = g = gcd(a, b) >= 0.
void ext_gcd(const BigInt& a, const BigInt& b, BigInt& g, BigInt& s, BigInt& t) {
  BigInt r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    const BigInt q = r0 / r1;
    r0 -= q * r1;
    std::swap(r0, r1);
    s0 -= q * s1;
    std::swap(s0, s1);
    t0 -= q * t1;
    std::swap(t0, t1);
  }
  if (r0 < 0) {
    r0 = -r0;
    s0 = -s0;
    t0 = -t0;
  }
  g = r0;
  s = s0;
  t = t0;
}

void check_square(const IntRows& m) {
  for (const auto& row : m)
    if (row.size() != m.size()) throw InputError("lattice basis must be a square matrix");
  if (m.empty()) throw InputError("lattice basis must be nonempty");
}

BigInt common_denominator(const RationalMatrix& phi) {
  BigInt d = 1;
  for (const auto& row : phi.entries())
    for (const auto& x : row) {
      const BigInt q = boost::multiprecision::denominator(x);
      d = d / boost::integer::gcd(d, q) * q;
    }
  return d;
}

// Rows of L M; nullopt if some entry is not an integer.
std::optional<IntRows> image_rows(const RationalMatrix& phi, const IntRows& rows) {
  IntRows out;
  for (const auto& r : rows) {
    std::vector<Rational> v(r.begin(), r.end());
    std::vector<BigInt> w;
    for (const auto& x : phi.apply(v)) {
      if (boost::multiprecision::denominator(x) != 1) return std::nullopt;
      w.push_back(boost::multiprecision::numerator(x));
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

IntRows hnf(IntRows m) {
  check_square(m);
  const std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = n;
    for (std::size_t r = c; r < n; ++r)
      if (m[r][c] != 0) {
        pivot = r;
        break;
      }
    if (pivot == n) throw InputError("lattice basis is singular");
    std::swap(m[c], m[pivot]);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      BigInt g, s, t;
      ext_gcd(m[c][c], m[r][c], g, s, t);
      const BigInt u = m[c][c] / g, v = m[r][c] / g;
      // Unimodular: [s t; -v u] has determinant s u + t v = 1.
      for (std::size_t j = c; j < n; ++j) {
        const BigInt top = s * m[c][j] + t * m[r][j];
        const BigInt bottom = u * m[r][j] - v * m[c][j];
        m[c][j] = top;
        m[r][j] = bottom;
      }
    }
    if (m[c][c] < 0)
      for (auto& x : m[c]) x = -x;
  }
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < c; ++r) {
      const BigInt q = floor_div(m[r][c], m[c][c]);
      if (q != 0)
        for (std::size_t j = c; j < n; ++j) m[r][j] -= q * m[c][j];
    }
  return m;
}

IntegerLattice IntegerLattice::from_basis(const IntRows& basis) {
  IntegerLattice l;
  l.basis_ = hnf(basis);
  return l;
}

IntegerLattice IntegerLattice::standard(std::size_t rank) {
  if (rank == 0) throw InputError("lattice rank must be positive");
  IntRows id(rank, std::vector<BigInt>(rank, 0));
  for (std::size_t i = 0; i < rank; ++i) id[i][i] = 1;
  return from_basis(id);
}

BigInt IntegerLattice::index() const {
  BigInt p = 1;
  for (std::size_t i = 0; i < rank(); ++i) p *= basis_[i][i];
  return p;
}

bool IntegerLattice::contains(const std::vector<BigInt>& v) const {
  if (v.size() != rank()) throw InputError("vector length differs from lattice rank");
  // Forward substitution through the upper-triangular basis.
  std::vector<BigInt> rest = v;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (rest[i] % basis_[i][i] != 0) return false;
    const BigInt x = rest[i] / basis_[i][i];
    for (std::size_t j = i; j < rank(); ++j) rest[j] -= x * basis_[i][j];
  }
  return true;
}

bool IntegerLattice::contains(const IntegerLattice& sub) const {
  if (sub.rank() != rank()) throw InputError("lattice rank mismatch");
  for (const auto& row : sub.basis_)
    if (!contains(row)) return false;
  return true;
}

std::string IntegerLattice::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < rank(); ++i) {
    out += i ? ",[" : "[";
    for (std::size_t j = 0; j < rank(); ++j) out += (j ? "," : "") + to_string(basis_[i][j]);
    out += "]";
  }
  return out + "]";
}

RationalMatrix::RationalMatrix(std::vector<std::vector<Rational>> entries) : a_(std::move(entries)) {
  if (a_.empty()) throw InputError("matrix must be nonempty");
  for (const auto& row : a_)
    if (row.size() != a_.size()) throw InputError("matrix must be square");
  if (determinant() == 0) throw InputError("matrix is singular");
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  std::vector<std::vector<Rational>> id(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return RationalMatrix(std::move(id));
}

Rational RationalMatrix::determinant() const {
  auto m = a_;
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      const Rational f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

RationalMatrix RationalMatrix::inverse() const {
  const std::size_t n = size();
  auto m = a_;
  auto inv = identity(n).a_;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (m[p][c] == 0) ++p;
    std::swap(m[p], m[c]);
    std::swap(inv[p], inv[c]);
    const Rational pivot = m[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      m[c][j] /= pivot;
      inv[c][j] /= pivot;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] -= f * m[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return RationalMatrix(std::move(inv));
}

std::vector<Rational> RationalMatrix::apply(const std::vector<Rational>& row) const {
  if (row.size() != size()) throw InputError("vector length differs from matrix size");
  std::vector<Rational> out(size(), 0);
  for (std::size_t i = 0; i < size(); ++i)
    if (row[i] != 0)
      for (std::size_t j = 0; j < size(); ++j) out[j] += row[i] * a_[i][j];
  return out;
}

std::string RationalMatrix::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < size(); ++i) {
    out += i ? ",[" : "[";
    for (std::size_t j = 0; j < size(); ++j) out += (j ? "," : "") + to_string(a_[i][j]);
    out += "]";
  }
  return out + "]";
}

namespace {

std::vector<std::vector<Rational>> parse_rows(std::string_view text) {
  std::vector<std::vector<Rational>> rows;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ls(raw);
    std::string tok;
    std::vector<Rational> row;
    while (ls >> tok) {
      if (tok.front() == '#') break;
      try {
        row.push_back(parse_rational(tok));
      } catch (const InputError& e) {
        throw InputError("line " + std::to_string(line) + ": " + e.what());
      }
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError("line " + std::to_string(line) + ": row length " + std::to_string(row.size()) +
                       " differs from " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("matrix file has no rows");
  return rows;
}

}  // namespace

RationalMatrix parse_rational_matrix(std::string_view text) { return RationalMatrix(parse_rows(text)); }

IntegerLattice parse_lattice(std::string_view text) {
  IntRows rows;
  for (const auto& r : parse_rows(text)) {
    std::vector<BigInt> row;
    for (const auto& x : r) {
      if (boost::multiprecision::denominator(x) != 1) throw InputError("lattice entries must be integers");
      row.push_back(boost::multiprecision::numerator(x));
    }
    rows.push_back(std::move(row));
  }
  return IntegerLattice::from_basis(rows);
}

IntegerLattice lattice_intersect(const IntegerLattice& l1, const IntegerLattice& l2) {
  if (l1.rank() != l2.rank()) throw InputError("lattice rank mismatch");
  const std::size_t n = l1.rank();
  // Rows (x B1 + y B2, x B1); the HNF rows with zero left half span (0, L1 ∩ L2).
  IntRows m(2 * n, std::vector<BigInt>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m[i][j] = l1.basis()[i][j];
      m[i][n + j] = l1.basis()[i][j];
      m[n + i][j] = l2.basis()[i][j];
    }
  const IntRows h = hnf(std::move(m));
  IntRows cap(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (h[n + i][j] != 0) throw InvariantViolation("intersection HNF has a nonzero left block");
    cap[i].assign(h[n + i].begin() + static_cast<std::ptrdiff_t>(n), h[n + i].end());
  }
  return IntegerLattice::from_basis(cap);
}

IntegerLattice lattice_image(const RationalMatrix& phi, const IntegerLattice& l) {
  if (phi.size() != l.rank()) throw InputError("matrix size differs from lattice rank");
  auto rows = image_rows(phi, l.basis());
  if (!rows) throw InputError("image of the lattice is not integral");
  return IntegerLattice::from_basis(*rows);
}

IntegerLattice lattice_preimage(const RationalMatrix& phi, const IntegerLattice& l, const IntegerLattice& domain) {
  if (phi.size() != domain.rank()) throw InputError("matrix size differs from lattice rank");
  auto rows = image_rows(phi, domain.basis());
  if (!rows) throw InputError("map is not defined on the domain: non-integral image");
  const IntegerLattice cap = lattice_intersect(IntegerLattice::from_basis(*rows), l);
  auto back = image_rows(phi.inverse(), cap.basis());
  if (!back) throw InvariantViolation("preimage of an image sublattice is not integral");
  return IntegerLattice::from_basis(*back);
}

IntegerLattice integral_domain(const RationalMatrix& phi) {
  // e Z^n M^-1 is integral for e the denominator of M^-1; divide (e Z^n ∩ it) by e.
  const RationalMatrix inv = phi.inverse();
  const BigInt e = common_denominator(inv);
  const std::size_t n = phi.size();
  IntRows scaled(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled[i][j] = boost::multiprecision::numerator(Rational(inv.entries()[i][j] * e));
  IntRows ez(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i) ez[i][i] = e;
  IntRows cap = lattice_intersect(IntegerLattice::from_basis(ez), IntegerLattice::from_basis(scaled)).basis();
  for (auto& row : cap)
    for (auto& x : row) {
      if (x % e != 0) throw InvariantViolation("scaled domain basis is not divisible by its scale");
      x /= e;
    }
  return IntegerLattice::from_basis(cap);
}

BigInt relative_index(const IntegerLattice& super, const IntegerLattice& sub) {
  if (!super.contains(sub)) throw InputError("lattice is not a sublattice");
  return sub.index() / super.index();
}

namespace {

class Tower {
 public:
  Tower(const RationalMatrix& phi, const IntegerLattice& a, const IntegerLattice& b) : phi_(phi), a_(a), b_(b) {
    if (phi.size() != a.rank() || a.rank() != b.rank()) throw InputError("matrix and lattice ranks differ");
    if (!(lattice_image(phi, a) == b)) throw InputError("phi does not carry A onto B");
  }

  const TowerLevel& step() {
    if (levels_.empty()) {
      levels_.push_back({a_, b_, lattice_intersect(a_, b_), a_.index(), b_.index(), a_.index(), b_.index()});
    } else {
      const TowerLevel& prev = levels_.back();
      IntegerLattice an = lattice_preimage(phi_, lattice_intersect(b_, prev.a_lattice), a_);
      IntegerLattice bn = lattice_image(phi_, lattice_intersect(a_, prev.b_lattice));
      if (!prev.a_lattice.contains(an) || !prev.b_lattice.contains(bn)) {
        throw InvariantViolation("tower is not decreasing at level " + std::to_string(levels_.size() + 1));
      }
      const BigInt ai = relative_index(prev.a_lattice, an);
      const BigInt bi = relative_index(prev.b_lattice, bn);
      const std::string at = " at level " + std::to_string(levels_.size() + 1);
      if (ai > prev.a || bi > prev.b) throw InvariantViolation("relative indices increase" + at);
      if (prev.a * bi != prev.b * ai) throw InvariantViolation("a_i b_{i+1} != b_i a_{i+1}" + at);
      IntegerLattice cap = lattice_intersect(an, bn);
      levels_.push_back({std::move(an), std::move(bn), std::move(cap), ai, bi, prev.abar * ai, prev.bbar * bi});
    }
    const TowerLevel& l = levels_.back();
    if (l.abar != l.a_lattice.index() || l.bbar != l.b_lattice.index()) {
      throw InvariantViolation("index product differs from the lattice index at level " +
                               std::to_string(levels_.size()));
    }
    return l;
  }

  std::vector<TowerLevel> take() { return std::move(levels_); }

 private:
  RationalMatrix phi_;
  IntegerLattice a_, b_;
  std::vector<TowerLevel> levels_;
};

}  // namespace

CommPowerSequence power_sequence(const RationalMatrix& phi, const IntegerLattice& a, const IntegerLattice& b,
                                 std::size_t depth) {
  if (depth == 0) throw InputError("depth must be positive");
  Tower t(phi, a, b);
  for (std::size_t i = 0; i < depth; ++i) t.step();
  return {t.take()};
}

RatioSearchResult ratio_search(const RationalMatrix& phi, const IntegerLattice& a, const IntegerLattice& b,
                               const Rational& lambda, std::size_t cap) {
  if (cap == 0) throw InputError("depth cap must be positive");
  RatioSearchResult r;
  {
    Tower probe(phi, a, b);
    const TowerLevel& first = probe.step();
    if (first.a == first.b) return r;
    r.applicable = true;
    r.inverse = first.b < first.a;
  }
  Tower t = r.inverse ? Tower(phi.inverse(), b, a) : Tower(phi, a, b);
  for (std::size_t i = 1; i <= cap; ++i) {
    const TowerLevel& l = t.step();
    r.depth_reached = i;
    r.abar = l.abar;
    r.bbar = l.bbar;
    if (Rational(l.bbar, l.abar) > lambda) {
      r.n = i;
      break;
    }
  }
  return r;
}

}  // namespace ggt
