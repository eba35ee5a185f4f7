#include "ggt/simplicial.hpp"

#include "ggt/error.hpp"

#include <algorithm>
#include <sstream>

namespace ggt {

SimplicialComplex::SimplicialComplex(std::size_t vertex_count, int dim_cap)
    : n_(vertex_count), dim_cap_(dim_cap) {
  if (dim_cap < 0) throw InputError("dimension cap must be non-negative");
  flat_.assign(static_cast<std::size_t>(dim_cap) + 1, {});
  for (Vertex v = 0; v < n_; ++v) flat_[0].push_back(v);
}

SimplicialComplex SimplicialComplex::from_simplices(std::size_t vertex_count, int dim_cap,
                                                    std::vector<std::vector<Vertex>> simplices) {
  SimplicialComplex sc(vertex_count, dim_cap);
  std::vector<std::vector<std::vector<Vertex>>> by_dim(sc.flat_.size());
  for (auto& s : simplices) {
    std::sort(s.begin(), s.end());
    if (s.empty()) throw InputError("empty simplex");
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw InputError("simplex repeats a vertex");
    if (s.back() >= vertex_count) throw InputError("simplex vertex out of range");
    if (s.size() > sc.flat_.size()) throw InputError("simplex exceeds the dimension cap");
    // Every nonempty subset is a face.
    const std::size_t k = s.size();
    for (std::uint32_t mask = 1; mask < (1U << k); ++mask) {
      std::vector<Vertex> face;
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1U) face.push_back(s[i]);
      by_dim[face.size() - 1].push_back(std::move(face));
    }
  }
  for (std::size_t k = 1; k < by_dim.size(); ++k) {
    auto& list = by_dim[k];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (const auto& s : list) sc.flat_[k].insert(sc.flat_[k].end(), s.begin(), s.end());
  }
  return sc;
}

int SimplicialComplex::dimension() const {
  int d = -1;
  for (int k = 0; k <= dim_cap_; ++k)
    if (count(k) > 0) d = k;
  return d;
}

std::size_t SimplicialComplex::count(int k) const {
  if (k < 0 || k > dim_cap_) return 0;
  return flat_[k].size() / (k + 1);
}

std::size_t SimplicialComplex::total() const {
  std::size_t t = 0;
  for (int k = 0; k <= dim_cap_; ++k) t += count(k);
  return t;
}

std::span<const Vertex> SimplicialComplex::simplex(int k, std::size_t i) const {
  return std::span<const Vertex>(flat_[k]).subspan(i * (k + 1), k + 1);
}

std::size_t SimplicialComplex::index_of(int k, std::span<const Vertex> s) const {
  std::size_t lo = 0, hi = count(k);
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto t = simplex(k, mid);
    if (std::lexicographical_compare(t.begin(), t.end(), s.begin(), s.end())) lo = mid + 1;
    else hi = mid;
  }
  if (lo < count(k) && std::ranges::equal(simplex(k, lo), s)) return lo;
  return count(k);
}

SimplicialComplex rips_complex(const Metric& m, int d, int dim_cap, std::size_t simplex_cap) {
  if (d < 0) throw InputError("Rips scale must be non-negative");
  SimplicialComplex sc(m.vertex_count(), dim_cap);
  const Vertex n = static_cast<Vertex>(m.vertex_count());
  std::size_t total = n;
  for (int k = 1; k <= dim_cap; ++k) {
    const auto& prev = sc.flat_[k - 1];
    auto& next = sc.flat_[k];
    const std::size_t width = static_cast<std::size_t>(k);
    for (std::size_t start = 0; start < prev.size(); start += width) {
      const std::span<const Vertex> s(prev.data() + start, width);
      for (Vertex v = s.back() + 1; v < n; ++v) {
        bool ok = true;
        for (Vertex u : s) ok = ok && m(u, v) <= d;
        if (!ok) continue;
        if (++total > simplex_cap) {
          throw InputError("Rips complex exceeds " + std::to_string(simplex_cap) + " simplices");
        }
        next.insert(next.end(), s.begin(), s.end());
        next.push_back(v);
      }
    }
    if (next.empty()) break;
  }
  return sc;
}

std::string serialize_complex(const SimplicialComplex& sc) {
  std::ostringstream out;
  for (int k = 0; k <= sc.dim_cap(); ++k) {
    if (sc.count(k) == 0) continue;
    out << "dim " << k << '\n';
    for (std::size_t i = 0; i < sc.count(k); ++i) {
      const auto s = sc.simplex(k, i);
      for (std::size_t j = 0; j < s.size(); ++j) out << (j ? " " : "") << s[j];
      out << '\n';
    }
  }
  return out.str();
}

SimplicialComplex parse_complex(std::string_view text, int dim_cap) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  int current = -1;
  std::vector<std::vector<Vertex>> simplices;
  std::size_t vertex_count = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ls(raw);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (toks.empty() || toks[0].front() == '#') continue;
    const std::string where = "line " + std::to_string(line) + ": ";
    if (toks[0] == "dim") {
      if (toks.size() != 2) throw InputError(where + "expected 'dim <k>'");
      try {
        current = std::stoi(toks[1]);
      } catch (const std::exception&) {
        throw InputError(where + "bad dimension '" + toks[1] + "'");
      }
      if (current < 0) throw InputError(where + "negative dimension");
      continue;
    }
    if (current < 0) throw InputError(where + "simplex before any 'dim' header");
    if (toks.size() != static_cast<std::size_t>(current) + 1) {
      throw InputError(where + "expected " + std::to_string(current + 1) + " vertices");
    }
    std::vector<Vertex> s;
    for (const auto& tok : toks) {
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || tok.front() == '-') throw InputError(where + "bad vertex '" + tok + "'");
      s.push_back(static_cast<Vertex>(v));
      vertex_count = std::max<std::size_t>(vertex_count, v + 1);
    }
    std::sort(s.begin(), s.end());
    simplices.push_back(std::move(s));
  }
  return SimplicialComplex::from_simplices(vertex_count, dim_cap, std::move(simplices));
}

IntegerMatrix IntegerMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  IntegerMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InputError("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

bool IntegerMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const BigInt& x) { return x == 0; });
}

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw InputError("matrix dimensions do not agree");
  IntegerMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t l = 0; l < cols_; ++l) {
      if (at(i, l) == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out.at(i, j) += at(i, l) * rhs.at(l, j);
    }
  return out;
}

IntegerMatrix boundary_matrix(const SimplicialComplex& sc, int k) {
  if (k < 1 || k > sc.dim_cap()) throw InputError("boundary degree out of range");
  IntegerMatrix b(sc.count(k - 1), sc.count(k));
  std::vector<Vertex> face(k);
  for (std::size_t j = 0; j < sc.count(k); ++j) {
    const auto s = sc.simplex(k, j);
    for (int i = 0; i <= k; ++i) {
      std::size_t w = 0;
      for (int t = 0; t <= k; ++t)
        if (t != i) face[w++] = s[t];
      const std::size_t row = sc.index_of(k - 1, face);
      if (row == sc.count(k - 1)) throw InvariantViolation("complex is not closed under faces");
      b.at(row, j) = i % 2 == 0 ? 1 : -1;
    }
  }
  return b;
}

namespace {

struct Overflow {};

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}
std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
  return r;
}
std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}
BigInt checked_mul(const BigInt& a, const BigInt& b) { return a * b; }
BigInt checked_sub(const BigInt& a, const BigInt& b) { return a - b; }
BigInt checked_add(const BigInt& a, const BigInt& b) { return a + b; }

template <typename T>
T absolute(const T& v) {
  return v < 0 ? T(-v) : v;
}

// Diagonalizes in place with minimal-|value| pivots, then enforces the
// divisibility chain on the diagonal.
template <typename T>
std::vector<T> smith_diagonal(std::vector<T> a, std::size_t rows, std::size_t cols) {
  auto at = [&](std::size_t i, std::size_t j) -> T& { return a[i * cols + j]; };
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols; ++c) std::swap(at(i, c), at(j, c));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows; ++r) std::swap(at(r, i), at(r, j));
  };
  std::vector<T> diag;
  const std::size_t limit = std::min(rows, cols);
  for (std::size_t t = 0; t < limit; ++t) {
    // Minimal nonzero pivot in the remaining block.
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (at(i, j) != 0 && (pi == rows || absolute(at(i, j)) < absolute(at(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    swap_rows(t, pi);
    swap_cols(t, pj);
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (at(i, t) == 0) continue;
        const T q = at(i, t) / at(t, t);
        for (std::size_t c = t; c < cols; ++c)
          if (at(t, c) != 0) at(i, c) = checked_sub(at(i, c), checked_mul(q, at(t, c)));
        if (at(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (at(t, j) == 0) continue;
        const T q = at(t, j) / at(t, t);
        for (std::size_t r = t; r < rows; ++r)
          if (at(r, t) != 0) at(r, j) = checked_sub(at(r, j), checked_mul(q, at(r, t)));
        if (at(t, j) != 0) clean = false;
      }
      if (!clean) {
        // A nonzero remainder is smaller than the pivot; move it in.
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < rows; ++i)
          if (at(i, t) != 0 && absolute(at(i, t)) < absolute(at(bi, bj))) {
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < cols; ++j)
          if (at(t, j) != 0 && absolute(at(t, j)) < absolute(at(bi, bj))) {
            bi = t;
            bj = j;
          }
        swap_rows(t, bi);
        swap_cols(t, bj);
        continue;
      }
      // Row and column are clear; the pivot must divide the remaining block.
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (at(i, j) % at(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      for (std::size_t c = t; c < cols; ++c) at(t, c) = checked_add(at(t, c), at(bad, c));
    }
    diag.push_back(absolute(at(t, t)));
  }
  return diag;
}

}  // namespace

SmithForm smith_normal_form(const IntegerMatrix& m) {
  SmithForm out;
  std::vector<std::int64_t> small;
  small.reserve(m.rows() * m.cols());
  bool fits = true;
  for (std::size_t i = 0; i < m.rows() && fits; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const BigInt& v = m.at(i, j);
      if (v > std::numeric_limits<std::int32_t>::max() || v < std::numeric_limits<std::int32_t>::min()) {
        fits = false;
        break;
      }
      small.push_back(static_cast<std::int64_t>(v));
    }
  bool done = false;
  if (fits) {
    try {
      for (auto f : smith_diagonal(std::move(small), m.rows(), m.cols())) out.factors.emplace_back(f);
      done = true;
    } catch (const Overflow&) {
      out.factors.clear();
    }
  }
  if (!done) {
    std::vector<BigInt> big;
    big.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) big.push_back(m.at(i, j));
    out.factors = smith_diagonal(std::move(big), m.rows(), m.cols());
  }
  out.rank = out.factors.size();
  for (std::size_t i = 1; i < out.factors.size(); ++i)
    if (out.factors[i] % out.factors[i - 1] != 0) throw InvariantViolation("invariant factors do not divide");
  return out;
}

bool HomologyResult::reduced_acyclic() const {
  for (std::size_t k = 0; k < degrees.size(); ++k) {
    if (!degrees[k].torsion.empty()) return false;
    if (degrees[k].betti != (k == 0 ? 1U : 0U)) return false;
  }
  return true;
}

HomologyResult chain_homology(const std::vector<std::size_t>& dims, const std::vector<IntegerMatrix>& boundaries,
                              int up_to) {
  if (up_to < 0) throw InputError("homology degree must be non-negative");
  if (boundaries.size() < static_cast<std::size_t>(up_to) + 1 || dims.size() < boundaries.size() + 1) {
    throw InputError("chain complex is too short for the requested degree");
  }
  std::vector<SmithForm> snf;
  for (const auto& b : boundaries) snf.push_back(smith_normal_form(b));
  HomologyResult r;
  for (int k = 0; k <= up_to; ++k) {
    const std::size_t rank_in = k == 0 ? 0 : snf[k - 1].rank;
    const std::size_t rank_out = snf[k].rank;
    if (rank_in + rank_out > dims[k]) throw InvariantViolation("boundary ranks exceed chain rank");
    HomologyGroup h;
    h.betti = dims[k] - rank_in - rank_out;
    for (const auto& f : snf[k].factors)
      if (f > 1) h.torsion.push_back(f);
    r.degrees.push_back(std::move(h));
  }
  return r;
}

HomologyResult homology(const SimplicialComplex& sc, int up_to) {
  if (up_to < 0 || up_to >= sc.dim_cap()) {
    throw InputError("homology degree must be below the dimension cap " + std::to_string(sc.dim_cap()));
  }
  std::vector<std::size_t> dims;
  std::vector<IntegerMatrix> boundaries;
  for (int k = 0; k <= up_to + 1; ++k) dims.push_back(sc.count(k));
  for (int k = 1; k <= up_to + 1; ++k) boundaries.push_back(boundary_matrix(sc, k));
  return chain_homology(dims, boundaries, up_to);
}

}  // namespace ggt
