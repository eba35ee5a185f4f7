#include "ggt/small_groups.hpp"

#include "ggt/error.hpp"

#include <algorithm>
#include <map>

namespace ggt {

namespace {

// Extends generator images to a map on all of `a`; nullopt unless it is a
// homomorphism into `b`.
std::optional<std::vector<Element>> extend(const FiniteGroup& a, const std::vector<Element>& gens,
                                           const FiniteGroup& b, const std::vector<Element>& images) {
  constexpr Element kUnset = ~Element{0};
  std::vector<Element> phi(a.order(), kUnset);
  phi[0] = 0;
  std::vector<Element> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Element x = queue[head];
    for (std::size_t s = 0; s < gens.size(); ++s) {
      const Element y = a.mul(x, gens[s]);
      const Element image = b.mul(phi[x], images[s]);
      if (phi[y] == kUnset) {
        phi[y] = image;
        queue.push_back(y);
      } else if (phi[y] != image) {
        return std::nullopt;
      }
    }
  }
  return phi;
}

std::vector<std::size_t> order_profile(const FiniteGroup& g) {
  std::vector<std::size_t> profile(g.order() + 1, 0);
  for (Element a = 0; a < g.order(); ++a) ++profile[g.element_order(a)];
  return profile;
}

// Searches generator images in `b` with matching element orders; `accept`
// returns true to stop the search.
template <typename Accept>
void search_images(const FiniteGroup& a, const FiniteGroup& b, Accept accept) {
  const std::vector<Element> gens = a.generating_set();
  std::vector<std::vector<Element>> options(gens.size());
  for (std::size_t s = 0; s < gens.size(); ++s)
    for (Element y = 0; y < b.order(); ++y)
      if (b.element_order(y) == a.element_order(gens[s])) options[s].push_back(y);
  std::vector<Element> images(gens.size());
  std::vector<std::size_t> pick(gens.size(), 0);
  std::size_t depth = 0;
  if (gens.empty()) {
    accept(std::vector<Element>{0});
    return;
  }
  while (true) {
    if (pick[depth] == options[depth].size()) {
      if (depth == 0) return;
      pick[depth] = 0;
      ++pick[--depth];
      continue;
    }
    images[depth] = options[depth][pick[depth]];
    if (depth + 1 < gens.size()) {
      ++depth;
      continue;
    }
    if (auto phi = extend(a, gens, b, images)) {
      std::vector<char> hit(b.order(), 0);
      bool bijective = true;
      for (Element y : *phi) {
        if (hit[y]) bijective = false;
        hit[y] = 1;
      }
      if (bijective && accept(*phi)) return;
    }
    ++pick[depth];
  }
}

}  // namespace

std::optional<std::vector<Element>> find_isomorphism(const FiniteGroup& a, const FiniteGroup& b) {
  if (a.order() != b.order() || order_profile(a) != order_profile(b)) return std::nullopt;
  std::optional<std::vector<Element>> found;
  search_images(a, b, [&](const std::vector<Element>& phi) {
    found = phi;
    return true;
  });
  return found;
}

bool isomorphic(const FiniteGroup& a, const FiniteGroup& b) { return find_isomorphism(a, b).has_value(); }

std::vector<std::vector<Element>> automorphisms(const FiniteGroup& g) {
  std::vector<std::vector<Element>> out;
  search_images(g, g, [&](const std::vector<Element>& phi) {
    out.push_back(phi);
    return false;
  });
  std::sort(out.begin(), out.end());
  return out;
}

FiniteGroup semidirect_with_cyclic(const FiniteGroup& n, std::size_t m, const std::vector<Element>& alpha) {
  if (m == 0) throw InputError("cyclic factor must be nontrivial");
  const std::size_t k = n.order();
  // powers[i] = alpha^i
  std::vector<std::vector<Element>> powers(m + 1, std::vector<Element>(k));
  for (Element x = 0; x < k; ++x) powers[0][x] = x;
  for (std::size_t i = 1; i <= m; ++i)
    for (Element x = 0; x < k; ++x) powers[i][x] = alpha[powers[i - 1][x]];
  if (powers[m] != powers[0]) throw InputError("automorphism order does not divide m");
  const std::size_t order = k * m;
  std::vector<Element> table(order * order);
  for (std::size_t p = 0; p < order; ++p)
    for (std::size_t q = 0; q < order; ++q) {
      const Element n1 = static_cast<Element>(p / m), n2 = static_cast<Element>(q / m);
      const std::size_t i1 = p % m, i2 = q % m;
      const Element first = n.mul(n1, powers[i1][n2]);
      table[p * order + q] = static_cast<Element>(first * m + (i1 + i2) % m);
    }
  return FiniteGroup(order, std::move(table), n.name() + ":Z" + std::to_string(m));
}

FiniteGroup dicyclic(std::size_t n) {
  if (n < 2) throw InputError("dicyclic group needs n >= 2");
  // Elements a^i x^j, i < 2n, j < 2, numbered 2i + j; x a = a^-1 x, x^2 = a^n.
  const std::size_t two_n = 2 * n, order = 4 * n;
  std::vector<Element> table(order * order);
  for (std::size_t p = 0; p < order; ++p)
    for (std::size_t q = 0; q < order; ++q) {
      const std::size_t i1 = p / 2, j1 = p % 2, i2 = q / 2, j2 = q % 2;
      std::size_t i = j1 ? (i1 + two_n - i2) % two_n : (i1 + i2) % two_n;
      std::size_t j = j1 + j2;
      if (j == 2) {
        i = (i + n) % two_n;
        j = 0;
      }
      table[p * order + q] = static_cast<Element>(2 * i + j);
    }
  return FiniteGroup(order, std::move(table), "Dic" + std::to_string(n));
}

std::vector<FiniteGroup> small_groups(std::size_t max_order) {
  if (max_order == 0 || max_order > 24) throw InputError("small_groups supports orders 1..24");
  std::map<std::size_t, std::vector<FiniteGroup>> by_order;
  auto add = [&](FiniteGroup g) {
    auto& bucket = by_order[g.order()];
    for (const auto& h : bucket)
      if (isomorphic(g, h)) return;
    bucket.push_back(std::move(g));
  };
  for (std::size_t n = 1; n <= max_order; ++n) {
    add(FiniteGroup::cyclic(n));
    for (std::size_t d = 2; d * d <= n; ++d) {
      if (n % d) continue;
      const auto left = by_order[d];
      const auto right = by_order[n / d];
      for (const auto& a : left)
        for (const auto& b : right) add(FiniteGroup::direct_product(a, b));
    }
    for (std::size_t m = 2; m < n; ++m) {
      if (n % m) continue;
      const auto bases = by_order[n / m];
      for (const auto& base : bases)
        for (const auto& alpha : automorphisms(base)) {
          std::vector<Element> power(alpha.size());
          for (Element x = 0; x < power.size(); ++x) power[x] = x;
          for (std::size_t i = 0; i < m; ++i)
            for (auto& x : power) x = alpha[x];
          bool identity = true;
          for (Element x = 0; x < power.size(); ++x) identity = identity && power[x] == x;
          if (identity) add(semidirect_with_cyclic(base, m, alpha));
        }
    }
    if (n % 4 == 0 && n >= 8) add(dicyclic(n / 4));
  }
  std::vector<FiniteGroup> out;
  for (auto& [order, bucket] : by_order)
    for (auto& g : bucket) out.push_back(std::move(g));
  return out;
}

}  // namespace ggt
