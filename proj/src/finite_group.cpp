#include "ggt/finite_group.hpp"

#include "ggt/error.hpp"

#include <algorithm>
#include <set>

namespace ggt {

FiniteGroup::FiniteGroup(Trusted, std::size_t order, std::vector<Element> table, std::string name)
    : n_(order), table_(std::move(table)), name_(std::move(name)) {
  derive();
}

FiniteGroup::FiniteGroup(std::size_t order, std::vector<Element> table, std::string name)
    : n_(order), table_(std::move(table)), name_(std::move(name)) {
  if (n_ == 0) throw InputError("group must be nonempty");
  if (table_.size() != n_ * n_) throw InputError("multiplication table has the wrong size");
  for (Element a = 0; a < n_; ++a) {
    if (mul(0, a) != a || mul(a, 0) != a) throw InputError("element 0 is not the identity");
  }
  for (Element a = 0; a < n_; ++a) {
    std::vector<char> row(n_, 0), col(n_, 0);
    for (Element b = 0; b < n_; ++b) {
      const Element r = mul(a, b), c = mul(b, a);
      if (r >= n_ || c >= n_ || row[r] || col[c]) throw InputError("table is not a Latin square");
      row[r] = col[c] = 1;
    }
  }
  for (Element a = 0; a < n_; ++a)
    for (Element b = 0; b < n_; ++b)
      for (Element c = 0; c < n_; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw InputError("table is not associative");
  derive();
}

void FiniteGroup::derive() {
  inverse_.assign(n_, 0);
  element_order_.assign(n_, 0);
  for (Element a = 0; a < n_; ++a) {
    for (Element b = 0; b < n_; ++b)
      if (mul(a, b) == 0) inverse_[a] = b;
    std::size_t k = 1;
    for (Element p = a; p != 0; p = mul(p, a)) ++k;
    element_order_[a] = k;
  }
}

FiniteGroup FiniteGroup::from_action(const GroupAction& a) {
  const std::size_t n = a.order();
  std::vector<Element> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      table[i * n + j] = static_cast<Element>(*a.find(a.elements()[i] * a.elements()[j]));
  return FiniteGroup(Trusted{}, n, std::move(table), {});
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  if (n == 0) throw InputError("cyclic group order must be positive");
  std::vector<Element> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i * n + j] = static_cast<Element>((i + j) % n);
  return FiniteGroup(Trusted{}, n, std::move(table), "Z" + std::to_string(n));
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::size_t n = a.order() * b.order();
  const std::size_t m = b.order();
  std::vector<Element> table(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const Element first = a.mul(static_cast<Element>(x / m), static_cast<Element>(y / m));
      const Element second = b.mul(static_cast<Element>(x % m), static_cast<Element>(y % m));
      table[x * n + y] = static_cast<Element>(first * m + second);
    }
  return FiniteGroup(Trusted{}, n, std::move(table), a.name() + "x" + b.name());
}

Subgroup FiniteGroup::closure(std::span<const Element> gens) const {
  std::vector<char> in(n_, 0);
  Subgroup out{0};
  in[0] = 1;
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (Element g : gens) {
      if (g >= n_) throw InputError("element out of range");
      const Element next = mul(out[head], g);
      if (!in[next]) {
        in[next] = 1;
        out.push_back(next);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool FiniteGroup::is_subgroup(std::span<const Element> sorted_elements) const {
  if (sorted_elements.empty() || sorted_elements.front() != 0) return false;
  std::vector<char> in(n_, 0);
  for (Element e : sorted_elements) {
    if (e >= n_) return false;
    in[e] = 1;
  }
  for (Element a : sorted_elements)
    for (Element b : sorted_elements)
      if (!in[mul(a, b)]) return false;
  return true;
}

std::vector<Subgroup> FiniteGroup::all_subgroups() const {
  // Every subgroup is a join of cyclic subgroups; close the cyclic ones under joins.
  std::set<Subgroup> found;
  std::vector<Subgroup> cyclic;
  for (Element a = 0; a < n_; ++a) {
    const Element gen[] = {a};
    Subgroup s = closure(gen);
    if (found.insert(s).second) cyclic.push_back(std::move(s));
  }
  std::vector<Subgroup> frontier(found.begin(), found.end());
  while (!frontier.empty()) {
    std::vector<Subgroup> next;
    for (const Subgroup& s : frontier) {
      for (const Subgroup& c : cyclic) {
        if (std::includes(s.begin(), s.end(), c.begin(), c.end())) continue;
        std::vector<Element> gens = s;
        gens.insert(gens.end(), c.begin(), c.end());
        Subgroup join = closure(gens);
        if (found.insert(join).second) next.push_back(std::move(join));
      }
    }
    frontier = std::move(next);
  }
  std::vector<Subgroup> out(found.begin(), found.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const Subgroup& a, const Subgroup& b) { return a.size() < b.size(); });
  return out;
}

std::vector<Element> FiniteGroup::generating_set() const {
  std::vector<Element> by_order(n_);
  for (Element a = 0; a < n_; ++a) by_order[a] = a;
  std::stable_sort(by_order.begin(), by_order.end(),
                   [&](Element a, Element b) { return element_order_[a] > element_order_[b]; });
  std::vector<Element> gens;
  Subgroup current{0};
  for (Element a : by_order) {
    if (current.size() == n_) break;
    if (std::binary_search(current.begin(), current.end(), a)) continue;
    gens.push_back(a);
    current = closure(gens);
  }
  return gens;
}

Perm FiniteGroup::left_translation(Element g) const {
  std::vector<std::uint32_t> images(n_);
  for (Element x = 0; x < n_; ++x) images[x] = mul(g, x);
  return Perm(std::move(images));
}

GroupAction FiniteGroup::regular_action() const {
  std::vector<NamedPerm> gens;
  for (Element g : generating_set()) gens.push_back({"g" + std::to_string(g), left_translation(g)});
  return generate_set_group(n_, std::move(gens));
}

GroupAction FiniteGroup::cayley_action(std::span<const Element> gens) const {
  if (closure(gens).size() != n_) throw InputError("Cayley graph generators do not generate the group");
  std::set<Edge> edges;
  for (Element x = 0; x < n_; ++x)
    for (Element s : gens) {
      const Element y = mul(x, s);
      if (y != x) edges.insert({std::min(x, y), std::max(x, y)});
    }
  auto graph = std::make_shared<const Graph>(n_, std::vector<Edge>(edges.begin(), edges.end()));
  std::vector<NamedPerm> perms;
  for (Element g : generating_set()) perms.push_back({"g" + std::to_string(g), left_translation(g)});
  return generate_group(std::move(graph), std::move(perms));
}

GroupAction FiniteGroup::cayley_action(std::span<const Element> gens, const std::vector<std::string>& names) const {
  if (names.size() != gens.size()) throw InputError("one name per Cayley generator required");
  const GroupAction base = cayley_action(gens);
  std::vector<NamedPerm> perms;
  for (std::size_t i = 0; i < gens.size(); ++i) perms.push_back({names[i], left_translation(gens[i])});
  return generate_group(base.shared_graph(), std::move(perms));
}

DoubleCosetReport double_coset_check(const FiniteGroup& g, const Subgroup& h, const Subgroup& k) {
  if (!g.is_subgroup(h)) throw InputError("H is not a subgroup");
  if (!g.is_subgroup(k)) throw InputError("K is not a subgroup");
  const std::size_t n = g.order();
  auto intersection_size = [](std::vector<Element> a, std::vector<Element> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<Element> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out.size();
  };
  // Right coset Hx, identified by its smallest element.
  auto right_coset_id = [&](Element x) {
    Element best = g.mul(h[0], x);
    for (Element y : h) best = std::min(best, g.mul(y, x));
    return best;
  };

  DoubleCosetReport r;
  r.index = n / h.size();
  r.chain_holds = true;
  std::vector<char> covered(n, 0);
  for (Element rep = 0; rep < n; ++rep) {
    if (covered[rep]) continue;
    DoubleCosetReport::Term t;
    t.representative = rep;
    for (Element x : h)
      for (Element y : k) {
        const Element e = g.mul(g.mul(x, rep), y);
        if (!covered[e]) {
          covered[e] = 1;
          ++t.double_coset_size;
        }
      }
    std::vector<Element> conj_k, conj_h;
    for (Element y : k) conj_k.push_back(g.mul(g.mul(rep, y), g.inverse(rep)));
    for (Element x : h) conj_h.push_back(g.mul(g.mul(g.inverse(rep), x), rep));
    t.h_cap_conj_k = intersection_size(h, conj_k);
    t.conj_h_cap_k = intersection_size(conj_h, k);
    std::set<Element> orbit;
    for (Element y : k) orbit.insert(right_coset_id(g.mul(rep, y)));
    t.k_orbit_size = orbit.size();
    t.term = Rational(k.size(), t.h_cap_conj_k);
    r.chain_holds = r.chain_holds && t.h_cap_conj_k == t.conj_h_cap_k &&
                    t.term == Rational(t.k_orbit_size) &&
                    t.double_coset_size == h.size() * t.k_orbit_size;
    r.sum += t.term;
    r.terms.push_back(std::move(t));
  }
  r.holds = r.sum == Rational(r.index);
  if (!r.chain_holds || !r.holds) throw InvariantViolation("double-coset identity failed");
  return r;
}

DoubleCosetReport double_coset_check(const GroupAction& a, const std::vector<std::string>& h_gens,
                                     const std::vector<std::string>& k_gens) {
  const FiniteGroup g = FiniteGroup::from_action(a);
  auto resolve = [&](const std::vector<std::string>& names) {
    std::vector<Element> gens;
    for (const auto& name : names) {
      const Perm* p = a.generator(name);
      if (!p) throw InputError("not a subgroup: unknown generator '" + name + "'");
      gens.push_back(static_cast<Element>(*a.find(*p)));
    }
    return g.closure(gens);
  };
  return double_coset_check(g, resolve(h_gens), resolve(k_gens));
}

}  // namespace ggt
