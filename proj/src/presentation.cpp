#include "ggt/presentation.hpp"

#include "ggt/error.hpp"
#include "ggt/simplicial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ggt {

bool Presentation::triangular() const {
  return std::all_of(relators.begin(), relators.end(), [](const Word& w) { return w.size() <= 3; });
}

std::string Presentation::word_string(const Word& w) const {
  std::string out;
  for (const Letter& l : w) {
    const char c = generators.at(l.generator);
    out += l.inverse ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
  }
  return out;
}

std::string Presentation::str() const {
  std::string out = "gens";
  for (char g : generators) out += std::string(" ") + g;
  for (const Word& r : relators) out += "; rel " + word_string(r);
  return out;
}

Word free_reduce(const Word& w) {
  Word out;
  for (const Letter& l : w) {
    if (!out.empty() && out.back().generator == l.generator && out.back().inverse != l.inverse) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word cyclic_reduce(const Word& w) {
  Word out = free_reduce(w);
  std::size_t lo = 0, hi = out.size();
  while (hi - lo >= 2 && out[lo].generator == out[hi - 1].generator && out[lo].inverse != out[hi - 1].inverse) {
    ++lo;
    --hi;
  }
  return Word(out.begin() + static_cast<std::ptrdiff_t>(lo), out.begin() + static_cast<std::ptrdiff_t>(hi));
}

namespace {

std::vector<std::string> split_parts(std::string_view text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == '\n' || c == ';') {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

std::vector<std::string> tokens_of(const std::string& part) {
  std::istringstream in(part);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

}  // namespace

Presentation parse_presentation(std::string_view text) {
  std::optional<std::vector<char>> gens;
  std::vector<std::string> raw_relators;
  for (const std::string& part : split_parts(text)) {
    const auto toks = tokens_of(part);
    if (toks.empty() || toks[0].front() == '#') continue;
    if (toks[0] == "gens") {
      if (gens) throw InputError("duplicate 'gens' declaration");
      gens.emplace();
      for (std::size_t i = 1; i < toks.size(); ++i) {
        for (char c : toks[i]) {
          if (!std::islower(static_cast<unsigned char>(c))) {
            throw InputError(std::string("generator names must be lowercase letters, got '") + c + "'");
          }
          if (std::find(gens->begin(), gens->end(), c) != gens->end()) {
            throw InputError(std::string("duplicate generator '") + c + "'");
          }
          gens->push_back(c);
        }
      }
    } else if (toks[0] == "rel") {
      if (toks.size() != 2) throw InputError("expected 'rel <word>'");
      raw_relators.push_back(toks[1]);
    } else {
      throw InputError("expected 'gens ...' or 'rel <word>', got '" + toks[0] + "'");
    }
  }
  Presentation p;
  if (gens) {
    p.generators = *gens;
  } else {
    for (const auto& r : raw_relators)
      for (char c : r)
        if (std::isalpha(static_cast<unsigned char>(c))) {
          const char g = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
          if (std::find(p.generators.begin(), p.generators.end(), g) == p.generators.end()) p.generators.push_back(g);
        }
    std::sort(p.generators.begin(), p.generators.end());
  }
  for (const auto& r : raw_relators) {
    Word w;
    for (char c : r) {
      const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      auto it = std::find(p.generators.begin(), p.generators.end(), lower);
      if (!std::isalpha(static_cast<unsigned char>(c)) || it == p.generators.end()) {
        throw InputError(std::string("unknown symbol '") + c + "' in relator '" + r + "'");
      }
      w.push_back({static_cast<std::uint32_t>(it - p.generators.begin()),
                   std::isupper(static_cast<unsigned char>(c)) != 0});
    }
    Word reduced = cyclic_reduce(w);
    if (reduced.empty()) throw InputError("relator '" + r + "' is empty after free reduction");
    p.relators.push_back(std::move(reduced));
  }
  return p;
}

Triangulation triangulate_presentation(const Presentation& p) {
  Triangulation t;
  t.presentation.generators = p.generators;
  auto fresh = [&]() {
    for (char c = 'a'; c <= 'z'; ++c) {
      if (std::find(t.presentation.generators.begin(), t.presentation.generators.end(), c) ==
          t.presentation.generators.end()) {
        t.presentation.generators.push_back(c);
        return static_cast<std::uint32_t>(t.presentation.generators.size() - 1);
      }
    }
    throw InputError("triangulation needs more than 26 generators");
  };
  for (const Word& r : p.relators) {
    if (r.size() <= 3) {
      t.presentation.relators.push_back(r);
      continue;
    }
    const std::size_t n = r.size();
    std::uint32_t prev = fresh();
    t.definitions.push_back({prev, Word{r[0], r[1]}});
    t.presentation.relators.push_back(Word{r[0], r[1], Letter{prev, true}});
    for (std::size_t i = 2; i + 2 < n; ++i) {
      const std::uint32_t next = fresh();
      t.definitions.push_back({next, Word{Letter{prev, false}, r[i]}});
      t.presentation.relators.push_back(Word{Letter{prev, false}, r[i], Letter{next, true}});
      prev = next;
    }
    t.presentation.relators.push_back(Word{Letter{prev, false}, r[n - 2], r[n - 1]});
  }
  return t;
}

Perm evaluate(const Word& w, const std::vector<Perm>& generator_perms, std::size_t degree) {
  Perm out = Perm::identity(degree);
  for (const Letter& l : w) {
    const Perm& g = generator_perms.at(l.generator);
    out = out * (l.inverse ? g.inverse() : g);
  }
  return out;
}

GroupAction extend_action(const GroupAction& a, const Presentation& p,
                          const std::vector<std::pair<std::uint32_t, Word>>& definitions) {
  std::vector<Perm> perms(p.generators.size());
  std::vector<char> known(p.generators.size(), 0);
  for (std::size_t i = 0; i < p.generators.size(); ++i) {
    if (const Perm* g = a.generator(std::string(1, p.generators[i]))) {
      perms[i] = *g;
      known[i] = 1;
    }
  }
  std::vector<NamedPerm> gens = a.generators();
  for (const auto& [index, word] : definitions) {
    for (const Letter& l : word)
      if (!known.at(l.generator)) throw InputError("definition uses an unrealized generator");
    perms[index] = evaluate(word, perms, a.point_count());
    known[index] = 1;
    const std::string name(1, p.generators[index]);
    if (a.generator(name)) throw InputError("fresh generator '" + name + "' clashes with an action generator");
    gens.push_back({name, perms[index]});
  }
  if (a.graph()) return generate_group(a.shared_graph(), std::move(gens));
  return generate_set_group(a.point_count(), std::move(gens));
}

PresentationComplex cayley_complex(const Presentation& p, const GroupAction& a) {
  if (!p.triangular()) throw InputError("presentation is not triangular; triangulate it first");
  const std::size_t s = p.generators.size();
  const std::size_t n = a.order();

  PresentationComplex pc{p, a, {}, {}, {}, 0, 0};
  std::vector<Perm> perms;
  for (char c : p.generators) {
    const Perm* g = a.generator(std::string(1, c));
    if (!g) throw InputError(std::string("generator '") + c + "' is not realized by the action");
    if (g->is_identity()) {
      throw InputError(std::string("generator '") + c + "' acts trivially; degenerate Cayley graph rejected");
    }
    perms.push_back(*g);
    pc.generator_element.push_back(*a.find(*g));
  }
  for (const Word& r : p.relators) {
    if (!evaluate(r, perms, a.point_count()).is_identity()) {
      throw InputError("relator '" + p.word_string(r) + "' is not trivial in the group");
    }
  }
  {
    std::vector<NamedPerm> named;
    for (std::size_t i = 0; i < s; ++i) named.push_back({std::string(1, p.generators[i]), perms[i]});
    if (generate_set_group(a.point_count(), std::move(named)).order() != n) {
      throw InputError("presentation generators do not generate the acting group");
    }
  }

  pc.base.vertex_count = 1;
  for (std::size_t i = 0; i < s; ++i) pc.base.edges.emplace_back(0, 0);
  for (const Word& r : p.relators) {
    std::vector<TwoComplex::Side> sides;
    for (const Letter& l : r) sides.push_back({l.generator, !l.inverse});
    pc.base.cells.push_back(std::move(sides));
  }

  // right[g][a] = index of g * a.
  std::vector<std::size_t> right(n * s), right_inv(n * s);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t i = 0; i < s; ++i) {
      right[g * s + i] = *a.find(a.elements()[g] * perms[i]);
      right_inv[g * s + i] = *a.find(a.elements()[g] * perms[i].inverse());
    }
  pc.cover.vertex_count = n;
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t i = 0; i < s; ++i) pc.cover.edges.emplace_back(g, right[g * s + i]);
  for (std::size_t g = 0; g < n; ++g)
    for (const Word& r : p.relators) {
      std::vector<TwoComplex::Side> sides;
      std::size_t at = g;
      for (const Letter& l : r) {
        if (l.inverse) {
          at = right_inv[at * s + l.generator];
          sides.push_back({at * s + l.generator, false});
        } else {
          sides.push_back({at * s + l.generator, true});
          at = right[at * s + l.generator];
        }
      }
      if (at != g) throw InvariantViolation("cover cell boundary does not close");
      pc.cover.cells.push_back(std::move(sides));
    }

  for (std::size_t i = 0; i < s; ++i) {
    const bool involution = (perms[i] * perms[i]).is_identity();
    pc.collapsed_edges += involution ? n / 2 : n;
  }
  for (const Word& r : p.relators) {
    const bool square_of_involution = r.size() == 2 && r[0] == r[1] && (perms[r[0].generator] * perms[r[0].generator]).is_identity();
    pc.collapsed_cells += square_of_involution ? n / 2 : n;
  }

  // Cellular chain complex of the cover; H1 must vanish.
  const std::size_t edges = pc.cover.edges.size();
  IntegerMatrix d1(n, edges), d2(edges, pc.cover.cells.size());
  for (std::size_t e = 0; e < edges; ++e) {
    const auto [tail, head] = pc.cover.edges[e];
    d1.at(head, e) += 1;
    d1.at(tail, e) -= 1;
  }
  for (std::size_t c = 0; c < pc.cover.cells.size(); ++c)
    for (const auto& side : pc.cover.cells[c]) d2.at(side.edge, c) += side.forward ? 1 : -1;
  const auto h = chain_homology({n, edges, pc.cover.cells.size()}, {d1, d2}, 1);
  if (h.degrees[1].betti != 0 || !h.degrees[1].torsion.empty()) {
    throw InputError("the cover has nontrivial first homology; the presentation does not present the acting group");
  }
  return pc;
}

}  // namespace ggt
