#include "ggt/group_action.hpp"

#include "ggt/error.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ggt {

Perm::Perm(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  std::vector<char> hit(images_.size(), 0);
  for (auto i : images_) {
    if (i >= images_.size() || hit[i]) throw InputError("image list is not a permutation");
    hit[i] = 1;
  }
}

Perm Perm::identity(std::size_t degree) {
  std::vector<std::uint32_t> images(degree);
  for (std::size_t i = 0; i < degree; ++i) images[i] = static_cast<std::uint32_t>(i);
  Perm p;
  p.images_ = std::move(images);
  return p;
}

Perm Perm::operator*(const Perm& rhs) const {
  Perm out;
  out.images_.resize(rhs.images_.size());
  for (std::size_t i = 0; i < rhs.images_.size(); ++i) out.images_[i] = images_[rhs.images_[i]];
  return out;
}

Perm Perm::inverse() const {
  Perm out;
  out.images_.resize(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) out.images_[images_[i]] = static_cast<std::uint32_t>(i);
  return out;
}

bool Perm::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

std::string to_string(const Perm& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.degree(); ++i) {
    if (i) out += ' ';
    out += std::to_string(p(static_cast<std::uint32_t>(i)));
  }
  return out + "]";
}

const Perm* GroupAction::generator(std::string_view name) const {
  for (const auto& g : generators_)
    if (g.name == name) return &g.perm;
  return nullptr;
}

std::optional<std::size_t> GroupAction::find(const Perm& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

GroupAction build_action(std::shared_ptr<const Graph> graph, std::size_t points,
                         std::vector<NamedPerm> gens, std::size_t order_cap) {
  for (const auto& g : gens) {
    if (g.perm.degree() != points) {
      throw InputError("generator '" + g.name + "' acts on " + std::to_string(g.perm.degree()) +
                       " points, expected " + std::to_string(points));
    }
    if (graph) {
      for (const auto& [u, v] : graph->edges()) {
        if (!graph->adjacent(g.perm(u), g.perm(v))) {
          throw InputError("generator '" + g.name + "' is not a graph automorphism: edge " +
                           std::to_string(u) + "-" + std::to_string(v) + " is not preserved");
        }
      }
    }
  }
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (gens[i].name == gens[j].name) throw InputError("duplicate generator name '" + gens[i].name + "'");

  GroupAction a;
  a.graph_ = std::move(graph);
  a.points_ = points;
  a.generators_ = std::move(gens);
  a.elements_.push_back(Perm::identity(points));
  a.words_.emplace_back();
  a.index_.emplace(a.elements_[0], 0);
  for (std::size_t head = 0; head < a.elements_.size(); ++head) {
    for (std::uint32_t s = 0; s < a.generators_.size(); ++s) {
      Perm next = a.elements_[head] * a.generators_[s].perm;
      if (a.index_.contains(next)) continue;
      if (a.elements_.size() == order_cap) {
        throw InputError("group order exceeds cap " + std::to_string(order_cap));
      }
      auto word = a.words_[head];
      word.push_back(s);
      a.index_.emplace(next, a.elements_.size());
      a.elements_.push_back(std::move(next));
      a.words_.push_back(std::move(word));
    }
  }
  return a;
}

GroupAction generate_group(std::shared_ptr<const Graph> graph, std::vector<NamedPerm> gens,
                           std::size_t order_cap) {
  if (!graph) throw InputError("generate_group requires a graph; use generate_set_group");
  const std::size_t n = graph->vertex_count();
  return build_action(std::move(graph), n, std::move(gens), order_cap);
}

GroupAction generate_set_group(std::size_t point_count, std::vector<NamedPerm> gens,
                               std::size_t order_cap) {
  if (point_count == 0) throw InputError("set action needs at least one point");
  return build_action(nullptr, point_count, std::move(gens), order_cap);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

GroupAction parse_action(std::string_view text, const std::string& base_dir) {
  std::vector<std::pair<std::size_t, NamedPerm>> gens;
  std::shared_ptr<const Graph> graph;
  std::optional<std::size_t> set_size;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.starts_with("graph:")) {
      if (graph || set_size) fail_at(line_no, "domain declared twice");
      const std::filesystem::path path = std::filesystem::path(base_dir) / std::string(trim(line.substr(6)));
      std::ifstream file(path);
      if (!file) fail_at(line_no, "cannot open graph file '" + path.string() + "'");
      std::stringstream buf;
      buf << file.rdbuf();
      try {
        graph = std::make_shared<const Graph>(parse_graph(buf.str()));
      } catch (const InputError& e) {
        fail_at(line_no, path.string() + ": " + e.what());
      }
    } else if (line.starts_with("set:")) {
      if (graph || set_size) fail_at(line_no, "domain declared twice");
      const auto token = trim(line.substr(4));
      std::size_t n = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), n);
      if (ec != std::errc() || ptr != token.data() + token.size() || n == 0) {
        fail_at(line_no, "expected 'set: <n>'");
      }
      set_size = n;
    } else if (line.starts_with("perm ")) {
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) fail_at(line_no, "expected 'perm <name>: <images>'");
      const std::string name(trim(line.substr(5, colon - 5)));
      if (name.empty()) fail_at(line_no, "missing generator name");
      std::vector<std::uint32_t> images;
      std::istringstream nums{std::string(line.substr(colon + 1))};
      std::string tok;
      while (nums >> tok) {
        std::uint32_t v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) fail_at(line_no, "bad image '" + tok + "'");
        images.push_back(v);
      }
      try {
        gens.emplace_back(line_no, NamedPerm{name, Perm(std::move(images))});
      } catch (const InputError& e) {
        fail_at(line_no, e.what());
      }
    } else {
      fail_at(line_no, "unrecognised line");
    }
  }
  if (!graph && !set_size) throw InputError("action file declares neither 'graph:' nor 'set:'");
  std::vector<NamedPerm> perms;
  for (auto& [ln, g] : gens) perms.push_back(std::move(g));
  if (graph) return generate_group(graph, std::move(perms));
  return generate_set_group(*set_size, std::move(perms));
}

FreenessReport verify_free_action(const GroupAction& a) {
  FreenessReport r;
  for (std::size_t e = 1; e < a.order(); ++e) {
    const Perm& g = a.elements()[e];
    for (Vertex v = 0; v < a.point_count(); ++v)
      if (g(v) == v) r.vertex_fixers.push_back({e, v});
    if (!a.graph()) continue;
    for (const auto& edge : a.graph()->edges()) {
      const auto [u, v] = edge;
      if (g(u) == u && g(v) == v) r.edge_fixers.push_back({e, edge});
      if (g(u) == v && g(v) == u) r.edge_inverters.push_back({e, edge});
    }
  }
  return r;
}

namespace {

// Orbits of the group on `cells` under `act`, in order of smallest member.
template <typename Act>
std::vector<OrbitReport::Orbit> orbits_of(const GroupAction& a, std::size_t cells, Act act) {
  std::vector<OrbitReport::Orbit> out;
  std::vector<char> seen(cells, 0);
  for (std::uint32_t c = 0; c < cells; ++c) {
    if (seen[c]) continue;
    OrbitReport::Orbit orbit;
    for (const auto& g : a.elements()) {
      const std::uint32_t image = act(g, c);
      if (image == c) ++orbit.stabilizer_order;
      if (!seen[image]) {
        seen[image] = 1;
        orbit.members.push_back(image);
      }
    }
    std::sort(orbit.members.begin(), orbit.members.end());
    if (orbit.members.size() * orbit.stabilizer_order != a.order()) {
      throw InvariantViolation("orbit-stabilizer identity failed");
    }
    out.push_back(std::move(orbit));
  }
  return out;
}

Rational reciprocal_sum(const std::vector<OrbitReport::Orbit>& orbits) {
  Rational sum = 0;
  for (const auto& o : orbits) sum += Rational(1, o.stabilizer_order);
  return sum;
}

}  // namespace

OrbitReport orbit_volume(const GroupAction& a) {
  OrbitReport r;
  r.vertex_orbits = orbits_of(a, a.point_count(), [](const Perm& g, std::uint32_t v) { return g(v); });
  r.volume.push_back(r.vertex_orbits.size());
  r.v_by_dimension.push_back(reciprocal_sum(r.vertex_orbits));
  if (const Graph* graph = a.graph()) {
    const auto edges = graph->edges();
    auto edge_index = [&](Vertex u, Vertex v) {
      const Edge key{std::min(u, v), std::max(u, v)};
      return static_cast<std::uint32_t>(std::lower_bound(edges.begin(), edges.end(), key) - edges.begin());
    };
    r.edge_orbits = orbits_of(a, edges.size(), [&](const Perm& g, std::uint32_t e) {
      return edge_index(g(edges[e].first), g(edges[e].second));
    });
    r.volume.push_back(r.edge_orbits.size());
    r.v_by_dimension.push_back(reciprocal_sum(r.edge_orbits));
  }
  r.v_invariant = r.v_by_dimension[0];
  return r;
}

MultiplicativityReport check_v_multiplicativity(const GroupAction& a,
                                                const std::vector<NamedPerm>& subgroup_gens) {
  for (const auto& g : subgroup_gens) {
    if (g.perm.degree() != a.point_count() || !a.find(g.perm)) {
      throw InputError("not a subgroup: generator '" + g.name + "' is not in the group");
    }
  }
  const GroupAction sub = a.graph() ? generate_group(a.shared_graph(), subgroup_gens)
                                    : generate_set_group(a.point_count(), subgroup_gens);
  const OrbitReport og = orbit_volume(a);
  const OrbitReport oh = orbit_volume(sub);
  MultiplicativityReport r;
  r.index = a.order() / sub.order();
  r.v_group = og.v_invariant;
  r.v_subgroup = oh.v_invariant;
  r.holds = r.v_subgroup == Rational(r.index) * r.v_group;
  if (!r.holds) throw InvariantViolation("V_X(H) != [G:H] V_X(G)");
  r.volume_holds = true;
  for (std::size_t d = 0; d < og.volume.size(); ++d)
    r.volume_holds = r.volume_holds && oh.volume[d] == r.index * og.volume[d];
  return r;
}

}  // namespace ggt
