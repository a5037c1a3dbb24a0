#include "raagdiv/graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace raagdiv {

using nlohmann::json;

namespace {

int lowest(VertexMask m) { return std::countr_zero(m); }

std::vector<int> mask_to_list(VertexMask m) {
  std::vector<int> out;
  for (; m != 0; m &= m - 1) out.push_back(lowest(m));
  return out;
}

}  // namespace

DefiningGraph::DefiningGraph(std::vector<std::string> names,
                             std::vector<std::pair<int, int>> edges)
    : names_(std::move(names)) {
  if (names_.empty()) throw InputError("vertices", "empty vertex set");
  if (names_.size() > static_cast<std::size_t>(kMaxVertices)) {
    throw InputError("vertices", "more than 64 vertices");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) {
      throw InputError("vertices[" + std::to_string(i) + "]", "empty name");
    }
    if (!seen.insert(names_[i]).second) {
      throw InputError("vertices[" + std::to_string(i) + "]",
                       "duplicate vertex '" + names_[i] + "'");
    }
  }
  adj_.assign(names_.size(), 0);
  const int n = size();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    const std::string where = "edges[" + std::to_string(e) + "]";
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw InputError(where, "unknown endpoint");
    }
    if (u == v) throw InputError(where, "self-loop at '" + names_[u] + "'");
    if (adjacent(u, v)) {
      throw InputError(where, "duplicate edge '" + names_[u] + "'-'" +
                                  names_[v] + "'");
    }
    adj_[u] |= VertexMask{1} << v;
    adj_[v] |= VertexMask{1} << u;
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
}

int DefiningGraph::index_of(std::string_view name) const {
  for (int i = 0; i < size(); ++i) {
    if (names_[i] == name) return i;
  }
  return -1;
}

VertexMask DefiningGraph::all_vertices() const {
  return size() == 64 ? ~VertexMask{0} : (VertexMask{1} << size()) - 1;
}

std::uint64_t DefiningGraph::fingerprint() const {
  // FNV-1a over the canonical JSON text.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : to_json()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string DefiningGraph::to_json() const {
  json j;
  j["vertices"] = names_;
  json e = json::array();
  for (auto [u, v] : edges_) e.push_back({names_[u], names_[v]});
  j["edges"] = e;
  return j.dump();
}

DefiningGraph parse_graph(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("byte " + std::to_string(e.byte), "invalid JSON");
  }
  if (!j.is_object()) throw InputError("", "graph must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "vertices" && it.key() != "edges") {
      throw InputError(it.key(), "unknown key");
    }
  }
  if (!j.contains("vertices") || !j["vertices"].is_array()) {
    throw InputError("vertices", "missing or not an array");
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < j["vertices"].size(); ++i) {
    const auto& v = j["vertices"][i];
    if (!v.is_string()) {
      throw InputError("vertices[" + std::to_string(i) + "]", "not a string");
    }
    names.push_back(v.get<std::string>());
  }
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < names.size(); ++i) {
    index.emplace(names[i], static_cast<int>(i));
  }
  std::vector<std::pair<int, int>> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw InputError("edges", "not an array");
    for (std::size_t e = 0; e < j["edges"].size(); ++e) {
      const auto& pair = j["edges"][e];
      const std::string where = "edges[" + std::to_string(e) + "]";
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
          !pair[1].is_string()) {
        throw InputError(where, "edge must be a pair of vertex names");
      }
      int ends[2];
      for (int s = 0; s < 2; ++s) {
        auto it = index.find(pair[s].get<std::string>());
        if (it == index.end()) {
          throw InputError(where, "unknown endpoint '" +
                                      pair[s].get<std::string>() + "'");
        }
        ends[s] = it->second;
      }
      edges.emplace_back(ends[0], ends[1]);
    }
  }
  return DefiningGraph(std::move(names), std::move(edges));
}

DefiningGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_graph(ss.str());
  } catch (const InputError& e) {
    throw InputError(path + (e.where().empty() ? "" : ":" + e.where()),
                     e.what());
  }
}

DefiningGraph complement(const DefiningGraph& g) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < g.size(); ++u) {
    for (int v = u + 1; v < g.size(); ++v) {
      if (!g.adjacent(u, v)) edges.emplace_back(u, v);
    }
  }
  return DefiningGraph(g.names(), std::move(edges));
}

std::vector<VertexMask> components(const DefiningGraph& g) {
  std::vector<VertexMask> out;
  VertexMask left = g.all_vertices();
  while (left != 0) {
    VertexMask comp = VertexMask{1} << lowest(left);
    VertexMask frontier = comp;
    while (frontier != 0) {
      VertexMask next = 0;
      for (int v : mask_to_list(frontier)) next |= g.neighbors(v);
      frontier = next & ~comp;
      comp |= frontier;
    }
    out.push_back(comp);
    left &= ~comp;
  }
  return out;
}

std::optional<std::pair<VertexMask, VertexMask>> join_decomposition(
    const DefiningGraph& g) {
  auto comps = components(complement(g));
  if (comps.size() < 2) return std::nullopt;
  return std::make_pair(comps[0], g.all_vertices() & ~comps[0]);
}

std::vector<VertexMask> cliques(const DefiningGraph& g, int max_size) {
  std::vector<VertexMask> out;
  // Extend each clique only by vertices above its largest member.
  std::vector<VertexMask> layer;
  for (int v = 0; v < g.size(); ++v) layer.push_back(VertexMask{1} << v);
  for (int size = 1; size <= max_size && !layer.empty(); ++size) {
    out.insert(out.end(), layer.begin(), layer.end());
    std::vector<VertexMask> next;
    for (VertexMask c : layer) {
      const int top = 63 - std::countl_zero(c);
      VertexMask common = g.all_vertices();
      for (int v : mask_to_list(c)) common &= g.neighbors(v);
      for (int w : mask_to_list(common)) {
        if (w > top) next.push_back(c | (VertexMask{1} << w));
      }
    }
    std::sort(next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

namespace {

void bron_kerbosch(const DefiningGraph& g, VertexMask r, VertexMask p,
                   VertexMask x, std::vector<VertexMask>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  // Pivot maximizing |P ∩ N(u)|.
  int pivot = -1;
  int best = -1;
  for (int u : mask_to_list(p | x)) {
    const int c = std::popcount(p & g.neighbors(u));
    if (c > best) {
      best = c;
      pivot = u;
    }
  }
  for (int v : mask_to_list(p & ~g.neighbors(pivot))) {
    const VertexMask bit = VertexMask{1} << v;
    bron_kerbosch(g, r | bit, p & g.neighbors(v), x & g.neighbors(v), out);
    p &= ~bit;
    x |= bit;
  }
}

bool list_less(VertexMask a, VertexMask b) {
  return mask_to_list(a) < mask_to_list(b);
}

}  // namespace

std::vector<VertexMask> maximal_cliques(const DefiningGraph& g) {
  std::vector<VertexMask> out;
  bron_kerbosch(g, 0, g.all_vertices(), 0, out);
  std::sort(out.begin(), out.end(), list_less);
  return out;
}

SimplicialComplex::SimplicialComplex(std::vector<std::string> labels,
                                     std::vector<Simplex> simplices)
    : labels_(std::move(labels)) {
  for (auto& s : simplices) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int v : s) {
      if (v < 0 || v >= vertex_count()) {
        throw std::invalid_argument("simplex vertex out of range");
      }
    }
  }
  std::sort(simplices.begin(), simplices.end());
  simplices.erase(std::unique(simplices.begin(), simplices.end()),
                  simplices.end());
  for (const auto& s : simplices) {
    if (s.empty()) continue;
    bool contained = false;
    for (const auto& t : simplices) {
      if (t.size() > s.size() &&
          std::includes(t.begin(), t.end(), s.begin(), s.end())) {
        contained = true;
        break;
      }
    }
    if (!contained) maximal_.push_back(s);
  }
}

int SimplicialComplex::dimension() const {
  int d = -1;
  for (const auto& s : maximal_) d = std::max(d, static_cast<int>(s.size()) - 1);
  return d;
}

std::vector<Simplex> SimplicialComplex::simplices(int dim) const {
  std::set<Simplex> out;
  const std::size_t size = static_cast<std::size_t>(dim + 1);
  for (const auto& m : maximal_) {
    if (m.size() < size || dim < 0) continue;
    // Enumerate size-subsets of m in lexicographic order.
    std::vector<int> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = static_cast<int>(i);
    while (true) {
      Simplex s(size);
      for (std::size_t i = 0; i < size; ++i) s[i] = m[idx[i]];
      out.insert(std::move(s));
      int i = static_cast<int>(size) - 1;
      while (i >= 0 &&
             idx[i] == static_cast<int>(m.size() - size) + i) {
        --i;
      }
      if (i < 0) break;
      ++idx[i];
      for (std::size_t j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return {out.begin(), out.end()};
}

bool SimplicialComplex::contains(const Simplex& s) const {
  for (const auto& m : maximal_) {
    if (std::includes(m.begin(), m.end(), s.begin(), s.end())) return true;
  }
  return false;
}

SimplicialComplex flag_complex(const DefiningGraph& g) {
  std::vector<Simplex> simplices;
  for (VertexMask c : maximal_cliques(g)) simplices.push_back(mask_to_list(c));
  return SimplicialComplex(g.names(), std::move(simplices));
}

SimplicialComplex signed_link(const SimplicialComplex& l) {
  std::vector<std::string> labels;
  for (const auto& name : l.labels()) {
    labels.push_back("+" + name);
    labels.push_back("-" + name);
  }
  std::vector<Simplex> simplices;
  for (const auto& m : l.maximal_simplices()) {
    const std::size_t n = m.size();
    for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << n); ++signs) {
      Simplex s(n);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = 2 * m[i] + static_cast<int>((signs >> i) & 1U);
      }
      simplices.push_back(std::move(s));
    }
  }
  return SimplicialComplex(std::move(labels), std::move(simplices));
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::indeterminate:
      return "indeterminate";
  }
  return "?";
}

Verdict OrthoplexReport::overall() const {
  if (!pseudomanifold || !boundary_orthoplex || !interior_simplex) {
    return Verdict::fail;
  }
  return collapsible;
}

bool greedy_collapses_to_point(const SimplicialComplex& l) {
  std::set<Simplex> cells;
  for (int d = 0; d <= l.dimension(); ++d) {
    for (auto& s : l.simplices(d)) cells.insert(std::move(s));
  }
  auto cofaces = [&](const Simplex& t) {
    std::vector<const Simplex*> out;
    for (const auto& s : cells) {
      if (s.size() > t.size() &&
          std::includes(s.begin(), s.end(), t.begin(), t.end())) {
        out.push_back(&s);
      }
    }
    return out;
  };
  bool progress = true;
  while (progress && cells.size() > 1) {
    progress = false;
    // Collapse from the top dimension down for a deterministic order.
    std::vector<Simplex> order(cells.begin(), cells.end());
    std::stable_sort(order.begin(), order.end(),
                     [](const Simplex& a, const Simplex& b) {
                       return a.size() > b.size();
                     });
    for (const auto& t : order) {
      if (!cells.count(t)) continue;
      auto co = cofaces(t);
      if (co.size() == 1 && co.front()->size() == t.size() + 1) {
        Simplex s = *co.front();
        cells.erase(s);
        cells.erase(t);
        progress = true;
      }
    }
  }
  return cells.size() == 1;
}

OrthoplexReport orthoplex_check(const DefiningGraph& g, int k) {
  OrthoplexReport rep;
  rep.k = k;
  const SimplicialComplex l = flag_complex(g);
  const std::size_t top = static_cast<std::size_t>(k + 2);

  // (i) purity and the pseudomanifold-with-boundary condition.
  bool pure = l.dimension() == k + 1;
  for (const auto& m : l.maximal_simplices()) pure = pure && m.size() == top;
  std::map<Simplex, int> face_count;
  for (const auto& m : l.maximal_simplices()) {
    for (std::size_t drop = 0; drop < m.size(); ++drop) {
      Simplex f;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (i != drop) f.push_back(m[i]);
      }
      ++face_count[f];
    }
  }
  bool manifold = true;
  for (const auto& [f, c] : face_count) manifold = manifold && c <= 2;
  rep.pseudomanifold = pure && manifold;
  if (!pure) rep.reasons.push_back("flag complex is not pure of dimension k+1");
  if (!manifold) rep.reasons.push_back("a k-face lies in more than two top simplices");

  // (ii) boundary subcomplex against the k-orthoplex.
  std::vector<Simplex> boundary_faces;
  VertexMask bverts = 0;
  for (const auto& [f, c] : face_count) {
    if (c == 1) {
      boundary_faces.push_back(f);
      for (int v : f) bverts |= VertexMask{1} << v;
    }
  }
  rep.boundary_vertices = mask_to_list(bverts);
  const std::size_t nb = rep.boundary_vertices.size();
  bool ortho = pure && nb == static_cast<std::size_t>(2 * (k + 1));
  if (ortho) {
    // Boundary 1-skeleton adjacency.
    std::map<int, VertexMask> badj;
    for (const auto& f : boundary_faces) {
      for (int u : f) {
        for (int v : f) {
          if (u != v) badj[u] |= VertexMask{1} << v;
        }
      }
    }
    std::vector<int> antipode(g.size(), -1);
    for (int v : rep.boundary_vertices) {
      VertexMask non = bverts & ~badj[v] & ~(VertexMask{1} << v);
      if (std::popcount(non) != 1) {
        ortho = false;
        break;
      }
      antipode[v] = lowest(non);
    }
    if (ortho) {
      for (int v : rep.boundary_vertices) {
        if (antipode[antipode[v]] != v) ortho = false;
        if (ortho && v < antipode[v]) {
          rep.a.push_back(v);
          rep.b.push_back(antipode[v]);
        }
      }
    }
    if (ortho) {
      std::set<Simplex> expected;
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << (k + 1)); ++s) {
        Simplex t;
        for (int i = 0; i <= k; ++i) t.push_back((s >> i) & 1U ? rep.b[i] : rep.a[i]);
        std::sort(t.begin(), t.end());
        expected.insert(t);
      }
      ortho = expected == std::set<Simplex>(boundary_faces.begin(),
                                            boundary_faces.end());
    }
  }
  rep.boundary_orthoplex = ortho;
  if (!ortho) {
    rep.a.clear();
    rep.b.clear();
    rep.reasons.push_back("boundary is not a k-dimensional orthoplex");
  }

  // (iii) ball certificate.
  if (rep.pseudomanifold) {
    rep.collapsible = greedy_collapses_to_point(l) ? Verdict::pass
                                                   : Verdict::indeterminate;
    if (rep.collapsible != Verdict::pass) {
      rep.reasons.push_back("greedy collapse search did not reach a point");
    }
  } else {
    rep.collapsible = Verdict::fail;
  }

  // (iv) strictly interior top simplex.
  if (pure && !boundary_faces.empty()) {
    for (const auto& m : l.maximal_simplices()) {
      bool inside = true;
      for (int v : m) inside = inside && !((bverts >> v) & 1U);
      if (inside) {
        rep.interior_simplex = true;
        rep.sigma = m;
        break;
      }
    }
  }
  if (!rep.interior_simplex) {
    rep.reasons.push_back("no strictly interior top simplex");
  }
  return rep;
}

}  // namespace raagdiv
