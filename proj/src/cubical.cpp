#include "raagdiv/cubical.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <unordered_set>

namespace raagdiv {

namespace {

std::vector<int> bits_of(VertexMask m) {
  std::vector<int> out;
  for (; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

}  // namespace

int Cube::dim() const { return std::popcount(labels); }

bool straddles(const Cube& c, const mpq_class& level) {
  const int h = c.base.height();
  return h < level && level < h + c.dim();
}

std::vector<GroupElement> cube_vertices(const Raag& raag, const Cube& c) {
  const auto gens = bits_of(c.labels);
  std::vector<GroupElement> out(std::size_t{1} << gens.size());
  out[0] = c.base;
  for (std::size_t t = 1; t < out.size(); ++t) {
    const int top = 63 - std::countl_zero(static_cast<std::uint64_t>(t));
    out[t] = raag.multiply(out[t & ~(std::size_t{1} << top)], Letter(gens[top], 1));
  }
  return out;
}

std::pair<int, int> cube_length_range(const Raag& raag, const Cube& c) {
  int lo = c.base.length();
  int hi = lo;
  for (const auto& v : cube_vertices(raag, c)) {
    lo = std::min(lo, v.length());
    hi = std::max(hi, v.length());
  }
  return {lo, hi};
}

long CubicalChain::coeff(const Cube& c) const {
  auto it = coeffs_.find(c);
  return it == coeffs_.end() ? 0 : it->second;
}

void CubicalChain::add(const Cube& c, long v) {
  if (c.dim() != dim_) throw std::invalid_argument("chain dimension mismatch");
  if (v == 0) return;
  auto [it, inserted] = coeffs_.try_emplace(c, v);
  if (!inserted) {
    it->second += v;
    if (it->second == 0) coeffs_.erase(it);
  }
}

long CubicalChain::mass() const {
  long m = 0;
  for (const auto& [c, v] : coeffs_) m += std::labs(v);
  return m;
}

std::vector<std::pair<Cube, int>> cube_facets(const Raag& raag, const Cube& c) {
  std::vector<std::pair<Cube, int>> out;
  const auto gens = bits_of(c.labels);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const int sign = i % 2 == 0 ? 1 : -1;
    const VertexMask rest = c.labels & ~(VertexMask{1} << gens[i]);
    out.push_back({Cube{raag.multiply(c.base, Letter(gens[i], 1)), rest}, sign});
    out.push_back({Cube{c.base, rest}, -sign});
  }
  return out;
}

CubicalChain cubical_boundary(const Raag& raag, const CubicalChain& c) {
  if (c.dim() < 1) throw std::invalid_argument("boundary of a 0-chain");
  CubicalChain out(c.dim() - 1);
  for (const auto& [cube, v] : c.coeffs()) {
    for (const auto& [f, s] : cube_facets(raag, cube)) out.add(f, s * v);
  }
  return out;
}

CubicalChain straddling_part(const CubicalChain& c, const mpq_class& level) {
  CubicalChain out(c.dim());
  for (const auto& [cube, v] : c.coeffs()) {
    if (straddles(cube, level)) out.add(cube, v);
  }
  return out;
}

Window::Window(const Raag& raag, std::vector<GroupElement> vertices, int maxdim)
    : raag_(&raag), vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  index_.reserve(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    index_.emplace(vertices_[i], static_cast<std::uint32_t>(i));
  }
  const int n = raag.rank();
  // up[v*n + g] = index of v·a_g, or -1.
  std::vector<long> up(vertices_.size() * static_cast<std::size_t>(n), -1);
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    for (int g = 0; g < n; ++g) {
      up[v * n + g] = index_of(raag.multiply(vertices_[v], Letter(g, 1)));
    }
  }
  cubes_.assign(static_cast<std::size_t>(std::max(maxdim, 0)) + 1, {});
  const auto all = cliques(raag.graph(), maxdim);
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    cubes_[0].push_back({static_cast<std::uint32_t>(v), 0});
    for (VertexMask s : all) {
      // The corner opposite the base is reachable iff all corners are: walk
      // every subset in increasing order reusing smaller subsets.
      const auto gens = bits_of(s);
      std::vector<long> corner(std::size_t{1} << gens.size(), -1);
      corner[0] = static_cast<long>(v);
      bool ok = true;
      for (std::size_t t = 1; t < corner.size() && ok; ++t) {
        const int top = 63 - std::countl_zero(static_cast<std::uint64_t>(t));
        const long from = corner[t & ~(std::size_t{1} << top)];
        corner[t] = up[static_cast<std::size_t>(from) * n + gens[top]];
        ok = corner[t] >= 0;
      }
      if (ok) cubes_[gens.size()].push_back({static_cast<std::uint32_t>(v), s});
    }
  }
  for (auto& list : cubes_) std::sort(list.begin(), list.end());
}

long Window::index_of(const GroupElement& v) const {
  auto it = index_.find(v);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

std::size_t Window::cell_count() const {
  std::size_t n = 0;
  for (const auto& l : cubes_) n += l.size();
  return n;
}

bool Window::contains(const Cube& c) const {
  const long b = index_of(c.base);
  if (b < 0 || c.dim() > maxdim()) return false;
  return std::binary_search(cubes_[c.dim()].begin(), cubes_[c.dim()].end(),
                            Key{static_cast<std::uint32_t>(b), c.labels});
}

Window Window::restrict_vertices(const std::vector<bool>& keep) const {
  std::vector<GroupElement> kept;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (keep.at(i)) kept.push_back(vertices_[i]);
  }
  Window w(*raag_, std::move(kept), maxdim());
  w.radius = radius;
  w.avoid_radius = avoid_radius;
  w.height_band = height_band;
  return w;
}

namespace {

std::vector<std::vector<GroupElement>> bfs_spheres(const Raag& raag, int rmax,
                                                   std::size_t budget) {
  std::vector<std::vector<GroupElement>> spheres{{raag.identity()}};
  std::unordered_set<GroupElement> prev;
  std::unordered_set<GroupElement> cur{raag.identity()};
  std::size_t total = 1;
  for (int r = 1; r <= rmax; ++r) {
    std::unordered_set<GroupElement> next;
    for (const auto& x : spheres.back()) {
      for (auto& y : raag.neighbors(x)) {
        if (y.length() == r) next.insert(std::move(y));
      }
    }
    total += next.size();
    if (total > budget) {
      throw BudgetExceeded("ball of radius " + std::to_string(r) +
                           " exceeds the vertex budget");
    }
    std::vector<GroupElement> layer(next.begin(), next.end());
    std::sort(layer.begin(), layer.end());
    spheres.push_back(std::move(layer));
  }
  return spheres;
}

}  // namespace

Window ball_window(const Raag& raag, int radius, int maxdim, std::size_t vertex_budget) {
  if (radius < 0) throw std::invalid_argument("negative radius");
  std::vector<GroupElement> all;
  for (auto& layer : bfs_spheres(raag, radius, vertex_budget)) {
    all.insert(all.end(), layer.begin(), layer.end());
  }
  Window w(raag, std::move(all), maxdim);
  w.radius = radius;
  return w;
}

std::vector<GroupElement> sphere_vertices(const Raag& raag, int r, std::size_t vertex_budget) {
  if (r < 0) throw std::invalid_argument("negative radius");
  return bfs_spheres(raag, r, vertex_budget).back();
}

std::vector<std::size_t> sphere_sizes(const Raag& raag, int rmax, std::size_t vertex_budget) {
  std::vector<std::size_t> out;
  for (const auto& layer : bfs_spheres(raag, rmax, vertex_budget)) out.push_back(layer.size());
  return out;
}

int ceil_int(const mpq_class& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return static_cast<int>(c.get_si());
}

Window avoidant_filter(const Window& w, const mpq_class& r) {
  const int bound = ceil_int(r);
  std::vector<bool> keep(w.vertices().size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    keep[i] = w.vertices()[i].length() >= bound;
  }
  Window out = w.restrict_vertices(keep);
  out.avoid_radius = r;
  return out;
}

}  // namespace raagdiv
