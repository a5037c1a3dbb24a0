#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "raagdiv/words.hpp"

namespace raagdiv {

/// Raised when a window or search would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cube (g, S) of X_Γ: vertices g·∏_{t∈T} a_t for T ⊆ S. The base is the
/// vertex from which every cube edge points in a positive direction.
struct Cube {
  GroupElement base;
  VertexMask labels = 0;

  int dim() const;
  friend bool operator==(const Cube& a, const Cube& b) {
    return a.labels == b.labels && a.base == b.base;
  }
  friend bool operator<(const Cube& a, const Cube& b) {
    if (a.base == b.base) return a.labels < b.labels;
    return a.base < b.base;
  }
};

/// The 2^dim vertices of a cube, indexed by subset mask of the sorted labels.
std::vector<GroupElement> cube_vertices(const Raag& raag, const Cube& c);
/// Minimum and maximum vertex word length.
std::pair<int, int> cube_length_range(const Raag& raag, const Cube& c);

/// True when the height interval [h(base), h(base)+dim] of the cube strictly
/// contains `level`.
bool straddles(const Cube& c, const mpq_class& level);

/// Sparse integer chain of cubes of a single dimension.
class CubicalChain {
 public:
  explicit CubicalChain(int dim = 0) : dim_(dim) {}

  int dim() const { return dim_; }
  const std::map<Cube, long>& coeffs() const { return coeffs_; }
  long coeff(const Cube& c) const;
  void add(const Cube& c, long v);
  long mass() const;
  bool empty() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }

  friend bool operator==(const CubicalChain& a, const CubicalChain& b) {
    return a.dim_ == b.dim_ && a.coeffs_ == b.coeffs_;
  }

 private:
  int dim_;
  std::map<Cube, long> coeffs_;
};

/// Signed facets of a cube:
/// ∂(v,S) = Σ_i (-1)^i [(v·a_i, S∖a_i) − (v, S∖a_i)], a_i the i-th label.
std::vector<std::pair<Cube, int>> cube_facets(const Raag& raag, const Cube& c);
CubicalChain cubical_boundary(const Raag& raag, const CubicalChain& c);

/// Drops the cubes that do not straddle `level`.
CubicalChain straddling_part(const CubicalChain& c, const mpq_class& level);

/// The full subcomplex of X_Γ spanned by a finite vertex set: every cube of
/// dim <= maxdim whose vertices all lie in the set. Closed under faces. The
/// Raag must outlive the window.
class Window {
 public:
  struct Key {
    std::uint32_t base;
    VertexMask labels;
    friend auto operator<=>(const Key&, const Key&) = default;
  };

  Window(const Raag& raag, std::vector<GroupElement> vertices, int maxdim);

  const Raag& raag() const { return *raag_; }
  const std::vector<GroupElement>& vertices() const { return vertices_; }
  /// Index of a vertex or -1.
  long index_of(const GroupElement& v) const;
  int maxdim() const { return static_cast<int>(cubes_.size()) - 1; }
  const std::vector<Key>& cubes(int dim) const { return cubes_.at(dim); }
  std::size_t cell_count() const;
  Cube cube(const Key& k) const { return {vertices_[k.base], k.labels}; }
  bool contains(const Cube& c) const;

  int radius = -1;                         // ball radius, if built as a ball
  std::optional<mpq_class> avoid_radius;   // vertex-level avoidance
  std::optional<std::pair<int, int>> height_band;

  /// The induced subcomplex on the kept vertices (by index).
  Window restrict_vertices(const std::vector<bool>& keep) const;

 private:
  const Raag* raag_;
  std::vector<GroupElement> vertices_;
  std::unordered_map<GroupElement, std::uint32_t> index_;
  std::vector<std::vector<Key>> cubes_;
};

inline constexpr std::size_t kDefaultVertexBudget = 2'000'000;

/// All elements of length <= radius with every cube of dim <= maxdim whose
/// vertices all lie in the ball.
Window ball_window(const Raag& raag, int radius, int maxdim,
                   std::size_t vertex_budget = kDefaultVertexBudget);

/// Elements of length exactly r, in shortlex order.
std::vector<GroupElement> sphere_vertices(const Raag& raag, int r,
                                          std::size_t vertex_budget = kDefaultVertexBudget);

/// Sphere sizes |S_0|, ..., |S_rmax| by breadth-first search on neighbors().
std::vector<std::size_t> sphere_sizes(const Raag& raag, int rmax,
                                      std::size_t vertex_budget = kDefaultVertexBudget);

/// Cubes all of whose vertices have length >= ceil(r).
Window avoidant_filter(const Window& w, const mpq_class& r);

/// ceil of a nonnegative rational as int.
int ceil_int(const mpq_class& q);

}  // namespace raagdiv
