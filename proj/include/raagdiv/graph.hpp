#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace raagdiv {

/// Bitmask over generator indices. Graphs are limited to 64 vertices.
using VertexMask = std::uint64_t;

inline constexpr int kMaxVertices = 64;

/// Thrown for malformed user input (graph files, chain files, words).
/// `where` names the offending location, e.g. "edges[2]".
class InputError : public std::runtime_error {
 public:
  InputError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what),
        where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// A finite simple graph. Vertex indices follow declaration order.
class DefiningGraph {
 public:
  DefiningGraph() = default;
  /// Validates: unique non-empty names, endpoints in range, no loops, no
  /// duplicate edges. Throws InputError.
  DefiningGraph(std::vector<std::string> names,
                std::vector<std::pair<int, int>> edges);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int v) const { return names_.at(v); }
  const std::vector<std::string>& names() const { return names_; }
  /// Index of a vertex name, or -1.
  int index_of(std::string_view name) const;

  bool adjacent(int u, int v) const { return (adj_[u] >> v) & 1U; }
  VertexMask neighbors(int v) const { return adj_[v]; }
  VertexMask all_vertices() const;
  /// Edges as (u,v) with u < v, sorted.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// Stable 64-bit fingerprint of names and edges.
  std::uint64_t fingerprint() const;
  /// Canonical JSON text (declaration order, sorted edges).
  std::string to_json() const;

  friend bool operator==(const DefiningGraph& a, const DefiningGraph& b) {
    return a.names_ == b.names_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<VertexMask> adj_;
};

/// Parses {"vertices": [...], "edges": [[u,v],...]}. Unknown keys rejected.
DefiningGraph parse_graph(std::string_view text);
DefiningGraph load_graph(const std::string& path);

DefiningGraph complement(const DefiningGraph& g);

/// Connected components as vertex masks, ordered by smallest member.
std::vector<VertexMask> components(const DefiningGraph& g);

/// A partition (A,B) with every vertex of A adjacent to every vertex of B,
/// or nullopt when the complement is connected. A is the complement
/// component containing vertex 0.
std::optional<std::pair<VertexMask, VertexMask>> join_decomposition(
    const DefiningGraph& g);

/// All cliques (including singletons) with at most `max_size` vertices, as
/// masks in increasing (popcount, value) order. The empty clique is omitted.
std::vector<VertexMask> cliques(const DefiningGraph& g, int max_size);

/// Maximal cliques via Bron-Kerbosch with pivoting, sorted by their vertex
/// lists.
std::vector<VertexMask> maximal_cliques(const DefiningGraph& g);

using Simplex = std::vector<int>;

/// A finite simplicial complex given by its maximal simplices.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  /// Faces are implied by closure; non-maximal inputs are dropped.
  SimplicialComplex(std::vector<std::string> labels,
                    std::vector<Simplex> simplices);

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Simplex>& maximal_simplices() const { return maximal_; }
  /// -1 for the empty complex.
  int dimension() const;
  /// All simplices of the given dimension, lexicographically sorted.
  std::vector<Simplex> simplices(int dim) const;
  bool contains(const Simplex& s) const;

 private:
  std::vector<std::string> labels_;
  std::vector<Simplex> maximal_;
};

SimplicialComplex flag_complex(const DefiningGraph& g);

/// S(L): vertex 2i is +v_i, vertex 2i+1 is -v_i.
SimplicialComplex signed_link(const SimplicialComplex& l);

enum class Verdict { pass, fail, indeterminate };
std::string_view to_string(Verdict v);

/// Outcome of the k-orthoplex graph test.
struct OrthoplexReport {
  int k = 0;
  bool pseudomanifold = false;       // pure of dim k+1, k-faces in <= 2 tops
  bool boundary_orthoplex = false;   // boundary is the k-orthoplex
  Verdict collapsible = Verdict::fail;
  bool interior_simplex = false;     // a top simplex avoiding the boundary
  std::vector<int> a;                // a_i labels, i = 0..k
  std::vector<int> b;                // b_i labels, antipodal to a_i
  std::vector<int> boundary_vertices;
  Simplex sigma;                     // a strictly interior top simplex
  std::vector<std::string> reasons;

  Verdict overall() const;
};

OrthoplexReport orthoplex_check(const DefiningGraph& g, int k);

/// Greedy elementary collapses; true if the complex collapses to a vertex.
/// A false result does not prove non-collapsibility.
bool greedy_collapses_to_point(const SimplicialComplex& l);

}  // namespace raagdiv
