#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "raagdiv/cubical.hpp"
#include "raagdiv/filling.hpp"
#include "raagdiv/graph.hpp"

namespace raagdiv {

/// True for n + 1/2.
bool is_half_integer(const mpq_class& q);

/// A chain in the slice complex of h^{-1}(level). Each slice cell is stored
/// as the cube it cuts, so a slice d-chain is a cubical (d+1)-chain of
/// straddling cubes.
struct SliceChain {
  mpq_class level;
  CubicalChain cubes;

  int dim() const { return cubes.dim() - 1; }
  long mass() const { return cubes.mass(); }
};

/// Facets that still straddle the level, with cubical signs.
SliceChain slice_boundary(const Raag& raag, const SliceChain& c);

struct SliceWindow {
  mpq_class level;
  int radius = 0;
  std::vector<std::vector<Cube>> cells;  // cells[d]: slice d-cells

  int dim() const { return static_cast<int>(cells.size()) - 1; }
  std::size_t cell_count() const;
};

/// Slice cells cut from the cubes of the radius ball. The level must be a
/// half-integer.
SliceWindow slice_window(const Raag& raag, const mpq_class& level, int radius,
                         std::size_t vertex_budget = kDefaultVertexBudget);

/// Labels of a k-orthoplex graph: boundary pairs (a_i, b_i) and an interior
/// top simplex.
struct OrthoplexData {
  int k = 0;
  std::vector<int> a;
  std::vector<int> b;
  Simplex sigma;
};

/// Runs orthoplex_check with k = dim L - 1. Throws std::invalid_argument
/// unless every verdict passes.
OrthoplexData orthoplex_data(const DefiningGraph& g);

/// F(x) = γ_0(x_0)···γ_k(x_k) with γ_i(n) = a_i b_i a_i ... (n letters) for
/// n >= 0 and b_i a_i b_i ... (|n| letters) for n < 0.
GroupElement orthoplex_flat_vertex(const Raag& raag, const OrthoplexData& d,
                                   const std::vector<long>& x);

/// The (k+1)-cube of the flat spanning lattice cell x (coordinates between
/// x_i and x_i + 1), and its orientation sign relative to the coordinate
/// order.
Cube orthoplex_flat_cell(const Raag& raag, const OrthoplexData& d, const std::vector<long>& x);
int orthoplex_cell_sign(const OrthoplexData& d, const std::vector<long>& x);

/// Σ_r: the slice cells at `level` of a_0^m F̄, with m chosen so that the cut
/// is the height r - 1/2 section of F̄. A k-cycle; the least cell has +1.
SliceChain sigma_cycle(const Raag& raag, const OrthoplexData& d, int r,
                       const mpq_class& level = mpq_class(1, 2));

/// #{x ∈ Z^{k+1} : |x|_1 = j}.
mpz_class lattice_sphere_count(int k, long j);

/// Σ_{j=0}^{r} N_j (r-j)^{k+1} · sigma_mass.
mpq_class pushed_filling_lower_bound(int k, long r, const mpq_class& sigma_mass);

struct ScaledCopyTerm {
  enum class Polarity { positive_link, negative_link };
  GroupElement base;
  long scale = 0;
  int sign = 1;
  Polarity polarity = Polarity::positive_link;
};

/// The formal terms (-1)^j a_0^{-r} F(x) s_{r-j}(λ), |x|_1 = j <= r.
std::vector<ScaledCopyTerm> pushed_filling_terms(const Raag& raag, const OrthoplexData& d, int r);

/// Candidate filling cells for Σ_r: for every flat vertex v below the level
/// and every maximal clique σ of Γ, the straddling (k+2)-cubes based at
/// v·∏_{g∈σ} g^{n_g} with n_g >= -slack and labels in σ.
std::vector<Cube> cone_cells(const Raag& raag, const OrthoplexData& d, int r,
                             const mpq_class& level, int slack);

struct BbOptions {
  mpq_class level{1, 2};
  std::size_t cell_budget = kDefaultCellBudget;
  int max_slack = 2;
  SolverBudget solver;
  int fit_from = 2;
};

struct BbRow {
  int r = 0;
  long sigma_mass = 0;
  long fill_mass = 0;
  mpq_class lower_bound;       // pushed_filling_lower_bound(k, r, 1)
  mpq_class lower_bound_prev;  // pushed_filling_lower_bound(k, r - 1, 1)
  Optimality optimality = Optimality::unique;
  int window_radius = 0;
  std::size_t window_cells = 0;
  int slack = 0;
};

struct BbTable {
  int k = 0;
  mpq_class level;
  std::vector<BbRow> rows;
  std::optional<double> exponent;  // fitted over rows with r >= fit_from
  bool truncated = false;
  std::string truncation_reason;
};

BbTable bb_fill_experiment(const Raag& raag, const OrthoplexData& d, int rmax,
                           const BbOptions& opt = {});

/// Exact minimal filling of Σ_r in the slice complex, with the cone window
/// grown by slack until feasible.
BbRow bb_fill_row(const Raag& raag, const OrthoplexData& d, int r, const BbOptions& opt = {});

}  // namespace raagdiv
