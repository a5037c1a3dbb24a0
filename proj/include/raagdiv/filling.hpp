#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "raagdiv/cubical.hpp"

namespace raagdiv {

enum class Optimality { exact_ilp, unique, lp_bound_only };
std::string_view to_string(Optimality o);

class FillingError : public std::runtime_error {
 public:
  enum class Kind {
    not_a_cycle,
    outside_window,
    infeasible_in_window,  // no rational filling: the window must grow
    integer_infeasible,    // rational fillings exist, integral ones do not
    rank_deficient,
  };
  FillingError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct SolverBudget {
  std::size_t pivots = 5'000'000;
  std::size_t nodes = 5'000;
};

/// Fill `cycle` (a k-chain) with (k+1)-cells taken from `cells`. When `level`
/// is set, every cube stands for its slice cell in h^{-1}(level): a cube of
/// dim d is a (d-1)-cell, and boundaries keep only faces that still straddle.
struct FillingProblem {
  std::vector<Cube> cells;
  CubicalChain cycle;
  std::optional<mpq_class> level;
  /// Cells with a vertex this long touch the window boundary; -1 disables.
  int boundary_length = -1;
};

/// Every (k+1)-cube of the window (straddling ones only, with a level). The
/// cycle must lie in the window.
FillingProblem window_problem(const Window& w, CubicalChain cycle,
                              std::optional<mpq_class> level = std::nullopt);

struct FillingResult {
  std::optional<CubicalChain> chain;  // absent only for lp_bound_only without incumbent
  long mass = 0;
  Optimality optimality = Optimality::exact_ilp;
  std::optional<mpq_class> lp_bound;
  /// The chain uses a cell on the window boundary, so a larger window might
  /// admit a smaller filling.
  bool touches_boundary = false;
  std::size_t pivots = 0;
  std::size_t nodes = 0;
};

/// ∂ in the problem's complex: cubical, or slice when a level is given.
CubicalChain problem_boundary(const Raag& raag, const CubicalChain& c,
                              const std::optional<mpq_class>& level);

/// Branch and bound over min Σ(b⁺+b⁻) s.t. ∂(b⁺−b⁻) = cycle.
FillingResult min_filling(const Raag& raag, const FillingProblem& p,
                          const SolverBudget& budget = {});

/// Exact sparse elimination; requires the boundary matrix to be injective.
FillingResult unique_filling(const Raag& raag, const FillingProblem& p);

/// unique_filling, falling back to min_filling on rank deficiency.
FillingResult best_filling(const Raag& raag, const FillingProblem& p,
                           const SolverBudget& budget = {});

/// Optimal value of the LP relaxation.
mpq_class lp_lower_bound(const Raag& raag, const FillingProblem& p,
                         std::size_t pivot_budget = SolverBudget{}.pivots);

inline constexpr std::size_t kDefaultCellBudget = 5'000'000;

struct ProfileOptions {
  mpq_class rho = 1;
  std::size_t cell_budget = kDefaultCellBudget;
  std::size_t vertex_budget = kDefaultVertexBudget;
  SolverBudget solver;
};

struct ProfileRow {
  int r = 0;
  long cycle_mass = 0;
  std::optional<long> fill_mass;
  Optimality optimality = Optimality::exact_ilp;
  std::optional<mpq_class> lp_bound;
  int window_radius = 0;
  std::size_t window_cells = 0;
  bool touches_boundary = false;
  std::string status = "ok";  // ok | budget | integer-infeasible
};

/// Minimal ρr-avoidant fillings of an r-indexed cycle family, each in a ball
/// window grown by 2 until feasible or over the cell budget. Requires
/// divdim(Γ) >= k.
std::vector<ProfileRow> avoidant_fill_profile(const Raag& raag,
                                              const std::vector<std::pair<int, CubicalChain>>& family,
                                              const ProfileOptions& opt = {});

}  // namespace raagdiv
