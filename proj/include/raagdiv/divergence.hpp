#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "raagdiv/bb.hpp"
#include "raagdiv/cubical.hpp"
#include "raagdiv/filling.hpp"
#include "raagdiv/words.hpp"

namespace raagdiv {

inline constexpr std::size_t kDefaultBfsBudget = 10'000'000;

struct AvoidantDistance {
  enum class Status { found, unreachable, budget_exceeded };
  Status status = Status::found;
  long length = -1;
  std::size_t states = 0;
};

/// Length of a shortest edge path from x to y through vertices of length
/// >= ceil(avoid_r). A* search guided by the word-metric distance to y.
AvoidantDistance avoidant_distance(const Raag& raag, const GroupElement& x,
                                   const GroupElement& y, const mpq_class& avoid_r,
                                   std::size_t budget = kDefaultBfsBudget);

/// When Γ is disconnected the Cayley graph is a tree of pieces. Returns true
/// if some vertex that every x-y path must visit has length < bound.
bool separated_by_ball(const Raag& raag, const GroupElement& x, const GroupElement& y,
                       int bound);

/// Least-squares slope of log(value) against log(r). Needs two rows with
/// positive r and value; throws std::invalid_argument otherwise.
double fit_exponent(const std::vector<std::pair<double, double>>& rows);

/// Σ_{j=0}^{⌊r/n⌋} max(0, ρr - jn).
mpq_class corridor_bound(long r, long n, const mpq_class& rho);

/// The cubes of the flat through `center` spanned by the commuting generators
/// `gens` whose vertices center·∏ g_i^{y_i} all satisfy |y|_1 <= s.
CubicalChain flat_ball_chain(const Raag& raag, const GroupElement& center,
                             const std::vector<int>& gens, int s);
/// ∂ of flat_ball_chain.
CubicalChain flat_sphere_cycle(const Raag& raag, const GroupElement& center,
                               const std::vector<int>& gens, int s);

enum class Method { bfs_exact, ilp_exact, pushed_construction, analytic_bound, none };
std::string_view to_string(Method m);

struct DivergenceRow {
  int r = 0;
  std::string witness;
  long cycle_mass = 0;  // k >= 1 only
  std::optional<mpq_class> lower;
  Method lower_method = Method::none;
  std::optional<mpq_class> upper;
  Method upper_method = Method::none;
  std::optional<mpq_class> corridor;  // div0, non-product only
  std::optional<mpq_class> reference; // equatorial: minimal filling without avoidance
  std::string optimality;             // fill rows
  int window_radius = 0;
  bool flagged = false;     // budget hit or window boundary touched
  bool budget_hit = false;
  std::string note;
};

struct DivergenceReport {
  std::string graph_id;
  int k = 0;
  mpq_class rho = 1;
  std::optional<mpq_class> alpha;
  std::vector<DivergenceRow> rows;
  /// Fitted exponents per witness: (lower, upper).
  std::map<std::string, std::pair<std::optional<double>, std::optional<double>>> exponents;
  std::string predicted_class;
  std::optional<int> push_constant;       // C with |push_path| <= C·r·|p|
  std::optional<double> max_push_ratio;   // max |push_path| / (r·|p|)
  std::vector<std::string> notes;
};

struct Div0Options {
  std::size_t bfs_budget = kDefaultBfsBudget;
  int threads = 1;
};

/// Witness pairs (η(r), η(-r)) for non-products, (a^r, a^{-r}) with a the
/// first generator for products.
DivergenceReport div0_experiment(const Raag& raag, int rmax, const mpq_class& rho,
                                 const Div0Options& opt = {});

struct DivkOptions {
  std::size_t cell_budget = kDefaultCellBudget;
  std::size_t vertex_budget = kDefaultVertexBudget;
  SolverBudget solver;
  int threads = 1;
};

/// Witness families: "clique-sphere" (translated ℓ¹ spheres of radius
/// max(k+1, ⌊αr⌋) in a (k+1)-clique flat), "equatorial" (∂D_{r+1} in a
/// (k+1)-flat inside a (k+2)-clique flat, linking the ball) and, for
/// k-orthoplex graphs, "sigma-prime" (the slice cycle F̄ ∩ h^{-1}(r - 1/2)).
DivergenceReport divk_experiment(const Raag& raag, int k, int rmax, const mpq_class& rho,
                                 const mpq_class& alpha, const DivkOptions& opt = {});

/// "linear", "quadratic", "undefined-infinitely-many-ends" or
/// "undefined-two-ends".
std::string predicted_div0_class(const DefiningGraph& g);

}  // namespace raagdiv
