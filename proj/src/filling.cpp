#include "raagdiv/filling.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "raagdiv/homology.hpp"
#include "raagdiv/lp.hpp"

namespace raagdiv {

std::string_view to_string(Optimality o) {
  switch (o) {
    case Optimality::exact_ilp: return "exact-ILP";
    case Optimality::unique: return "unique";
    case Optimality::lp_bound_only: return "LP-bound-only";
  }
  return "?";
}

CubicalChain problem_boundary(const Raag& raag, const CubicalChain& c,
                              const std::optional<mpq_class>& level) {
  CubicalChain d = cubical_boundary(raag, c);
  return level ? straddling_part(d, *level) : d;
}

FillingProblem window_problem(const Window& w, CubicalChain cycle, std::optional<mpq_class> level) {
  const int k = cycle.dim();
  if (k + 1 > w.maxdim()) throw std::invalid_argument("window has no cells of dim k+1");
  for (const auto& [c, v] : cycle.coeffs()) {
    if (!w.contains(c)) {
      throw FillingError(FillingError::Kind::outside_window, "cycle is not supported in the window");
    }
  }
  FillingProblem p;
  for (const auto& key : w.cubes(k + 1)) {
    Cube c = w.cube(key);
    if (!level || straddles(c, *level)) p.cells.push_back(std::move(c));
  }
  p.cycle = std::move(cycle);
  p.level = std::move(level);
  if (w.radius >= 0) p.boundary_length = w.radius;
  return p;
}

namespace {

struct Matrix {
  std::vector<Cube> faces;
  std::vector<std::vector<std::pair<std::uint32_t, int>>> columns;  // (row, sign)
  std::vector<long> rhs;
};

void check_cycle(const Raag& raag, const FillingProblem& p) {
  const CubicalChain& a = p.cycle;
  if (a.dim() == 0) {
    long total = 0;
    for (const auto& [c, v] : a.coeffs()) total += v;
    if (total != 0) throw FillingError(FillingError::Kind::not_a_cycle, "0-chain with nonzero sum");
  } else if (!problem_boundary(raag, a, p.level).empty()) {
    throw FillingError(FillingError::Kind::not_a_cycle, "chain has nonzero boundary");
  }
  if (p.level) {
    for (const auto& [c, v] : a.coeffs()) {
      if (!straddles(c, *p.level)) {
        throw FillingError(FillingError::Kind::not_a_cycle, "cycle cell misses the level");
      }
    }
  }
}

Matrix assemble(const Raag& raag, const FillingProblem& p) {
  Matrix m;
  std::map<Cube, std::uint32_t> rows;
  auto row_of = [&](const Cube& c) {
    auto [it, inserted] = rows.try_emplace(c, static_cast<std::uint32_t>(m.faces.size()));
    if (inserted) m.faces.push_back(c);
    return it->second;
  };
  for (const auto& [c, v] : p.cycle.coeffs()) row_of(c);
  m.columns.reserve(p.cells.size());
  for (const Cube& cell : p.cells) {
    if (cell.dim() != p.cycle.dim() + 1) throw std::invalid_argument("cell of wrong dimension");
    std::map<std::uint32_t, int> col;
    for (const auto& [f, s] : cube_facets(raag, cell)) {
      if (p.level && !straddles(f, *p.level)) continue;
      col[row_of(f)] += s;
    }
    auto& out = m.columns.emplace_back();
    for (const auto& [r, s] : col) {
      if (s != 0) out.emplace_back(r, s);
    }
  }
  m.rhs.assign(m.faces.size(), 0);
  for (const auto& [c, v] : p.cycle.coeffs()) m.rhs[rows.at(c)] = v;
  return m;
}

lp::Problem relaxation(const Matrix& m) {
  lp::Problem lp;
  const std::size_t n = m.columns.size();
  lp.num_vars = 2 * n;
  lp.cost.assign(2 * n, mpq_class(1));
  lp.rows.resize(m.faces.size());
  lp.rhs.resize(m.faces.size());
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& [r, s] : m.columns[j]) {
      lp.rows[r].emplace_back(2 * j, mpq_class(s));
      lp.rows[r].emplace_back(2 * j + 1, mpq_class(-s));
    }
  }
  for (std::size_t r = 0; r < m.faces.size(); ++r) lp.rhs[r] = m.rhs[r];
  return lp;
}

void finish(const Raag& raag, const FillingProblem& p, FillingResult& res) {
  if (!res.chain) return;
  if (!(problem_boundary(raag, *res.chain, p.level) == p.cycle)) {
    throw std::logic_error("solver output does not bound the cycle");
  }
  res.mass = res.chain->mass();
  if (p.boundary_length >= 0) {
    for (const auto& [c, v] : res.chain->coeffs()) {
      if (cube_length_range(raag, c).second >= p.boundary_length) {
        res.touches_boundary = true;
        break;
      }
    }
  }
}

[[noreturn]] void window_infeasible(const mpq_class& certificate) {
  throw FillingError(FillingError::Kind::infeasible_in_window,
                     "no filling in the window (phase-one residual " + certificate.get_str() + ")");
}

}  // namespace

FillingResult min_filling(const Raag& raag, const FillingProblem& p, const SolverBudget& budget) {
  check_cycle(raag, p);
  FillingResult res;
  if (p.cycle.empty()) {
    res.chain = CubicalChain(p.cycle.dim() + 1);
    res.lp_bound = 0;
    return res;
  }
  const Matrix m = assemble(raag, p);
  const lp::Problem lp = relaxation(m);
  const lp::IntegerSolution sol = lp::solve_ilp(lp, budget.pivots, budget.nodes);
  res.pivots = sol.pivots;
  res.nodes = sol.nodes;
  if (sol.status == lp::Status::infeasible && !sol.lp_feasible) {
    window_infeasible(lp::solve_lp(lp, budget.pivots).infeasibility);
  }
  if (sol.lp_feasible) res.lp_bound = sol.lp_bound;
  if (sol.status == lp::Status::infeasible) {
    throw FillingError(FillingError::Kind::integer_infeasible,
                       "rational fillings exist but no integral one");
  }
  if (sol.status == lp::Status::optimal) {
    CubicalChain b(p.cycle.dim() + 1);
    for (std::size_t j = 0; j < p.cells.size(); ++j) {
      const mpz_class v = sol.x[2 * j] - sol.x[2 * j + 1];
      b.add(p.cells[j], v.get_si());
    }
    res.chain = std::move(b);
  }
  res.optimality = sol.status == lp::Status::optimal && sol.proven ? Optimality::exact_ilp
                                                                   : Optimality::lp_bound_only;
  finish(raag, p, res);
  return res;
}

mpq_class lp_lower_bound(const Raag& raag, const FillingProblem& p, std::size_t pivot_budget) {
  check_cycle(raag, p);
  if (p.cycle.empty()) return 0;
  const lp::Solution sol = lp::solve_lp(relaxation(assemble(raag, p)), pivot_budget);
  if (sol.status == lp::Status::infeasible) window_infeasible(sol.infeasibility);
  if (sol.status != lp::Status::optimal) throw BudgetExceeded("LP pivot budget exceeded");
  return sol.objective;
}

namespace {

using SparseRow = std::vector<std::pair<std::uint32_t, mpq_class>>;

const mpq_class& entry(const SparseRow& row, std::uint32_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const auto& e, std::uint32_t c) { return e.first < c; });
  return it->second;
}

}  // namespace

FillingResult unique_filling(const Raag& raag, const FillingProblem& p) {
  check_cycle(raag, p);
  const Matrix m = assemble(raag, p);
  const std::size_t nrows = m.faces.size();
  const std::size_t ncols = m.columns.size();

  std::vector<SparseRow> rows(nrows);
  std::vector<std::set<std::uint32_t>> col_rows(ncols);
  for (std::uint32_t j = 0; j < ncols; ++j) {
    for (const auto& [r, s] : m.columns[j]) {
      rows[r].emplace_back(j, mpq_class(s));
      col_rows[j].insert(r);
    }
  }
  for (auto& row : rows) std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) {
    return x.first < y.first;
  });
  std::vector<mpq_class> rhs(nrows);
  for (std::size_t r = 0; r < nrows; ++r) rhs[r] = m.rhs[r];

  std::set<std::pair<std::size_t, std::uint32_t>> active;
  for (std::uint32_t r = 0; r < nrows; ++r) active.emplace(rows[r].size(), r);

  // Forward elimination restricted to rows not yet used as pivots.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pivots;  // (row, col)
  SparseRow merged;
  while (!active.empty()) {
    const auto [size, pr] = *active.begin();
    active.erase(active.begin());
    if (size == 0) {
      if (sgn(rhs[pr]) != 0) {
        throw FillingError(FillingError::Kind::infeasible_in_window,
                           "cycle is not in the span of the window's boundaries");
      }
      continue;
    }
    std::uint32_t pc = rows[pr].front().first;
    for (const auto& [c, v] : rows[pr]) {
      if (col_rows[c].size() < col_rows[pc].size()) pc = c;
    }
    for (const auto& [c, v] : rows[pr]) col_rows[c].erase(pr);
    const mpq_class piv = entry(rows[pr], pc);
    const std::vector<std::uint32_t> targets(col_rows[pc].begin(), col_rows[pc].end());
    for (std::uint32_t r : targets) {
      const mpq_class f = entry(rows[r], pc) / piv;
      active.erase({rows[r].size(), r});
      merged.clear();
      auto a = rows[r].begin();
      auto b = rows[pr].begin();
      while (a != rows[r].end() || b != rows[pr].end()) {
        if (b == rows[pr].end() || (a != rows[r].end() && a->first < b->first)) {
          merged.push_back(std::move(*a++));
        } else if (a == rows[r].end() || b->first < a->first) {
          merged.emplace_back(b->first, -f * b->second);
          col_rows[b->first].insert(r);
          ++b;
        } else {
          mpq_class v = a->second - f * b->second;
          if (sgn(v) != 0) {
            merged.emplace_back(a->first, std::move(v));
          } else {
            col_rows[a->first].erase(r);
          }
          ++a;
          ++b;
        }
      }
      rows[r].swap(merged);
      rhs[r] -= f * rhs[pr];
      active.emplace(rows[r].size(), r);
    }
    pivots.emplace_back(pr, pc);
  }
  if (pivots.size() < ncols) {
    throw FillingError(FillingError::Kind::rank_deficient,
                       "boundary matrix has rank " + std::to_string(pivots.size()) + " < " +
                           std::to_string(ncols) + " columns");
  }
  std::vector<mpq_class> x(ncols);
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    const auto [pr, pc] = *it;
    mpq_class s = rhs[pr];
    for (const auto& [c, v] : rows[pr]) {
      if (c != pc) s -= v * x[c];
    }
    x[pc] = s / entry(rows[pr], pc);
  }
  FillingResult res;
  res.optimality = Optimality::unique;
  CubicalChain b(p.cycle.dim() + 1);
  for (std::size_t j = 0; j < ncols; ++j) {
    if (x[j].get_den() != 1) {
      throw FillingError(FillingError::Kind::integer_infeasible,
                         "the unique rational filling is not integral");
    }
    b.add(p.cells[j], x[j].get_num().get_si());
  }
  res.chain = std::move(b);
  finish(raag, p, res);
  return res;
}

FillingResult best_filling(const Raag& raag, const FillingProblem& p, const SolverBudget& budget) {
  try {
    return unique_filling(raag, p);
  } catch (const FillingError& e) {
    if (e.kind() != FillingError::Kind::rank_deficient) throw;
  }
  return min_filling(raag, p, budget);
}

std::vector<ProfileRow> avoidant_fill_profile(
    const Raag& raag, const std::vector<std::pair<int, CubicalChain>>& family,
    const ProfileOptions& opt) {
  std::vector<ProfileRow> out;
  if (family.empty()) return out;
  int k = family.front().second.dim();
  if (divdim(raag.graph()) < k) {
    throw std::invalid_argument("avoidant_fill_profile: divdim is smaller than k");
  }
  for (const auto& [r, cycle] : family) {
    ProfileRow row;
    row.r = r;
    row.cycle_mass = cycle.mass();
    int radius = 0;
    for (const auto& [c, v] : cycle.coeffs()) {
      radius = std::max(radius, cube_length_range(raag, c).second);
    }
    ++radius;
    const mpq_class avoid = opt.rho * r;
    while (true) {
      std::optional<Window> w;
      try {
        w.emplace(avoidant_filter(ball_window(raag, radius, k + 1, opt.vertex_budget), avoid));
      } catch (const BudgetExceeded&) {
        row.status = "budget";
        break;
      }
      row.window_radius = radius;
      row.window_cells = w->cell_count();
      if (row.window_cells > opt.cell_budget) {
        row.status = "budget";
        break;
      }
      try {
        const FillingResult res = min_filling(raag, window_problem(*w, cycle), opt.solver);
        if (res.chain) row.fill_mass = res.mass;
        row.optimality = res.optimality;
        row.lp_bound = res.lp_bound;
        row.touches_boundary = res.touches_boundary;
        if (res.optimality == Optimality::lp_bound_only) row.status = "budget";
        break;
      } catch (const FillingError& e) {
        if (e.kind() == FillingError::Kind::integer_infeasible) {
          row.status = "integer-infeasible";
          break;
        }
        if (e.kind() != FillingError::Kind::infeasible_in_window) throw;
      }
      radius += 2;
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace raagdiv
