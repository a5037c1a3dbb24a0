#include "raagdiv/lp.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace raagdiv::lp {

void Problem::add_bound(std::size_t var, const mpq_class& bound, bool upper) {
  const std::size_t slack = num_vars++;
  cost.emplace_back(0);
  rows.push_back({{var, mpq_class(1)}, {slack, mpq_class(upper ? 1 : -1)}});
  rhs.push_back(bound);
}

namespace {

constexpr int kDegenerateRun = 50;

using Row = std::vector<std::pair<std::size_t, mpq_class>>;

const mpq_class* find_entry(const Row& row, std::size_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const auto& e, std::size_t c) { return e.first < c; });
  return it != row.end() && it->first == col ? &it->second : nullptr;
}

// row -= f * pivot_row, both sorted by column.
void axpy(Row& row, const mpq_class& f, const Row& pivot_row) {
  Row out;
  out.reserve(row.size() + pivot_row.size());
  auto a = row.begin();
  auto b = pivot_row.begin();
  mpq_class v;
  while (a != row.end() || b != pivot_row.end()) {
    if (b == pivot_row.end() || (a != row.end() && a->first < b->first)) {
      out.push_back(std::move(*a++));
    } else if (a == row.end() || b->first < a->first) {
      out.emplace_back(b->first, -f * b->second);
      ++b;
    } else {
      v = a->second - f * b->second;
      if (sgn(v) != 0) out.emplace_back(a->first, v);
      ++a;
      ++b;
    }
  }
  row = std::move(out);
}

// Sparse-row tableau. Artificial variables are implicit: basis[i] < 0 marks
// the artificial of row i, and an artificial that leaves is never re-entered.
class Tableau {
 public:
  explicit Tableau(const Problem& p) : m_(p.rows.size()), n_(p.num_vars) {
    a_.resize(m_);
    b_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      std::map<std::size_t, mpq_class> acc;
      for (const auto& [j, v] : p.rows[i]) acc[j] += v;
      for (auto& [j, v] : acc) {
        if (sgn(v) != 0) a_[i].emplace_back(j, v);
      }
      b_[i] = p.rhs[i];
      if (sgn(b_[i]) < 0) {
        b_[i] = -b_[i];
        for (auto& e : a_[i]) e.second = -e.second;
      }
    }
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) basis_[i] = -1 - static_cast<long>(i);
    d_.assign(n_, mpq_class(0));
  }

  // Returns false when the pivot budget ran out.
  bool phase_one(std::size_t& pivots, std::size_t budget, Status& status) {
    obj_ = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      obj_ += b_[i];
      for (const auto& [j, v] : a_[i]) d_[j] -= v;
    }
    if (!iterate(pivots, budget, status)) return false;
    infeasibility_ = obj_;
    if (sgn(obj_) > 0) {
      status = Status::infeasible;
      return true;
    }
    // Drive remaining (zero-valued) artificials out of the basis.
    std::vector<bool> redundant(m_, false);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= 0) continue;
      if (a_[i].empty()) {
        redundant[i] = true;
      } else {
        pivot(i, a_[i].front().first);
        ++pivots;
      }
    }
    std::size_t w = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (redundant[i]) continue;
      if (w != i) {
        a_[w] = std::move(a_[i]);
        b_[w] = b_[i];
        basis_[w] = basis_[i];
      }
      ++w;
    }
    a_.resize(w);
    b_.resize(w);
    basis_.resize(w);
    m_ = w;
    status = Status::optimal;
    return true;
  }

  bool phase_two(const std::vector<mpq_class>& cost, std::size_t& pivots, std::size_t budget,
                 Status& status) {
    d_ = cost;
    obj_ = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      const mpq_class& cb = cost[static_cast<std::size_t>(basis_[i])];
      if (sgn(cb) == 0) continue;
      obj_ += cb * b_[i];
      for (const auto& [j, v] : a_[i]) d_[j] -= cb * v;
    }
    return iterate(pivots, budget, status);
  }

  const mpq_class& objective() const { return obj_; }
  const mpq_class& infeasibility() const { return infeasibility_; }

  std::vector<mpq_class> solution() const {
    std::vector<mpq_class> x(n_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= 0) x[static_cast<std::size_t>(basis_[i])] = b_[i];
    }
    return x;
  }

 private:
  bool iterate(std::size_t& pivots, std::size_t budget, Status& status) {
    int degenerate = 0;
    bool bland = false;
    while (true) {
      std::size_t q = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(d_[j]) >= 0) continue;
        if (q == n_ || (!bland && d_[j] < d_[q])) q = j;
        if (bland) break;
      }
      if (q == n_) {
        status = Status::optimal;
        return true;
      }
      if (pivots >= budget) {
        status = Status::budget_exceeded;
        return false;
      }
      std::size_t p = m_;
      mpq_class best;
      mpq_class ratio;
      for (std::size_t i = 0; i < m_; ++i) {
        const mpq_class* e = find_entry(a_[i], q);
        if (e == nullptr || sgn(*e) <= 0) continue;
        ratio = b_[i] / *e;
        if (p == m_ || ratio < best || (ratio == best && leaving_key(i) < leaving_key(p))) {
          p = i;
          best = ratio;
        }
      }
      if (p == m_) {
        status = Status::unbounded;
        return false;
      }
      if (sgn(best) == 0) {
        if (++degenerate > kDegenerateRun) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
      pivot(p, q);
      ++pivots;
    }
  }

  // Artificials leave first, then the smallest variable index.
  long leaving_key(std::size_t row) const {
    return basis_[row] < 0 ? basis_[row] - static_cast<long>(m_) : basis_[row];
  }

  void pivot(std::size_t p, std::size_t q) {
    const mpq_class piv = *find_entry(a_[p], q);
    for (auto& e : a_[p]) e.second /= piv;
    b_[p] /= piv;
    const Row& prow = a_[p];
    mpq_class f;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == p) continue;
      const mpq_class* e = find_entry(a_[i], q);
      if (e == nullptr) continue;
      f = *e;
      axpy(a_[i], f, prow);
      b_[i] -= f * b_[p];
    }
    if (sgn(d_[q]) != 0) {
      f = d_[q];
      for (const auto& [j, v] : prow) d_[j] -= f * v;
      d_[q] = 0;
      obj_ += f * b_[p];
    }
    basis_[p] = static_cast<long>(q);
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<Row> a_;
  std::vector<mpq_class> b_;
  std::vector<mpq_class> d_;
  std::vector<long> basis_;
  mpq_class obj_;
  mpq_class infeasibility_;
};

}  // namespace

Solution solve_lp(const Problem& p, std::size_t pivot_budget) {
  Solution sol;
  Tableau t(p);
  Status status = Status::optimal;
  if (!t.phase_one(sol.pivots, pivot_budget, status)) {
    sol.status = status;
    return sol;
  }
  sol.infeasibility = t.infeasibility();
  if (status == Status::infeasible) {
    sol.status = status;
    return sol;
  }
  if (!t.phase_two(p.cost, sol.pivots, pivot_budget, status)) {
    sol.status = status;
    return sol;
  }
  sol.status = Status::optimal;
  sol.objective = t.objective();
  sol.x = t.solution();
  return sol;
}

namespace {

mpz_class floor_of(const mpq_class& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f;
}

mpz_class ceil_of(const mpq_class& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return c;
}

bool satisfies(const Problem& p, const std::vector<mpz_class>& x) {
  for (const auto& v : x) {
    if (v < 0) return false;
  }
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    mpq_class s = 0;
    for (const auto& [j, v] : p.rows[i]) s += v * x[j];
    if (s != p.rhs[i]) return false;
  }
  return true;
}

mpq_class objective_of(const Problem& p, const std::vector<mpz_class>& x) {
  mpq_class s = 0;
  for (std::size_t j = 0; j < x.size(); ++j) s += p.cost[j] * x[j];
  return s;
}

struct BoundSpec {
  std::size_t var;
  mpz_class value;
  bool upper;
};

}  // namespace

IntegerSolution solve_ilp(const Problem& p, std::size_t pivot_budget, std::size_t node_budget) {
  IntegerSolution out;
  const std::size_t n = p.num_vars;
  std::optional<mpq_class> best;
  bool exhausted = false;

  std::vector<std::vector<BoundSpec>> stack{{}};
  bool root = true;
  while (!stack.empty()) {
    if (out.nodes >= node_budget || out.pivots >= pivot_budget) {
      exhausted = true;
      break;
    }
    std::vector<BoundSpec> bounds = std::move(stack.back());
    stack.pop_back();
    ++out.nodes;
    Problem node = p;
    for (const auto& bs : bounds) node.add_bound(bs.var, mpq_class(bs.value), bs.upper);
    const Solution sol = solve_lp(node, pivot_budget - out.pivots);
    out.pivots += sol.pivots;
    if (sol.status == Status::budget_exceeded) {
      exhausted = true;
      break;
    }
    if (root) {
      root = false;
      out.lp_feasible = sol.status == Status::optimal;
      if (sol.status == Status::unbounded) {
        out.status = Status::unbounded;
        return out;
      }
      if (!out.lp_feasible) {
        out.status = Status::infeasible;
        out.proven = true;
        return out;
      }
      out.lp_bound = sol.objective;
    }
    if (sol.status != Status::optimal) continue;
    if (best && ceil_of(sol.objective) >= *best) continue;

    std::size_t branch = n;
    mpq_class best_dist = 1;
    std::vector<mpz_class> rounded(n);
    for (std::size_t j = 0; j < n; ++j) {
      const mpz_class f = floor_of(sol.x[j]);
      const mpq_class frac = sol.x[j] - f;
      rounded[j] = frac * 2 >= 1 ? mpz_class(f + 1) : f;
      if (sgn(frac) == 0) continue;
      mpq_class dist = frac * 2 - 1;
      dist = abs(dist);
      if (branch == n || dist < best_dist) {
        branch = j;
        best_dist = dist;
      }
    }
    if (satisfies(p, rounded)) {
      const mpq_class obj = objective_of(p, rounded);
      if (!best || obj < *best) {
        best = obj;
        out.x = rounded;
      }
    }
    if (branch == n) continue;  // integral: already taken as incumbent
    const mpq_class& xv = sol.x[branch];
    auto up = bounds;
    up.push_back({branch, ceil_of(xv), false});
    auto down = std::move(bounds);
    down.push_back({branch, floor_of(xv), true});
    stack.push_back(std::move(up));
    stack.push_back(std::move(down));
  }
  if (best) {
    out.status = Status::optimal;
    out.objective = *best;
    out.proven = !exhausted;
  } else {
    out.status = exhausted ? Status::budget_exceeded : Status::infeasible;
    out.proven = !exhausted;
  }
  return out;
}

}  // namespace raagdiv::lp
