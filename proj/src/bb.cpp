#include "raagdiv/bb.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

#include "raagdiv/divergence.hpp"

namespace raagdiv {

bool is_half_integer(const mpq_class& q) {
  const mpq_class twice = q * 2;
  return twice.get_den() == 1 && mpz_odd_p(twice.get_num_mpz_t());
}

SliceChain slice_boundary(const Raag& raag, const SliceChain& c) {
  return {c.level, straddling_part(cubical_boundary(raag, c.cubes), c.level)};
}

std::size_t SliceWindow::cell_count() const {
  std::size_t n = 0;
  for (const auto& l : cells) n += l.size();
  return n;
}

SliceWindow slice_window(const Raag& raag, const mpq_class& level, int radius,
                         std::size_t vertex_budget) {
  if (!is_half_integer(level)) throw std::invalid_argument("slice level must be n + 1/2");
  int top = 0;
  for (VertexMask c : maximal_cliques(raag.graph())) top = std::max(top, std::popcount(c));
  const Window w = ball_window(raag, radius, top, vertex_budget);
  SliceWindow out{level, radius, {}};
  out.cells.resize(static_cast<std::size_t>(std::max(top, 1)));
  for (int d = 1; d <= top; ++d) {
    for (const auto& key : w.cubes(d)) {
      Cube c = w.cube(key);
      if (straddles(c, level)) out.cells[d - 1].push_back(std::move(c));
    }
  }
  return out;
}

OrthoplexData orthoplex_data(const DefiningGraph& g) {
  const int k = flag_complex(g).dimension() - 1;
  if (k < 0) throw std::invalid_argument("not an orthoplex graph: no edges");
  const OrthoplexReport rep = orthoplex_check(g, k);
  if (rep.overall() != Verdict::pass) {
    std::string why = "not an orthoplex graph";
    for (const auto& r : rep.reasons) why += "; " + r;
    throw std::invalid_argument(why);
  }
  return {k, rep.a, rep.b, rep.sigma};
}

namespace {

void check_dim(const OrthoplexData& d, const std::vector<long>& x) {
  if (static_cast<int>(x.size()) != d.k + 1) {
    throw std::invalid_argument("flat coordinate vector must have k+1 entries");
  }
}

// Coordinate of the cell's vertex nearest zero.
long cell_base(long x) { return x >= 0 ? x : x + 1; }

// The letter crossing the cell is a_i for even x, b_i for odd x, on both
// sides of zero.
int cell_letter(const OrthoplexData& d, std::size_t i, long x) {
  return x % 2 == 0 ? d.a[i] : d.b[i];
}

long min_height(const std::vector<long>& x) {
  long h = 0;
  for (long v : x) h += v >= 0 ? v : -v - 1;
  return h;
}

}  // namespace

GroupElement orthoplex_flat_vertex(const Raag& raag, const OrthoplexData& d,
                                   const std::vector<long>& x) {
  check_dim(d, x);
  std::vector<Letter> word;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long n = std::labs(x[i]);
    for (long t = 0; t < n; ++t) {
      const bool first = t % 2 == 0;
      const int gen = (x[i] >= 0) == first ? d.a[i] : d.b[i];
      word.emplace_back(gen, 1);
    }
  }
  return raag.normalize(word);
}

Cube orthoplex_flat_cell(const Raag& raag, const OrthoplexData& d, const std::vector<long>& x) {
  check_dim(d, x);
  std::vector<long> base(x.size());
  VertexMask labels = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    base[i] = cell_base(x[i]);
    labels |= VertexMask{1} << cell_letter(d, i, x[i]);
  }
  return {orthoplex_flat_vertex(raag, d, base), labels};
}

int orthoplex_cell_sign(const OrthoplexData& d, const std::vector<long>& x) {
  check_dim(d, x);
  int sign = 1;
  std::vector<int> gens;
  for (std::size_t i = 0; i < x.size(); ++i) {
    gens.push_back(cell_letter(d, i, x[i]));
    if (x[i] < 0) sign = -sign;
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (gens[i] > gens[j]) sign = -sign;
    }
  }
  return sign;
}

namespace {

// Calls f(x) for every x in [lo, hi]^{dim}.
template <class F>
void for_each_box(int dim, long lo, long hi, F&& f) {
  std::vector<long> x(static_cast<std::size_t>(dim), lo);
  if (lo > hi) return;
  while (true) {
    f(x);
    int i = 0;
    while (i < dim && x[i] == hi) x[i++] = lo;
    if (i == dim) return;
    ++x[i];
  }
}

long level_shift(const mpq_class& level, int r) {
  const mpq_class m = level + mpq_class(1, 2) - r;
  return m.get_num().get_si();
}

}  // namespace

SliceChain sigma_cycle(const Raag& raag, const OrthoplexData& d, int r, const mpq_class& level) {
  if (r < 1) throw std::invalid_argument("sigma_cycle: r must be positive");
  if (!is_half_integer(level)) throw std::invalid_argument("slice level must be n + 1/2");
  const GroupElement shift = raag.generator(d.a[0], static_cast<int>(level_shift(level, r)));
  SliceChain out{level, CubicalChain(d.k + 1)};
  for_each_box(d.k + 1, -r, r - 1, [&](const std::vector<long>& x) {
    const long h = min_height(x);
    if (h < r - d.k - 1 || h > r - 1) return;
    Cube c = orthoplex_flat_cell(raag, d, x);
    c.base = raag.multiply(shift, c.base);
    out.cubes.add(c, orthoplex_cell_sign(d, x));
  });
  if (!out.cubes.empty() && out.cubes.coeffs().begin()->second < 0) {
    CubicalChain flipped(out.cubes.dim());
    for (const auto& [c, v] : out.cubes.coeffs()) flipped.add(c, -v);
    out.cubes = std::move(flipped);
  }
  return out;
}

mpz_class lattice_sphere_count(int k, long j) {
  if (j < 0) return 0;
  if (j == 0) return 1;
  mpz_class total = 0;
  const long n = k + 1;
  for (long i = 1; i <= std::min(n, j); ++i) {
    mpz_class c1, c2;
    mpz_bin_uiui(c1.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(i));
    mpz_bin_uiui(c2.get_mpz_t(), static_cast<unsigned long>(j - 1),
                 static_cast<unsigned long>(i - 1));
    mpz_class p2;
    mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(i));
    total += p2 * c1 * c2;
  }
  return total;
}

mpq_class pushed_filling_lower_bound(int k, long r, const mpq_class& sigma_mass) {
  mpq_class total = 0;
  for (long j = 0; j <= r; ++j) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(r - j),
                  static_cast<unsigned long>(k + 1));
    total += mpq_class(lattice_sphere_count(k, j) * p);
  }
  return total * sigma_mass;
}

std::vector<ScaledCopyTerm> pushed_filling_terms(const Raag& raag, const OrthoplexData& d, int r) {
  std::vector<ScaledCopyTerm> out;
  const GroupElement shift = raag.generator(d.a[0], -r);
  for_each_box(d.k + 1, -r, r, [&](const std::vector<long>& x) {
    long j = 0;
    for (long v : x) j += std::labs(v);
    if (j > r) return;
    out.push_back({raag.multiply(shift, orthoplex_flat_vertex(raag, d, x)), r - j,
                   j % 2 == 0 ? 1 : -1, ScaledCopyTerm::Polarity::positive_link});
  });
  return out;
}

namespace {

// Calls f(n) for every n ∈ Z^q with n_i >= lo and Σ n = total.
template <class F>
void for_each_composition(std::size_t q, long lo, long total, F&& f) {
  std::vector<long> n(q, lo);
  long rest = total - static_cast<long>(q) * lo;
  if (rest < 0) return;
  // Distribute `rest` over q slots, last slot takes the remainder.
  std::vector<long> extra(q, 0);
  auto rec = [&](auto&& self, std::size_t i, long left) -> void {
    if (i + 1 == q) {
      extra[i] = left;
      for (std::size_t t = 0; t < q; ++t) n[t] = lo + extra[t];
      f(n);
      return;
    }
    for (long e = 0; e <= left; ++e) {
      extra[i] = e;
      self(self, i + 1, left - e);
    }
  };
  rec(rec, 0, rest);
}

std::vector<int> bits(VertexMask m) {
  std::vector<int> out;
  for (; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

}  // namespace

std::vector<Cube> cone_cells(const Raag& raag, const OrthoplexData& d, int r,
                             const mpq_class& level, int slack) {
  const int cell_dim = d.k + 2;
  const GroupElement shift = raag.generator(d.a[0], static_cast<int>(level_shift(level, r)));
  std::vector<std::vector<int>> tops;
  for (VertexMask s : maximal_cliques(raag.graph())) {
    if (std::popcount(s) >= cell_dim) tops.push_back(bits(s));
  }
  std::set<Cube> cells;
  for_each_box(d.k + 1, -(r - 1), r - 1, [&](const std::vector<long>& y) {
    long j = 0;
    for (long v : y) j += std::labs(v);
    if (j > r - 1) return;
    const GroupElement v = raag.multiply(shift, orthoplex_flat_vertex(raag, d, y));
    const mpq_class t = level - v.height();
    const long hi = mpz_class(t.get_num() / t.get_den()).get_si();  // floor, t > 0
    const long lo = hi + 1 - cell_dim;
    for (const auto& sigma : tops) {
      for (long total = lo; total <= hi; ++total) {
        for_each_composition(sigma.size(), -slack, total, [&](const std::vector<long>& n) {
          GroupElement base = v;
          for (std::size_t i = 0; i < sigma.size(); ++i) {
            base = raag.multiply(base, raag.generator(sigma[i], static_cast<int>(n[i])));
          }
          // Every cell_dim-subset of σ as labels.
          const std::size_t q = sigma.size();
          for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << q); ++sub) {
            if (std::popcount(sub) != cell_dim) continue;
            VertexMask labels = 0;
            for (std::size_t i = 0; i < q; ++i) {
              if ((sub >> i) & 1U) labels |= VertexMask{1} << sigma[i];
            }
            Cube c{base, labels};
            if (straddles(c, level)) cells.insert(std::move(c));
          }
        });
      }
    }
  });
  return {cells.begin(), cells.end()};
}

BbRow bb_fill_row(const Raag& raag, const OrthoplexData& d, int r, const BbOptions& opt) {
  BbRow row;
  row.r = r;
  const SliceChain sigma = sigma_cycle(raag, d, r, opt.level);
  row.sigma_mass = sigma.mass();
  row.lower_bound = pushed_filling_lower_bound(d.k, r, 1);
  row.lower_bound_prev = pushed_filling_lower_bound(d.k, r - 1, 1);
  for (int slack = 0; slack <= opt.max_slack; ++slack) {
    FillingProblem p;
    p.cells = cone_cells(raag, d, r, opt.level, slack);
    if (p.cells.size() > opt.cell_budget) {
      throw BudgetExceeded("cone window at r=" + std::to_string(r) + " exceeds the cell budget");
    }
    p.cycle = sigma.cubes;
    p.level = opt.level;
    try {
      const FillingResult res = best_filling(raag, p, opt.solver);
      if (!res.chain || res.optimality == Optimality::lp_bound_only) {
        throw BudgetExceeded("solver budget exceeded at r=" + std::to_string(r));
      }
      row.fill_mass = res.mass;
      row.optimality = res.optimality;
      row.slack = slack;
      row.window_cells = p.cells.size();
      for (const Cube& c : p.cells) {
        row.window_radius = std::max(row.window_radius, cube_length_range(raag, c).second);
      }
      return row;
    } catch (const FillingError& e) {
      if (e.kind() != FillingError::Kind::infeasible_in_window) throw;
    }
  }
  throw FillingError(FillingError::Kind::infeasible_in_window,
                     "no filling of sigma_r in the cone window at r=" + std::to_string(r));
}

BbTable bb_fill_experiment(const Raag& raag, const OrthoplexData& d, int rmax,
                           const BbOptions& opt) {
  if (!is_half_integer(opt.level)) throw std::invalid_argument("slice level must be n + 1/2");
  BbTable t;
  t.k = d.k;
  t.level = opt.level;
  for (int r = 1; r <= rmax; ++r) {
    try {
      t.rows.push_back(bb_fill_row(raag, d, r, opt));
    } catch (const BudgetExceeded& e) {
      t.truncated = true;
      t.truncation_reason = e.what();
      break;
    }
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : t.rows) {
    if (row.r >= opt.fit_from) pts.emplace_back(row.r, static_cast<double>(row.fill_mass));
  }
  if (pts.size() >= 2) t.exponent = fit_exponent(pts);
  return t;
}

}  // namespace raagdiv
