#include "raagdiv/divergence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <unordered_map>

#include "parallel.hpp"
#include "raagdiv/homology.hpp"
#include "raagdiv/pushing.hpp"

namespace raagdiv {

namespace {

struct Syllable {
  int component;
  int length;
  GroupElement element;
};

std::vector<Syllable> syllables(const Raag& raag, const GroupElement& x,
                                const std::vector<int>& comp_of) {
  std::vector<Syllable> out;
  std::vector<Letter> run;
  int comp = -1;
  auto flush = [&] {
    if (!run.empty()) {
      out.push_back({comp, static_cast<int>(run.size()), raag.normalize(run)});
      run.clear();
    }
  };
  for (Letter l : x.letters()) {
    if (comp_of[l.gen()] != comp) {
      flush();
      comp = comp_of[l.gen()];
    }
    run.push_back(l);
  }
  flush();
  return out;
}

}  // namespace

bool separated_by_ball(const Raag& raag, const GroupElement& x, const GroupElement& y,
                       int bound) {
  const auto& g = raag.graph();
  const auto comps = components(g);
  if (comps.size() < 2) return false;
  std::vector<int> comp_of(g.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (int v = 0; v < g.size(); ++v) {
      if ((comps[c] >> v) & 1U) comp_of[v] = static_cast<int>(c);
    }
  }
  const auto xs = syllables(raag, x, comp_of);
  const auto ys = syllables(raag, y, comp_of);
  std::size_t j = 0;
  int common = 0;
  while (j < xs.size() && j < ys.size() && xs[j].element == ys[j].element) {
    common += xs[j].length;
    ++j;
  }
  // Attaching vertices of the pieces on the way out to x and to y.
  for (const auto* s : {&xs, &ys}) {
    int len = common;
    for (std::size_t l = j; l + 1 < s->size(); ++l) {
      len += (*s)[l].length;
      if (len < bound) return true;
    }
  }
  if (j < xs.size() && j < ys.size()) {
    if (xs[j].component != ys[j].component) return common < bound;
    if (std::popcount(comps[xs[j].component]) == 1) {
      // The shared piece is a line; every vertex between the two exits lies
      // on every path.
      const int p = xs[j].element.letter(0).sign() * xs[j].length;
      const int q = ys[j].element.letter(0).sign() * ys[j].length;
      const int closest = (p > 0) == (q > 0) ? std::min(std::abs(p), std::abs(q)) : 0;
      return common + closest < bound;
    }
  }
  return false;
}

namespace {

// Largest prefix of z (in the prefix order) spelled in generators of `lambda`.
// For the special subgroup A_Λ this is the gate of z onto A_Λ.
GroupElement gate_prefix(const Raag& raag, std::span<const Letter> z, VertexMask lambda) {
  std::vector<Letter> taken;
  VertexMask blocked = 0;  // generators failing to commute with a skipped letter
  for (Letter l : z) {
    const bool free = !((blocked >> l.gen()) & 1U);
    if (free && ((lambda >> l.gen()) & 1U)) {
      taken.push_back(l);
    } else {
      blocked |= raag.graph().all_vertices() & ~raag.graph().neighbors(l.gen());
    }
  }
  return raag.normalize(taken);
}

std::vector<Letter> inverse_letters(std::span<const Letter> w) {
  std::vector<Letter> out(w.rbegin(), w.rend());
  for (Letter& l : out) l = l.inverse();
  return out;
}

// Lower bound for the length of a path from v to y avoiding lengths < bound.
// Every hyperplane H separating v from y is crossed along an edge (w, w')
// with |w|, |w'| >= bound. Both w and w' lie in the carrier of H, a coset of
// A_{lk(s)}; the gate property splits d(v, w) and d(w', y) at the gates p, q
// of v and y, and the crossing point sits at distance >= t from the gate c
// of the identity. Each term is 1-Lipschitz in v, so the bound is consistent.
int carrier_bound(const Raag& raag, const GroupElement& v, const GroupElement& y_inv_v_inv,
                  int bound) {
  const GroupElement z = raag.inverse(y_inv_v_inv);  // v^{-1} y
  const std::vector<Letter> zl = z.letters();
  const std::vector<Letter> v_inv = inverse_letters(v.letters());
  const int m = static_cast<int>(zl.size());
  int best = m;
  if (bound <= 0) return best;
  std::vector<Letter> g_inv;  // u^{-1} v^{-1} with u = l_1 ... l_{i-1}
  for (int i = 0; i < m; ++i) {
    const Letter l = zl[i];
    const std::span<const Letter> u(zl.data(), static_cast<std::size_t>(i));
    const std::vector<Letter> u_inv = inverse_letters(u);
    g_inv = u_inv;
    g_inv.insert(g_inv.end(), v_inv.begin(), v_inv.end());
    const GroupElement gi = raag.normalize(g_inv);
    const VertexMask lambda = raag.graph().neighbors(l.gen());
    const std::vector<Letter> gil = gi.letters();
    const GroupElement c0 = gate_prefix(raag, gil, lambda);
    const int to_n0 = gi.length() - c0.length();
    const GroupElement li_gi = raag.multiply(raag.generator(l.gen(), -l.sign()), gi);
    const GroupElement c1 = gate_prefix(raag, li_gi.letters(), lambda);
    const int to_n1 = li_gi.length() - c1.length();
    const int t = bound - std::min(to_n0, to_n1);
    if (t <= 0) continue;
    const GroupElement& c = to_n0 <= to_n1 ? c0 : c1;
    const GroupElement p = gate_prefix(raag, u_inv, lambda);
    const std::span<const Letter> suffix(zl.data() + i + 1, static_cast<std::size_t>(m - i - 1));
    const GroupElement q = gate_prefix(raag, suffix, lambda);
    const int v_to_p = i - p.length();
    const int q_to_y = (m - i - 1) - q.length();
    const GroupElement c_inv = raag.inverse(c);
    const int pq = raag.multiply(raag.inverse(p), q).length();
    const int cp = raag.multiply(c_inv, p).length();
    const int cq = raag.multiply(c_inv, q).length();
    const int across = std::max(pq, std::max(0, t - cp) + std::max(0, t - cq));
    best = std::max(best, v_to_p + 1 + across + q_to_y);
  }
  return best;
}

}  // namespace

AvoidantDistance avoidant_distance(const Raag& raag, const GroupElement& x,
                                   const GroupElement& y, const mpq_class& avoid_r,
                                   std::size_t budget) {
  const int bound = sgn(avoid_r) > 0 ? ceil_int(avoid_r) : 0;
  if (x.length() < bound || y.length() < bound) {
    throw std::invalid_argument("avoidant_distance: endpoint inside the avoided ball");
  }
  AvoidantDistance out;
  if (x == y) {
    out.length = 0;
    return out;
  }
  if (separated_by_ball(raag, x, y, bound)) {
    out.status = AvoidantDistance::Status::unreachable;
    return out;
  }
  // A* with a consistent heuristic: a popped state has its final distance.
  const GroupElement y_inv = raag.inverse(y);
  auto h = [&](const GroupElement& v) {
    return carrier_bound(raag, v, raag.multiply(y_inv, v), bound);
  };
  std::unordered_map<GroupElement, int> dist;
  std::vector<std::vector<GroupElement>> open;  // open[f]: states with g + h = f
  auto push = [&](const GroupElement& v, int g) {
    const std::size_t f = static_cast<std::size_t>(g + h(v));
    if (open.size() <= f) open.resize(f + 1);
    open[f].push_back(v);
  };
  dist.emplace(x, 0);
  push(x, 0);
  for (std::size_t f = 0; f < open.size(); ++f) {
    while (!open[f].empty()) {
      const GroupElement u = std::move(open[f].back());
      open[f].pop_back();
      const int g = dist.at(u);
      if (static_cast<std::size_t>(g) + h(u) != f) continue;  // stale entry
      if (u == y) {
        out.length = g;
        out.states = dist.size();
        return out;
      }
      for (auto& w : raag.neighbors(u)) {
        if (w.length() < bound) continue;
        auto [it, inserted] = dist.try_emplace(w, g + 1);
        if (!inserted) {
          if (it->second <= g + 1) continue;
          it->second = g + 1;
        }
        push(w, g + 1);
      }
      if (dist.size() > budget) {
        out.status = AvoidantDistance::Status::budget_exceeded;
        out.states = dist.size();
        return out;
      }
    }
  }
  out.states = dist.size();
  out.status = AvoidantDistance::Status::unreachable;
  return out;
}

double fit_exponent(const std::vector<std::pair<double, double>>& rows) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [r, v] : rows) {
    if (r > 0 && v > 0) pts.emplace_back(std::log(r), std::log(v));
  }
  if (pts.size() < 2) throw std::invalid_argument("fit_exponent: fewer than 2 usable rows");
  double mx = 0, my = 0;
  for (const auto& [a, b] : pts) {
    mx += a;
    my += b;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (const auto& [a, b] : pts) {
    sxy += (a - mx) * (b - my);
    sxx += (a - mx) * (a - mx);
  }
  if (sxx == 0) throw std::invalid_argument("fit_exponent: all rows share one r");
  return sxy / sxx;
}

mpq_class corridor_bound(long r, long n, const mpq_class& rho) {
  if (n <= 0) throw std::invalid_argument("corridor_bound: walk length must be positive");
  mpq_class total = 0;
  for (long j = 0; j <= r / n; ++j) {
    const mpq_class term = rho * r - j * n;
    if (sgn(term) > 0) total += term;
  }
  return total;
}

namespace {

GroupElement flat_point(const Raag& raag, const GroupElement& center, const std::vector<int>& gens,
                        const std::vector<long>& y) {
  GroupElement v = center;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    v = raag.multiply(v, raag.generator(gens[i], static_cast<int>(y[i])));
  }
  return v;
}

template <class F>
void for_each_box(std::size_t dim, long lo, long hi, F&& f) {
  std::vector<long> x(dim, lo);
  while (true) {
    f(x);
    std::size_t i = 0;
    while (i < dim && x[i] == hi) x[i++] = lo;
    if (i == dim) return;
    ++x[i];
  }
}

void check_flat(const Raag& raag, const std::vector<int>& gens) {
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (!raag.commute(gens[i], gens[j])) throw std::invalid_argument("flat generators must commute");
    }
  }
}

}  // namespace

CubicalChain flat_ball_chain(const Raag& raag, const GroupElement& center,
                             const std::vector<int>& gens, int s) {
  check_flat(raag, gens);
  VertexMask labels = 0;
  for (int g : gens) labels |= VertexMask{1} << g;
  CubicalChain out(static_cast<int>(gens.size()));
  for_each_box(gens.size(), -s, s, [&](const std::vector<long>& y) {
    // The farthest corner from the origin has norm Σ max(|y_i|, |y_i + 1|).
    long far = 0;
    for (long v : y) far += std::max(std::labs(v), std::labs(v + 1));
    if (far <= s) out.add(Cube{flat_point(raag, center, gens, y), labels}, 1);
  });
  return out;
}

CubicalChain flat_sphere_cycle(const Raag& raag, const GroupElement& center,
                               const std::vector<int>& gens, int s) {
  return cubical_boundary(raag, flat_ball_chain(raag, center, gens, s));
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::bfs_exact: return "BFS-exact";
    case Method::ilp_exact: return "ILP-exact";
    case Method::pushed_construction: return "pushed-construction";
    case Method::analytic_bound: return "analytic-bound";
    case Method::none: return "none";
  }
  return "?";
}

std::string predicted_div0_class(const DefiningGraph& g) {
  if (components(g).size() > 1) return "undefined-infinitely-many-ends";
  if (g.size() == 1) return "undefined-two-ends";
  return join_decomposition(g) ? "linear" : "quadratic";
}

namespace {

std::string hex_id(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void fit_rows(DivergenceReport& rep) {
  std::map<std::string, std::pair<std::vector<std::pair<double, double>>,
                                  std::vector<std::pair<double, double>>>>
      pts;
  for (const auto& row : rep.rows) {
    auto& [lo, up] = pts[row.witness];
    if (row.lower) lo.emplace_back(row.r, row.lower->get_d());
    if (row.upper) up.emplace_back(row.r, row.upper->get_d());
  }
  for (const auto& [w, p] : pts) {
    auto fit = [](const std::vector<std::pair<double, double>>& v) -> std::optional<double> {
      try {
        return fit_exponent(v);
      } catch (const std::invalid_argument&) {
        return std::nullopt;
      }
    };
    rep.exponents[w] = {fit(p.first), fit(p.second)};
  }
}

void bfs_lower(const Raag& raag, const GroupElement& x, const GroupElement& y,
               const mpq_class& avoid, std::size_t budget, DivergenceRow& row) {
  const AvoidantDistance d = avoidant_distance(raag, x, y, avoid, budget);
  switch (d.status) {
    case AvoidantDistance::Status::found:
      row.lower = d.length;
      row.lower_method = Method::bfs_exact;
      break;
    case AvoidantDistance::Status::budget_exceeded:
      row.flagged = true;
      row.budget_hit = true;
      row.note = "search budget exceeded after " + std::to_string(d.states) + " states";
      break;
    case AvoidantDistance::Status::unreachable:
      row.note = "unreachable";
      break;
  }
}

}  // namespace

DivergenceReport div0_experiment(const Raag& raag, int rmax, const mpq_class& rho,
                                 const Div0Options& opt) {
  if (sgn(rho) <= 0 || rho > 1) throw std::invalid_argument("rho must lie in (0, 1]");
  const auto& g = raag.graph();
  DivergenceReport rep;
  rep.graph_id = hex_id(g.fingerprint());
  rep.k = 0;
  rep.rho = rho;
  rep.predicted_class = predicted_div0_class(g);
  if (rep.predicted_class.rfind("undefined", 0) == 0) {
    rep.notes.push_back("divergence undefined: the group has more than one end");
    return rep;
  }
  rep.rows.resize(static_cast<std::size_t>(std::max(rmax, 0)));
  const auto split = join_decomposition(g);
  std::vector<int> walk;
  if (split) {
    rep.notes.push_back("upper values: seven-waypoint product path");
  } else {
    walk = complement_walk(g);
    rep.push_constant = push_path_constant(g);
    rep.notes.push_back("upper values: push_path of the geodesic eta(r) -> eta(-r)");
    rep.notes.push_back("complement walk length n = " + std::to_string(walk.size()));
  }
  std::vector<double> ratios(rep.rows.size(), 0.0);
  detail::parallel_for(rep.rows.size(), opt.threads, [&](std::size_t i) {
    const int r = static_cast<int>(i) + 1;
    DivergenceRow& row = rep.rows[i];
    row.r = r;
    GroupElement x, y;
    EdgePath path;
    if (split) {
      row.witness = "antipodal-generator";
      x = raag.generator(std::countr_zero(split->first), r);
      y = raag.inverse(x);
      path = product_avoidant_path(raag, x, y, r, *split);
      if (path.length() > 6 * r) throw std::logic_error("product path longer than 6r");
    } else {
      row.witness = "eta";
      x = eta_geodesic(raag, r);
      y = eta_geodesic(raag, -r);
      const EdgePath straight = path_through_identity(raag, x, y);
      path = push_path(raag, straight, r);
      ratios[i] = static_cast<double>(path.length()) / (static_cast<double>(r) * straight.length());
      row.corridor = corridor_bound(r, static_cast<long>(walk.size()), rho);
    }
    if (!(path_end(raag, path) == y) || !(path.start == x) || path_min_length(raag, path) < r) {
      throw std::logic_error("constructed path is not an r-avoidant path from x to y");
    }
    row.upper = path.length();
    row.upper_method = Method::pushed_construction;
    bfs_lower(raag, x, y, rho * r, opt.bfs_budget, row);
    if (row.lower && row.upper && *row.lower > *row.upper) {
      throw std::logic_error("BFS distance exceeds a constructed path length");
    }
  });
  if (!split && !ratios.empty()) rep.max_push_ratio = *std::max_element(ratios.begin(), ratios.end());
  fit_rows(rep);
  return rep;
}

namespace {

std::vector<int> first_bits(VertexMask m, int count) {
  std::vector<int> out;
  for (; m != 0 && static_cast<int>(out.size()) < count; m &= m - 1) {
    out.push_back(std::countr_zero(m));
  }
  return out;
}

std::optional<VertexMask> clique_of_size(const DefiningGraph& g, int size) {
  for (VertexMask c : maximal_cliques(g)) {
    if (std::popcount(c) >= size) return c;
  }
  return std::nullopt;
}

}  // namespace

DivergenceReport divk_experiment(const Raag& raag, int k, int rmax, const mpq_class& rho,
                                 const mpq_class& alpha, const DivkOptions& opt) {
  if (k < 1) throw std::invalid_argument("divk needs k >= 1 (use div0 for k = 0)");
  if (sgn(rho) <= 0 || rho > 1) throw std::invalid_argument("rho must lie in (0, 1]");
  if (sgn(alpha) <= 0) throw std::invalid_argument("alpha must be positive");
  const auto& g = raag.graph();
  const int dd = divdim(g);
  if (k > dd) {
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds divdim = " +
                                std::to_string(dd));
  }
  DivergenceReport rep;
  rep.graph_id = hex_id(g.fingerprint());
  rep.k = k;
  rep.rho = rho;
  rep.alpha = alpha;
  rep.predicted_class = "between r^" + std::to_string(k + 1) + " and r^" +
                        std::to_string(2 * k + 2);
  const std::size_t n = static_cast<std::size_t>(std::max(rmax, 0));

  // Translated spheres in a (k+1)-clique flat.
  const auto flat = clique_of_size(g, k + 1);
  const std::vector<int> gens = first_bits(*flat, k + 1);
  std::vector<DivergenceRow> sphere_rows(n);
  detail::parallel_for(n, opt.threads, [&](std::size_t i) {
    const int r = static_cast<int>(i) + 1;
    DivergenceRow& row = sphere_rows[i];
    row.r = r;
    row.witness = "clique-sphere";
    const mpq_class scaled = alpha * r;
    const mpz_class floor_scaled = scaled.get_num() / scaled.get_den();
    const int s = std::max(k + 1, static_cast<int>(floor_scaled.get_si()));
    const GroupElement center = raag.generator(gens[0], r + s);
    const CubicalChain cycle = flat_sphere_cycle(raag, center, gens, s);
    row.cycle_mass = cycle.mass();
    std::vector<GroupElement> verts;
    for_each_box(gens.size(), -(s + 1), s + 1, [&](const std::vector<long>& y) {
      long norm = 0;
      for (long v : y) norm += std::labs(v);
      if (norm <= s + 1) verts.push_back(flat_point(raag, center, gens, y));
    });
    const Window w = avoidant_filter(Window(raag, std::move(verts), k + 1), rho * r);
    const FillingResult res = min_filling(raag, window_problem(w, cycle), opt.solver);
    row.optimality = std::string(to_string(res.optimality));
    if (res.chain) {
      row.upper = res.mass;
      row.upper_method = Method::ilp_exact;
      if (res.optimality == Optimality::exact_ilp) {
        row.lower = res.mass;
        row.lower_method = Method::ilp_exact;
      }
    }
    row.flagged = res.optimality != Optimality::exact_ilp;
    row.budget_hit = res.optimality == Optimality::lp_bound_only;
    mpz_class rk;
    mpz_ui_pow_ui(rk.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(k));
    row.note = "flat window; alpha_eff = " + mpq_class(mpq_class(row.cycle_mass) / rk).get_str();
  });
  rep.rows.insert(rep.rows.end(), sphere_rows.begin(), sphere_rows.end());

  // Equatorial spheres that link the ball.
  if (const auto big = clique_of_size(g, k + 2)) {
    const std::vector<int> eq = first_bits(*big, k + 1);
    std::vector<DivergenceRow> eq_rows(n);
    ProfileOptions po;
    po.rho = rho;
    po.cell_budget = opt.cell_budget;
    po.vertex_budget = opt.vertex_budget;
    po.solver = opt.solver;
    detail::parallel_for(n, opt.threads, [&](std::size_t i) {
      const int r = static_cast<int>(i) + 1;
      const CubicalChain cycle = flat_sphere_cycle(raag, raag.identity(), eq, r + 1);
      const auto prof = avoidant_fill_profile(raag, {{r, cycle}}, po);
      const ProfileRow& p = prof.front();
      DivergenceRow& row = eq_rows[i];
      row.r = r;
      row.witness = "equatorial";
      row.cycle_mass = p.cycle_mass;
      row.window_radius = p.window_radius;
      row.optimality = std::string(to_string(p.optimality));
      row.flagged = p.status != "ok" || p.touches_boundary;
      row.budget_hit = p.status == "budget";
      row.note = p.status;
      if (p.fill_mass) {
        row.upper = *p.fill_mass;
        row.upper_method = Method::ilp_exact;
        if (p.optimality == Optimality::exact_ilp) {
          row.lower = *p.fill_mass;
          row.lower_method = Method::ilp_exact;
        }
        const Window full = ball_window(raag, p.window_radius, k + 1, opt.vertex_budget);
        const FillingResult ref = min_filling(raag, window_problem(full, cycle), opt.solver);
        if (ref.optimality == Optimality::exact_ilp) row.reference = ref.mass;
      }
    });
    rep.rows.insert(rep.rows.end(), eq_rows.begin(), eq_rows.end());
  }

  // Σ'_r for orthoplex graphs.
  std::optional<OrthoplexData> orth;
  try {
    orth = orthoplex_data(g);
  } catch (const std::invalid_argument&) {
  }
  if (orth && orth->k == k) {
    std::vector<DivergenceRow> sp_rows(n);
    detail::parallel_for(n, opt.threads, [&](std::size_t i) {
      const int r = static_cast<int>(i) + 1;
      DivergenceRow& row = sp_rows[i];
      row.r = r;
      row.witness = "sigma-prime";
      BbOptions bo;
      bo.level = mpq_class(2 * r - 1, 2);
      bo.cell_budget = opt.cell_budget;
      bo.solver = opt.solver;
      row.lower = pushed_filling_lower_bound(k, r, 1);
      row.lower_method = Method::analytic_bound;
      try {
        const BbRow b = bb_fill_row(raag, *orth, r, bo);
        row.cycle_mass = b.sigma_mass;
        row.upper = b.fill_mass;
        row.upper_method = Method::ilp_exact;
        row.optimality = std::string(to_string(b.optimality));
        row.window_radius = b.window_radius;
        row.note = "slice filling at level r - 1/2";
      } catch (const BudgetExceeded& e) {
        row.flagged = true;
        row.budget_hit = true;
        row.note = e.what();
      }
    });
    rep.rows.insert(rep.rows.end(), sp_rows.begin(), sp_rows.end());
  }
  for (const auto& row : rep.rows) {
    if (row.lower && row.upper && *row.lower > *row.upper) {
      throw std::logic_error("lower value exceeds upper value in a divk row");
    }
  }
  fit_rows(rep);
  rep.notes.push_back("values are witness-based; the supremum over all cycles is not computed");
  return rep;
}

}  // namespace raagdiv
