// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "raagdiv/bb.hpp"
#include "raagdiv/divergence.hpp"
#include "raagdiv/filling.hpp"
#include "raagdiv/homology.hpp"
#include "raagdiv/lp.hpp"
#include "raagdiv/pushing.hpp"
#include "raagdiv/report.hpp"

namespace {

using namespace raagdiv;
using Clock = std::chrono::steady_clock;

DefiningGraph corpus(const std::string& name) {
  return load_graph(std::string(RAAGDIV_CORPUS) + "/" + name + ".json");
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  return ok;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Letter random_letter(std::mt19937& rng, const Raag& raag) {
  return Letter(static_cast<int>(rng() % raag.rank()), rng() % 2 ? 1 : -1);
}

GroupElement random_element(std::mt19937& rng, const Raag& raag, int max_len) {
  std::vector<Letter> w;
  const int len = static_cast<int>(rng() % (max_len + 1));
  for (int i = 0; i < len; ++i) w.push_back(random_letter(rng, raag));
  return raag.normalize(w);
}

GroupElement random_sphere_point(std::mt19937& rng, const Raag& raag, int r) {
  GroupElement x = raag.identity();
  while (x.length() < r) {
    const auto y = raag.multiply(x, random_letter(rng, raag));
    if (y.length() > x.length()) x = y;
  }
  return x;
}

bool classification() {
  const std::vector<std::string> names = {"K2", "K3",         "K4",         "P3",        "P4",
                                          "C5", "orthoplex1", "orthoplex2", "join_P4_K1"};
  int matches = 0;
  double slowest = 0;
  for (const auto& name : names) {
    const DefiningGraph g = corpus(name);
    const auto t0 = Clock::now();
    const nlohmann::json a = analyze_graph(g);
    const bool product = a["product"].get<bool>();
    const bool complement_split = a["complement_components"].size() > 1;
    const bool linear = a["div0"] == "linear";
    slowest = std::max(slowest, seconds_since(t0));
    if (product == complement_split && linear == product) ++matches;
  }
  return report(1, matches == 9 && slowest < 1.0,
                "classification " + std::to_string(matches) + "/9, slowest " +
                    fmt("%.3f s", slowest));
}

bool divdim_values() {
  const auto t0 = Clock::now();
  const int k2 = divdim(corpus("K2")), k3 = divdim(corpus("K3")), k4 = divdim(corpus("K4"));
  const int two = divdim(corpus("two_points"));
  const double t = seconds_since(t0);
  const bool ok = k2 == 0 && k3 == 1 && k4 == 2 && two == -1 && t < 5.0;
  return report(2, ok,
                "divdim K2=" + std::to_string(k2) + " K3=" + std::to_string(k3) +
                    " K4=" + std::to_string(k4) + " two_points=" + std::to_string(two) + ", " +
                    fmt("%.3f s", t));
}

bool product_paths() {
  std::mt19937 rng(1001);
  int rows = 0, good = 0;
  for (const auto& name : {"K2", "P3"}) {
    const Raag raag(corpus(name));
    const auto split = join_decomposition(raag.graph());
    if (!split) return report(3, false, std::string(name) + " has no join decomposition");
    for (int r = 1; r <= 50; ++r) {
      const auto x = random_sphere_point(rng, raag, r);
      const auto y = random_sphere_point(rng, raag, r);
      const EdgePath p = product_avoidant_path(raag, x, y, r, *split);
      ++rows;
      const bool ok = p.start == x && path_end(raag, p) == y && path_min_length(raag, p) >= r &&
                      p.length() <= 6 * r;
      good += ok ? 1 : 0;
    }
  }
  return report(3, good == rows,
                "product paths avoidant and <= 6r: " + std::to_string(good) + "/" +
                    std::to_string(rows));
}

bool nonproduct_lower_bound() {
  const Raag raag(corpus("P4"));
  const long n = static_cast<long>(complement_walk(raag.graph()).size());
  const auto t0 = Clock::now();
  std::vector<long> d;
  bool ok = true;
  std::string detail = "P4 exact";
  for (int r = 2; r <= 4; ++r) {
    const auto res =
        avoidant_distance(raag, eta_geodesic(raag, r), eta_geodesic(raag, -r), r, 10'000'000);
    if (res.status != AvoidantDistance::Status::found) {
      return report(4, false, "search did not finish at r=" + std::to_string(r));
    }
    const mpq_class bound = corridor_bound(r, n, 1);
    ok = ok && res.length >= bound;
    d.push_back(res.length);
    detail += " r=" + std::to_string(r) + ":" + std::to_string(res.length) + ">=" +
              bound.get_str();
  }
  const long second = d[2] - 2 * d[1] + d[0];
  const double t = seconds_since(t0);
  ok = ok && second > 0 && t < 600;
  return report(4, ok,
                detail + ", n=" + std::to_string(n) + ", second difference " +
                    std::to_string(second) + ", " + fmt("%.1f s", t));
}

bool pushed_paths() {
  const Raag raag(corpus("P4"));
  const int c = push_path_constant(raag.graph());
  const auto t0 = Clock::now();
  double max_ratio = 0, last_ratio = 0;
  bool ok = true;
  for (int r = 2; r <= 8; ++r) {
    const auto x = eta_geodesic(raag, r), y = eta_geodesic(raag, -r);
    const EdgePath pushed = push_path(raag, path_through_identity(raag, x, y), r);
    ok = ok && pushed.start == x && path_end(raag, pushed) == y &&
         path_min_length(raag, pushed) >= r;
    last_ratio = static_cast<double>(pushed.length()) / (r * r);
    max_ratio = std::max(max_ratio, last_ratio);
  }
  const double t = seconds_since(t0);
  ok = ok && max_ratio <= c && t < 60;
  return report(5, ok,
                "P4 pushed length / r^2: max " + fmt("%.3f", max_ratio) + ", at r=8 " +
                    fmt("%.3f", last_ratio) + ", constant C=" + std::to_string(c) + ", " +
                    fmt("%.2f s", t));
}

bool orthoplex_growth() {
  const Raag raag(corpus("orthoplex1"));
  BbOptions o;
  o.cell_budget = 5'000'000;
  const auto t0 = Clock::now();
  const BbTable t = bb_fill_experiment(raag, orthoplex_data(raag.graph()), 20, o);
  const double secs = seconds_since(t0);
  bool above = true;
  for (const auto& row : t.rows) above = above && mpq_class(row.fill_mass) >= row.lower_bound;
  const int rmax = static_cast<int>(t.rows.size());
  const double exponent = t.exponent.value_or(0.0);
  const double need = rmax >= 6 ? 3.4 : 3.0;
  const bool analytic = pushed_filling_lower_bound(1, 2, 1) == 8;
  const bool ok = rmax >= 4 && above && exponent >= need && analytic;
  std::string masses;
  for (const auto& row : t.rows) masses += (masses.empty() ? "" : ",") + std::to_string(row.fill_mass);
  return report(6, ok,
                "orthoplex1 R_max=" + std::to_string(rmax) + (t.truncated ? " (budget)" : "") +
                    ", fill >= bound: " + (above ? "yes" : "no") + ", exponent " +
                    fmt("%.3f", exponent) + " (need " + fmt("%.1f", need) + "), masses " +
                    masses + ", " + fmt("%.1f s", secs));
}

bool euclidean_sanity() {
  const Raag raag(corpus("K3"));
  const auto rep = divk_experiment(raag, 1, 3, 1, 1);
  int rows = 0;
  bool ok = true;
  double worst = 0;
  for (const auto& row : rep.rows) {
    if (row.witness != "equatorial") continue;
    ++rows;
    if (!row.upper || !row.reference || row.budget_hit) {
      ok = false;
      continue;
    }
    const double ratio = row.upper->get_d() / row.reference->get_d();
    worst = std::max(worst, ratio);
    ok = ok && ratio <= 4.0;
  }
  ok = ok && rows == 3;
  return report(7, ok,
                "K3 equatorial rows " + std::to_string(rows) + "/3 feasible, avoidant / plain <= " +
                    fmt("%.3f", worst));
}

// Property suites.

CubicalChain random_chain(std::mt19937& rng, const Raag& raag, int dim) {
  std::vector<VertexMask> pool;
  for (VertexMask m : cliques(raag.graph(), dim)) {
    if (std::popcount(m) == dim) pool.push_back(m);
  }
  CubicalChain c(dim);
  const int terms = 1 + static_cast<int>(rng() % 6);
  for (int t = 0; t < terms; ++t) {
    c.add(Cube{random_element(rng, raag, 6), pool[rng() % pool.size()]},
          static_cast<long>(rng() % 7) - 3);
  }
  return c;
}

int max_clique(const DefiningGraph& g) {
  int top = 0;
  for (VertexMask m : maximal_cliques(g)) top = std::max(top, std::popcount(m));
  return top;
}

long cubical_violations(std::mt19937& rng, int& chains) {
  long bad = 0;
  for (const auto& name : {"K3", "K4", "P4", "orthoplex1", "orthoplex2"}) {
    const Raag raag(corpus(name));
    const int top = max_clique(raag.graph());
    for (int i = 0; i < 250; ++i, ++chains) {
      const int dim = 2 + static_cast<int>(rng() % (top - 1));
      const auto c = random_chain(rng, raag, dim);
      if (!cubical_boundary(raag, cubical_boundary(raag, c)).empty()) ++bad;
    }
  }
  return bad;
}

long simplicial_violations(std::mt19937& rng, int& chains) {
  long bad = 0;
  while (chains < 1000) {
    const int n = 4 + static_cast<int>(rng() % 5);
    std::vector<std::pair<int, int>> edges;
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) {
      names.push_back("v" + std::to_string(i));
      for (int j = i + 1; j < n; ++j) {
        if (rng() % 3 != 0) edges.emplace_back(i, j);
      }
    }
    const auto l = flag_complex(DefiningGraph(names, edges));
    for (int dim = 2; dim <= l.dimension(); ++dim) {
      const SparseIntMatrix outer = boundary_matrix(l, dim - 1);
      const SparseIntMatrix inner = boundary_matrix(l, dim);
      for (int c = 0; c < 10; ++c, ++chains) {
        SparseIntMatrix chain(inner.cols(), 1);
        for (std::size_t i = 0; i < inner.cols(); ++i) {
          chain.set(i, 0, static_cast<long>(rng() % 7) - 3);
        }
        if (!(outer * (inner * chain)).is_zero()) ++bad;
      }
    }
  }
  return bad;
}

long slice_violations(std::mt19937& rng, int& chains) {
  long bad = 0;
  for (const auto& name : {"orthoplex1", "orthoplex2", "K4"}) {
    const Raag raag(corpus(name));
    const int top = max_clique(raag.graph());
    for (int i = 0; i < 400; ++i) {
      const int dim = 3 + static_cast<int>(rng() % (top - 2));
      const long h = static_cast<long>(rng() % 5) - 2;
      const mpq_class level(2 * h + 1, 2);
      SliceChain c{level, CubicalChain(dim)};
      const auto raw = random_chain(rng, raag, dim);
      for (const auto& [cube, v] : raw.coeffs()) {
        if (straddles(cube, level)) c.cubes.add(cube, v);
      }
      if (c.cubes.empty()) continue;
      ++chains;
      if (!slice_boundary(raag, slice_boundary(raag, c)).cubes.empty()) ++bad;
    }
  }
  return bad;
}

// A random spelling of x obtained by swapping adjacent commuting letters.
std::vector<Letter> reshuffle(std::mt19937& rng, const Raag& raag, std::vector<Letter> w) {
  if (w.size() < 2) return w;
  for (std::size_t s = 0; s < 4 * w.size() * w.size(); ++s) {
    const std::size_t i = rng() % (w.size() - 1);
    if (w[i].gen() != w[i + 1].gen() && raag.graph().adjacent(w[i].gen(), w[i + 1].gen())) {
      std::swap(w[i], w[i + 1]);
    }
  }
  return w;
}

long abs_violations(std::mt19937& rng, int& checks) {
  long bad = 0;
  for (const auto& name : {"K3", "P4", "orthoplex1"}) {
    const Raag raag(corpus(name));
    for (int i = 0; i < 200; ++i) {
      const auto x = random_element(rng, raag, 12);
      const GroupElement expected = raag.abs_value(x);
      if (expected.height() != x.length() || expected.length() != x.length()) ++bad;
      for (int s = 0; s < 20; ++s, ++checks) {
        auto w = reshuffle(rng, raag, x.letters());
        if (raag.normalize(w) != x) ++bad;
        for (auto& l : w) l = l.absolute();
        if (raag.normalize(w) != expected) ++bad;
      }
    }
  }
  return bad;
}

long push_violations(std::mt19937& rng, int& edges, int& heights) {
  long bad = 0;
  for (const auto& name : {"K3", "P4", "C5", "orthoplex1", "orthoplex2"}) {
    const Raag raag(corpus(name));
    for (int i = 0; i < 400; ++i) {
      const int r = 1 + static_cast<int>(rng() % 8);
      const auto v = random_element(rng, raag, r);
      const Letter d = random_letter(rng, raag);
      if (v.length() <= r && raag.multiply(v, d).length() <= r) {
        ++edges;
        if (push_edge(raag, v, d, r).length() != r) ++bad;
      }
      if (v.height() != 0) {
        ++heights;
        if (height_push_vertex(raag, v, d).height() != 0) ++bad;
      }
    }
  }
  return bad;
}

SparseIntMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int spread) {
  SparseIntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m.set(r, c, static_cast<long>(rng() % (2 * spread + 1)) - spread);
    }
  }
  return m;
}

SparseIntMatrix random_unimodular(std::mt19937& rng, std::size_t n) {
  std::vector<std::vector<long>> u(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  for (int step = 0; step < 12; ++step) {
    const std::size_t i = rng() % n, j = rng() % n;
    if (i == j) {
      for (auto& v : u[i]) v = -v;
      continue;
    }
    const long m = static_cast<long>(rng() % 7) - 3;
    for (std::size_t c = 0; c < n; ++c) u[i][c] += m * u[j][c];
  }
  SparseIntMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out.set(r, c, u[r][c]);
  }
  return out;
}

long snf_violations(std::mt19937& rng, int& checks) {
  long bad = 0;
  for (; checks < 300; ++checks) {
    const std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
    const SparseIntMatrix a = random_matrix(rng, rows, cols, 4);
    const SmithForm before = smith_normal_form(a);
    const SmithForm after =
        smith_normal_form(random_unimodular(rng, rows) * a * random_unimodular(rng, cols));
    if (before.diagonal != after.diagonal || before.rank != after.rank) ++bad;
  }
  return bad;
}

// Fillings of random cycles: every solver output must have the right
// boundary and never beat the LP relaxation.
long filling_violations(std::mt19937& rng, int& solved, long& lp_bad) {
  long bad = 0;
  for (const auto& name : {"K2", "K3", "P4", "orthoplex1"}) {
    const Raag raag(corpus(name));
    const Window w = ball_window(raag, 3, 2);
    std::vector<Cube> squares;
    for (const auto& key : w.cubes(2)) squares.push_back(w.cube(key));
    for (int trial = 0; trial < 25; ++trial) {
      CubicalChain block(2);
      for (int t = 0; t < 3; ++t) {
        block.add(squares[rng() % squares.size()], static_cast<long>(rng() % 3) + 1);
      }
      const CubicalChain cycle = cubical_boundary(raag, block);
      if (cycle.empty()) continue;
      const FillingProblem p = window_problem(w, cycle);
      const FillingResult res = best_filling(raag, p);
      ++solved;
      if (!res.chain || problem_boundary(raag, *res.chain, p.level) != p.cycle) ++bad;
      if (mpq_class(res.mass) < lp_lower_bound(raag, p)) ++lp_bad;
    }
  }
  return bad;
}

long ilp_violations(std::mt19937& rng, int& solved) {
  long bad = 0;
  for (int trial = 0; trial < 300; ++trial) {
    lp::Problem p;
    const std::size_t n = 2 + rng() % 3, m = 1 + rng() % 2;
    p.num_vars = n;
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<std::pair<std::size_t, mpq_class>> row;
      for (std::size_t j = 0; j < n; ++j) {
        const long v = static_cast<long>(rng() % 7) - 3;
        if (v != 0) row.emplace_back(j, mpq_class(v));
      }
      p.rows.push_back(row);
      p.rhs.emplace_back(static_cast<long>(rng() % 11) - 4);
    }
    for (std::size_t j = 0; j < n; ++j) p.cost.emplace_back(static_cast<long>(rng() % 5));
    for (std::size_t j = 0; j < n; ++j) p.add_bound(j, mpq_class(4), true);
    const lp::IntegerSolution s = lp::solve_ilp(p, 1'000'000, 10'000);
    if (s.status != lp::Status::optimal) continue;
    ++solved;
    if (!s.lp_feasible || s.objective < s.lp_bound) ++bad;
  }
  return bad;
}

bool property_suites() {
  std::mt19937 rng(2024);
  int cube_chains = 0, simplicial_chains = 0, slice_chains = 0, abs_checks = 0, edges = 0,
      heights = 0, snf_checks = 0, fills = 0, ilps = 0;
  long lp_fill_bad = 0;
  const long cube = cubical_violations(rng, cube_chains);
  const long simp = simplicial_violations(rng, simplicial_chains);
  long slice = 0;
  while (slice_chains < 1000) slice += slice_violations(rng, slice_chains);
  const long abs = abs_violations(rng, abs_checks);
  const long push = push_violations(rng, edges, heights);
  const long snf = snf_violations(rng, snf_checks);
  const long fill = filling_violations(rng, fills, lp_fill_bad);
  const long ilp = ilp_violations(rng, ilps);
  const long total = cube + simp + slice + abs + push + snf + fill + lp_fill_bad + ilp;
  const bool sizes = cube_chains >= 1000 && simplicial_chains >= 1000 && slice_chains >= 1000 &&
                     abs_checks >= 20 * 200 && edges > 0 && heights > 0 && fills > 0 && ilps > 0;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "violations %ld (cubical %d chains, simplicial %d, slice %d, abs %d reshuffles, "
                "push_edge %d, height %d, SNF %d, fillings %d, ILP %d)",
                total, cube_chains, simplicial_chains, slice_chains, abs_checks, edges, heights,
                snf_checks, fills, ilps);
  return report(8, total == 0 && sizes, buf);
}

}  // namespace

int main() {
  bool ok = true;
  // Run every criterion even after a failure.
  ok = classification() && ok;
  ok = divdim_values() && ok;
  ok = product_paths() && ok;
  ok = nonproduct_lower_bound() && ok;
  ok = pushed_paths() && ok;
  ok = orthoplex_growth() && ok;
  ok = euclidean_sanity() && ok;
  ok = property_suites() && ok;
  std::printf("acceptance: %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}
