#include "raagdiv/cubical.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace raagdiv {
namespace {

DefiningGraph corpus(const std::string& name) {
  return load_graph(std::string(RAAGDIV_CORPUS) + "/" + name + ".json");
}

GroupElement random_element(std::mt19937& rng, const Raag& raag, int length) {
  std::vector<Letter> w;
  for (int i = 0; i < length; ++i) {
    w.emplace_back(static_cast<int>(rng() % raag.rank()), rng() % 2 ? 1 : -1);
  }
  return raag.normalize(w);
}

CubicalChain random_chain(std::mt19937& rng, const Raag& raag, int dim) {
  std::vector<VertexMask> pool;
  for (VertexMask m : cliques(raag.graph(), dim)) {
    if (std::popcount(m) == dim) pool.push_back(m);
  }
  CubicalChain c(dim);
  const int terms = 1 + static_cast<int>(rng() % 6);
  for (int t = 0; t < terms; ++t) {
    const Cube cube{random_element(rng, raag, static_cast<int>(rng() % 6)),
                    pool[rng() % pool.size()]};
    c.add(cube, static_cast<long>(rng() % 7) - 3);
  }
  return c;
}

// Coefficients of 1 / p(-2t/(1+t)), p the clique polynomial, via
// (1+t)^D / Σ_σ (-2t)^|σ| (1+t)^{D-|σ|} with D the clique number.
std::vector<long> growth_series(const DefiningGraph& g, int terms) {
  std::vector<long> count(g.size() + 1, 0);
  count[0] = 1;
  for (VertexMask m = 1; m < (VertexMask{1} << g.size()); ++m) {
    bool clique = true;
    for (int u = 0; u < g.size(); ++u) {
      for (int v = u + 1; v < g.size(); ++v) {
        if (((m >> u) & 1U) && ((m >> v) & 1U) && !g.adjacent(u, v)) clique = false;
      }
    }
    if (clique) ++count[std::popcount(m)];
  }
  int d = 0;
  while (d + 1 < static_cast<int>(count.size()) && count[d + 1] > 0) ++d;
  auto binom_row = [](int n) {
    std::vector<long> row(n + 1, 1);
    for (int i = 1; i < n; ++i) row[i] = row[i - 1] * (n - i + 1) / i;
    return row;
  };
  std::vector<long> num(terms, 0), den(terms, 0);
  const auto top = binom_row(d);
  for (int i = 0; i <= d && i < terms; ++i) num[i] = top[i];
  for (int j = 0; j <= d; ++j) {
    const auto row = binom_row(d - j);
    long scale = count[j];
    for (int s = 0; s < j; ++s) scale *= -2;
    for (int i = 0; i <= d - j && i + j < terms; ++i) den[i + j] += scale * row[i];
  }
  std::vector<long> out(terms, 0);
  for (int n = 0; n < terms; ++n) {
    long v = num[n];
    for (int i = 1; i <= n; ++i) v -= den[i] * out[n - i];
    out[n] = v;  // den[0] == 1
  }
  return out;
}

TEST(Cube, VerticesAndRanges) {
  const Raag raag(corpus("K3"));
  const Cube c{raag.parse("a^-1"), 0b011};
  const auto v = cube_vertices(raag, c);
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v[0], raag.parse("a^-1"));
  EXPECT_EQ(v[1], raag.identity());
  EXPECT_EQ(v[2], raag.parse("a^-1 b"));
  EXPECT_EQ(v[3], raag.parse("b"));
  EXPECT_EQ(cube_length_range(raag, c), std::make_pair(0, 2));
  EXPECT_EQ(c.dim(), 2);
  EXPECT_TRUE(straddles(c, mpq_class(1, 2)));
  EXPECT_FALSE(straddles(c, mpq_class(3, 2)));
  EXPECT_FALSE(straddles(c, mpq_class(-1)));
}

TEST(Cube, BoundaryOfEdgeAndSquare) {
  const Raag raag(corpus("K2"));
  CubicalChain edge(1);
  edge.add({raag.identity(), 0b01}, 1);
  CubicalChain expected(0);
  expected.add({raag.parse("a"), 0}, 1);
  expected.add({raag.identity(), 0}, -1);
  EXPECT_EQ(cubical_boundary(raag, edge), expected);

  CubicalChain square(2);
  square.add({raag.identity(), 0b11}, 1);
  const auto b = cubical_boundary(raag, square);
  EXPECT_EQ(b.size(), 4u);
  EXPECT_EQ(b.mass(), 4);
  EXPECT_EQ(b.coeff({raag.identity(), 0b01}), 1);
  EXPECT_EQ(b.coeff({raag.identity(), 0b10}), -1);
  EXPECT_EQ(b.coeff({raag.parse("b"), 0b01}), -1);
  EXPECT_EQ(b.coeff({raag.parse("a"), 0b10}), 1);
}

TEST(Chain, AddCancelsAndMass) {
  const Raag raag(corpus("K2"));
  CubicalChain c(1);
  const Cube e{raag.identity(), 0b10};
  c.add(e, 3);
  c.add(e, -5);
  EXPECT_EQ(c.coeff(e), -2);
  EXPECT_EQ(c.mass(), 2);
  c.add(e, 2);
  EXPECT_TRUE(c.empty());
}

TEST(Cubical, BoundarySquaresToZeroOnRandomChains) {
  std::mt19937 rng(31);
  int chains = 0, violations = 0;
  for (const auto& name : {"K2", "K3", "K4", "P4", "orthoplex1", "orthoplex2"}) {
    const Raag raag(corpus(name));
    int maxdim = 0;
    for (VertexMask m : maximal_cliques(raag.graph())) maxdim = std::max(maxdim, std::popcount(m));
    for (int trial = 0; trial < 200; ++trial, ++chains) {
      const int dim = 2 + static_cast<int>(rng() % std::max(1, maxdim - 1));
      if (dim > maxdim) {
        --trial;
        continue;
      }
      const auto c = random_chain(rng, raag, dim);
      const auto bb = cubical_boundary(raag, cubical_boundary(raag, c));
      if (!bb.empty()) ++violations;
    }
  }
  EXPECT_GE(chains, 1000);
  EXPECT_EQ(violations, 0);
}

TEST(Cubical, StraddlingPartKeepsOnlyCutCubes) {
  std::mt19937 rng(32);
  const Raag raag(corpus("K3"));
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_chain(rng, raag, 2);
    const mpq_class level(static_cast<long>(rng() % 9) * 2 - 7, 2);
    const auto s = straddling_part(c, level);
    for (const auto& [cube, v] : c.coeffs()) {
      EXPECT_EQ(s.coeff(cube), straddles(cube, level) ? v : 0);
    }
  }
}

TEST(Spheres, SizesMatchGrowthSeries) {
  for (const auto& name : {"K2", "K3", "P3", "P4", "C5", "two_points", "orthoplex1"}) {
    const Raag raag(corpus(name));
    const int rmax = raag.rank() > 4 ? 5 : 7;
    const auto sizes = sphere_sizes(raag, rmax);
    const auto expected = growth_series(raag.graph(), rmax + 1);
    ASSERT_EQ(sizes.size(), static_cast<std::size_t>(rmax + 1));
    for (int r = 0; r <= rmax; ++r) {
      EXPECT_EQ(static_cast<long>(sizes[r]), expected[r]) << name << " r=" << r;
    }
    for (int r = 0; r <= 3; ++r) {
      const auto s = sphere_vertices(raag, r);
      EXPECT_EQ(s.size(), sizes[r]);
      EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
      for (const auto& x : s) EXPECT_EQ(x.length(), r);
    }
  }
  // Free group F_2: 4·3^{r-1}.
  const auto f2 = sphere_sizes(Raag(corpus("two_points")), 4);
  EXPECT_EQ(f2, (std::vector<std::size_t>{1, 4, 12, 36, 108}));
}

TEST(Window, BallOfZ2MatchesLatticeCount) {
  const Raag raag(corpus("K2"));
  for (int r = 0; r <= 6; ++r) {
    const Window w = ball_window(raag, r, 2);
    auto in = [&](long x, long y) { return std::abs(x) + std::abs(y) <= r; };
    long verts = 0, edges = 0, squares = 0;
    for (long x = -r - 1; x <= r + 1; ++x) {
      for (long y = -r - 1; y <= r + 1; ++y) {
        if (!in(x, y)) continue;
        ++verts;
        if (in(x + 1, y)) ++edges;
        if (in(x, y + 1)) ++edges;
        if (in(x + 1, y) && in(x, y + 1) && in(x + 1, y + 1)) ++squares;
      }
    }
    EXPECT_EQ(static_cast<long>(w.vertices().size()), verts);
    EXPECT_EQ(static_cast<long>(w.cubes(1).size()), edges);
    EXPECT_EQ(static_cast<long>(w.cubes(2).size()), squares);
    EXPECT_EQ(w.cell_count(), static_cast<std::size_t>(verts + edges + squares));
  }
}

TEST(Window, ClosedUnderFacesAndAvoidantFilter) {
  for (const auto& name : {"K3", "P4", "orthoplex1"}) {
    const Raag raag(corpus(name));
    const Window w = ball_window(raag, 3, 3);
    for (int d = 1; d <= w.maxdim(); ++d) {
      for (const auto& key : w.cubes(d)) {
        const Cube c = w.cube(key);
        for (const auto& [f, sign] : cube_facets(raag, c)) {
          EXPECT_TRUE(w.contains(f));
          EXPECT_TRUE(sign == 1 || sign == -1);
        }
        EXPECT_LE(cube_length_range(raag, c).second, 3);
      }
    }
    const Window a = avoidant_filter(w, mpq_class(3, 2));
    for (int d = 0; d <= w.maxdim(); ++d) {
      std::size_t expected = 0;
      for (const auto& key : w.cubes(d)) {
        const Cube c = w.cube(key);
        const bool keep = cube_length_range(raag, c).first >= 2;
        expected += keep;
        EXPECT_EQ(a.contains(c), keep);
      }
      EXPECT_EQ(a.cubes(d).size(), expected);
    }
  }
}

TEST(Window, BudgetIsEnforced) {
  const Raag raag(corpus("two_points"));
  EXPECT_THROW(ball_window(raag, 10, 1, 1000), BudgetExceeded);
}

TEST(CeilInt, Values) {
  EXPECT_EQ(ceil_int(mpq_class(0)), 0);
  EXPECT_EQ(ceil_int(mpq_class(1, 2)), 1);
  EXPECT_EQ(ceil_int(mpq_class(4)), 4);
  EXPECT_EQ(ceil_int(mpq_class(9, 4)), 3);
}

}  // namespace
}  // namespace raagdiv
