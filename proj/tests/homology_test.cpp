#include "raagdiv/homology.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace raagdiv {
namespace {

using Dense = std::vector<std::vector<mpz_class>>;

DefiningGraph corpus(const std::string& name) {
  return load_graph(std::string(RAAGDIV_CORPUS) + "/" + name + ".json");
}

SimplicialComplex complex_of(int n, std::vector<Simplex> tops) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return SimplicialComplex(labels, std::move(tops));
}

Dense to_dense(const SparseIntMatrix& m) {
  Dense d(m.rows(), std::vector<mpz_class>(m.cols(), 0));
  for (const auto& [rc, v] : m.entries()) d[rc.first][rc.second] = v;
  return d;
}

SparseIntMatrix from_dense(const Dense& d, std::size_t cols) {
  SparseIntMatrix m(d.size(), cols);
  for (std::size_t r = 0; r < d.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, d[r][c]);
  }
  return m;
}

mpz_class determinant(Dense a) {
  // Cofactor expansion; the matrices here are at most 4x4.
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  mpz_class det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Dense minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<mpz_class> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != j) row.push_back(a[r][c]);
      }
      minor.push_back(row);
    }
    const mpz_class term = a[0][j] * determinant(minor);
    det += (j % 2 == 0) ? term : mpz_class(-term);
  }
  return det;
}

void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out,
             std::vector<std::size_t>& cur, std::size_t from) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = from; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, out, cur, i + 1);
    cur.pop_back();
  }
}

// Invariant factors from the determinantal divisors d_k = gcd of k-minors.
std::vector<mpz_class> invariant_factors(const Dense& a, std::size_t cols) {
  std::vector<mpz_class> out;
  mpz_class prev = 1;
  for (std::size_t k = 1; k <= std::min(a.size(), cols); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(a.size(), k, rs, cur, 0);
    subsets(cols, k, cs, cur, 0);
    mpz_class g = 0;
    for (const auto& r : rs) {
      for (const auto& c : cs) {
        Dense m(k, std::vector<mpz_class>(k));
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) m[i][j] = a[r[i]][c[j]];
        }
        mpz_class det = determinant(m);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), det.get_mpz_t());
      }
    }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

Dense random_dense(std::mt19937& rng, std::size_t rows, std::size_t cols, int spread) {
  std::uniform_int_distribution<int> dist(-spread, spread);
  Dense d(rows, std::vector<mpz_class>(cols));
  for (auto& row : d) {
    for (auto& v : row) v = dist(rng);
  }
  return d;
}

// A random product of elementary row operations and sign flips.
Dense random_unimodular(std::mt19937& rng, std::size_t n) {
  Dense u(n, std::vector<mpz_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> mult(-3, 3);
  for (int step = 0; step < 12; ++step) {
    const std::size_t i = pick(rng), j = pick(rng);
    if (i == j) {
      for (auto& v : u[i]) v = -v;
      continue;
    }
    const int m = mult(rng);
    for (std::size_t c = 0; c < n; ++c) u[i][c] += m * u[j][c];
  }
  return u;
}

TEST(SmithNormalForm, Examples) {
  const auto m = SparseIntMatrix::from_dense({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  const SmithForm s = smith_normal_form(m);
  EXPECT_EQ(s.rank, 3u);
  EXPECT_EQ(s.diagonal, (std::vector<mpz_class>{2, 6, 12}));
  const SmithForm z = smith_normal_form(SparseIntMatrix(3, 2));
  EXPECT_EQ(z.rank, 0u);
  const SmithForm r1 = smith_normal_form(SparseIntMatrix::from_dense({{3, 6}, {2, 4}}));
  EXPECT_EQ(r1.diagonal, (std::vector<mpz_class>{1}));
}

TEST(SmithNormalForm, MatchesDeterminantalDivisors) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
    Dense d = random_dense(rng, rows, cols, trial % 3 == 0 ? 1 : 6);
    // Make some matrices rank deficient.
    if (trial % 5 == 0 && rows > 1) d[rows - 1] = d[0];
    const SmithForm s = smith_normal_form(from_dense(d, cols));
    const auto expected = invariant_factors(d, cols);
    EXPECT_EQ(s.diagonal, expected);
    EXPECT_EQ(s.rank, expected.size());
    for (std::size_t i = 1; i < s.diagonal.size(); ++i) {
      EXPECT_EQ(s.diagonal[i] % s.diagonal[i - 1], 0);
    }
  }
}

TEST(SmithNormalForm, UnimodularInvariance) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
    const SparseIntMatrix a = from_dense(random_dense(rng, rows, cols, 4), cols);
    const SparseIntMatrix u = from_dense(random_unimodular(rng, rows), rows);
    const SparseIntMatrix v = from_dense(random_unimodular(rng, cols), cols);
    const SmithForm before = smith_normal_form(a);
    const SmithForm after = smith_normal_form(u * a * v);
    EXPECT_EQ(before.diagonal, after.diagonal);
    EXPECT_EQ(before.rank, after.rank);
  }
}

TEST(BoundaryMatrix, SignsOfTriangle) {
  const auto tri = complex_of(3, {{0, 1, 2}});
  const Dense d = to_dense(boundary_matrix(tri, 2));
  // Edges in order 01, 02, 12: ∂[012] = [12] - [02] + [01].
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0][0], 1);
  EXPECT_EQ(d[1][0], -1);
  EXPECT_EQ(d[2][0], 1);
}

TEST(BoundaryMatrix, SquaresToZeroOnRandomComplexes) {
  std::mt19937 rng(13);
  int chains = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng() % 3 != 0) edges.emplace_back(i, j);
      }
    }
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    const auto l = flag_complex(DefiningGraph(names, edges));
    for (int dim = 2; dim <= l.dimension(); ++dim) {
      const SparseIntMatrix outer = boundary_matrix(l, dim - 1);
      const SparseIntMatrix inner = boundary_matrix(l, dim);
      EXPECT_TRUE((outer * inner).is_zero());
      // And on explicit random chains.
      for (int c = 0; c < 10; ++c, ++chains) {
        SparseIntMatrix chain(inner.cols(), 1);
        for (std::size_t i = 0; i < inner.cols(); ++i) {
          chain.set(i, 0, static_cast<long>(rng() % 7) - 3);
        }
        EXPECT_TRUE((outer * (inner * chain)).is_zero());
      }
    }
  }
  EXPECT_GE(chains, 1000);
}

TEST(ReducedHomology, KnownSpaces) {
  const auto point = complex_of(1, {{0}});
  EXPECT_TRUE(reduced_homology(point, 0).trivial());

  const auto two_points = complex_of(2, {{0}, {1}});
  EXPECT_EQ(reduced_homology(two_points, 0).betti, 1);

  const auto circle = complex_of(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_TRUE(reduced_homology(circle, 0).trivial());
  EXPECT_EQ(reduced_homology(circle, 1).betti, 1);

  const auto sphere = complex_of(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  EXPECT_TRUE(reduced_homology(sphere, 1).trivial());
  EXPECT_EQ(reduced_homology(sphere, 2).betti, 1);

  const auto rp2 = complex_of(6, {{0, 1, 3}, {0, 1, 5}, {0, 2, 4}, {0, 2, 5}, {0, 3, 4},
                                  {1, 2, 3}, {1, 2, 4}, {1, 4, 5}, {2, 3, 5}, {3, 4, 5}});
  const auto h1 = reduced_homology(rp2, 1);
  EXPECT_EQ(h1.betti, 0);
  EXPECT_EQ(h1.torsion, (std::vector<mpz_class>{2}));
  EXPECT_TRUE(reduced_homology(rp2, 2).trivial());

  std::vector<Simplex> torus;
  for (int i = 0; i < 7; ++i) {
    Simplex a{i, (i + 1) % 7, (i + 3) % 7}, b{i, (i + 2) % 7, (i + 3) % 7};
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    torus.push_back(a);
    torus.push_back(b);
  }
  const auto t = complex_of(7, torus);
  EXPECT_EQ(reduced_homology(t, 1).betti, 2);
  EXPECT_EQ(reduced_homology(t, 2).betti, 1);
  EXPECT_TRUE(reduced_homology(t, 1).torsion.empty());
}

TEST(ReducedHomology, EulerCharacteristic) {
  std::mt19937 rng(14);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng() % 2) edges.emplace_back(i, j);
      }
    }
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    const auto l = flag_complex(DefiningGraph(names, edges));
    long chi = 0, alternating = 0;
    for (int d = 0; d <= l.dimension(); ++d) {
      const long count = static_cast<long>(l.simplices(d).size());
      const long betti = reduced_homology(l, d).betti;
      chi += (d % 2 == 0) ? count : -count;
      alternating += (d % 2 == 0) ? betti : -betti;
    }
    EXPECT_EQ(alternating, chi - 1);
  }
}

TEST(Divdim, CliquesAndTwoPoints) {
  EXPECT_EQ(divdim(corpus("K2")), 0);
  EXPECT_EQ(divdim(corpus("K3")), 1);
  EXPECT_EQ(divdim(corpus("K4")), 2);
  EXPECT_EQ(divdim(corpus("two_points")), -1);
}

TEST(Divdim, SignedLinkOfCliqueIsSphere) {
  for (int d = 2; d <= 4; ++d) {
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < d; ++i) {
      names.push_back("g" + std::to_string(i));
      for (int j = i + 1; j < d; ++j) edges.emplace_back(i, j);
    }
    const auto s = signed_link(flag_complex(DefiningGraph(names, edges)));
    for (int i = 0; i < d - 1; ++i) EXPECT_TRUE(reduced_homology(s, i).trivial());
    EXPECT_EQ(reduced_homology(s, d - 1).betti, 1);
  }
}

TEST(Divdim, IsAcyclicMatchesHomology) {
  const auto circle = complex_of(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_TRUE(is_k_acyclic(circle, 0));
  EXPECT_FALSE(is_k_acyclic(circle, 1));
}

}  // namespace
}  // namespace raagdiv
