#include "raagdiv/homology.hpp"

#include <algorithm>
#include <stdexcept>

namespace raagdiv {

namespace {

int cmpabs(const mpz_class& a, const mpz_class& b) {
  return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
}

}  // namespace

mpz_class SparseIntMatrix::at(std::size_t r, std::size_t c) const {
  auto it = entries_.find({r, c});
  return it == entries_.end() ? mpz_class(0) : it->second;
}

void SparseIntMatrix::set(std::size_t r, std::size_t c, const mpz_class& v) {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index");
  if (v == 0) {
    entries_.erase({r, c});
  } else {
    entries_[{r, c}] = v;
  }
}

void SparseIntMatrix::add(std::size_t r, std::size_t c, const mpz_class& v) {
  set(r, c, at(r, c) + v);
}

SparseIntMatrix SparseIntMatrix::operator*(const SparseIntMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("dimension mismatch");
  SparseIntMatrix out(rows_, rhs.cols_);
  std::map<std::size_t, std::vector<std::pair<std::size_t, mpz_class>>> by_row;
  for (const auto& [rc, v] : rhs.entries_) by_row[rc.first].emplace_back(rc.second, v);
  for (const auto& [rc, v] : entries_) {
    auto it = by_row.find(rc.second);
    if (it == by_row.end()) continue;
    for (const auto& [c, w] : it->second) out.add(rc.first, c, v * w);
  }
  return out;
}

SparseIntMatrix SparseIntMatrix::from_dense(
    const std::vector<std::vector<long>>& rows) {
  SparseIntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

SparseIntMatrix boundary_matrix(const SimplicialComplex& k, int dim) {
  if (dim < 1) throw std::invalid_argument("boundary_matrix: dim must be >= 1");
  const auto cols = k.simplices(dim);
  const auto rows = k.simplices(dim - 1);
  std::map<Simplex, std::size_t> row_index;
  for (std::size_t i = 0; i < rows.size(); ++i) row_index[rows[i]] = i;
  SparseIntMatrix m(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t drop = 0; drop < cols[c].size(); ++drop) {
      Simplex face;
      for (std::size_t i = 0; i < cols[c].size(); ++i) {
        if (i != drop) face.push_back(cols[c][i]);
      }
      m.set(row_index.at(face), c, drop % 2 == 0 ? 1 : -1);
    }
  }
  return m;
}

SmithForm smith_normal_form(const SparseIntMatrix& m) {
  const std::size_t nr = m.rows();
  const std::size_t nc = m.cols();
  std::vector<std::vector<mpz_class>> a(nr, std::vector<mpz_class>(nc));
  for (const auto& [rc, v] : m.entries()) a[rc.first][rc.second] = v;

  SmithForm out;
  const std::size_t steps = std::min(nr, nc);
  for (std::size_t t = 0; t < steps; ++t) {
    // Smallest-magnitude pivot in the trailing block.
    std::size_t pr = nr, pc = nc;
    for (std::size_t i = t; i < nr; ++i) {
      for (std::size_t j = t; j < nc; ++j) {
        if (a[i][j] != 0 &&
            (pr == nr || cmpabs(a[i][j], a[pr][pc]) < 0)) {
          pr = i;
          pc = j;
        }
      }
    }
    if (pr == nr) break;
    std::swap(a[t], a[pr]);
    for (auto& row : a) std::swap(row[t], row[pc]);

    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < nr; ++i) {
        if (a[i][t] == 0) continue;
        mpz_class q = a[i][t] / a[t][t];
        if (q != 0) {
          for (std::size_t j = t; j < nc; ++j) {
            if (a[t][j] != 0) a[i][j] -= q * a[t][j];
          }
        }
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < nc; ++j) {
        if (a[t][j] == 0) continue;
        mpz_class q = a[t][j] / a[t][t];
        if (q != 0) {
          for (std::size_t i = t; i < nr; ++i) {
            if (a[i][t] != 0) a[i][j] -= q * a[i][t];
          }
        }
        if (a[t][j] != 0) clean = false;
      }
      if (clean) break;
      // A remainder is now smaller than the pivot; bring it in.
      std::size_t br = t, bc = t;
      for (std::size_t i = t + 1; i < nr; ++i) {
        if (a[i][t] != 0 && cmpabs(a[i][t], a[br][bc]) < 0) {
          br = i;
          bc = t;
        }
      }
      for (std::size_t j = t + 1; j < nc; ++j) {
        if (a[t][j] != 0 && cmpabs(a[t][j], a[br][bc]) < 0) {
          br = t;
          bc = j;
        }
      }
      std::swap(a[t], a[br]);
      for (auto& row : a) std::swap(row[t], row[bc]);
    }
    out.diagonal.push_back(abs(a[t][t]));
  }
  auto& d = out.diagonal;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      mpz_class g = gcd(d[i], d[j]);
      mpz_class l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  }
  out.rank = d.size();
  return out;
}

HomologyResult reduced_homology(const SimplicialComplex& k, int dim) {
  if (dim < 0) throw std::invalid_argument("reduced_homology: dim < 0");
  const long n_dim = static_cast<long>(k.simplices(dim).size());
  long rank_out = 0;
  if (dim == 0) {
    rank_out = n_dim > 0 ? 1 : 0;  // augmentation onto Z
  } else {
    rank_out = static_cast<long>(smith_normal_form(boundary_matrix(k, dim)).rank);
  }
  HomologyResult res;
  const SmithForm in = smith_normal_form(boundary_matrix(k, dim + 1));
  res.betti = n_dim - rank_out - static_cast<long>(in.rank);
  for (const auto& d : in.diagonal) {
    if (d > 1) res.torsion.push_back(d);
  }
  return res;
}

bool is_k_acyclic(const SimplicialComplex& k, int upto) {
  for (int i = 0; i <= upto; ++i) {
    if (!reduced_homology(k, i).trivial()) return false;
  }
  return true;
}

int divdim(const DefiningGraph& g) {
  const SimplicialComplex s = signed_link(flag_complex(g));
  int best = -1;
  for (int i = 0; i <= s.dimension(); ++i) {
    if (!reduced_homology(s, i).trivial()) break;
    best = i;
  }
  return best;
}

}  // namespace raagdiv
