#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "raagdiv/graph.hpp"

namespace raagdiv {

/// Sparse integer matrix; zero entries are never stored.
class SparseIntMatrix {
 public:
  SparseIntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::map<std::pair<std::size_t, std::size_t>, mpz_class>& entries() const {
    return entries_;
  }
  mpz_class at(std::size_t r, std::size_t c) const;
  /// Setting zero erases the entry.
  void set(std::size_t r, std::size_t c, const mpz_class& v);
  void add(std::size_t r, std::size_t c, const mpz_class& v);

  SparseIntMatrix operator*(const SparseIntMatrix& rhs) const;
  bool is_zero() const { return entries_.empty(); }

  static SparseIntMatrix from_dense(const std::vector<std::vector<long>>& rows);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::map<std::pair<std::size_t, std::size_t>, mpz_class> entries_;
};

struct SmithForm {
  std::vector<mpz_class> diagonal;  // nonzero invariant factors d1 | d2 | ...
  std::size_t rank = 0;
};

/// Boundary operator from dim-simplices to (dim-1)-simplices, both in
/// lexicographic order. Omitting the i-th sorted vertex carries (-1)^i.
SparseIntMatrix boundary_matrix(const SimplicialComplex& k, int dim);

SmithForm smith_normal_form(const SparseIntMatrix& m);

struct HomologyResult {
  long betti = 0;
  std::vector<mpz_class> torsion;  // invariant factors > 1
  bool trivial() const { return betti == 0 && torsion.empty(); }
};

/// Reduced integral homology in the given dimension.
HomologyResult reduced_homology(const SimplicialComplex& k, int dim);

bool is_k_acyclic(const SimplicialComplex& k, int upto);

/// Largest k <= dim S(L) with S(L) k-acyclic, or -1.
int divdim(const DefiningGraph& g);

}  // namespace raagdiv
