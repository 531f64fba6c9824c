#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "superbider/scalar.hpp"

namespace superbider {

struct Entry {
  uint32_t col;
  Scalar val;
};

/// Sparse vector: entries sorted by column, no explicit zeros.
using SparseVec = std::vector<Entry>;

/// Builds a SparseVec from unsorted (col, value) pairs, merging duplicates.
SparseVec make_sparse(std::vector<Entry> entries);
Scalar value_at(const SparseVec& v, uint32_t col);
/// dst += factor * src
void axpy(SparseVec& dst, const Scalar& factor, const SparseVec& src);

class SparseMatrix {
 public:
  explicit SparseMatrix(uint32_t ncols = 0) : ncols_(ncols) {}
  static SparseMatrix from_dense(const std::vector<std::vector<Scalar>>& rows);

  /// Appends a row; entries are merged and zero entries dropped.
  void add_row(std::vector<Entry> entries);
  void add_sorted_row(SparseVec row);
  const std::vector<SparseVec>& rows() const { return rows_; }
  uint32_t ncols() const { return ncols_; }
  std::size_t nrows() const { return rows_.size(); }
  std::size_t nnz() const;
  /// Scales every row to leading coefficient 1 and drops repeated rows.
  void deduplicate();

 private:
  uint32_t ncols_;
  std::vector<SparseVec> rows_;
};

/// A subspace of Q^ncols kept in reduced row echelon form: each basis vector
/// has leading entry 1, and no other basis vector is nonzero at that column.
/// The basis is therefore determined by the span alone.
class SolutionSpace {
 public:
  explicit SolutionSpace(uint32_t ncols = 0) : ncols_(ncols) {}
  static SolutionSpace span_of(uint32_t ncols, std::vector<SparseVec> vectors);

  uint32_t ncols() const { return ncols_; }
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<SparseVec>& basis() const { return basis_; }

  friend bool operator==(const SolutionSpace& a, const SolutionSpace& b);

 private:
  uint32_t ncols_;
  std::vector<SparseVec> basis_;
};

enum class PivotStrategy {
  markowitz,  // shortest row first, sparsest column within it
  leftmost,   // plain row echelon in natural column order
};

SolutionSpace nullspace(const SparseMatrix& a, PivotStrategy strategy = PivotStrategy::markowitz);
std::size_t rank(const SparseMatrix& a);

/// Nullspaces of independent blocks. The parallel path distributes blocks
/// over OpenMP threads; the serial path is the reference.
enum class Exec { serial, parallel };
std::vector<SolutionSpace> nullspace_blocks(std::span<const SparseMatrix> blocks, Exec exec,
                                            PivotStrategy strategy = PivotStrategy::markowitz);

/// Membership in the span. Throws std::invalid_argument if v refers to a
/// column outside the space or has the wrong length.
bool contains(const SolutionSpace& s, const SparseVec& v);
bool contains(const SolutionSpace& s, const std::vector<Scalar>& dense);
/// Every basis vector of `inner` lies in `outer`.
bool contains(const SolutionSpace& outer, const SolutionSpace& inner);

/// Image under restriction to `columns` (original column ids are kept).
SolutionSpace project(const SolutionSpace& s, std::span<const uint32_t> columns);

/// Sum of two subspaces of the same ambient space.
SolutionSpace sum(const SolutionSpace& a, const SolutionSpace& b);

/// A * v
SparseVec apply(const SparseMatrix& a, const SparseVec& v);

/// Number of threads the parallel kernels will use.
int solver_threads();
/// Caps the parallel kernels at n threads (n <= 0 restores the default).
void set_solver_threads(int n);

}  // namespace superbider
