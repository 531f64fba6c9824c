#pragma once

// Plain dense Gauss-Jordan over mpq_class, written separately from the
// sparse solver so the two can be compared.

#include <gmpxx.h>

#include <vector>

namespace oracle {

using Row = std::vector<mpq_class>;
using Matrix = std::vector<Row>;

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(Matrix& a, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < a.size(); ++c) {
    std::size_t sel = r;
    while (sel < a.size() && a[sel][c] == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[r], a[sel]);
    mpq_class inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      mpq_class f = a[i][c];
      for (std::size_t j = 0; j < ncols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Matrix a, std::size_t ncols) { return rref(a, ncols).size(); }

/// Nullspace basis, one vector per free column.
inline Matrix nullspace(Matrix a, std::size_t ncols) {
  auto pivots = rref(a, ncols);
  std::vector<int> pivot_of(ncols, -1);
  for (std::size_t i = 0; i < pivots.size(); ++i) pivot_of[pivots[i]] = static_cast<int>(i);
  Matrix basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (pivot_of[f] >= 0) continue;
    Row v(ncols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Same row space?
inline bool same_span(const Matrix& a, const Matrix& b, std::size_t ncols) {
  std::size_t ra = rank(a, ncols);
  std::size_t rb = rank(b, ncols);
  if (ra != rb) return false;
  Matrix both = a;
  both.insert(both.end(), b.begin(), b.end());
  return rank(both, ncols) == ra;
}

}  // namespace oracle
