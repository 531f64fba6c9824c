#include "superbider/linear_solver.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace superbider {
namespace {

int g_thread_cap = 0;


void scale(SparseVec& v, const Scalar& s) {
  for (auto& e : v) e.val *= s;
}

/// Reduced row echelon form of the span of `vectors`.
std::vector<SparseVec> rref(std::vector<SparseVec> vectors) {
  std::map<uint32_t, SparseVec> leads;
  for (auto& v : vectors) {
    std::sort(v.begin(), v.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    // Leftmost reduction: repeatedly clear the leading entry if it is a lead.
    while (!v.empty()) {
      auto it = leads.find(v.front().col);
      if (it == leads.end()) break;
      Scalar f = -v.front().val;
      axpy(v, f, it->second);
    }
    if (v.empty()) continue;
    Scalar inv = Scalar(1) / v.front().val;
    scale(v, inv);
    leads.emplace(v.front().col, std::move(v));
  }
  // Back-reduce from the last lead so each row is clean at all other leads.
  for (auto it = leads.rbegin(); it != leads.rend(); ++it) {
    SparseVec& row = it->second;
    std::size_t pos = 1;
    while (pos < row.size()) {
      auto other = leads.find(row[pos].col);
      if (other == leads.end() || other->first == it->first) {
        ++pos;
        continue;
      }
      Scalar f = -row[pos].val;
      axpy(row, f, other->second);
    }
  }
  std::vector<SparseVec> out;
  out.reserve(leads.size());
  for (auto& [lead, row] : leads) out.push_back(std::move(row));
  return out;
}

struct Pivot {
  uint32_t col;
  SparseVec row;  // coefficient 1 at col
};

/// Markowitz-style sparse elimination. Returns pivot rows in elimination
/// order; each row contains its pivot plus free columns and pivots chosen
/// later, never pivots chosen earlier.
std::vector<Pivot> eliminate_markowitz(const SparseMatrix& a) {
  std::vector<SparseVec> rows = a.rows();
  const std::size_t nrows = rows.size();
  std::vector<std::vector<uint32_t>> col_rows(a.ncols());
  for (uint32_t r = 0; r < nrows; ++r) {
    for (const auto& e : rows[r]) col_rows[e.col].push_back(r);
  }
  std::vector<char> active(nrows, 1);
  using Item = std::pair<std::size_t, uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (uint32_t r = 0; r < nrows; ++r) queue.emplace(rows[r].size(), r);

  std::vector<Pivot> pivots;
  std::vector<uint32_t> seen(nrows, UINT32_MAX);
  while (!queue.empty()) {
    auto [len, r] = queue.top();
    queue.pop();
    if (!active[r] || rows[r].size() != len) continue;
    if (len == 0) {
      active[r] = 0;
      continue;
    }
    // Sparsest column of the shortest row; ties go to the smaller column.
    uint32_t pc = rows[r].front().col;
    std::size_t best = SIZE_MAX;
    for (const auto& e : rows[r]) {
      std::size_t c = col_rows[e.col].size();
      if (c < best) {
        best = c;
        pc = e.col;
      }
    }
    SparseVec prow = std::move(rows[r]);
    rows[r].clear();
    active[r] = 0;
    Scalar inv = Scalar(1) / value_at(prow, pc);
    scale(prow, inv);

    std::vector<uint32_t> targets;
    targets.swap(col_rows[pc]);
    for (uint32_t r2 : targets) {
      if (r2 == r || !active[r2] || seen[r2] == pc) continue;
      seen[r2] = pc;
      Scalar f = value_at(rows[r2], pc);
      if (f.is_zero()) continue;
      axpy(rows[r2], -f, prow);
      // Register fill-in columns.
      for (const auto& e : rows[r2]) {
        if (e.col == pc) continue;
        auto& list = col_rows[e.col];
        if (list.empty() || list.back() != r2) list.push_back(r2);
      }
      queue.emplace(rows[r2].size(), r2);
    }
    pivots.push_back(Pivot{pc, std::move(prow)});
  }
  return pivots;
}

/// Plain elimination in natural column order.
std::vector<Pivot> eliminate_leftmost(const SparseMatrix& a) {
  std::vector<Pivot> pivots;
  for (auto& row : rref(a.rows())) {
    uint32_t c = row.front().col;
    pivots.push_back(Pivot{c, std::move(row)});
  }
  // rref rows only touch free columns besides their pivot, so any order works
  // for back substitution.
  return pivots;
}

SolutionSpace nullspace_from_pivots(uint32_t ncols, const std::vector<Pivot>& pivots) {
  std::vector<char> is_pivot(ncols, 0);
  for (const auto& p : pivots) is_pivot[p.col] = 1;

  // Express each pivot variable in the free variables, last pivot first.
  std::unordered_map<uint32_t, SparseVec> expr;
  expr.reserve(pivots.size() * 2);
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    SparseVec e;
    for (const auto& ent : it->row) {
      if (ent.col == it->col) continue;
      if (!is_pivot[ent.col]) {
        axpy(e, -ent.val, SparseVec{Entry{ent.col, Scalar(1)}});
      } else {
        auto found = expr.find(ent.col);
        if (found == expr.end()) throw std::logic_error("nullspace: pivot order violated");
        axpy(e, -ent.val, found->second);
      }
    }
    expr.emplace(it->col, std::move(e));
  }

  std::unordered_map<uint32_t, std::vector<Entry>> by_free;
  for (const auto& [p, e] : expr) {
    for (const auto& ent : e) by_free[ent.col].push_back(Entry{p, ent.val});
  }
  std::vector<SparseVec> vectors;
  for (uint32_t c = 0; c < ncols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<Entry> v;
    v.push_back(Entry{c, Scalar(1)});
    if (auto found = by_free.find(c); found != by_free.end()) {
      for (auto& ent : found->second) v.push_back(ent);
    }
    vectors.push_back(make_sparse(std::move(v)));
  }
  return SolutionSpace::span_of(ncols, std::move(vectors));
}

}  // namespace

SparseVec make_sparse(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
  SparseVec out;
  out.reserve(entries.size());
  for (auto& e : entries) {
    if (!out.empty() && out.back().col == e.col) {
      out.back().val += e.val;
      if (out.back().val.is_zero()) out.pop_back();
    } else if (!e.val.is_zero()) {
      out.push_back(std::move(e));
    }
  }
  return out;
}

Scalar value_at(const SparseVec& v, uint32_t col) {
  auto it = std::lower_bound(v.begin(), v.end(), col, [](const Entry& e, uint32_t c) { return e.col < c; });
  if (it != v.end() && it->col == col) return it->val;
  return Scalar();
}

void axpy(SparseVec& dst, const Scalar& factor, const SparseVec& src) {
  if (factor.is_zero() || src.empty()) return;
  SparseVec out;
  out.reserve(dst.size() + src.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < dst.size() || j < src.size()) {
    if (j == src.size() || (i < dst.size() && dst[i].col < src[j].col)) {
      out.push_back(std::move(dst[i++]));
    } else if (i == dst.size() || src[j].col < dst[i].col) {
      out.push_back(Entry{src[j].col, factor * src[j].val});
      ++j;
    } else {
      Scalar v = dst[i].val + factor * src[j].val;
      if (!v.is_zero()) out.push_back(Entry{dst[i].col, std::move(v)});
      ++i;
      ++j;
    }
  }
  dst.swap(out);
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Scalar>>& rows) {
  SparseMatrix m(rows.empty() ? 0 : static_cast<uint32_t>(rows.front().size()));
  for (const auto& r : rows) {
    std::vector<Entry> e;
    for (uint32_t c = 0; c < r.size(); ++c) e.push_back(Entry{c, r[c]});
    m.add_row(std::move(e));
  }
  return m;
}

void SparseMatrix::add_row(std::vector<Entry> entries) { add_sorted_row(make_sparse(std::move(entries))); }

void SparseMatrix::add_sorted_row(SparseVec row) {
  for (const auto& e : row) {
    if (e.col >= ncols_) throw std::out_of_range("sparse row entry beyond ncols");
  }
  rows_.push_back(std::move(row));
}

void SparseMatrix::deduplicate() {
  auto hash_row = [](const SparseVec& r) {
    std::size_t h = r.size();
    for (const auto& e : r) {
      std::size_t v = e.val.fits_small()
                          ? std::hash<int64_t>()(e.val.small_num()) * 31 + std::hash<int64_t>()(e.val.small_den())
                          : std::hash<std::string>()(e.val.str());
      h = (h * 1000003) ^ (e.col + 0x9e3779b97f4a7c15ULL + (v << 6) + (v >> 2));
    }
    return h;
  };
  std::unordered_map<std::size_t, std::vector<uint32_t>> seen;
  std::vector<SparseVec> kept;
  kept.reserve(rows_.size());
  for (auto& r : rows_) {
    if (r.empty()) continue;
    if (!r.front().val.is_one()) scale(r, Scalar(1) / r.front().val);
    auto& bucket = seen[hash_row(r)];
    bool dup = false;
    for (uint32_t i : bucket) {
      const SparseVec& o = kept[i];
      if (o.size() == r.size() && std::equal(o.begin(), o.end(), r.begin(), [](const Entry& x, const Entry& y) {
            return x.col == y.col && x.val == y.val;
          })) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    bucket.push_back(static_cast<uint32_t>(kept.size()));
    kept.push_back(std::move(r));
  }
  rows_.swap(kept);
}

std::size_t SparseMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

SolutionSpace SolutionSpace::span_of(uint32_t ncols, std::vector<SparseVec> vectors) {
  SolutionSpace s(ncols);
  for (const auto& v : vectors) {
    for (const auto& e : v) {
      if (e.col >= ncols) throw std::invalid_argument("vector entry outside the ambient space");
    }
  }
  s.basis_ = rref(std::move(vectors));
  return s;
}

bool operator==(const SolutionSpace& a, const SolutionSpace& b) {
  if (a.ncols_ != b.ncols_ || a.basis_.size() != b.basis_.size()) return false;
  for (std::size_t i = 0; i < a.basis_.size(); ++i) {
    const auto& x = a.basis_[i];
    const auto& y = b.basis_[i];
    if (x.size() != y.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j].col != y[j].col || x[j].val != y[j].val) return false;
    }
  }
  return true;
}

SolutionSpace nullspace(const SparseMatrix& a, PivotStrategy strategy) {
  auto pivots = strategy == PivotStrategy::markowitz ? eliminate_markowitz(a) : eliminate_leftmost(a);
  return nullspace_from_pivots(a.ncols(), pivots);
}

std::size_t rank(const SparseMatrix& a) { return eliminate_markowitz(a).size(); }

std::vector<SolutionSpace> nullspace_blocks(std::span<const SparseMatrix> blocks, Exec exec,
                                            PivotStrategy strategy) {
  std::vector<SolutionSpace> out(blocks.size());
  const auto n = static_cast<std::ptrdiff_t>(blocks.size());
  if (exec == Exec::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = nullspace(blocks[i], strategy);
    return out;
  }
#pragma omp parallel for schedule(dynamic, 1) num_threads(solver_threads())
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = nullspace(blocks[i], strategy);
  return out;
}

bool contains(const SolutionSpace& s, const SparseVec& v) {
  for (const auto& e : v) {
    if (e.col >= s.ncols()) throw std::invalid_argument("contains: vector longer than the space");
  }
  SparseVec r = make_sparse(std::vector<Entry>(v.begin(), v.end()));
  for (const auto& b : s.basis()) {
    Scalar c = value_at(r, b.front().col);
    if (!c.is_zero()) axpy(r, -c, b);
  }
  return r.empty();
}

bool contains(const SolutionSpace& s, const std::vector<Scalar>& dense) {
  if (dense.size() != s.ncols()) {
    throw std::invalid_argument("contains: dimension mismatch (" + std::to_string(dense.size()) +
                                " vs " + std::to_string(s.ncols()) + ")");
  }
  std::vector<Entry> e;
  for (uint32_t c = 0; c < dense.size(); ++c) e.push_back(Entry{c, dense[c]});
  return contains(s, make_sparse(std::move(e)));
}

bool contains(const SolutionSpace& outer, const SolutionSpace& inner) {
  if (outer.ncols() != inner.ncols()) throw std::invalid_argument("contains: ambient spaces differ");
  return std::all_of(inner.basis().begin(), inner.basis().end(),
                     [&](const SparseVec& v) { return contains(outer, v); });
}

SolutionSpace project(const SolutionSpace& s, std::span<const uint32_t> columns) {
  std::vector<char> keep(s.ncols(), 0);
  for (uint32_t c : columns) {
    if (c >= s.ncols()) throw std::invalid_argument("project: column outside the space");
    keep[c] = 1;
  }
  std::vector<SparseVec> vectors;
  for (const auto& b : s.basis()) {
    SparseVec v;
    for (const auto& e : b) {
      if (keep[e.col]) v.push_back(e);
    }
    if (!v.empty()) vectors.push_back(std::move(v));
  }
  return SolutionSpace::span_of(s.ncols(), std::move(vectors));
}

SolutionSpace sum(const SolutionSpace& a, const SolutionSpace& b) {
  if (a.ncols() != b.ncols()) throw std::invalid_argument("sum: ambient spaces differ");
  std::vector<SparseVec> v = a.basis();
  v.insert(v.end(), b.basis().begin(), b.basis().end());
  return SolutionSpace::span_of(a.ncols(), std::move(v));
}

SparseVec apply(const SparseMatrix& a, const SparseVec& v) {
  std::vector<Entry> out;
  for (uint32_t r = 0; r < a.nrows(); ++r) {
    const auto& row = a.rows()[r];
    Scalar acc;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < row.size() && j < v.size()) {
      if (row[i].col < v[j].col) {
        ++i;
      } else if (v[j].col < row[i].col) {
        ++j;
      } else {
        acc += row[i].val * v[j].val;
        ++i;
        ++j;
      }
    }
    if (!acc.is_zero()) out.push_back(Entry{r, acc});
  }
  return out;
}

int solver_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
  return g_thread_cap > 0 ? std::min(n, g_thread_cap) : n;
#else
  return 1;
#endif
}

void set_solver_threads(int n) { g_thread_cap = n > 0 ? n : 0; }

}  // namespace superbider
