#include <random>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "superbider/linear_solver.hpp"

using namespace superbider;

namespace {

struct RandomSystem {
  SparseMatrix sparse;
  oracle::Matrix dense;
};

RandomSystem random_system(std::mt19937& rng, uint32_t rows, uint32_t cols, double density) {
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<int> val(-6, 6);
  RandomSystem s{SparseMatrix(cols), {}};
  for (uint32_t r = 0; r < rows; ++r) {
    std::vector<Entry> entries;
    oracle::Row row(cols, 0);
    for (uint32_t c = 0; c < cols; ++c) {
      if (!keep(rng)) continue;
      int v = val(rng);
      if (v == 0) continue;
      entries.push_back({c, Scalar(v, 1 + (c % 2))});
      row[c] = mpq_class(v, 1 + (c % 2));
    }
    // Some rows are combinations of earlier ones so the rank drops.
    if (r > 2 && r % 4 == 0) {
      entries.clear();
      for (uint32_t c = 0; c < cols; ++c) {
        row[c] = s.dense[r - 1][c] * 3 - s.dense[r - 2][c];
        if (row[c] != 0) entries.push_back({c, Scalar(row[c])});
      }
    }
    s.sparse.add_row(entries);
    s.dense.push_back(row);
  }
  return s;
}

oracle::Matrix to_dense(const SolutionSpace& s) {
  oracle::Matrix m;
  for (const auto& v : s.basis()) {
    oracle::Row row(s.ncols(), 0);
    for (const auto& e : v) row[e.col] = e.val.to_mpq();
    m.push_back(row);
  }
  return m;
}

bool is_rref(const SolutionSpace& s) {
  std::vector<uint32_t> leads;
  for (const auto& v : s.basis()) {
    if (v.empty() || !v.front().val.is_one()) return false;
    leads.push_back(v.front().col);
  }
  for (std::size_t i = 0; i < leads.size(); ++i) {
    for (std::size_t j = 0; j < s.basis().size(); ++j) {
      if (i != j && !value_at(s.basis()[j], leads[i]).is_zero()) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("nullspace matches dense elimination on random matrices") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    uint32_t rows = 1 + rng() % 60;
    uint32_t cols = 1 + rng() % 80;
    double density = 0.03 + 0.3 * (trial % 5) / 4.0;
    auto sys = random_system(rng, rows, cols, density);
    CAPTURE(rows);
    CAPTURE(cols);
    SolutionSpace ns = nullspace(sys.sparse);
    std::size_t r = oracle::rank(sys.dense, cols);
    CHECK(rank(sys.sparse) == r);
    CHECK(ns.dimension() + r == cols);
    CHECK(oracle::same_span(to_dense(ns), oracle::nullspace(sys.dense, cols), cols));
    CHECK(is_rref(ns));
    for (const auto& v : ns.basis()) CHECK(superbider::apply(sys.sparse, v).empty());
  }
}

TEST_CASE("pivot strategies agree and the basis is canonical") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto sys = random_system(rng, 25, 40, 0.12);
    CHECK(nullspace(sys.sparse, PivotStrategy::markowitz) == nullspace(sys.sparse, PivotStrategy::leftmost));
  }
}

TEST_CASE("row operations do not change the nullspace") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto sys = random_system(rng, 20, 30, 0.2);
    SparseMatrix shuffled(30);
    auto rows = sys.sparse.rows();
    std::shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      SparseVec r = rows[i];
      for (auto& e : r) e.val *= Scalar(static_cast<int64_t>(i) + 2, 3);
      if (i > 0) axpy(r, Scalar(-5, 7), rows[i - 1]);
      shuffled.add_sorted_row(r);
    }
    CHECK(nullspace(shuffled) == nullspace(sys.sparse));
  }
}

TEST_CASE("deduplicate keeps the row space") {
  SparseMatrix m(3);
  m.add_row({{0, Scalar(2)}, {2, Scalar(4)}});
  m.add_row({{0, Scalar(-1)}, {2, Scalar(-2)}});
  m.add_row({{1, Scalar(1)}});
  m.add_row({{1, Scalar(3, 5)}});
  SolutionSpace before = nullspace(m);
  m.deduplicate();
  CHECK(m.nrows() == 2);
  CHECK(nullspace(m) == before);
}

TEST_CASE("serial and parallel block solves agree") {
  std::mt19937 rng(77);
  std::vector<SparseMatrix> blocks;
  for (int i = 0; i < 12; ++i) blocks.push_back(random_system(rng, 15 + i, 20 + i, 0.15).sparse);
  auto serial = nullspace_blocks(blocks, Exec::serial);
  int saved = solver_threads();
  for (int threads : {1, 2, 4}) {
    set_solver_threads(threads);
    auto parallel = nullspace_blocks(blocks, Exec::parallel);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(parallel[i] == serial[i]);
  }
  set_solver_threads(saved);
  for (std::size_t i = 0; i < blocks.size(); ++i) CHECK(serial[i] == nullspace(blocks[i]));
}

TEST_CASE("membership, projection and sums") {
  SolutionSpace s = SolutionSpace::span_of(4, {make_sparse({{0, Scalar(1)}, {1, Scalar(2)}}),
                                               make_sparse({{2, Scalar(1)}, {3, Scalar(-1)}})});
  CHECK(s.dimension() == 2);
  CHECK(contains(s, make_sparse({{0, Scalar(2)}, {1, Scalar(4)}, {2, Scalar(1)}, {3, Scalar(-1)}})));
  CHECK_FALSE(contains(s, make_sparse({{0, Scalar(1)}})));
  CHECK(contains(s, std::vector<Scalar>{Scalar(0), Scalar(0), Scalar(3), Scalar(-3)}));
  CHECK_THROWS_AS(contains(s, make_sparse({{7, Scalar(1)}})), std::invalid_argument);
  CHECK_THROWS_AS(contains(s, std::vector<Scalar>{Scalar(1)}), std::invalid_argument);

  std::vector<uint32_t> cols = {0, 2};
  SolutionSpace p = project(s, cols);
  CHECK(p.dimension() == 2);
  CHECK(contains(p, make_sparse({{0, Scalar(5)}})));
  CHECK_FALSE(contains(p, make_sparse({{1, Scalar(1)}})));

  SolutionSpace t = SolutionSpace::span_of(4, {make_sparse({{0, Scalar(1)}})});
  SolutionSpace u = sum(s, t);
  CHECK(u.dimension() == 3);
  CHECK(contains(u, s));
  CHECK(contains(u, t));
  CHECK_FALSE(contains(s, u));
  CHECK(sum(s, s) == s);
}

TEST_CASE("from_dense and apply") {
  auto a = SparseMatrix::from_dense({{Scalar(1), Scalar(-1), Scalar(0)}, {Scalar(0), Scalar(2), Scalar(-2)}});
  auto ns = nullspace(a);
  REQUIRE(ns.dimension() == 1);
  CHECK(ns.basis()[0].size() == 3);
  CHECK(superbider::apply(a, ns.basis()[0]).empty());
  SparseVec img = superbider::apply(a, make_sparse({{0, Scalar(1)}}));
  REQUIRE(img.size() == 1);
  CHECK(img[0].col == 0);
  CHECK(img[0].val == Scalar(1));
}
