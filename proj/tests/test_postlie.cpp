#include <map>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "superbider/postlie.hpp"

using namespace superbider;

namespace {

/// Direct evaluation of a∘b for each basis product B_i of the result.
struct Products {
  const AlgebraSpec& alg;
  std::vector<std::map<std::pair<GenId, GenId>, Element>> table;

  Products(const AlgebraSpec& a, const PostLieResult& r) : alg(a) {
    const SpaceComponent* part = r.symmetric.part(Parity::even);
    const ModuleSpec& mod = *r.symmetric.module;
    for (const auto& b : r.parameters) {
      std::map<std::pair<GenId, GenId>, Element> t;
      for (const auto& e : b) {
        const UnknownEntry& u = part->unknowns.entry(e.col);
        GenId out = alg.gen(mod.families()[u.out_family].name, u.out_index);
        t[{u.x, *u.y}].add(out, e.val);
      }
      table.push_back(std::move(t));
    }
  }

  Element apply(std::size_t i, GenId a, GenId b) const {
    auto it = table[i].find({a, b});
    return it == table[i].end() ? Element() : it->second;
  }
  Element apply(std::size_t i, const Element& a, GenId b) const {
    Element out;
    for (const Term& t : a.terms()) out += t.coeff * apply(i, t.gen, b);
    return out;
  }
  Element apply(std::size_t i, GenId a, const Element& b) const {
    Element out;
    for (const Term& t : b.terms()) out += t.coeff * apply(i, a, t.gen);
    return out;
  }
};

using RowKey = std::tuple<GenId, GenId, GenId, GenId>;

void check_against_oracle(const AlgebraSpec& alg, const Window& w) {
  PostLieResult r = solve_postlie(alg, w);
  Products prod(alg, r);
  const std::size_t t = r.parameters.size();

  std::map<RowKey, std::vector<Scalar>> engine;
  for (const auto& row : r.rows) {
    std::vector<Scalar> v(t);
    for (const auto& e : row.linear) v[e.col] = e.val;
    engine[{row.x, row.y, row.z, row.output}] = v;
  }

  std::map<RowKey, std::vector<Scalar>> expected;
  bool quadratic_zero = true;
  std::size_t triples = 0;
  auto gens = alg.generators(w.N);
  for (GenId x : gens) {
    for (GenId y : gens) {
      Element xy = alg.bracket_gen(x, y);
      if (max_abs_index(xy) > w.N) continue;
      for (GenId z : gens) {
        if ((y.index + z.index).abs() > w.N || (x.index + z.index).abs() > w.N) continue;
        ++triples;
        for (std::size_t i = 0; i < t; ++i) {
          Element lin = prod.apply(i, xy, z);
          for (const Term& term : lin.terms()) {
            auto& v = expected[{x, y, z, term.gen}];
            v.resize(t);
            v[i] = term.coeff;
          }
        }
        int s = koszul_sign(alg.parity(x), alg.parity(y));
        for (std::size_t i = 0; i < t && quadratic_zero; ++i) {
          for (std::size_t j = i; j < t; ++j) {
            Element q = Scalar(-1) * prod.apply(i, x, prod.apply(j, y, z)) +
                        Scalar(s) * prod.apply(i, y, prod.apply(j, x, z));
            if (i != j) {
              q += Scalar(-1) * prod.apply(j, x, prod.apply(i, y, z)) +
                   Scalar(s) * prod.apply(j, y, prod.apply(i, x, z));
            }
            if (!q.is_zero()) {
              quadratic_zero = false;
              break;
            }
          }
        }
      }
    }
  }
  CHECK(triples == r.triples_used);
  CHECK(engine.size() == expected.size());
  for (const auto& [key, v] : expected) {
    auto it = engine.find(key);
    REQUIRE(it != engine.end());
    for (std::size_t i = 0; i < t; ++i) CHECK(it->second[i] == v[i]);
  }
  CHECK(quadratic_zero == r.quadratic_vanishes);

  oracle::Matrix rows;
  for (const auto& [key, v] : expected) {
    oracle::Row row;
    for (const auto& c : v) row.push_back(c.to_mpq());
    rows.push_back(row);
  }
  if (quadratic_zero) {
    CHECK(r.status == "linear");
    CHECK(r.parameter_space.dimension() == t - oracle::rank(rows, t));
  }
}

}  // namespace

TEST_CASE("obstruction rows agree with direct evaluation") {
  SUBCASE("virasoro") { check_against_oracle(get_algebra({"virasoro", {}}), Window(4, 1, 2)); }
  SUBCASE("w0b b=0") { check_against_oracle(get_algebra({"w0b", {{"b", Scalar(0)}}}), Window(4, 1, 2)); }
  SUBCASE("w0b b=1") { check_against_oracle(get_algebra({"w0b", {{"b", Scalar(1)}}}), Window(4, 1, 2)); }
  SUBCASE("hv-super") {
    check_against_oracle(get_algebra({"hv-super", {}}), Window(HalfInt::from_twice(9), 1, 2));
  }
}

TEST_CASE("triple (L2,L1,L3) forces every shift parameter of S to vanish") {
  AlgebraSpec s = get_algebra({"hv-super", {}});
  PostLieResult r = solve_postlie(s, Window(5, 2, 2));
  REQUIRE(r.parameters.size() == 5);
  auto rows = r.rows_for(s.gen("L", 2), s.gen("L", 1), s.gen("L", 3));
  REQUIRE_FALSE(rows.empty());
  std::vector<SparseVec> vecs;
  for (const auto* row : rows) {
    CHECK(s.family(row->output).name == "H");
    vecs.push_back(row->linear);
  }
  SolutionSpace span = SolutionSpace::span_of(5, vecs);
  for (uint32_t i = 0; i < 5; ++i) CHECK(contains(span, make_sparse({{i, Scalar(1)}})));
  CHECK(r.status == "linear");
  CHECK(r.quadratic_vanishes);
  CHECK(r.dimension() == 0);
}

TEST_CASE("w0b at b=1 carries the central product I_0∘I_0 = C") {
  AlgebraSpec w = get_algebra({"w0b", {{"b", Scalar(1)}}});
  PostLieResult r = solve_postlie(w, Window(4, 1, 2));
  CHECK(r.status == "linear");
  CHECK(r.dimension() == 1);
  PostLieResult r0 = solve_postlie(get_algebra({"w0b", {{"b", Scalar(0)}}}), Window(4, 1, 2));
  CHECK(r0.dimension() == 0);
}

TEST_CASE("an abelian algebra leaves a nonlinear obstruction") {
  std::vector<Family> fams = {{"A", Lattice::integer, Parity::even, false}};
  AlgebraSpec ab("abelian", {}, fams, [](GenId, GenId) { return Element(); });
  PostLieResult r = solve_postlie(ab, Window(2, 1, 1));
  CHECK(r.rows.empty());
  CHECK_FALSE(r.quadratic_vanishes);
  CHECK(r.status == "nonlinear");
  CHECK_FALSE(r.quadratic_witness.empty());
}

TEST_CASE("serial and parallel post-Lie runs agree") {
  AlgebraSpec s = get_algebra({"svir-ramond", {}});
  PostLieResult a = solve_postlie(s, Window(3, 1, 2), Exec::serial);
  PostLieResult b = solve_postlie(s, Window(3, 1, 2), Exec::parallel);
  CHECK(a.parameter_space == b.parameter_space);
  CHECK(a.rows.size() == b.rows.size());
  CHECK(a.structures == b.structures);
}
