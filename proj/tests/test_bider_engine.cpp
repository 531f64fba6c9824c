#include <map>
#include <set>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "superbider/bider_engine.hpp"

using namespace superbider;

namespace {

ModuleSpec density(Scalar b) { return get_module({"density-F", {{"b", b}}}, {"virasoro", {}}); }

std::string key_of(const ModuleSpec& mod, const UnknownEntry& e) {
  const AlgebraSpec& alg = mod.algebra();
  std::string s = alg.name_of(e.x) + "|";
  if (e.y) s += alg.name_of(*e.y);
  return s + "|" + mod.families()[e.out_family].name + "|" + e.k.str();
}

/// Interior basis of one parity as maps keyed by unknown description.
std::vector<std::map<std::string, mpq_class>> keyed_interior(const BiderSpace& s, Parity p) {
  std::vector<std::map<std::string, mpq_class>> out;
  const SpaceComponent* c = s.part(p);
  if (!c) return out;
  for (const auto& v : c->interior.basis()) {
    std::map<std::string, mpq_class> m;
    for (const auto& e : v) m[key_of(*s.module, c->unknowns.entry(e.col))] = e.val.to_mpq();
    out.push_back(m);
  }
  return out;
}

bool same_keyed_span(const std::vector<std::map<std::string, mpq_class>>& a,
                     const std::vector<std::map<std::string, mpq_class>>& b) {
  std::map<std::string, std::size_t> cols;
  for (const auto* side : {&a, &b}) {
    for (const auto& m : *side) {
      for (const auto& [k, v] : m) cols.emplace(k, cols.size());
    }
  }
  auto dense = [&](const std::vector<std::map<std::string, mpq_class>>& s) {
    oracle::Matrix out;
    for (const auto& m : s) {
      oracle::Row row(cols.size(), 0);
      for (const auto& [k, v] : m) row[cols.at(k)] = v;
      out.push_back(row);
    }
    return out;
  };
  return oracle::same_span(dense(a), dense(b), cols.size());
}

}  // namespace

TEST_CASE("unknown columns match a brute-force enumeration") {
  ModuleSpec mod = adjoint_module(get_algebra({"sw22", {}}));
  const AlgebraSpec& alg = mod.algebra();
  Window w(HalfInt::from_twice(5), 1, 1);
  for (Parity p : {Parity::even, Parity::odd}) {
    for (int arity : {1, 2}) {
      MapUnknowns u(mod, arity, p, w);
      std::set<std::string> expected;
      auto gens = alg.generators(w.N);
      for (int64_t t = -2; t <= 2; ++t) {
        HalfInt k = HalfInt::from_twice(t);
        for (GenId x : gens) {
          for (std::size_t yi = 0; yi < (arity == 2 ? gens.size() : 1); ++yi) {
            HalfInt idx = x.index + k + (arity == 2 ? gens[yi].index : HalfInt(0));
            Parity in = alg.parity(x) + (arity == 2 ? alg.parity(gens[yi]) : Parity::even);
            for (std::size_t f = 0; f < mod.families().size(); ++f) {
              const Family& fam = mod.families()[f];
              if (fam.parity != p + in) continue;
              bool ok = fam.central ? idx == HalfInt(0)
                                    : (fam.lattice == Lattice::integer) == idx.is_integer();
              if (!ok) continue;
              std::string key = alg.name_of(x) + "|" + (arity == 2 ? alg.name_of(gens[yi]) : "") + "|" +
                                fam.name + "|" + k.str();
              expected.insert(key);
              const GenId* y = arity == 2 ? &gens[yi] : nullptr;
              auto col = u.find(x, y, static_cast<uint16_t>(f), k);
              REQUIRE(col.has_value());
              CHECK(u.entry(*col).out_index == idx);
            }
          }
        }
      }
      std::set<std::string> got;
      for (const auto& e : u.entries()) got.insert(key_of(mod, e));
      CHECK(got == expected);
      CHECK(got.size() == u.size());
      for (const auto& b : u.blocks()) {
        for (uint32_t c = b.begin; c < b.end; ++c) CHECK(u.entry(c).k == b.k);
      }
    }
  }
}

TEST_CASE("the system is block diagonal over shifts") {
  for (Symmetry sym : {Symmetry::none, Symmetry::symmetric}) {
    ConstraintSystem sys = build_bider_system(density(0), Parity::even, sym, Window(3, 1, 2));
    SparseMatrix whole = sys.concatenated();
    for (const auto& row : whole.rows()) {
      REQUIRE_FALSE(row.empty());
      HalfInt k = sys.unknowns.entry(row.front().col).k;
      for (const auto& e : row) CHECK(sys.unknowns.entry(e.col).k == k);
    }
    SolutionSpace direct = nullspace(whole);
    auto per_block = nullspace_blocks(sys.blocks, Exec::serial);
    std::size_t dim = 0;
    for (const auto& s : per_block) dim += s.dimension();
    CHECK(dim == direct.dimension());
  }
}

TEST_CASE("solutions satisfy every constraint row") {
  BiderSpace s = solve_bider(adjoint_module(get_algebra({"svir-ramond", {}})), ParityChoice::both,
                             Symmetry::none, Window(3, 1, 1));
  for (const auto& part : s.parts) {
    ConstraintSystem sys = build_bider_system(*s.module, part.parity, Symmetry::none, s.window);
    SparseMatrix whole = sys.concatenated();
    for (const auto& v : part.raw.basis()) CHECK(superbider::apply(whole, v).empty());
  }
}

TEST_CASE("serial and parallel paths give identical spaces") {
  ModuleSpec mod = adjoint_module(get_algebra({"n2-ramond", {}}));
  Window w(3, 1, 2);
  BiderSpace a = solve_bider(mod, ParityChoice::both, Symmetry::symmetric, w, Exec::serial);
  BiderSpace b = solve_bider(mod, ParityChoice::both, Symmetry::symmetric, w, Exec::parallel);
  REQUIRE(a.parts.size() == b.parts.size());
  for (std::size_t i = 0; i < a.parts.size(); ++i) {
    CHECK(a.parts[i].raw == b.parts[i].raw);
    CHECK(a.parts[i].interior == b.parts[i].interior);
  }
  BiderSpace c = solve_centroid(mod, ParityChoice::both, w, Exec::serial);
  BiderSpace d = solve_centroid(mod, ParityChoice::both, w, Exec::parallel);
  for (std::size_t i = 0; i < c.parts.size(); ++i) CHECK(c.parts[i].raw == d.parts[i].raw);
}

TEST_CASE("interior spaces are stable as the window grows") {
  struct Q {
    ModuleSpec mod;
    Symmetry sym;
  };
  std::vector<Q> queries = {{density(1), Symmetry::symmetric},
                            {density(-1), Symmetry::skew},
                            {adjoint_module(get_algebra({"w0b", {{"b", Scalar(0)}}})), Symmetry::symmetric}};
  for (const auto& q : queries) {
    CAPTURE(q.mod.name());
    BiderSpace small = solve_bider(q.mod, ParityChoice::even, q.sym, Window(5, 1, 3));
    BiderSpace large = solve_bider(q.mod, ParityChoice::even, q.sym, Window(7, 1, 3));
    CHECK(small.interior_dimension() == large.interior_dimension());
    CHECK(same_keyed_span(keyed_interior(small, Parity::even), keyed_interior(large, Parity::even)));
  }
}

TEST_CASE("full space splits into symmetric and skew parts") {
  std::vector<ModuleSpec> mods = {density(-1), density(0),
                                  get_module({"density-Fsuper", {{"b", Scalar(-1)}}}, {"svir-ramond", {}})};
  for (const auto& mod : mods) {
    CAPTURE(mod.name());
    Window w(4, 1, 2);
    BiderSpace full = solve_bider(mod, ParityChoice::both, Symmetry::none, w);
    Decomposition d = decompose(full);
    CHECK(d.valid());
    BiderSpace sym = solve_bider(mod, ParityChoice::both, Symmetry::symmetric, w);
    BiderSpace skew = solve_bider(mod, ParityChoice::both, Symmetry::skew, w);
    CHECK(d.symmetric_interior_dimension() == sym.interior_dimension());
    CHECK(d.skew_interior_dimension() == skew.interior_dimension());
    for (const auto& part : d.parts) {
      CHECK(part.parts_satisfy_rows);
      CHECK(part.direct_sum);
      CHECK(part.symmetric_raw == sym.part(part.parity)->raw);
      CHECK(part.skew_raw == skew.part(part.parity)->raw);
    }
  }
}

TEST_CASE("transpose is an involution and fixes symmetric solutions") {
  ModuleSpec mod = adjoint_module(get_algebra({"hv-super", {}}));
  BiderSpace s = solve_bider(mod, ParityChoice::even, Symmetry::symmetric, Window(HalfInt::from_twice(7), 1, 2));
  const SpaceComponent* c = s.part(Parity::even);
  REQUIRE(c != nullptr);
  REQUIRE(c->raw.dimension() > 0);
  for (const auto& v : c->raw.basis()) {
    SparseVec t = transpose_map(c->unknowns, mod.algebra(), v);
    CHECK(contains(SolutionSpace::span_of(c->unknowns.size(), {v}), t));
    CHECK(contains(SolutionSpace::span_of(c->unknowns.size(), {t}), v));
    CHECK(single_shift(c->unknowns, v).has_value());
  }
}

TEST_CASE("skew biderivations and centroid vanish together") {
  for (Scalar b : {Scalar(-1), Scalar(0), Scalar(1, 2), Scalar(2)}) {
    Window w(5, 1, 2);
    BiderSpace cent = solve_centroid(density(b), ParityChoice::even, w);
    BiderSpace skew = solve_bider(density(b), ParityChoice::even, Symmetry::skew, w);
    CHECK((cent.interior_dimension() == 0) == (skew.interior_dimension() == 0));
  }
  BiderSpace c = solve_centroid(density(-1), ParityChoice::both, Window(5, 2, 2));
  CHECK(c.interior_dimension() == 1);
}

TEST_CASE("parse helpers") {
  CHECK(parse_symmetry("skew") == Symmetry::skew);
  CHECK(parse_parity("both") == ParityChoice::both);
  CHECK_THROWS_AS(parse_symmetry("odd"), std::invalid_argument);
  CHECK(parities_of(ParityChoice::both).size() == 2);
  CHECK_THROWS_AS(MapUnknowns(density(0), 3, Parity::even, Window(2, 0, 1)), std::invalid_argument);
}
