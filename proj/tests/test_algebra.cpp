#include <algorithm>
#include <random>

#include "doctest.h"
#include "superbider/algebra.hpp"
#include "superbider/catalog.hpp"

using namespace superbider;

namespace {

const std::vector<std::string> kAlgebras = {"virasoro", "w0b",      "svir-ramond", "sw22",
                                            "bms3-n1",  "n2-ramond", "hv-super"};

AlgebraSpec load(const std::string& name) {
  Params p;
  if (name == "w0b") p["b"] = Scalar(3, 2);
  return get_algebra({name, p});
}

HalfInt window_for(const AlgebraSpec& alg, int64_t n) {
  for (const auto& f : alg.families()) {
    if (f.lattice == Lattice::half_odd) return HalfInt::from_twice(2 * n - 1);
  }
  return n;
}

Element random_element(const AlgebraSpec& alg, const std::vector<GenId>& gens, Parity p, std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  std::uniform_int_distribution<int> coef(-9, 9);
  Element e(p);
  for (int i = 0; i < 4; ++i) {
    GenId g = gens[pick(rng)];
    if (alg.parity(g) != p) continue;
    e.add(g, Scalar(coef(rng), 1 + (i % 3)));
  }
  return e;
}

/// Virasoro-shaped algebra with bracket (m-n+1)L_{m+n}.
AlgebraSpec corrupted_virasoro() {
  std::vector<Family> fams = {{"L", Lattice::integer, Parity::even, false}};
  return AlgebraSpec("broken", {}, fams, [](GenId x, GenId y) {
    Element e;
    e.add(GenId{0, x.index + y.index}, x.index.to_scalar() - y.index.to_scalar() + Scalar(1));
    return e;
  });
}

}  // namespace

TEST_CASE("bracket is bilinear on random sparse elements") {
  std::mt19937 rng(11);
  for (const auto& name : kAlgebras) {
    AlgebraSpec alg = load(name);
    auto gens = alg.generators(4);
    for (int trial = 0; trial < 40; ++trial) {
      Parity px = static_cast<Parity>(trial % 2);
      Parity pz = static_cast<Parity>((trial / 2) % 2);
      Element x = random_element(alg, gens, px, rng);
      Element y = random_element(alg, gens, px, rng);
      Element z = random_element(alg, gens, pz, rng);
      Scalar a(trial - 20, 7), b(3, trial + 1);
      CHECK(bracket(alg, a * x + b * y, z) == a * bracket(alg, x, z) + b * bracket(alg, y, z));
      CHECK(bracket(alg, z, a * x + b * y) == a * bracket(alg, z, x) + b * bracket(alg, z, y));
    }
  }
}

TEST_CASE("brackets are degree and parity additive") {
  for (const auto& name : kAlgebras) {
    CAPTURE(name);
    AlgebraSpec alg = load(name);
    auto gens = alg.generators(window_for(alg, 5));
    for (GenId x : gens) {
      for (GenId y : gens) {
        Element e = alg.bracket_gen(x, y);
        for (const Term& t : e.terms()) {
          CHECK(t.gen.index == x.index + y.index);
          CHECK(alg.parity(t.gen) == alg.parity(x) + alg.parity(y));
        }
      }
    }
  }
}

TEST_CASE("module actions are degree and parity additive") {
  for (const std::string over : {"virasoro", "svir-ramond"}) {
    std::string name = over == "virasoro" ? "density-F" : "density-Fsuper";
    ModuleSpec mod = get_module({name, {{"b", Scalar(1, 2)}}}, {over, {}});
    const AlgebraSpec& alg = mod.algebra();
    for (GenId x : alg.generators(4)) {
      for (GenId v : mod.generators(4)) {
        Element e = mod.act_gen(x, v);
        for (const Term& t : e.terms()) {
          CHECK(t.gen.index == x.index + v.index);
          CHECK(mod.parity(t.gen) == alg.parity(x) + mod.parity(v));
        }
      }
    }
  }
}

TEST_CASE("catalog algebras satisfy super skew symmetry and super Jacobi") {
  for (const auto& name : kAlgebras) {
    CAPTURE(name);
    AlgebraSpec alg = load(name);
    Window w(window_for(alg, 5), 0, 1);
    auto skew = check_super_skew(alg, w);
    CHECK_MESSAGE(skew.pass, skew.describe());
    auto jac = check_super_jacobi(alg, w);
    CHECK_MESSAGE(jac.pass, jac.describe());
    CHECK(jac.checked > 0);
  }
}

TEST_CASE("w0b passes for several parameters") {
  for (Scalar b : {Scalar(0), Scalar(1), Scalar(-1, 2), Scalar(7, 3)}) {
    AlgebraSpec alg = get_algebra({"w0b", {{"b", b}}});
    Window w(4, 0, 1);
    CHECK(check_super_jacobi(alg, w).pass);
    CHECK(check_super_skew(alg, w).pass);
  }
}

TEST_CASE("density modules satisfy the module axiom") {
  for (Scalar b : {Scalar(-1), Scalar(-1, 2), Scalar(0), Scalar(1, 2), Scalar(2)}) {
    auto f = get_module({"density-F", {{"b", b}}}, {"virasoro", {}});
    auto rep = check_module_axiom(f, Window(5, 0, 1));
    CHECK_MESSAGE(rep.pass, rep.describe());
    auto fs = get_module({"density-Fsuper", {{"b", b}}}, {"svir-ramond", {}});
    rep = check_module_axiom(fs, Window(5, 0, 1));
    CHECK_MESSAGE(rep.pass, rep.describe());
  }
}

TEST_CASE("adjoint module satisfies the module axiom") {
  auto mod = adjoint_module(get_algebra({"svir-ramond", {}}));
  CHECK(mod.is_adjoint());
  CHECK(check_module_axiom(mod, Window(4, 0, 1)).pass);
}

TEST_CASE("corrupted Virasoro bracket breaks Jacobi") {
  AlgebraSpec bad = corrupted_virasoro();
  GenId l1 = bad.gen("L", 1), l0 = bad.gen("L", 0), lm1 = bad.gen("L", -1);
  // [L1,[L0,L-1]] = 6 L0, [L0,[L-1,L1]] = -L0, [L-1,[L1,L0]] = -2 L0
  Element expected;
  expected.add(l0, 3);
  CHECK(jacobiator(bad, l1, l0, lm1) == expected);

  auto rep = check_super_jacobi(bad, Window(1, 0, 1));
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.witness.size() == 3);
  // first failing triple in generator order
  CHECK(rep.witness == std::vector<GenId>{lm1, l0, l0});
  CHECK(rep.residual == bad.to_string(jacobiator(bad, lm1, l0, l0)));
  CHECK_FALSE(jacobiator(bad, lm1, l0, l0).is_zero());
  CHECK(check_super_jacobi(get_algebra({"virasoro", {}}), Window(6, 0, 1)).pass);
}

TEST_CASE("corrupted odd bracket breaks skew symmetry") {
  AlgebraSpec good = get_algebra({"svir-ramond", {}});
  uint16_t G = *good.find_family("G");
  AlgebraSpec bad("broken-svir", {}, good.families(), [good, G](GenId x, GenId y) {
    Element e = good.bracket_gen(x, y);
    if (x.family == G && y.family == G && x.index < y.index) e *= Scalar(-1);
    return e;
  });
  auto rep = check_super_skew(bad, Window(3, 0, 1));
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.witness.size() == 2);
  CHECK(rep.witness[0].family == G);
  CHECK(rep.witness[1].family == G);
}

TEST_CASE("w0b agrees with the semidirect product of Vir and F_b") {
  for (Scalar b : {Scalar(0), Scalar(1), Scalar(2), Scalar(-3, 2)}) {
    AlgebraSpec direct = get_algebra({"w0b", {{"b", b}}});
    AlgebraSpec built =
        semidirect_product(get_module({"density-F", {{"b", b}}}, {"virasoro", {}}), "w0b", {{"v", "I"}});
    for (GenId x : direct.generators(4)) {
      for (GenId y : direct.generators(4)) {
        GenId bx = built.gen(direct.family(x).name, x.index);
        GenId by = built.gen(direct.family(y).name, y.index);
        CHECK(direct.to_string(direct.bracket_gen(x, y)) == built.to_string(built.bracket_gen(bx, by)));
      }
    }
  }
}

TEST_CASE("catalog rejects bad keys") {
  CHECK_THROWS_AS(get_algebra({"svir-ns", {}}), std::invalid_argument);
  CHECK_THROWS_AS(get_algebra({"nope", {}}), std::invalid_argument);
  CHECK_THROWS_AS(get_algebra({"w0b", {}}), std::invalid_argument);
  CHECK_THROWS_AS(get_algebra({"virasoro", {{"b", Scalar(1)}}}), std::invalid_argument);
  CHECK_THROWS_AS(get_module({"density-F", {{"b", Scalar(1)}}}, {"sw22", {}}), std::invalid_argument);
  CHECK_THROWS_AS(get_module({"density-F", {}}, {"virasoro", {}}), std::invalid_argument);
  AlgebraSpec hv = get_algebra({"hv-super", {}});
  CHECK_THROWS_AS(hv.gen("G", 1), std::invalid_argument);
  CHECK_NOTHROW(hv.gen("G", HalfInt::from_twice(1)));
  CHECK_THROWS_AS(Window(3, 1, 4), std::invalid_argument);
  CHECK_THROWS_AS(Window(3, -1, 1), std::invalid_argument);
}

TEST_CASE("catalog listing") {
  auto entries = list_catalog();
  std::size_t algebras = std::count_if(entries.begin(), entries.end(), [](auto& e) { return !e.is_module; });
  CHECK(algebras == 7);
  CHECK(entries.size() == 9);
  for (const auto& name : kAlgebras) CHECK(catalog_has_algebra(name));
  CHECK(catalog_has_module("density-F"));
}
