#include "doctest.h"
#include "superbider/report.hpp"
#include "superbider/verifier.hpp"

using namespace superbider;

namespace {

ModuleSpec density(Scalar b) { return get_module({"density-F", {{"b", b}}}, {"virasoro", {}}); }

}  // namespace

TEST_CASE("skew basis is fitted as (m-n) v_{m+n}") {
  BiderSpace s = solve_bider(density(-1), ParityChoice::both, Symmetry::skew, Window(4, 1, 2));
  auto forms = basis_forms(s);
  REQUIRE(forms.size() == 1);
  REQUIRE(forms[0].components.size() == 1);
  const ComponentForm& c = forms[0].components[0];
  CHECK(c.pair == "(L,L)");
  CHECK(c.output_family == "v");
  CHECK(c.k == HalfInt(0));
  CHECK(c.affine);
  CHECK(c.a == Scalar(1));
  CHECK(c.b == Scalar(-1));
  CHECK(c.c == Scalar(0));
  CHECK(c.rule == "(m-n) v_{m+n}");
  CHECK(family_forms(forms) == std::vector<std::string>{"(L,L) -> (m-n) v_{m+n}"});
}

TEST_CASE("shift families collapse to one line") {
  Window w(4, 1, 2);
  auto f1 = family_forms(basis_forms(solve_bider(density(1), ParityChoice::even, Symmetry::symmetric, w)));
  CHECK(f1 == std::vector<std::string>{"(L,L) -> (m+n+k) v_{m+n+k} for k in {-1,0,1}"});
  auto f0 = family_forms(basis_forms(solve_bider(density(0), ParityChoice::even, Symmetry::symmetric, w)));
  CHECK(f0 == std::vector<std::string>{"(L,L) -> v_{m+n+k} for k in {-1,0,1}"});
}

TEST_CASE("centroid basis is the identity map") {
  BiderSpace s = solve_centroid(density(-1), ParityChoice::even, Window(4, 1, 2));
  auto forms = basis_forms(s);
  REQUIRE(forms.size() == 1);
  REQUIRE(forms[0].components.size() == 1);
  CHECK(forms[0].components[0].pair == "(L)");
  CHECK(forms[0].components[0].rule == "v_{m}");
}

TEST_CASE("non-affine components list their coefficients") {
  BiderSpace s = solve_bider(adjoint_module(get_algebra({"w0b", {{"b", Scalar(1)}}})), ParityChoice::even,
                             Symmetry::symmetric, Window(4, 1, 2));
  bool found = false;
  for (const auto& f : basis_forms(s)) {
    for (const auto& c : f.components) {
      if (c.output_family == "C") {
        found = true;
        CHECK(c.rule == "C at (I_{0},I_{0})");
      }
    }
  }
  CHECK(found);
}

TEST_CASE("window values and JSON output are stable") {
  CHECK(window_value(HalfInt::from_twice(11)) == "11/2");
  CHECK(window_value(6) == "6");
  auto w = window_json(Window(HalfInt::from_twice(11), 2, 2));
  CHECK(w["N"] == "11/2");

  const TheoremCase& c = find_case("T3.2");
  VerifyOptions opts{Window(4, 1, 2), std::nullopt, Exec::parallel};
  std::string a = verification_json(c, verify(c, opts)).dump(2);
  opts.exec = Exec::serial;
  std::string b = verification_json(c, verify(c, opts)).dump(2);
  CHECK(a == b);
  auto parsed = nlohmann::json::parse(a);
  CHECK(parsed.contains("status"));
}
