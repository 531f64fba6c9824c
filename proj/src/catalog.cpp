#include "superbider/catalog.hpp"

#include <algorithm>
#include <stdexcept>

namespace superbider {
namespace {

constexpr Parity kEven = Parity::even;
constexpr Parity kOdd = Parity::odd;

Family fam(std::string name, Lattice lat, Parity p) { return Family{std::move(name), lat, p, false}; }
Family central(std::string name) { return Family{std::move(name), Lattice::integer, kEven, true}; }

Scalar q(HalfInt h) { return h.to_scalar(); }
Scalar frac(int64_t p, int64_t d) { return Scalar(p, d); }

/// (m^3 - m)/12, the Virasoro cocycle at m.
Scalar vir_cocycle(HalfInt m) {
  Scalar s = q(m);
  return (s * s * s - s) * frac(1, 12);
}

/// (r^2 - 1/4)/3, the odd-odd cocycle at r.
Scalar odd_cocycle(HalfInt r) {
  Scalar s = q(r);
  return (s * s - frac(1, 4)) * frac(1, 3);
}

/// Builder for bracket tables listed in one orientation. The reverse
/// orientation follows from super skew-symmetry [y,x] = -(-1)^{|x||y|}[x,y].
class BracketTable {
 public:
  using Fn = std::function<void(HalfInt, HalfInt, Element&)>;

  explicit BracketTable(std::vector<Family> families) : families_(std::move(families)) {
    fns_.resize(families_.size() * families_.size());
  }

  uint16_t id(const std::string& name) const {
    for (std::size_t i = 0; i < families_.size(); ++i) {
      if (families_[i].name == name) return static_cast<uint16_t>(i);
    }
    throw std::logic_error("catalog: unknown family " + name);
  }

  /// Registers [a_m, b_n]. For a == b the formula must already be skew.
  void set(const std::string& a, const std::string& b, Fn fn) {
    fns_[slot(id(a), id(b))] = std::move(fn);
  }

  AlgebraSpec::Rule rule() const {
    auto families = families_;
    auto fns = fns_;
    std::size_t n = families_.size();
    return [families, fns, n](GenId x, GenId y) {
      Element out;
      if (const auto& f = fns[x.family * n + y.family]) {
        f(x.index, y.index, out);
        return out;
      }
      if (const auto& f = fns[y.family * n + x.family]) {
        f(y.index, x.index, out);
        int s = -koszul_sign(families[x.family].parity, families[y.family].parity);
        out *= Scalar(s);
      }
      return out;
    };
  }

  const std::vector<Family>& families() const { return families_; }

 private:
  std::size_t slot(uint16_t a, uint16_t b) const { return a * families_.size() + b; }

  std::vector<Family> families_;
  std::vector<Fn> fns_;
};

const Scalar& require_param(const CatalogKey& key, const std::string& p) {
  auto it = key.params.find(p);
  if (it == key.params.end()) {
    throw std::invalid_argument(key.name + " requires parameter " + p);
  }
  return it->second;
}

void expect_params(const CatalogKey& key, std::initializer_list<const char*> names) {
  for (const auto& [k, v] : key.params) {
    bool known = std::any_of(names.begin(), names.end(), [&](const char* n) { return k == n; });
    if (!known) throw std::invalid_argument(key.name + " does not take parameter " + k);
  }
  for (const char* n : names) require_param(key, n);
}

/// Registers the Virasoro relation on L with central family `c`.
void add_virasoro(BracketTable& t, uint16_t L, uint16_t C) {
  t.set(t.families()[L].name, t.families()[L].name, [L, C](HalfInt m, HalfInt n, Element& e) {
    e.add(GenId{L, m + n}, q(m) - q(n));
    if (m + n == HalfInt(0)) e.add(GenId{C, 0}, vir_cocycle(m));
  });
}

/// [L_m, X_r] = (m/2 - r) X_{m+r}
void add_weight_three_halves(BracketTable& t, const std::string& L, const std::string& X) {
  uint16_t x = t.id(X);
  t.set(L, X, [x](HalfInt m, HalfInt r, Element& e) { e.add(GenId{x, m + r}, q(m) * frac(1, 2) - q(r)); });
}

AlgebraSpec virasoro() {
  BracketTable t({fam("L", Lattice::integer, kEven), central("C")});
  add_virasoro(t, t.id("L"), t.id("C"));
  return AlgebraSpec("virasoro", {}, t.families(), t.rule());
}

AlgebraSpec w0b(const Scalar& b) {
  BracketTable t({fam("L", Lattice::integer, kEven), fam("I", Lattice::integer, kEven), central("C")});
  add_virasoro(t, t.id("L"), t.id("C"));
  uint16_t I = t.id("I");
  t.set("L", "I", [I, b](HalfInt m, HalfInt n, Element& e) { e.add(GenId{I, m + n}, -(b * q(m) + q(n))); });
  return AlgebraSpec("w0b", {{"b", b}}, t.families(), t.rule());
}

AlgebraSpec svir_ramond() {
  BracketTable t({fam("L", Lattice::integer, kEven), fam("G", Lattice::integer, kOdd), central("C")});
  uint16_t L = t.id("L");
  uint16_t C = t.id("C");
  add_virasoro(t, L, C);
  add_weight_three_halves(t, "L", "G");
  t.set("G", "G", [L, C](HalfInt r, HalfInt s, Element& e) {
    e.add(GenId{L, r + s}, 2);
    if (r + s == HalfInt(0)) e.add(GenId{C, 0}, odd_cocycle(r));
  });
  return AlgebraSpec("svir-ramond", {}, t.families(), t.rule());
}

AlgebraSpec sw22() {
  BracketTable t({fam("L", Lattice::integer, kEven), fam("H", Lattice::integer, kEven),
                  fam("G", Lattice::half_odd, kOdd), fam("Q", Lattice::half_odd, kOdd), central("C1"),
                  central("C2")});
  uint16_t L = t.id("L");
  uint16_t H = t.id("H");
  uint16_t Q = t.id("Q");
  uint16_t C1 = t.id("C1");
  uint16_t C2 = t.id("C2");
  add_virasoro(t, L, C1);
  t.set("L", "H", [H, C2](HalfInt m, HalfInt n, Element& e) {
    e.add(GenId{H, m + n}, q(m) - q(n));
    if (m + n == HalfInt(0)) e.add(GenId{C2, 0}, vir_cocycle(m));
  });
  add_weight_three_halves(t, "L", "G");
  add_weight_three_halves(t, "L", "Q");
  t.set("G", "G", [L, C1](HalfInt r, HalfInt s, Element& e) {
    e.add(GenId{L, r + s}, 2);
    if (r + s == HalfInt(0)) e.add(GenId{C1, 0}, odd_cocycle(r));
  });
  t.set("G", "Q", [H, C2](HalfInt r, HalfInt s, Element& e) {
    e.add(GenId{H, r + s}, 2);
    if (r + s == HalfInt(0)) e.add(GenId{C2, 0}, odd_cocycle(r));
  });
  t.set("H", "G", [Q](HalfInt m, HalfInt r, Element& e) { e.add(GenId{Q, m + r}, q(m) * frac(1, 2) - q(r)); });
  return AlgebraSpec("sw22", {}, t.families(), t.rule());
}

AlgebraSpec bms3_n1() {
  BracketTable t({fam("L", Lattice::integer, kEven), fam("W", Lattice::integer, kEven),
                  fam("Q", Lattice::half_odd, kOdd), central("C1"), central("C2")});
  uint16_t L = t.id("L");
  uint16_t W = t.id("W");
  uint16_t C1 = t.id("C1");
  uint16_t C2 = t.id("C2");
  add_virasoro(t, L, C1);
  t.set("L", "W", [W, C2](HalfInt m, HalfInt n, Element& e) {
    e.add(GenId{W, m + n}, q(m) - q(n));
    if (m + n == HalfInt(0)) e.add(GenId{C2, 0}, vir_cocycle(m));
  });
  t.set("Q", "Q", [W, C2](HalfInt r, HalfInt s, Element& e) {
    e.add(GenId{W, r + s}, 2);
    if (r + s == HalfInt(0)) e.add(GenId{C2, 0}, odd_cocycle(r));
  });
  add_weight_three_halves(t, "L", "Q");
  return AlgebraSpec("bms3-n1", {}, t.families(), t.rule());
}

AlgebraSpec n2_ramond() {
  BracketTable t({fam("L", Lattice::integer, kEven), fam("H", Lattice::integer, kEven),
                  fam("G+", Lattice::integer, kOdd), fam("G-", Lattice::integer, kOdd), central("C")});
  uint16_t L = t.id("L");
  uint16_t H = t.id("H");
  uint16_t Gp = t.id("G+");
  uint16_t Gm = t.id("G-");
  uint16_t C = t.id("C");
  add_virasoro(t, L, C);
  t.set("H", "H", [C](HalfInt m, HalfInt n, Element& e) {
    if (m + n == HalfInt(0)) e.add(GenId{C, 0}, q(m) * frac(1, 3));
  });
  t.set("L", "H", [H](HalfInt m, HalfInt n, Element& e) { e.add(GenId{H, m + n}, -q(n)); });
  add_weight_three_halves(t, "L", "G+");
  add_weight_three_halves(t, "L", "G-");
  t.set("H", "G+", [Gp](HalfInt m, HalfInt p, Element& e) { e.add(GenId{Gp, m + p}, 1); });
  t.set("H", "G-", [Gm](HalfInt m, HalfInt p, Element& e) { e.add(GenId{Gm, m + p}, -1); });
  t.set("G+", "G-", [L, H, C](HalfInt p, HalfInt r, Element& e) {
    e.add(GenId{L, p + r}, 2);
    e.add(GenId{H, p + r}, q(p) - q(r));
    if (p + r == HalfInt(0)) e.add(GenId{C, 0}, odd_cocycle(p));
  });
  return AlgebraSpec("n2-ramond", {}, t.families(), t.rule());
}

AlgebraSpec hv_super() {
  BracketTable t({fam("L", Lattice::integer, kEven), fam("H", Lattice::integer, kEven),
                  fam("G", Lattice::half_odd, kOdd), central("C")});
  uint16_t L = t.id("L");
  uint16_t H = t.id("H");
  uint16_t G = t.id("G");
  add_virasoro(t, L, t.id("C"));
  t.set("L", "H", [H](HalfInt m, HalfInt n, Element& e) { e.add(GenId{H, m + n}, -q(n)); });
  t.set("L", "G", [G](HalfInt m, HalfInt r, Element& e) { e.add(GenId{G, m + r}, -q(r)); });
  t.set("G", "G", [H](HalfInt r, HalfInt s, Element& e) { e.add(GenId{H, r + s}, 2); });
  return AlgebraSpec("hv-super", {}, t.families(), t.rule());
}

ModuleSpec density_f(const Scalar& b) {
  AlgebraSpec vir = virasoro();
  uint16_t L = *vir.find_family("L");
  auto rule = [L, b](GenId x, GenId v) {
    Element e;
    if (x.family == L) e.add(GenId{0, x.index + v.index}, -(q(v.index) + b * q(x.index)));
    return e;
  };
  return ModuleSpec("density-F", {{"b", b}}, {fam("v", Lattice::integer, kEven)}, vir, rule);
}

ModuleSpec density_fsuper(const Scalar& b) {
  AlgebraSpec svir = svir_ramond();
  uint16_t L = *svir.find_family("L");
  uint16_t G = *svir.find_family("G");
  constexpr uint16_t I = 0;
  constexpr uint16_t J = 1;
  auto rule = [=](GenId x, GenId v) {
    Element e;
    HalfInt out = x.index + v.index;
    Scalar m = q(x.index);
    Scalar n = q(v.index);
    if (x.family == L && v.family == I) {
      e.add(GenId{I, out}, -(n + b * m));
    } else if (x.family == L && v.family == J) {
      e.add(GenId{J, out}, -(n + (b + frac(1, 2)) * m));
    } else if (x.family == G && v.family == I) {
      e.add(GenId{J, out}, -(n * frac(1, 2) + b * m));
    } else if (x.family == G && v.family == J) {
      e.add(GenId{I, out}, 2);
    }
    return e;
  };
  return ModuleSpec("density-Fsuper", {{"b", b}},
                    {fam("I", Lattice::integer, kEven), fam("J", Lattice::integer, kOdd)}, svir, rule);
}

const std::vector<std::string>& algebra_names() {
  static const std::vector<std::string> names = {"virasoro", "w0b",       "svir-ramond", "sw22",
                                                 "bms3-n1",  "n2-ramond", "hv-super"};
  return names;
}

}  // namespace

std::string CatalogKey::str() const {
  std::string s = name;
  for (const auto& [k, v] : params) s += " " + k + "=" + v.str();
  return s;
}

AlgebraSpec get_algebra(const CatalogKey& key) {
  const std::string& n = key.name;
  if (n == "w0b") {
    expect_params(key, {"b"});
    return w0b(key.params.at("b"));
  }
  if (n == "svir-ns") {
    throw std::invalid_argument("svir-ns (Neveu-Schwarz sector) is reserved but not implemented");
  }
  expect_params(key, {});
  if (n == "virasoro") return virasoro();
  if (n == "svir-ramond") return svir_ramond();
  if (n == "sw22") return sw22();
  if (n == "bms3-n1") return bms3_n1();
  if (n == "n2-ramond") return n2_ramond();
  if (n == "hv-super") return hv_super();
  throw std::invalid_argument("unknown algebra '" + n + "'");
}

ModuleSpec get_module(const CatalogKey& key, const CatalogKey& over) {
  if (key.name == "density-F") {
    if (over.name != "virasoro") {
      throw std::invalid_argument("density-F is only defined over virasoro, not " + over.name);
    }
    expect_params(key, {"b"});
    return density_f(key.params.at("b"));
  }
  if (key.name == "density-Fsuper") {
    if (over.name != "svir-ramond") {
      throw std::invalid_argument("density-Fsuper is only defined over svir-ramond, not " + over.name);
    }
    expect_params(key, {"b"});
    return density_fsuper(key.params.at("b"));
  }
  throw std::invalid_argument("unknown module '" + key.name + "'");
}

ModuleSpec adjoint_module(const AlgebraSpec& alg) {
  AlgebraSpec copy = alg;
  auto rule = [copy](GenId x, GenId y) { return copy.bracket_gen(x, y); };
  return ModuleSpec("adjoint", alg.params(), alg.families(), alg, rule, true);
}

AlgebraSpec semidirect_product(const ModuleSpec& mod, const std::string& name,
                               const std::vector<std::pair<std::string, std::string>>& rename) {
  const AlgebraSpec& base = mod.algebra();
  std::vector<Family> families = base.families();
  const auto offset = static_cast<uint16_t>(families.size());
  for (Family f : mod.families()) {
    for (const auto& [from, to] : rename) {
      if (f.name == from) f.name = to;
    }
    families.push_back(f);
  }
  auto shift = [offset](Element e) {
    Element out(e.parity());
    for (const auto& t : e.terms()) out.add(GenId{static_cast<uint16_t>(t.gen.family + offset), t.gen.index}, t.coeff);
    return out;
  };
  auto rule = [base, mod, offset, shift](GenId x, GenId y) {
    bool xm = x.family >= offset;
    bool ym = y.family >= offset;
    if (!xm && !ym) return base.bracket_gen(x, y);
    if (xm && ym) return Element();
    if (!xm) return shift(mod.act_gen(x, GenId{static_cast<uint16_t>(y.family - offset), y.index}));
    GenId v{static_cast<uint16_t>(x.family - offset), x.index};
    Element e = shift(mod.act_gen(y, v));
    e *= Scalar(-koszul_sign(base.parity(y), mod.parity(v)));
    return e;
  };
  Params params = base.params();
  for (const auto& [k, v] : mod.params()) params[k] = v;
  return AlgebraSpec(name, params, families, rule);
}

std::vector<CatalogEntry> list_catalog() {
  std::vector<CatalogEntry> out;
  for (const auto& n : algebra_names()) {
    CatalogKey key{n, {}};
    CatalogEntry e{n, false, "", {}, {}};
    if (n == "w0b") {
      key.params["b"] = Scalar(0);
      e.required_params = {"b"};
    }
    e.families = get_algebra(key).families();
    out.push_back(std::move(e));
  }
  out.push_back({"density-F", true, "virasoro", {"b"}, density_f(Scalar(0)).families()});
  out.push_back({"density-Fsuper", true, "svir-ramond", {"b"}, density_fsuper(Scalar(0)).families()});
  return out;
}

bool catalog_has_algebra(const std::string& name) {
  const auto& names = algebra_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

bool catalog_has_module(const std::string& name) {
  return name == "density-F" || name == "density-Fsuper";
}

}  // namespace superbider
