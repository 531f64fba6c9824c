#include "superbider/verifier.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace superbider {

namespace {

Scalar param_b(const Params& p) {
  auto it = p.find("b");
  if (it == p.end()) throw std::invalid_argument("parameter b is required");
  return it->second;
}

Params with_b(const Scalar& b) { return Params{{"b", b}}; }

const std::vector<Scalar>& b_samples() {
  static const std::vector<Scalar> s{Scalar(-1), Scalar(-1, 2), Scalar(0), Scalar(1, 2), Scalar(1), Scalar(2)};
  return s;
}

Scalar at_k0(HalfInt k, const Scalar& v) { return k == HalfInt(0) ? v : Scalar(0); }

ComponentRule rule(std::string x, std::string y, std::string out, CoeffFn f) {
  return ComponentRule{std::move(x), std::move(y), std::move(out), std::move(f)};
}

CatalogKey vir_key() { return CatalogKey{"virasoro", {}}; }
CatalogKey svir_key() { return CatalogKey{"svir-ramond", {}}; }

// --- expected families -----------------------------------------------------

ExpectedFamily centroid_vir(const Scalar& b) {
  if (b != Scalar(-1)) return ExpectedFamily::zero();
  return ExpectedFamily{Parity::even, false,
                        {rule("L", "", "v", [](HalfInt, HalfInt, HalfInt k) { return at_k0(k, 1); })},
                        "gamma(L_m) = v_{m}"};
}

ExpectedFamily skew_vir(const Scalar& b) {
  if (b != Scalar(-1)) return ExpectedFamily::zero();
  return ExpectedFamily{
      Parity::even, false,
      {rule("L", "L", "v", [](HalfInt m, HalfInt n, HalfInt k) { return at_k0(k, (m - n).to_scalar()); })},
      "(m-n) v_{m+n}"};
}

ExpectedFamily symmetric_vir(const Scalar& b, const std::string& out) {
  if (b == Scalar(0)) {
    return ExpectedFamily{Parity::even, true,
                          {rule("L", "L", out, [](HalfInt, HalfInt, HalfInt) { return Scalar(1); })},
                          out + "_{m+n+k}"};
  }
  if (b == Scalar(1)) {
    return ExpectedFamily{
        Parity::even, true,
        {rule("L", "L", out, [](HalfInt m, HalfInt n, HalfInt k) { return (m + n + k).to_scalar(); })},
        "(m+n+k) " + out + "_{m+n+k}"};
  }
  return ExpectedFamily::zero();
}

ExpectedFamily centroid_svir(const Scalar& b) {
  if (b != Scalar(-1)) return ExpectedFamily::zero();
  auto one = [](HalfInt, HalfInt, HalfInt k) { return at_k0(k, 1); };
  return ExpectedFamily{Parity::even, false, {rule("L", "", "I", one), rule("G", "", "J", one)},
                        "gamma(L_m) = I_{m}, gamma(G_r) = J_{r}"};
}

ExpectedFamily skew_svir(const Scalar& b) {
  if (b != Scalar(-1)) return ExpectedFamily::zero();
  const Scalar half(1, 2);
  return ExpectedFamily{
      Parity::even,
      false,
      {rule("L", "L", "I", [](HalfInt m, HalfInt n, HalfInt k) { return at_k0(k, (m - n).to_scalar()); }),
       rule("L", "G", "J",
            [half](HalfInt m, HalfInt n, HalfInt k) { return at_k0(k, half * m.to_scalar() - n.to_scalar()); }),
       rule("G", "L", "J",
            [half](HalfInt m, HalfInt n, HalfInt k) { return at_k0(k, m.to_scalar() - half * n.to_scalar()); }),
       rule("G", "G", "I", [](HalfInt, HalfInt, HalfInt k) { return at_k0(k, 2); })},
      "epsilon([x,y])"};
}

ExpectedFamily hv_symmetric() {
  return ExpectedFamily{Parity::even, true,
                        {rule("L", "L", "H", [](HalfInt, HalfInt, HalfInt) { return Scalar(1); })},
                        "H_{m+n+k}"};
}

std::string b_label(const Scalar& b) { return "b=" + b.str(); }

CaseSample density_sample(const Scalar& b, const std::string& module, const CatalogKey& over,
                          const ExpectedFamily& fam) {
  return CaseSample{b_label(b), over, CatalogKey{module, with_b(b)}, fam, true};
}

TheoremCase density_case(std::string id, std::string title, CaseKind kind, Symmetry sym, bool annihilator,
                         std::string module, CatalogKey over, std::function<ExpectedFamily(const Scalar&)> fam,
                         const std::vector<Scalar>& samples) {
  TheoremCase c;
  c.id = std::move(id);
  c.title = std::move(title);
  c.kind = kind;
  c.symmetry = sym;
  c.check_annihilator = annihilator;
  c.sample_for = [module, over, fam](const Params& p) {
    Scalar b = param_b(p);
    return density_sample(b, module, over, fam(b));
  };
  for (const auto& b : samples) c.samples.push_back(c.sample_for(with_b(b)));
  return c;
}

TheoremCase adjoint_case(std::string id, std::string title, std::string algebra, ExpectedFamily fam) {
  TheoremCase c;
  c.id = std::move(id);
  c.title = std::move(title);
  c.kind = CaseKind::bider;
  c.symmetry = Symmetry::symmetric;
  c.samples.push_back(CaseSample{algebra, CatalogKey{algebra, {}}, std::nullopt, std::move(fam), true});
  return c;
}

std::vector<TheoremCase> make_cases() {
  std::vector<TheoremCase> cases;
  cases.push_back(density_case("L3.1", "centroid of Vir on F_b", CaseKind::centroid, Symmetry::none, false,
                               "density-F", vir_key(), centroid_vir, b_samples()));
  cases.push_back(density_case("T3.2", "skew biderivations Vir -> F_b", CaseKind::bider, Symmetry::skew, true,
                               "density-F", vir_key(), skew_vir, b_samples()));
  cases.push_back(density_case("T3.3", "symmetric biderivations Vir -> F_b", CaseKind::bider,
                               Symmetry::symmetric, false, "density-F", vir_key(),
                               [](const Scalar& b) { return symmetric_vir(b, "v"); }, b_samples()));
  cases.push_back(adjoint_case("C3.4", "symmetric biderivations of Vir", "virasoro", ExpectedFamily::zero()));
  {
    TheoremCase c;
    c.id = "C3.5";
    c.title = "symmetric biderivations of W(0,b)";
    c.kind = CaseKind::bider;
    c.symmetry = Symmetry::symmetric;
    c.sample_for = [](const Params& p) {
      Scalar b = param_b(p);
      return CaseSample{b_label(b), CatalogKey{"w0b", with_b(b)}, std::nullopt, symmetric_vir(b, "I"), true};
    };
    for (int b : {0, 1, 2}) c.samples.push_back(c.sample_for(with_b(Scalar(b))));
    cases.push_back(std::move(c));
  }
  cases.push_back(density_case("L4.3", "centroid of SVir on F_b (super)", CaseKind::centroid, Symmetry::none,
                               false, "density-Fsuper", svir_key(), centroid_svir, b_samples()));
  cases.push_back(density_case("T4.4", "skew super-biderivations SVir -> F_b (super)", CaseKind::bider,
                               Symmetry::skew, true, "density-Fsuper", svir_key(), skew_svir, b_samples()));
  cases.push_back(density_case("T4.5", "symmetric super-biderivations SVir -> F_b (super)", CaseKind::bider,
                               Symmetry::symmetric, false, "density-Fsuper", svir_key(),
                               [](const Scalar&) { return ExpectedFamily::zero(); }, b_samples()));
  cases.push_back(adjoint_case("T5.1", "symmetric super-biderivations of SVir", "svir-ramond",
                               ExpectedFamily::zero()));
  cases.push_back(adjoint_case("T5.2", "symmetric super-biderivations of SW(2,2)", "sw22",
                               ExpectedFamily::zero()));
  cases.push_back(adjoint_case("T5.4", "symmetric super-biderivations of N=1 super-BMS3", "bms3-n1",
                               ExpectedFamily::zero()));
  cases.push_back(adjoint_case("T5.6", "symmetric super-biderivations of N=2 Ramond", "n2-ramond",
                               ExpectedFamily::zero()));
  cases.push_back(adjoint_case("T5.8", "symmetric super-biderivations of Heisenberg-Virasoro S", "hv-super",
                               hv_symmetric()));
  {
    TheoremCase c;
    c.id = "T6.3";
    c.title = "commutative post-Lie structures";
    c.kind = CaseKind::postlie;
    c.parity = ParityChoice::even;
    for (const char* a : {"virasoro", "svir-ramond", "sw22", "bms3-n1", "n2-ramond", "hv-super"}) {
      c.samples.push_back(CaseSample{a, CatalogKey{a, {}}, std::nullopt, ExpectedFamily::zero(), true});
    }
    c.samples.push_back(
        CaseSample{"w0b b=0", CatalogKey{"w0b", with_b(Scalar(0))}, std::nullopt, ExpectedFamily::zero(), false});
    cases.push_back(std::move(c));
  }
  return cases;
}

// --- evaluation -------------------------------------------------------------

bool rule_matches(const ComponentRule& r, const ModuleSpec& mod, const UnknownEntry& e) {
  const AlgebraSpec& alg = mod.algebra();
  if (alg.family(e.x).name != r.x_family) return false;
  if (e.y) {
    if (alg.family(*e.y).name != r.y_family) return false;
  } else if (!r.y_family.empty()) {
    return false;
  }
  return mod.families()[e.out_family].name == r.out_family;
}

SolutionSpace span_on(uint32_t ncols, std::vector<SparseVec> v) { return SolutionSpace::span_of(ncols, std::move(v)); }

/// First vector of `from` outside `into`, if any.
std::optional<SparseVec> outside(const SolutionSpace& into, const std::vector<SparseVec>& from) {
  for (const auto& v : from) {
    if (!contains(into, v)) return v;
  }
  return std::nullopt;
}

SampleReport verify_map_sample(const TheoremCase& c, const CaseSample& s, const Window& w, Exec exec) {
  SampleReport r;
  r.label = s.label;
  r.window = w;
  r.expected_text = s.expected.text;
  AlgebraSpec alg = get_algebra(s.algebra);
  ModuleSpec mod = s.module ? get_module(*s.module, s.algebra) : adjoint_module(alg);
  r.algebra = s.algebra.str();
  r.module = s.module ? s.module->str() : "adjoint";

  auto space = std::make_shared<BiderSpace>(c.kind == CaseKind::centroid
                                                ? solve_centroid(mod, c.parity, w, exec)
                                                : solve_bider(mod, c.parity, c.symmetry, w, exec));
  r.space = space;
  r.expected_in_computed = true;
  r.computed_in_expected = true;
  r.sound = true;
  for (const auto& part : space->parts) {
    const MapUnknowns& u = part.unknowns;
    std::vector<SparseVec> expected;
    if (part.parity == s.expected.parity) expected = expected_vectors(s.expected, mod, u, part.interior_columns);
    SolutionSpace exp_space = span_on(u.size(), expected);
    r.computed_dimension += part.interior.dimension();
    r.expected_dimension += exp_space.dimension();
    if (auto miss = outside(part.interior, exp_space.basis())) {
      r.expected_in_computed = false;
      if (r.witness.empty()) r.witness = "expected but not computed: " + describe_vector(mod, u, *miss);
    }
    if (auto extra = outside(exp_space, part.interior.basis())) {
      r.computed_in_expected = false;
      if (r.witness.empty()) r.witness = "computed but not expected: " + describe_vector(mod, u, *extra);
    }
    if (!expected.empty()) {
      std::vector<uint32_t> all(u.size());
      for (uint32_t i = 0; i < u.size(); ++i) all[i] = i;
      auto full = expected_vectors(s.expected, mod, u, all);
      ConstraintSystem sys = c.kind == CaseKind::centroid ? build_centroid_system(mod, part.parity, w)
                                                          : build_bider_system(mod, part.parity, c.symmetry, w);
      SparseMatrix a = sys.concatenated();
      for (const auto& v : full) {
        if (!superbider::apply(a, v).empty()) r.sound = false;
      }
    }
  }
  bool ok = r.expected_in_computed && r.computed_in_expected && r.sound &&
            r.computed_dimension == r.expected_dimension;
  r.status = ok ? "pass" : "fail";
  if (!r.sound && r.witness.empty()) r.witness = "expected family violates a constraint row";

  if (c.check_annihilator) {
    std::size_t ann = annihilator_dimension(mod, w.N_int, w.N);
    if (ann > 0) {
      r.notes.push_back("module annihilator on the interior has dimension " + std::to_string(ann) +
                        "; the skew/centroid factorisation hypothesis does not hold here");
    }
  }
  if (!s.asserted) r.status = "not asserted by paper";
  return r;
}

SampleReport verify_postlie_sample(const CaseSample& s, const Window& w, Exec exec) {
  SampleReport r;
  r.label = s.label;
  r.window = w;
  r.expected_text = "0";
  AlgebraSpec alg = get_algebra(s.algebra);
  r.algebra = s.algebra.str();
  r.module = "adjoint";
  auto res = std::make_shared<PostLieResult>(solve_postlie(alg, w, exec));
  r.postlie = res;
  r.computed_dimension = res->dimension();
  r.expected_dimension = 0;
  r.expected_in_computed = true;
  r.computed_in_expected = res->dimension() == 0;
  r.sound = true;
  bool ok = res->status == "linear" && res->quadratic_vanishes && res->dimension() == 0;
  r.status = ok ? "pass" : "fail";
  if (!res->quadratic_vanishes) {
    r.witness = "nonzero quadratic obstruction: " + res->quadratic_witness;
  } else if (res->dimension() > 0) {
    const auto& u = res->symmetric.parts.front().unknowns;
    r.witness = "surviving product: " + describe_vector(adjoint_module(alg), u, res->structures.basis().front());
  }
  r.notes.push_back(std::to_string(res->parameters.size()) + " symmetric biderivation parameters, " +
                    std::to_string(res->rows.size()) + " linear obstruction rows from " +
                    std::to_string(res->triples_used) + " triples");
  if (!s.asserted) r.status = "not asserted by paper";
  return r;
}

}  // namespace

const std::vector<TheoremCase>& theorem_cases() {
  static const std::vector<TheoremCase> cases = make_cases();
  return cases;
}

const TheoremCase& find_case(const std::string& id) {
  for (const auto& c : theorem_cases()) {
    if (c.id == id) return c;
  }
  throw std::invalid_argument("unknown case '" + id + "'");
}

Window default_window(const AlgebraSpec& alg) {
  bool half = std::any_of(alg.families().begin(), alg.families().end(),
                          [](const Family& f) { return f.lattice == Lattice::half_odd; });
  return Window(half ? HalfInt::from_twice(11) : HalfInt(6), HalfInt(2), HalfInt(2));
}

bool window_too_small(const Window& w) { return w.N - w.N_int < HalfInt(2); }

std::size_t annihilator_dimension(const ModuleSpec& mod, HalfInt bound, HalfInt action_bound) {
  const auto acting = mod.algebra().generators(action_bound);
  std::map<std::pair<int64_t, int>, std::vector<GenId>> groups;
  for (GenId v : mod.generators(bound)) groups[{v.index.twice(), static_cast<int>(mod.parity(v))}].push_back(v);
  std::size_t dim = 0;
  for (const auto& [key, vs] : groups) {
    // Columns are the generators of this degree; rows are output coefficients.
    std::map<std::pair<std::size_t, GenId>, std::vector<Entry>> rows;
    for (uint32_t c = 0; c < vs.size(); ++c) {
      for (std::size_t xi = 0; xi < acting.size(); ++xi) {
        for (const auto& t : mod.act_gen(acting[xi], vs[c]).terms()) rows[{xi, t.gen}].push_back(Entry{c, t.coeff});
      }
    }
    SparseMatrix m(static_cast<uint32_t>(vs.size()));
    for (auto& [k, e] : rows) m.add_row(std::move(e));
    dim += nullspace(m).dimension();
  }
  return dim;
}

std::vector<SparseVec> expected_vectors(const ExpectedFamily& fam, const ModuleSpec& mod, const MapUnknowns& u,
                                        const std::vector<uint32_t>& columns) {
  std::map<HalfInt, std::vector<Entry>> by_shift;
  for (uint32_t c : columns) {
    const UnknownEntry& e = u.entry(c);
    for (const auto& r : fam.rules) {
      if (!rule_matches(r, mod, e)) continue;
      Scalar v = r.coeff(e.x.index, e.y ? e.y->index : HalfInt(0), e.k);
      if (!v.is_zero()) by_shift[fam.per_shift ? e.k : HalfInt(0)].push_back(Entry{c, v});
    }
  }
  std::vector<SparseVec> out;
  for (auto& [k, entries] : by_shift) {
    SparseVec v = make_sparse(std::move(entries));
    if (!v.empty()) out.push_back(std::move(v));
  }
  return out;
}

std::string describe_vector(const ModuleSpec& mod, const MapUnknowns& u, const SparseVec& v, std::size_t max_terms) {
  std::ostringstream os;
  const AlgebraSpec& alg = mod.algebra();
  std::size_t shown = 0;
  for (const auto& e : v) {
    if (shown == max_terms) {
      os << " ... (" << v.size() << " terms)";
      break;
    }
    const UnknownEntry& ue = u.entry(e.col);
    if (shown++) os << "; ";
    os << "phi(" << alg.name_of(ue.x);
    if (ue.y) os << "," << alg.name_of(*ue.y);
    os << ") -> " << e.val.str() << " " << mod.name_of(GenId{ue.out_family, ue.out_index});
  }
  return os.str();
}

VerificationReport verify(const TheoremCase& c, const VerifyOptions& opts) {
  VerificationReport rep;
  rep.case_id = c.id;
  rep.title = c.title;
  std::vector<CaseSample> samples = c.samples;
  if (opts.params) {
    if (!c.sample_for) throw std::invalid_argument("case " + c.id + " takes no parameters");
    samples = {c.sample_for(*opts.params)};
  }
  bool all_pass = true;
  bool too_small = false;
  for (const auto& s : samples) {
    Window w = opts.window ? *opts.window : default_window(get_algebra(s.algebra));
    if (window_too_small(w)) {
      SampleReport r;
      r.label = s.label;
      r.algebra = s.algebra.str();
      r.module = s.module ? s.module->str() : "adjoint";
      r.window = w;
      r.status = "window too small";
      r.expected_text = s.expected.text;
      r.witness = "N - N_int must be at least 2";
      rep.samples.push_back(std::move(r));
      too_small = true;
      continue;
    }
    SampleReport r = c.kind == CaseKind::postlie ? verify_postlie_sample(s, w, opts.exec)
                                                 : verify_map_sample(c, s, w, opts.exec);
    if (r.status == "fail") all_pass = false;
    rep.samples.push_back(std::move(r));
  }
  rep.status = too_small ? "window too small" : (all_pass ? "pass" : "fail");
  return rep;
}

std::vector<VerificationReport> verify_all(const VerifyOptions& opts) {
  std::vector<VerificationReport> out;
  for (const auto& c : theorem_cases()) out.push_back(verify(c, opts));
  return out;
}

}  // namespace superbider
