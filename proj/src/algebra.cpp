#include "superbider/algebra.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace superbider {

std::string HalfInt::str() const {
  if (is_integer()) return std::to_string(as_int());
  return std::to_string(twice_) + "/2";
}

HalfInt parse_halfint(std::string_view text) {
  Scalar v = parse_rational(text);
  Scalar doubled = v * Scalar(2);
  if (!doubled.is_integer() || !doubled.fits_small()) {
    throw std::invalid_argument("index bound '" + std::string(text) + "' is not a half-integer");
  }
  return HalfInt::from_twice(doubled.small_num());
}

const char* to_string(Parity p) { return is_odd(p) ? "odd" : "even"; }

// ---------------------------------------------------------------- Element

Scalar Element::coeff(GenId g) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), g,
                             [](const Term& t, const GenId& id) { return t.gen < id; });
  if (it != terms_.end() && it->gen == g) return it->coeff;
  return Scalar();
}

void Element::add(GenId g, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), g,
                             [](const Term& t, const GenId& id) { return t.gen < id; });
  if (it != terms_.end() && it->gen == g) {
    it->coeff += c;
    if (it->coeff.is_zero()) terms_.erase(it);
    return;
  }
  terms_.insert(it, Term{g, c});
}

Element& Element::operator+=(const Element& rhs) {
  if (is_zero()) parity_ = rhs.parity_;
  for (const auto& t : rhs.terms_) add(t.gen, t.coeff);
  return *this;
}

Element& Element::operator-=(const Element& rhs) {
  if (is_zero()) parity_ = rhs.parity_;
  for (const auto& t : rhs.terms_) add(t.gen, -t.coeff);
  return *this;
}

Element& Element::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

bool operator==(const Element& a, const Element& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].gen != b.terms_[i].gen || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return a.terms_.empty() || a.parity_ == b.parity_;
}

HalfInt max_abs_index(const Element& e) {
  HalfInt m;
  for (const auto& t : e.terms()) m = std::max(m, t.gen.index.abs());
  return m;
}

// ---------------------------------------------------------------- basis

std::optional<uint16_t> GradedBasis::find_family(std::string_view name) const {
  for (std::size_t i = 0; i < families_.size(); ++i) {
    if (families_[i].name == name) return static_cast<uint16_t>(i);
  }
  return std::nullopt;
}

bool GradedBasis::on_lattice(uint16_t family, HalfInt index) const {
  const Family& f = families_.at(family);
  if (f.central) return index == HalfInt(0);
  return f.lattice == Lattice::integer ? index.is_integer() : !index.is_integer();
}

void GradedBasis::validate(GenId g) const {
  if (g.family >= families_.size()) {
    throw std::invalid_argument("unknown family id " + std::to_string(g.family));
  }
  if (!on_lattice(g.family, g.index)) {
    throw std::invalid_argument("index " + g.index.str() + " is off the lattice of family " +
                                families_[g.family].name);
  }
}

GenId GradedBasis::gen(std::string_view family, HalfInt index) const {
  auto id = find_family(family);
  if (!id) throw std::invalid_argument("unknown family '" + std::string(family) + "'");
  GenId g{*id, index};
  validate(g);
  return g;
}

Element GradedBasis::element(GenId g, const Scalar& c) const {
  validate(g);
  Element e(parity(g));
  e.add(g, c);
  return e;
}

std::vector<GenId> GradedBasis::generators(HalfInt bound) const {
  std::vector<GenId> out;
  for (std::size_t f = 0; f < families_.size(); ++f) {
    auto fid = static_cast<uint16_t>(f);
    if (families_[f].central) {
      out.push_back(GenId{fid, HalfInt(0)});
      continue;
    }
    for (int64_t t = -bound.twice(); t <= bound.twice(); ++t) {
      HalfInt idx = HalfInt::from_twice(t);
      if (on_lattice(fid, idx)) out.push_back(GenId{fid, idx});
    }
  }
  return out;
}

std::string GradedBasis::name_of(GenId g) const {
  const Family& f = families_.at(g.family);
  if (f.central) return f.name;
  return f.name + "_{" + g.index.str() + "}";
}

std::string GradedBasis::to_string(const Element& e) const {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : e.terms()) {
    if (!first) os << " + ";
    first = false;
    if (!t.coeff.is_one()) os << "(" << t.coeff << ")*";
    os << name_of(t.gen);
  }
  return os.str();
}

// ---------------------------------------------------------------- specs

AlgebraSpec::AlgebraSpec(std::string name, Params params, std::vector<Family> families, Rule rule)
    : GradedBasis(std::move(families)),
      name_(std::move(name)),
      params_(std::move(params)),
      rule_(std::move(rule)) {}

Element AlgebraSpec::bracket_gen(GenId x, GenId y) const {
  validate(x);
  validate(y);
  Element out = rule_(x, y);
  out.set_parity(parity(x) + parity(y));
  return out;
}

ModuleSpec::ModuleSpec(std::string name, Params params, std::vector<Family> families,
                       AlgebraSpec algebra, Rule rule, bool adjoint)
    : GradedBasis(std::move(families)),
      name_(std::move(name)),
      params_(std::move(params)),
      algebra_(std::move(algebra)),
      rule_(std::move(rule)),
      adjoint_(adjoint) {}

Element ModuleSpec::act_gen(GenId x, GenId v) const {
  algebra_.validate(x);
  validate(v);
  if (algebra_.family(x).central) return Element(algebra_.parity(x) + parity(v));
  Element out = rule_(x, v);
  out.set_parity(algebra_.parity(x) + parity(v));
  return out;
}

Window::Window(HalfInt n, HalfInt k, HalfInt n_int) : N(n), K(k), N_int(n_int) {
  if (!(HalfInt(0) < N_int) || N < N_int) {
    throw std::invalid_argument("window requires 0 < N_int <= N (got N=" + N.str() +
                                ", N_int=" + N_int.str() + ")");
  }
  if (K < HalfInt(0)) throw std::invalid_argument("window requires K >= 0");
}

std::string Window::str() const {
  return "N=" + N.str() + " K=" + K.str() + " N_int=" + N_int.str();
}

Element bracket(const AlgebraSpec& alg, const Element& x, const Element& y) {
  Element out(x.parity() + y.parity());
  for (const auto& a : x.terms()) {
    for (const auto& b : y.terms()) {
      Element t = alg.bracket_gen(a.gen, b.gen);
      t *= a.coeff * b.coeff;
      out += t;
    }
  }
  out.set_parity(x.parity() + y.parity());
  return out;
}

Element act(const ModuleSpec& mod, const Element& x, const Element& v) {
  Element out(x.parity() + v.parity());
  for (const auto& a : x.terms()) {
    for (const auto& b : v.terms()) {
      Element t = mod.act_gen(a.gen, b.gen);
      t *= a.coeff * b.coeff;
      out += t;
    }
  }
  out.set_parity(x.parity() + v.parity());
  return out;
}

// ---------------------------------------------------------------- checks

std::string CheckReport::describe() const {
  if (pass) return "pass (" + std::to_string(checked) + " tuples)";
  return "fail at (" + witness_text + "): residual " + residual;
}

namespace {

std::string join_names(std::initializer_list<std::string> names) {
  std::string s;
  for (const auto& n : names) {
    if (!s.empty()) s += ", ";
    s += n;
  }
  return s;
}

}  // namespace

Element jacobiator(const AlgebraSpec& alg, GenId x, GenId y, GenId z) {
  Parity px = alg.parity(x);
  Parity py = alg.parity(y);
  Parity pz = alg.parity(z);
  Element ex = alg.element(x);
  Element ey = alg.element(y);
  Element ez = alg.element(z);
  Element out = Scalar(koszul_sign(px, pz)) * bracket(alg, ex, alg.bracket_gen(y, z));
  out += Scalar(koszul_sign(py, px)) * bracket(alg, ey, alg.bracket_gen(z, x));
  out += Scalar(koszul_sign(pz, py)) * bracket(alg, ez, alg.bracket_gen(x, y));
  return out;
}

CheckReport check_super_jacobi(const AlgebraSpec& alg, const Window& window) {
  CheckReport report;
  const auto gens = alg.generators(window.N);
  for (GenId x : gens) {
    for (GenId y : gens) {
      for (GenId z : gens) {
        // Only triples whose intermediate and final brackets stay inside N.
        if (max_abs_index(alg.bracket_gen(y, z)) > window.N ||
            max_abs_index(alg.bracket_gen(z, x)) > window.N ||
            max_abs_index(alg.bracket_gen(x, y)) > window.N ||
            (x.index + y.index + z.index).abs() > window.N) {
          continue;
        }
        ++report.checked;
        Element j = jacobiator(alg, x, y, z);
        if (!j.is_zero()) {
          report.pass = false;
          report.witness = {x, y, z};
          report.witness_text = join_names({alg.name_of(x), alg.name_of(y), alg.name_of(z)});
          report.residual = alg.to_string(j);
          return report;
        }
      }
    }
  }
  return report;
}

CheckReport check_super_skew(const AlgebraSpec& alg, const Window& window) {
  CheckReport report;
  const auto gens = alg.generators(window.N);
  for (GenId x : gens) {
    for (GenId y : gens) {
      ++report.checked;
      Element s = alg.bracket_gen(x, y) +
                  Scalar(koszul_sign(alg.parity(x), alg.parity(y))) * alg.bracket_gen(y, x);
      if (!s.is_zero()) {
        report.pass = false;
        report.witness = {x, y};
        report.witness_text = join_names({alg.name_of(x), alg.name_of(y)});
        report.residual = alg.to_string(s);
        return report;
      }
    }
  }
  return report;
}

CheckReport check_module_axiom(const ModuleSpec& mod, const Window& window) {
  CheckReport report;
  const AlgebraSpec& alg = mod.algebra();
  const auto xs = alg.generators(window.N);
  const auto vs = mod.generators(window.N);
  for (GenId x : xs) {
    for (GenId y : xs) {
      Element xy = alg.bracket_gen(x, y);
      if (max_abs_index(xy) > window.N) continue;
      for (GenId v : vs) {
        ++report.checked;
        Element ev = mod.element(v);
        Element lhs = act(mod, xy, ev);
        lhs -= act(mod, alg.element(x), mod.act_gen(y, v));
        lhs += Scalar(koszul_sign(alg.parity(x), alg.parity(y))) *
               act(mod, alg.element(y), mod.act_gen(x, v));
        if (!lhs.is_zero()) {
          report.pass = false;
          report.witness = {x, y, v};
          report.witness_text = join_names({alg.name_of(x), alg.name_of(y), mod.name_of(v)});
          report.residual = mod.to_string(lhs);
          return report;
        }
      }
    }
  }
  return report;
}

}  // namespace superbider
