#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "superbider/halfint.hpp"
#include "superbider/scalar.hpp"

namespace superbider {

enum class Parity : uint8_t { even = 0, odd = 1 };

constexpr Parity operator+(Parity a, Parity b) {
  return static_cast<Parity>(static_cast<uint8_t>(a) ^ static_cast<uint8_t>(b));
}
constexpr bool is_odd(Parity p) { return p == Parity::odd; }
/// (-1)^{ab}
constexpr int koszul_sign(Parity a, Parity b) { return is_odd(a) && is_odd(b) ? -1 : 1; }
const char* to_string(Parity p);

enum class Lattice : uint8_t { integer, half_odd };  // Z or Z + 1/2

/// One indexed family of basis vectors, e.g. L_m or G_r. Central families
/// hold a single generator at index 0.
struct Family {
  std::string name;
  Lattice lattice = Lattice::integer;
  Parity parity = Parity::even;
  bool central = false;
};

/// A basis generator. `family` indexes the owning spec's family table.
struct GenId {
  uint16_t family = 0;
  HalfInt index;

  friend auto operator<=>(const GenId&, const GenId&) = default;
};

struct Term {
  GenId gen;
  Scalar coeff;
};

/// Sparse homogeneous linear combination of generators.
///
/// Terms are kept sorted by generator with no zero coefficients. The zero
/// element compares equal to any other zero regardless of its stated parity.
class Element {
 public:
  explicit Element(Parity parity = Parity::even) : parity_(parity) {}

  Parity parity() const { return parity_; }
  void set_parity(Parity p) { parity_ = p; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Scalar coeff(GenId g) const;

  void add(GenId g, const Scalar& c);
  Element& operator+=(const Element& rhs);
  Element& operator-=(const Element& rhs);
  Element& operator*=(const Scalar& s);

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Scalar& s, Element e) { return e *= s; }
  friend bool operator==(const Element& a, const Element& b);

 private:
  std::vector<Term> terms_;
  Parity parity_;
};

using Params = std::map<std::string, Scalar>;

/// Shared family-table behaviour of algebras and modules.
class GradedBasis {
 public:
  GradedBasis() = default;
  explicit GradedBasis(std::vector<Family> families) : families_(std::move(families)) {}

  const std::vector<Family>& families() const { return families_; }
  const Family& family(GenId g) const { return families_.at(g.family); }
  Parity parity(GenId g) const { return families_.at(g.family).parity; }
  std::optional<uint16_t> find_family(std::string_view name) const;

  /// Named generator; throws std::invalid_argument for unknown families or
  /// indices off the family's lattice.
  GenId gen(std::string_view family, HalfInt index) const;
  Element element(GenId g, const Scalar& c = Scalar(1)) const;
  Element element(std::string_view family, HalfInt index) const { return element(gen(family, index)); }
  void validate(GenId g) const;
  bool on_lattice(uint16_t family, HalfInt index) const;

  /// All generators with |index| <= bound, ordered by family then index.
  std::vector<GenId> generators(HalfInt bound) const;
  std::string name_of(GenId g) const;
  std::string to_string(const Element& e) const;

 private:
  std::vector<Family> families_;
};

/// A Z-graded Lie superalgebra given by structure constants.
///
/// The rule returns the bracket of two generators; it must be
/// degree-additive and is only consulted on validated generators.
class AlgebraSpec : public GradedBasis {
 public:
  using Rule = std::function<Element(GenId, GenId)>;

  AlgebraSpec() = default;
  AlgebraSpec(std::string name, Params params, std::vector<Family> families, Rule rule);

  const std::string& name() const { return name_; }
  const Params& params() const { return params_; }
  Element bracket_gen(GenId x, GenId y) const;

 private:
  std::string name_;
  Params params_;
  Rule rule_;
};

/// A graded module over an algebra, given by the action on generators.
class ModuleSpec : public GradedBasis {
 public:
  using Rule = std::function<Element(GenId, GenId)>;

  ModuleSpec() = default;
  ModuleSpec(std::string name, Params params, std::vector<Family> families, AlgebraSpec algebra,
             Rule rule, bool adjoint = false);

  const std::string& name() const { return name_; }
  const Params& params() const { return params_; }
  const AlgebraSpec& algebra() const { return algebra_; }
  bool is_adjoint() const { return adjoint_; }
  Element act_gen(GenId x, GenId v) const;

 private:
  std::string name_;
  Params params_;
  AlgebraSpec algebra_;
  Rule rule_;
  bool adjoint_ = false;
};

/// Finite truncation: generator indices |i| <= N, degree shifts |k| <= K,
/// reported comparisons on |i| <= N_int.
struct Window {
  HalfInt N;
  HalfInt K;
  HalfInt N_int;

  Window() = default;
  Window(HalfInt n, HalfInt k, HalfInt n_int);
  std::string str() const;
};

Element bracket(const AlgebraSpec& alg, const Element& x, const Element& y);
Element act(const ModuleSpec& mod, const Element& x, const Element& v);

/// Result of a structural check; `witness` names the first failing tuple.
struct CheckReport {
  bool pass = true;
  std::size_t checked = 0;
  std::vector<GenId> witness;
  std::string witness_text;
  std::string residual;  // nonzero left-hand side at the witness
  std::string describe() const;
};

/// (-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]] + (-1)^{|z||y|}[z,[x,y]].
Element jacobiator(const AlgebraSpec& alg, GenId x, GenId y, GenId z);
CheckReport check_super_jacobi(const AlgebraSpec& alg, const Window& window);
CheckReport check_super_skew(const AlgebraSpec& alg, const Window& window);
/// [x,y].v - x.(y.v) + (-1)^{|x||y|} y.(x.v) = 0 for in-window triples.
CheckReport check_module_axiom(const ModuleSpec& mod, const Window& window);

/// Largest |index| appearing in e (0 for the zero element).
HalfInt max_abs_index(const Element& e);

}  // namespace superbider
