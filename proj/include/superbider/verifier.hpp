#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "superbider/bider_engine.hpp"
#include "superbider/postlie.hpp"

namespace superbider {

/// Coefficient of one component of an expected map, as a function of the
/// input indices (m, n) and the shift k. For arity-1 maps n is 0.
using CoeffFn = std::function<Scalar(HalfInt m, HalfInt n, HalfInt k)>;

struct ComponentRule {
  std::string x_family;
  std::string y_family;  // empty for arity-1 maps
  std::string out_family;
  CoeffFn coeff;
};

/// A parametric family of maps. Components not listed are zero.
struct ExpectedFamily {
  Parity parity = Parity::even;
  bool per_shift = true;  // one free parameter per shift k, else a single one
  std::vector<ComponentRule> rules;
  std::string text;

  bool is_zero() const { return rules.empty(); }
  static ExpectedFamily zero() { return ExpectedFamily{Parity::even, true, {}, "0"}; }
};

enum class CaseKind { centroid, bider, postlie };

/// One concrete instance of a theorem: an algebra/module pair plus the
/// family the theorem predicts for it.
struct CaseSample {
  std::string label;
  CatalogKey algebra;
  std::optional<CatalogKey> module;  // nullopt: adjoint
  ExpectedFamily expected;
  bool asserted = true;
};

struct TheoremCase {
  std::string id;
  std::string title;
  CaseKind kind = CaseKind::bider;
  ParityChoice parity = ParityChoice::both;
  Symmetry symmetry = Symmetry::symmetric;
  bool check_annihilator = false;
  std::vector<CaseSample> samples;
  /// Builds a sample for an arbitrary parameter set; null when the case takes
  /// no parameters.
  std::function<CaseSample(const Params&)> sample_for;
};

struct SampleReport {
  std::string label;
  std::string algebra;
  std::string module;
  Window window;
  std::string status;  // pass | fail | window too small | not asserted by paper
  std::size_t computed_dimension = 0;
  std::size_t expected_dimension = 0;
  bool expected_in_computed = false;
  bool computed_in_expected = false;
  bool sound = false;  // expected vectors satisfy every constraint row
  std::string expected_text;
  std::string witness;
  std::vector<std::string> notes;
  std::shared_ptr<const BiderSpace> space;       // absent for post-Lie samples
  std::shared_ptr<const PostLieResult> postlie;  // post-Lie samples only
};

struct VerificationReport {
  std::string case_id;
  std::string title;
  std::string status;  // pass | fail | window too small
  std::vector<SampleReport> samples;

  bool passed() const { return status == "pass"; }
};

/// All theorem cases, in a fixed order.
const std::vector<TheoremCase>& theorem_cases();
/// Throws std::invalid_argument for unknown ids.
const TheoremCase& find_case(const std::string& id);

/// N=6, K=2, N_int=2, or N=11/2 when the algebra has a half-integer lattice.
Window default_window(const AlgebraSpec& alg);
/// True when N - N_int leaves no safety margin.
bool window_too_small(const Window& w);

/// Windowed annihilator {u : x.u = 0 for all window x} on |index| <= bound.
std::size_t annihilator_dimension(const ModuleSpec& mod, HalfInt bound, HalfInt action_bound);

/// Expected family evaluated on the given columns (original column ids).
/// Zero vectors are dropped.
std::vector<SparseVec> expected_vectors(const ExpectedFamily& fam, const ModuleSpec& mod,
                                        const MapUnknowns& u, const std::vector<uint32_t>& columns);

struct VerifyOptions {
  std::optional<Window> window;  // default: per-algebra default window
  std::optional<Params> params;  // replaces the default samples
  Exec exec = Exec::parallel;
};

VerificationReport verify(const TheoremCase& c, const VerifyOptions& opts = {});
std::vector<VerificationReport> verify_all(const VerifyOptions& opts = {});

/// Readable listing of a coefficient vector, e.g. "phi(L_{1},L_{0}) -> 1 v_{1}".
std::string describe_vector(const ModuleSpec& mod, const MapUnknowns& u, const SparseVec& v,
                            std::size_t max_terms = 4);

}  // namespace superbider
