#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "superbider/bider_engine.hpp"
#include "superbider/postlie.hpp"
#include "superbider/verifier.hpp"

namespace superbider {

inline constexpr int kSchemaVersion = 1;

/// One component of a basis map, with its coefficient fitted as an affine
/// function of (m, n).
struct ComponentForm {
  std::string pair;           // "(L,L)" or "(L)"
  std::string output_family;
  HalfInt k;
  bool affine = true;
  Scalar a, b, c;             // coefficient a*m + b*n + c
  std::string rule;           // e.g. "(m-n) v_{m+n}"
  std::vector<std::pair<std::string, Scalar>> table;  // raw coefficients when not affine
};

struct BasisForm {
  Parity parity = Parity::even;
  std::vector<ComponentForm> components;
};

/// Basis of the interior space, each vector rescaled so that its first
/// component has primitive integer coefficients with a positive lead.
std::vector<BasisForm> basis_forms(const BiderSpace& space);

/// One line per distinct family, with the shift written symbolically when
/// the per-k rules differ only through k.
std::vector<std::string> family_forms(const std::vector<BasisForm>& basis);

std::string window_value(HalfInt h);
nlohmann::ordered_json window_json(const Window& w);
nlohmann::ordered_json params_json(const Params& p);
nlohmann::ordered_json basis_json(const std::vector<BasisForm>& basis);

nlohmann::ordered_json postlie_json(const PostLieResult& r, const AlgebraSpec& alg, bool rows);
nlohmann::ordered_json sample_json(const TheoremCase& c, const SampleReport& s);
nlohmann::ordered_json verification_json(const TheoremCase& c, const VerificationReport& r);

}  // namespace superbider
