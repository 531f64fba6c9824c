#pragma once

#include <optional>
#include <string>
#include <vector>

#include "superbider/bider_engine.hpp"

namespace superbider {

/// One linear obstruction equation: the coefficient of `output` in
/// [x,y]∘z - x∘(y∘z) + (-1)^{|x||y|} y∘(x∘z), as a vector over the
/// parameters t_i of ∘ = sum_i t_i B_i.
struct ObstructionRow {
  GenId x;
  GenId y;
  GenId z;
  GenId output;
  SparseVec linear;
};

/// Outcome of the commutative post-Lie computation on a window.
struct PostLieResult {
  BiderSpace symmetric;                 // even symmetric biderivations (axioms 1 and 3)
  std::vector<SparseVec> parameters;    // basis B_i, as columns of symmetric.parts[0]
  std::vector<ObstructionRow> rows;     // nonzero linear obstruction rows
  std::size_t triples_used = 0;
  std::size_t quadratic_terms_checked = 0;     // distinct t_i t_j coefficients formed
  std::size_t nested_products_evaluated = 0;  // lookups of a∘(b∘z) terms
  bool quadratic_vanishes = true;
  std::string quadratic_witness;        // first nonzero quadratic coefficient, if any
  SolutionSpace parameter_space;        // solutions t of the linear rows
  SolutionSpace structures;             // resulting products, interior columns
  std::string status;                   // "linear" or "nonlinear"

  /// Interior dimension of the solution set; only meaningful when linear.
  std::size_t dimension() const { return structures.dimension(); }
  /// Rows coming from one particular triple.
  std::vector<const ObstructionRow*> rows_for(GenId x, GenId y, GenId z) const;
};

/// Commutative post-Lie products. The symmetric biderivations are solved on
/// the window widened by K; a triple of window generators contributes rows
/// when [x,y] lies in the window and |y+z|, |x+z| <= N, so that every nested
/// product it needs is known.
PostLieResult solve_postlie(const AlgebraSpec& alg, const Window& window, Exec exec = Exec::parallel);

}  // namespace superbider
