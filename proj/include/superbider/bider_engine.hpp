#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "superbider/algebra.hpp"
#include "superbider/catalog.hpp"
#include "superbider/linear_solver.hpp"

namespace superbider {

enum class Symmetry { none, symmetric, skew };
enum class ParityChoice { even, odd, both };

const char* to_string(Symmetry s);
const char* to_string(ParityChoice p);
Symmetry parse_symmetry(const std::string& s);
ParityChoice parse_parity(const std::string& s);

/// One coefficient of an unknown map: the coefficient of output generator
/// (out_family, out_index) in phi(x, y), or in gamma(x) when arity is 1.
struct UnknownEntry {
  GenId x;
  std::optional<GenId> y;
  uint16_t out_family = 0;
  HalfInt k;
  HalfInt out_index;
};

/// Dense column numbering of the unknown coefficients, grouped by shift k.
/// Columns of one shift form a contiguous range.
class MapUnknowns {
 public:
  struct Block {
    HalfInt k;
    uint32_t begin = 0;
    uint32_t end = 0;
  };

  MapUnknowns() = default;
  /// Unknowns of a homogeneous map of parity `parity` from `arity` copies of
  /// the algebra into the module, on the window.
  MapUnknowns(const ModuleSpec& mod, int arity, Parity parity, const Window& window);

  int arity() const { return arity_; }
  Parity parity() const { return parity_; }
  uint32_t size() const { return static_cast<uint32_t>(entries_.size()); }
  const std::vector<UnknownEntry>& entries() const { return entries_; }
  const UnknownEntry& entry(uint32_t col) const { return entries_.at(col); }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::optional<uint32_t> find(GenId x, const GenId* y, uint16_t out_family, HalfInt k) const;
  /// Columns whose inputs all satisfy |index| <= bound.
  std::vector<uint32_t> columns_within(HalfInt bound) const;

 private:
  static uint64_t pack(GenId x, const GenId* y, uint16_t out_family, HalfInt k);

  int arity_ = 2;
  Parity parity_ = Parity::even;
  std::vector<UnknownEntry> entries_;
  std::vector<Block> blocks_;
  std::unordered_map<uint64_t, uint32_t> index_;
};

/// Per-shift constraint matrices; block i uses local columns
/// [0, blocks[i].end - blocks[i].begin) of unknowns.blocks()[i].
struct ConstraintSystem {
  MapUnknowns unknowns;
  std::vector<SparseMatrix> blocks;

  /// The whole system as one matrix over global columns.
  SparseMatrix concatenated() const;
};

/// gamma([x,y]) = (-1)^{|gamma||x|} x.gamma(y) on the window.
ConstraintSystem build_centroid_system(const ModuleSpec& mod, Parity parity, const Window& window);

/// Both biderivation identities, plus symmetry rows when requested.
ConstraintSystem build_bider_system(const ModuleSpec& mod, Parity parity, Symmetry symmetry,
                                    const Window& window);

struct BiderQuery {
  CatalogKey algebra;
  std::optional<CatalogKey> module;  // nullopt: adjoint module
  ParityChoice parity = ParityChoice::even;
  Symmetry symmetry = Symmetry::none;
  Window window;
};

ModuleSpec resolve_module(const BiderQuery& query);

/// Solution for one homogeneous parity.
struct SpaceComponent {
  Parity parity = Parity::even;
  MapUnknowns unknowns;
  SolutionSpace raw;
  std::vector<uint32_t> interior_columns;
  SolutionSpace interior;
};

/// A solved space of maps (centroid when arity is 1, biderivations when 2).
struct BiderSpace {
  std::shared_ptr<const ModuleSpec> module;
  int arity = 2;
  Symmetry symmetry = Symmetry::none;
  Window window;
  std::vector<SpaceComponent> parts;

  std::size_t interior_dimension() const;
  std::size_t raw_dimension() const;
  const SpaceComponent* part(Parity p) const;
};

std::vector<Parity> parities_of(ParityChoice choice);

BiderSpace solve_bider(const ModuleSpec& mod, ParityChoice parity, Symmetry symmetry,
                       const Window& window, Exec exec = Exec::parallel);
BiderSpace solve_bider(const BiderQuery& query, Exec exec = Exec::parallel);
BiderSpace solve_centroid(const ModuleSpec& mod, ParityChoice parity, const Window& window,
                          Exec exec = Exec::parallel);

/// phi^T(x, y) = (-1)^{|x||y|} phi(y, x) as a coefficient vector.
SparseVec transpose_map(const MapUnknowns& u, const GradedBasis& algebra, const SparseVec& v);

struct DecomposedComponent {
  Parity parity = Parity::even;
  SolutionSpace symmetric_raw;
  SolutionSpace skew_raw;
  SolutionSpace symmetric_interior;
  SolutionSpace skew_interior;
  bool parts_satisfy_rows = false;  // both parts solve the identities exactly
  bool direct_sum = false;          // sym + skew = full and sym ∩ skew = 0
};

struct Decomposition {
  std::vector<DecomposedComponent> parts;
  std::size_t symmetric_interior_dimension() const;
  std::size_t skew_interior_dimension() const;
  bool valid() const;
};

/// Splits a space solved with Symmetry::none into symmetric and skew parts.
Decomposition decompose(const BiderSpace& full);

/// Degree-shift value of a column set: returns the unique k supporting v, or
/// nullopt if v spans several shifts.
std::optional<HalfInt> single_shift(const MapUnknowns& u, const SparseVec& v);

}  // namespace superbider
