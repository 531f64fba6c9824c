#pragma once

#include <string>
#include <vector>

#include "superbider/algebra.hpp"

namespace superbider {

/// Catalog lookup key: a name plus rational parameters such as `b`.
struct CatalogKey {
  std::string name;
  Params params;

  std::string str() const;
};

/// Algebras: virasoro, w0b(b), svir-ramond, sw22, bms3-n1, n2-ramond, hv-super.
/// Throws std::invalid_argument for unknown names or wrong parameters.
AlgebraSpec get_algebra(const CatalogKey& key);

/// Modules: density-F(b) over virasoro, density-Fsuper(b) over svir-ramond.
ModuleSpec get_module(const CatalogKey& key, const CatalogKey& over);

/// The algebra acting on itself by the bracket.
ModuleSpec adjoint_module(const AlgebraSpec& alg);

/// alg ⋉ mod with [x, v] = x.v and [v, w] = 0. Module families are renamed
/// by `rename` (pairs of old name, new name); unlisted names are kept.
AlgebraSpec semidirect_product(const ModuleSpec& mod, const std::string& name,
                               const std::vector<std::pair<std::string, std::string>>& rename);

struct CatalogEntry {
  std::string name;
  bool is_module = false;
  std::string over;  // base algebra for modules
  std::vector<std::string> required_params;
  std::vector<Family> families;
};

/// Every catalog entry in a fixed order: algebras first, then modules.
std::vector<CatalogEntry> list_catalog();

bool catalog_has_algebra(const std::string& name);
bool catalog_has_module(const std::string& name);

}  // namespace superbider
