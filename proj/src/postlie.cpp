#include "superbider/postlie.hpp"

#include <map>
#include <sstream>
#include <unordered_map>

namespace superbider {

namespace {

struct ProductTerm {
  uint32_t param;
  GenId out;
  Scalar coeff;
};

uint64_t pair_key(GenId x, GenId y) {
  auto idx = [](HalfInt h) { return static_cast<uint64_t>(static_cast<uint16_t>(h.twice() + 32768)); };
  return (static_cast<uint64_t>(x.family & 0xff) << 40) | (idx(x.index) << 24) |
         (static_cast<uint64_t>(y.family & 0xff) << 16) | idx(y.index);
}

/// x∘y as a list of (parameter, output generator, coefficient).
class ProductTable {
 public:
  ProductTable(const MapUnknowns& u, const std::vector<SparseVec>& params) {
    for (uint32_t i = 0; i < params.size(); ++i) {
      for (const auto& e : params[i]) {
        const UnknownEntry& ue = u.entry(e.col);
        table_[pair_key(ue.x, *ue.y)].push_back(ProductTerm{i, GenId{ue.out_family, ue.out_index}, e.val});
      }
    }
  }

  const std::vector<ProductTerm>& get(GenId x, GenId y) const {
    auto it = table_.find(pair_key(x, y));
    return it == table_.end() ? empty_ : it->second;
  }

 private:
  std::unordered_map<uint64_t, std::vector<ProductTerm>> table_;
  std::vector<ProductTerm> empty_;
};

}  // namespace

std::vector<const ObstructionRow*> PostLieResult::rows_for(GenId x, GenId y, GenId z) const {
  std::vector<const ObstructionRow*> out;
  for (const auto& r : rows) {
    if (r.x == x && r.y == y && r.z == z) out.push_back(&r);
  }
  return out;
}

PostLieResult solve_postlie(const AlgebraSpec& alg, const Window& window, Exec exec) {
  PostLieResult res;
  ModuleSpec adj = adjoint_module(alg);
  // Products of window elements land within N + K, so solve there.
  const Window solve_window(window.N + window.K, window.K, window.N_int);
  res.symmetric = solve_bider(adj, ParityChoice::even, Symmetry::symmetric, solve_window, exec);
  const SpaceComponent& comp = res.symmetric.parts.front();
  const MapUnknowns& u = comp.unknowns;
  res.parameters = comp.raw.basis();
  const auto nparams = static_cast<uint32_t>(res.parameters.size());
  ProductTable prod(u, res.parameters);

  const auto gens = alg.generators(window.N);
  const HalfInt N = window.N;
  auto fits = [&](HalfInt a, HalfInt b) { return (a + b).abs() <= N; };

  SparseMatrix system(nparams);
  for (GenId x : gens) {
    for (GenId y : gens) {
      Element xy = alg.bracket_gen(x, y);
      if (max_abs_index(xy) > N) continue;
      for (GenId z : gens) {
        if (!fits(y.index, z.index) || !fits(x.index, z.index)) continue;
        ++res.triples_used;
        std::map<GenId, std::vector<Entry>> lin;
        std::map<std::tuple<GenId, uint32_t, uint32_t>, Scalar> quad;
        for (const auto& t : xy.terms()) {
          for (const auto& p : prod.get(t.gen, z)) lin[p.out].push_back(Entry{p.param, t.coeff * p.coeff});
        }
        // - x∘(y∘z) + (-1)^{|x||y|} y∘(x∘z)
        auto nested = [&](GenId a, GenId b, const Scalar& sign) {
          for (const auto& inner : prod.get(b, z)) {
            ++res.nested_products_evaluated;
            for (const auto& outer : prod.get(a, inner.out)) {
              uint32_t i = std::min(inner.param, outer.param);
              uint32_t j = std::max(inner.param, outer.param);
              quad[{outer.out, i, j}] += sign * inner.coeff * outer.coeff;
            }
          }
        };
        nested(x, y, Scalar(-1));
        nested(y, x, Scalar(koszul_sign(alg.parity(x), alg.parity(y))));
        res.quadratic_terms_checked += quad.size();
        for (const auto& [key, c] : quad) {
          if (c.is_zero() || !res.quadratic_vanishes) continue;
          res.quadratic_vanishes = false;
          std::ostringstream os;
          os << "(" << alg.name_of(x) << ", " << alg.name_of(y) << ", " << alg.name_of(z) << ") t"
             << std::get<1>(key) << "*t" << std::get<2>(key) << " -> " << c.str() << " "
             << alg.name_of(std::get<0>(key));
          res.quadratic_witness = os.str();
        }
        for (auto& [out, entries] : lin) {
          SparseVec row = make_sparse(std::move(entries));
          if (row.empty()) continue;
          system.add_sorted_row(row);
          res.rows.push_back(ObstructionRow{x, y, z, out, std::move(row)});
        }
      }
    }
  }

  std::vector<uint32_t> interior = comp.interior_columns;
  if (!res.quadratic_vanishes) {
    res.status = "nonlinear";
    res.parameter_space = SolutionSpace::span_of(nparams, {});
    res.structures = SolutionSpace::span_of(u.size(), {});
    return res;
  }
  res.status = "linear";
  res.parameter_space = nullspace(system);
  std::vector<SparseVec> products;
  for (const auto& t : res.parameter_space.basis()) {
    SparseVec v;
    for (const auto& e : t) axpy(v, e.val, res.parameters[e.col]);
    products.push_back(std::move(v));
  }
  res.structures = project(SolutionSpace::span_of(u.size(), std::move(products)), interior);
  return res;
}

}  // namespace superbider
