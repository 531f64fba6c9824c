#include "superbider/bider_engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace superbider {

const char* to_string(Symmetry s) {
  switch (s) {
    case Symmetry::none: return "none";
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::skew: return "skew";
  }
  return "?";
}

const char* to_string(ParityChoice p) {
  switch (p) {
    case ParityChoice::even: return "even";
    case ParityChoice::odd: return "odd";
    case ParityChoice::both: return "both";
  }
  return "?";
}

Symmetry parse_symmetry(const std::string& s) {
  if (s == "none") return Symmetry::none;
  if (s == "symmetric") return Symmetry::symmetric;
  if (s == "skew") return Symmetry::skew;
  throw std::invalid_argument("unknown symmetry '" + s + "' (none|symmetric|skew)");
}

ParityChoice parse_parity(const std::string& s) {
  if (s == "even") return ParityChoice::even;
  if (s == "odd") return ParityChoice::odd;
  if (s == "both") return ParityChoice::both;
  throw std::invalid_argument("unknown parity '" + s + "' (even|odd|both)");
}

std::vector<Parity> parities_of(ParityChoice choice) {
  switch (choice) {
    case ParityChoice::even: return {Parity::even};
    case ParityChoice::odd: return {Parity::odd};
    case ParityChoice::both: return {Parity::even, Parity::odd};
  }
  return {};
}

// ---------------------------------------------------------------- unknowns

uint64_t MapUnknowns::pack(GenId x, const GenId* y, uint16_t out_family, HalfInt k) {
  auto idx = [](HalfInt h) { return static_cast<uint64_t>(static_cast<uint16_t>(h.twice() + 32768)); };
  uint64_t key = x.family & 0xff;
  key = (key << 16) | idx(x.index);
  key = (key << 8) | (y ? (y->family & 0xff) : 0xff);
  key = (key << 16) | (y ? idx(y->index) : 0);
  key = (key << 8) | (out_family & 0xff);
  key = (key << 8) | static_cast<uint64_t>(static_cast<uint8_t>(k.twice() + 128));
  return key;
}

MapUnknowns::MapUnknowns(const ModuleSpec& mod, int arity, Parity parity, const Window& window)
    : arity_(arity), parity_(parity) {
  if (arity != 1 && arity != 2) throw std::invalid_argument("map arity must be 1 or 2");
  if (window.K.twice() > 120 || window.N.twice() > 30000) throw std::invalid_argument("window too large");
  const AlgebraSpec& alg = mod.algebra();
  if (alg.families().size() > 250 || mod.families().size() > 250) throw std::invalid_argument("too many families");
  const auto gens = alg.generators(window.N);
  const auto& out_families = mod.families();

  auto push = [&](GenId x, const GenId* y, HalfInt k) {
    Parity in = alg.parity(x) + (y ? alg.parity(*y) : Parity::even);
    HalfInt base = x.index + (y ? y->index : HalfInt(0));
    for (std::size_t f = 0; f < out_families.size(); ++f) {
      const Family& fam = out_families[f];
      if (fam.parity != parity + in) continue;
      auto fid = static_cast<uint16_t>(f);
      HalfInt out = base + k;
      if (fam.central) {
        if (out != HalfInt(0)) continue;
      } else if (!mod.on_lattice(fid, out)) {
        continue;
      }
      index_.emplace(pack(x, y, fid, k), static_cast<uint32_t>(entries_.size()));
      entries_.push_back(UnknownEntry{x, y ? std::optional<GenId>(*y) : std::nullopt, fid, k, out});
    }
  };

  for (int64_t t = -window.K.twice(); t <= window.K.twice(); ++t) {
    HalfInt k = HalfInt::from_twice(t);
    auto begin = static_cast<uint32_t>(entries_.size());
    for (GenId x : gens) {
      if (arity == 1) {
        push(x, nullptr, k);
      } else {
        for (GenId y : gens) push(x, &y, k);
      }
    }
    auto end = static_cast<uint32_t>(entries_.size());
    if (end > begin) blocks_.push_back(Block{k, begin, end});
  }
}

std::optional<uint32_t> MapUnknowns::find(GenId x, const GenId* y, uint16_t out_family, HalfInt k) const {
  auto it = index_.find(pack(x, y, out_family, k));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<uint32_t> MapUnknowns::columns_within(HalfInt bound) const {
  std::vector<uint32_t> cols;
  for (uint32_t c = 0; c < entries_.size(); ++c) {
    const auto& e = entries_[c];
    if (e.x.index.abs() > bound) continue;
    if (e.y && e.y->index.abs() > bound) continue;
    cols.push_back(c);
  }
  return cols;
}

SparseMatrix ConstraintSystem::concatenated() const {
  SparseMatrix m(unknowns.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    uint32_t offset = unknowns.blocks()[b].begin;
    for (const auto& row : blocks[b].rows()) {
      SparseVec shifted = row;
      for (auto& e : shifted) e.col += offset;
      m.add_sorted_row(std::move(shifted));
    }
  }
  return m;
}

// ---------------------------------------------------------------- rows

namespace {

/// Accumulates one linear equation per output generator.
class RowAccumulator {
 public:
  void add(GenId out, uint32_t col, const Scalar& c) {
    if (c.is_zero()) return;
    for (auto& [g, entries] : rows_) {
      if (g == out) {
        entries.push_back(Entry{col, c});
        return;
      }
    }
    rows_.emplace_back(out, std::vector<Entry>{Entry{col, c}});
  }

  void flush(SparseMatrix& m) {
    for (auto& [g, entries] : rows_) {
      SparseVec row = make_sparse(std::move(entries));
      if (!row.empty()) m.add_sorted_row(std::move(row));
    }
    rows_.clear();
  }

 private:
  std::vector<std::pair<GenId, std::vector<Entry>>> rows_;
};

/// Precomputed in-window data shared by every block of one system.
class SystemContext {
 public:
  SystemContext(const ModuleSpec& mod, Parity parity, const Window& window)
      : mod_(mod), alg_(mod.algebra()), window_(window), parity_(parity) {
    gens_ = alg_.generators(window.N);
    const std::size_t n = gens_.size();
    brackets_.resize(n * n);
    safe_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        brackets_[i * n + j] = alg_.bracket_gen(gens_[i], gens_[j]);
        safe_[i * n + j] = max_abs_index(brackets_[i * n + j]) <= window.N;
      }
    }
    for (std::size_t f = 0; f < mod.families().size(); ++f) {
      by_parity_[static_cast<int>(mod.families()[f].parity)].push_back(static_cast<uint16_t>(f));
    }
  }

  const std::vector<GenId>& gens() const { return gens_; }
  const AlgebraSpec& alg() const { return alg_; }
  const ModuleSpec& mod() const { return mod_; }
  Parity parity() const { return parity_; }
  const Element& bracket(std::size_t i, std::size_t j) const { return brackets_[i * gens_.size() + j]; }
  bool safe(std::size_t i, std::size_t j) const { return safe_[i * gens_.size() + j]; }
  const std::vector<uint16_t>& out_families(Parity p) const { return by_parity_[static_cast<int>(p)]; }

 private:
  const ModuleSpec& mod_;
  const AlgebraSpec& alg_;
  Window window_;
  Parity parity_;
  std::vector<GenId> gens_;
  std::vector<Element> brackets_;
  std::vector<char> safe_;
  std::vector<uint16_t> by_parity_[2];
};

/// Action cache local to one block.
class ActionCache {
 public:
  explicit ActionCache(const ModuleSpec& mod) : mod_(mod) {}

  const Element& act(GenId x, GenId v) {
    uint64_t key = (static_cast<uint64_t>(x.family) << 56) |
                   (static_cast<uint64_t>(static_cast<uint16_t>(x.index.twice() + 32768)) << 40) |
                   (static_cast<uint64_t>(v.family) << 32) |
                   static_cast<uint32_t>(static_cast<int32_t>(v.index.twice()));
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, mod_.act_gen(x, v)).first->second;
  }

 private:
  const ModuleSpec& mod_;
  std::unordered_map<uint64_t, Element> cache_;
};

struct BlockRef {
  HalfInt k;
  uint32_t begin;
};

/// Adds sign * x.map(args) to the accumulator, over every output family the
/// map may take at this shift.
void add_acted(RowAccumulator& acc, ActionCache& cache, const SystemContext& ctx,
               const MapUnknowns& u, const BlockRef& blk, GenId x, GenId a, const GenId* b,
               const Scalar& sign) {
  Parity in = ctx.alg().parity(a) + (b ? ctx.alg().parity(*b) : Parity::even);
  for (uint16_t g : ctx.out_families(u.parity() + in)) {
    auto col = u.find(a, b, g, blk.k);
    if (!col) continue;
    const UnknownEntry& e = u.entry(*col);
    const Element& xv = cache.act(x, GenId{g, e.out_index});
    for (const auto& t : xv.terms()) acc.add(t.gen, *col - blk.begin, sign * t.coeff);
  }
}

/// Adds coeff * map(args) to the accumulator.
void add_plain(RowAccumulator& acc, const SystemContext& ctx, const MapUnknowns& u,
               const BlockRef& blk, GenId a, const GenId* b, const Scalar& coeff) {
  Parity in = ctx.alg().parity(a) + (b ? ctx.alg().parity(*b) : Parity::even);
  for (uint16_t g : ctx.out_families(u.parity() + in)) {
    auto col = u.find(a, b, g, blk.k);
    if (!col) continue;
    const UnknownEntry& e = u.entry(*col);
    acc.add(GenId{g, e.out_index}, *col - blk.begin, coeff);
  }
}

Scalar sgn(int s) { return Scalar(s); }

SparseMatrix centroid_block(const SystemContext& ctx, const MapUnknowns& u, std::size_t b) {
  const auto& blk = u.blocks()[b];
  BlockRef ref{blk.k, blk.begin};
  SparseMatrix m(blk.end - blk.begin);
  RowAccumulator acc;
  ActionCache cache(ctx.mod());
  const auto& gens = ctx.gens();
  const Parity pg = u.parity();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (!ctx.safe(i, j)) continue;
      GenId x = gens[i];
      GenId y = gens[j];
      // gamma([x,y]) - (-1)^{|gamma||x|} x.gamma(y)
      for (const auto& t : ctx.bracket(i, j).terms()) add_plain(acc, ctx, u, ref, t.gen, nullptr, t.coeff);
      add_acted(acc, cache, ctx, u, ref, x, y, nullptr, sgn(-koszul_sign(pg, ctx.alg().parity(x))));
      acc.flush(m);
    }
  }
  return m;
}

SparseMatrix bider_block(const SystemContext& ctx, const MapUnknowns& u, std::size_t b, Symmetry symmetry) {
  const auto& blk = u.blocks()[b];
  BlockRef ref{blk.k, blk.begin};
  SparseMatrix m(blk.end - blk.begin);
  RowAccumulator acc;
  ActionCache cache(ctx.mod());
  const auto& gens = ctx.gens();
  const AlgebraSpec& alg = ctx.alg();
  const Parity pp = u.parity();
  const std::size_t n = gens.size();

  for (std::size_t i = 0; i < n; ++i) {
    const GenId x = gens[i];
    const Parity px = alg.parity(x);
    for (std::size_t j = 0; j < n; ++j) {
      const GenId y = gens[j];
      const Parity py = alg.parity(y);
      for (std::size_t l = 0; l < n; ++l) {
        const GenId z = gens[l];
        const Parity pz = alg.parity(z);
        // phi([x,y],z) - (-1)^{|phi||x|} x.phi(y,z) + (-1)^{|y|(|phi|+|x|)} y.phi(x,z)
        if (ctx.safe(i, j)) {
          for (const auto& t : ctx.bracket(i, j).terms()) add_plain(acc, ctx, u, ref, t.gen, &z, t.coeff);
          add_acted(acc, cache, ctx, u, ref, x, y, &z, sgn(-koszul_sign(pp, px)));
          add_acted(acc, cache, ctx, u, ref, y, x, &z, sgn(koszul_sign(py, pp + px)));
          acc.flush(m);
        }
        // phi(x,[y,z]) - (-1)^{(|phi|+|x|)|y|} y.phi(x,z) + (-1)^{|z|(|phi|+|x|+|y|)} z.phi(x,y)
        // Under a symmetry condition this identity is the mirror image of the first.
        if (symmetry == Symmetry::none && ctx.safe(j, l)) {
          for (const auto& t : ctx.bracket(j, l).terms()) {
            GenId w = t.gen;
            add_plain(acc, ctx, u, ref, x, &w, t.coeff);
          }
          add_acted(acc, cache, ctx, u, ref, y, x, &z, sgn(-koszul_sign(pp + px, py)));
          add_acted(acc, cache, ctx, u, ref, z, x, &y, sgn(koszul_sign(pz, pp + px + py)));
          acc.flush(m);
        }
      }
    }
  }

  if (symmetry != Symmetry::none) {
    // phi(x,y) -/+ (-1)^{|x||y|} phi(y,x) = 0
    const int sigma = symmetry == Symmetry::symmetric ? 1 : -1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const GenId x = gens[i];
        const GenId y = gens[j];
        Parity in = alg.parity(x) + alg.parity(y);
        for (uint16_t g : ctx.out_families(pp + in)) {
          auto c1 = u.find(x, &y, g, blk.k);
          auto c2 = u.find(y, &x, g, blk.k);
          if (!c1 || !c2) continue;
          Scalar s = sgn(-sigma * koszul_sign(alg.parity(x), alg.parity(y)));
          m.add_row({Entry{*c1 - blk.begin, Scalar(1)}, Entry{*c2 - blk.begin, s}});
        }
      }
    }
  }
  return m;
}

std::vector<SparseMatrix> build_blocks(const ModuleSpec& mod, const MapUnknowns& u, Symmetry symmetry,
                                       const Window& window, Exec exec) {
  SystemContext ctx(mod, u.parity(), window);
  const auto nb = static_cast<std::ptrdiff_t>(u.blocks().size());
  std::vector<SparseMatrix> blocks(u.blocks().size());
  auto build = [&](std::ptrdiff_t b) {
    blocks[b] = u.arity() == 1 ? centroid_block(ctx, u, b) : bider_block(ctx, u, b, symmetry);
    blocks[b].deduplicate();
  };
  if (exec == Exec::serial) {
    for (std::ptrdiff_t b = 0; b < nb; ++b) build(b);
  } else {
#pragma omp parallel for schedule(dynamic, 1) num_threads(solver_threads())
    for (std::ptrdiff_t b = 0; b < nb; ++b) build(b);
  }
  return blocks;
}

SpaceComponent solve_component(const ModuleSpec& mod, int arity, Parity parity, Symmetry symmetry,
                               const Window& window, Exec exec) {
  SpaceComponent comp;
  comp.parity = parity;
  comp.unknowns = MapUnknowns(mod, arity, parity, window);
  const auto& u = comp.unknowns;
  auto blocks = build_blocks(mod, u, symmetry, window, exec);
  auto spaces = nullspace_blocks(blocks, exec);
  std::vector<SparseVec> basis;
  for (std::size_t b = 0; b < spaces.size(); ++b) {
    uint32_t offset = u.blocks()[b].begin;
    for (const auto& v : spaces[b].basis()) {
      SparseVec g = v;
      for (auto& e : g) e.col += offset;
      basis.push_back(std::move(g));
    }
  }
  // Blocks occupy increasing column ranges, so the concatenated per-block
  // RREF bases already form the RREF of the whole space.
  comp.raw = SolutionSpace::span_of(u.size(), std::move(basis));
  comp.interior_columns = u.columns_within(window.N_int);
  comp.interior = project(comp.raw, comp.interior_columns);
  return comp;
}

}  // namespace

ConstraintSystem build_centroid_system(const ModuleSpec& mod, Parity parity, const Window& window) {
  ConstraintSystem sys;
  sys.unknowns = MapUnknowns(mod, 1, parity, window);
  sys.blocks = build_blocks(mod, sys.unknowns, Symmetry::none, window, Exec::parallel);
  return sys;
}

ConstraintSystem build_bider_system(const ModuleSpec& mod, Parity parity, Symmetry symmetry,
                                    const Window& window) {
  ConstraintSystem sys;
  sys.unknowns = MapUnknowns(mod, 2, parity, window);
  sys.blocks = build_blocks(mod, sys.unknowns, symmetry, window, Exec::parallel);
  return sys;
}

ModuleSpec resolve_module(const BiderQuery& query) {
  if (!query.module) return adjoint_module(get_algebra(query.algebra));
  return get_module(*query.module, query.algebra);
}

std::size_t BiderSpace::interior_dimension() const {
  std::size_t d = 0;
  for (const auto& p : parts) d += p.interior.dimension();
  return d;
}

std::size_t BiderSpace::raw_dimension() const {
  std::size_t d = 0;
  for (const auto& p : parts) d += p.raw.dimension();
  return d;
}

const SpaceComponent* BiderSpace::part(Parity p) const {
  for (const auto& c : parts) {
    if (c.parity == p) return &c;
  }
  return nullptr;
}

BiderSpace solve_bider(const ModuleSpec& mod, ParityChoice parity, Symmetry symmetry,
                       const Window& window, Exec exec) {
  BiderSpace space;
  space.module = std::make_shared<const ModuleSpec>(mod);
  space.arity = 2;
  space.symmetry = symmetry;
  space.window = window;
  for (Parity p : parities_of(parity)) {
    space.parts.push_back(solve_component(*space.module, 2, p, symmetry, window, exec));
  }
  return space;
}

BiderSpace solve_bider(const BiderQuery& query, Exec exec) {
  return solve_bider(resolve_module(query), query.parity, query.symmetry, query.window, exec);
}

BiderSpace solve_centroid(const ModuleSpec& mod, ParityChoice parity, const Window& window, Exec exec) {
  BiderSpace space;
  space.module = std::make_shared<const ModuleSpec>(mod);
  space.arity = 1;
  space.window = window;
  for (Parity p : parities_of(parity)) {
    space.parts.push_back(solve_component(*space.module, 1, p, Symmetry::none, window, exec));
  }
  return space;
}

// ---------------------------------------------------------------- decompose

SparseVec transpose_map(const MapUnknowns& u, const GradedBasis& algebra, const SparseVec& v) {
  std::vector<Entry> out;
  for (const auto& e : v) {
    const UnknownEntry& ue = u.entry(e.col);
    GenId x = ue.x;
    GenId y = *ue.y;
    auto col = u.find(y, &x, ue.out_family, ue.k);
    if (!col) throw std::logic_error("transpose_map: window is not swap-closed");
    out.push_back(Entry{*col, Scalar(koszul_sign(algebra.parity(x), algebra.parity(y))) * e.val});
  }
  return make_sparse(std::move(out));
}

std::size_t Decomposition::symmetric_interior_dimension() const {
  std::size_t d = 0;
  for (const auto& p : parts) d += p.symmetric_interior.dimension();
  return d;
}

std::size_t Decomposition::skew_interior_dimension() const {
  std::size_t d = 0;
  for (const auto& p : parts) d += p.skew_interior.dimension();
  return d;
}

bool Decomposition::valid() const {
  return std::all_of(parts.begin(), parts.end(),
                     [](const DecomposedComponent& c) { return c.parts_satisfy_rows && c.direct_sum; });
}

Decomposition decompose(const BiderSpace& full) {
  if (full.arity != 2 || full.symmetry != Symmetry::none) {
    throw std::invalid_argument("decompose expects a biderivation space solved without symmetry");
  }
  Decomposition out;
  const AlgebraSpec& alg = full.module->algebra();
  for (const auto& comp : full.parts) {
    const auto& u = comp.unknowns;
    std::vector<SparseVec> sym;
    std::vector<SparseVec> skew;
    const Scalar half(1, 2);
    for (const auto& v : comp.raw.basis()) {
      SparseVec t = transpose_map(u, alg, v);
      SparseVec s = v;
      axpy(s, Scalar(1), t);
      for (auto& e : s) e.val *= half;
      SparseVec a = v;
      axpy(a, Scalar(-1), t);
      for (auto& e : a) e.val *= half;
      if (!s.empty()) sym.push_back(std::move(s));
      if (!a.empty()) skew.push_back(std::move(a));
    }
    DecomposedComponent dc;
    dc.parity = comp.parity;
    dc.symmetric_raw = SolutionSpace::span_of(u.size(), std::move(sym));
    dc.skew_raw = SolutionSpace::span_of(u.size(), std::move(skew));
    dc.symmetric_interior = project(dc.symmetric_raw, comp.interior_columns);
    dc.skew_interior = project(dc.skew_raw, comp.interior_columns);

    // Each part must satisfy the identities on its own.
    ConstraintSystem sys = build_bider_system(*full.module, comp.parity, Symmetry::none, full.window);
    SparseMatrix a = sys.concatenated();
    auto kills = [&](const SolutionSpace& s) {
      return std::all_of(s.basis().begin(), s.basis().end(),
                         [&](const SparseVec& v) { return superbider::apply(a, v).empty(); });
    };
    dc.parts_satisfy_rows = kills(dc.symmetric_raw) && kills(dc.skew_raw);
    SolutionSpace both = sum(dc.symmetric_raw, dc.skew_raw);
    dc.direct_sum = both == comp.raw &&
                    both.dimension() == dc.symmetric_raw.dimension() + dc.skew_raw.dimension();
    out.parts.push_back(std::move(dc));
  }
  return out;
}

std::optional<HalfInt> single_shift(const MapUnknowns& u, const SparseVec& v) {
  if (v.empty()) return std::nullopt;
  HalfInt k = u.entry(v.front().col).k;
  for (const auto& e : v) {
    if (u.entry(e.col).k != k) return std::nullopt;
  }
  return k;
}

}  // namespace superbider
