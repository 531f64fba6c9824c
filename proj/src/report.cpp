#include "superbider/report.hpp"

#include <map>
#include <numeric>
#include <sstream>

namespace superbider {

namespace {

struct Point {
  HalfInt m;
  HalfInt n;
  Scalar v;
};

/// Solves v = a*m + b*n + c exactly; free unknowns are set to zero.
std::optional<std::array<Scalar, 3>> fit_affine(const std::vector<Point>& pts, bool arity2) {
  std::vector<std::array<Scalar, 4>> rows;
  for (const auto& p : pts) rows.push_back({p.m.to_scalar(), arity2 ? p.n.to_scalar() : Scalar(0), Scalar(1), p.v});
  std::array<int, 3> pivot_row{-1, -1, -1};
  std::size_t r = 0;
  for (int col = 0; col < 3 && r < rows.size(); ++col) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][col].is_zero()) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    Scalar inv = Scalar(1) / rows[r][col];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col].is_zero()) continue;
      Scalar f = rows[i][col];
      for (int j = 0; j < 4; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivot_row[col] = static_cast<int>(r);
    ++r;
  }
  for (std::size_t i = r; i < rows.size(); ++i) {
    if (!rows[i][3].is_zero()) return std::nullopt;
  }
  std::array<Scalar, 3> sol{Scalar(0), Scalar(0), Scalar(0)};
  for (int col = 0; col < 3; ++col) {
    if (pivot_row[col] >= 0) sol[col] = rows[pivot_row[col]][3];
  }
  return sol;
}

/// "+ 2m", "- 1/2 n" style pieces joined into "2m-1/2n+3".
std::string linear_text(const std::vector<std::pair<Scalar, std::string>>& terms) {
  std::string out;
  for (const auto& [coef, var] : terms) {
    if (coef.is_zero()) continue;
    bool neg = coef.sign() < 0;
    Scalar mag = neg ? -coef : coef;
    if (!out.empty() || neg) out += neg ? "-" : "+";
    if (var.empty()) {
      out += mag.str();
    } else {
      if (!mag.is_one()) out += mag.str();
      out += var;
    }
  }
  return out.empty() ? "0" : out;
}

std::string index_text(bool arity2, const std::string& shift) {
  std::string s = arity2 ? "m+n" : "m";
  if (shift.empty() || shift == "0") return s;
  return s + (shift[0] == '-' ? "" : "+") + shift;
}

std::string rule_text(const ComponentForm& cf, bool arity2) {
  std::string index = cf.output_family + "_{" + index_text(arity2, cf.k.str()) + "}";
  std::string coef = linear_text({{cf.a, "m"}, {cf.b, "n"}, {cf.c, ""}});
  if (cf.a.is_zero() && cf.b.is_zero()) return cf.c.is_one() ? index : coef + " " + index;
  return "(" + coef + ") " + index;
}

std::string pair_text(const ModuleSpec& mod, const UnknownEntry& e) {
  const AlgebraSpec& alg = mod.algebra();
  std::string s = "(" + alg.family(e.x).name;
  if (e.y) s += "," + alg.family(*e.y).name;
  return s + ")";
}

Scalar gcd_scalar_content(const std::vector<Scalar>& xs) {
  // Smallest positive rational c with every x/c an integer.
  mpz_class num = 0;
  mpz_class den = 1;
  for (const auto& x : xs) {
    if (x.is_zero()) continue;
    mpq_class q = x.to_mpq();
    mpz_class n = abs(q.get_num());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), n.get_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
  }
  if (num == 0) return Scalar(1);
  return Scalar(mpq_class(num, den));
}

ComponentForm make_component(const ModuleSpec& mod, const MapUnknowns& u, const std::vector<Entry>& entries) {
  const UnknownEntry& first = u.entry(entries.front().col);
  bool arity2 = first.y.has_value();
  ComponentForm cf;
  cf.pair = pair_text(mod, first);
  cf.output_family = mod.families()[first.out_family].name;
  cf.k = first.k;
  std::vector<Point> pts;
  for (const auto& e : entries) {
    const UnknownEntry& ue = u.entry(e.col);
    pts.push_back(Point{ue.x.index, ue.y ? ue.y->index : HalfInt(0), e.val});
  }
  auto fit = fit_affine(pts, arity2);
  if (!fit) {
    cf.affine = false;
    std::vector<std::string> terms;
    for (const auto& e : entries) {
      if (e.val.is_zero()) continue;
      const UnknownEntry& ue = u.entry(e.col);
      std::string key = "(" + mod.algebra().name_of(ue.x) + (ue.y ? "," + mod.algebra().name_of(*ue.y) : "") + ")";
      cf.table.emplace_back(key, e.val);
      terms.push_back((e.val.is_one() ? "" : e.val.str() + " ") + mod.name_of(GenId{ue.out_family, ue.out_index}) +
                      " at " + key);
    }
    if (terms.size() <= 4) {
      for (const auto& t : terms) cf.rule += (cf.rule.empty() ? "" : "; ") + t;
    } else {
      cf.rule = "non-affine (" + std::to_string(terms.size()) + " coefficients)";
    }
    return cf;
  }
  cf.a = (*fit)[0];
  cf.b = (*fit)[1];
  cf.c = (*fit)[2];
  cf.rule = rule_text(cf, arity2);
  return cf;
}

}  // namespace

std::vector<BasisForm> basis_forms(const BiderSpace& space) {
  std::vector<BasisForm> out;
  for (const auto& part : space.parts) {
    const MapUnknowns& u = part.unknowns;
    for (const auto& v : part.interior.basis()) {
      // Group by component in column order.
      std::vector<std::pair<std::tuple<uint16_t, uint16_t, uint16_t, HalfInt>, std::vector<Entry>>> groups;
      std::map<std::tuple<uint16_t, uint16_t, uint16_t, HalfInt>, std::size_t> where;
      for (const auto& e : v) {
        const UnknownEntry& ue = u.entry(e.col);
        auto key = std::make_tuple(ue.x.family, ue.y ? ue.y->family : uint16_t(0xffff), ue.out_family, ue.k);
        auto it = where.find(key);
        if (it == where.end()) {
          where.emplace(key, groups.size());
          groups.emplace_back(key, std::vector<Entry>{e});
        } else {
          groups[it->second].second.push_back(e);
        }
      }
      // Fill each component with its zero coefficients on the interior.
      for (auto& [key, entries] : groups) {
        std::vector<Entry> full;
        std::size_t pos = 0;
        for (uint32_t col : part.interior_columns) {
          const UnknownEntry& ue = u.entry(col);
          auto ck = std::make_tuple(ue.x.family, ue.y ? ue.y->family : uint16_t(0xffff), ue.out_family, ue.k);
          if (ck != key) continue;
          while (pos < entries.size() && entries[pos].col < col) ++pos;
          bool hit = pos < entries.size() && entries[pos].col == col;
          full.push_back(Entry{col, hit ? entries[pos].val : Scalar(0)});
        }
        entries = std::move(full);
      }
      // Rescale using the first component.
      Scalar scale(1);
      if (!groups.empty()) {
        ComponentForm lead = make_component(*space.module, u, groups.front().second);
        std::vector<Scalar> coeffs;
        if (lead.affine) {
          coeffs = {lead.a, lead.b, lead.c};
        } else {
          for (const auto& e : groups.front().second) coeffs.push_back(e.val);
        }
        Scalar content = gcd_scalar_content(coeffs);
        Scalar first_nonzero(1);
        for (const auto& c : coeffs) {
          if (!c.is_zero()) {
            first_nonzero = c;
            break;
          }
        }
        scale = Scalar(1) / content;
        if (first_nonzero.sign() < 0) scale = -scale;
      }
      BasisForm bf;
      bf.parity = part.parity;
      for (auto& [key, entries] : groups) {
        for (auto& e : entries) e.val *= scale;
        bf.components.push_back(make_component(*space.module, u, entries));
      }
      out.push_back(std::move(bf));
    }
  }
  return out;
}

std::vector<std::string> family_forms(const std::vector<BasisForm>& basis) {
  // Try to merge vectors that have one component each, on the same pair and
  // output family, whose constant term is a fixed multiple of k.
  std::vector<std::string> out;
  std::map<std::pair<std::string, std::string>, std::vector<const ComponentForm*>> single;
  std::vector<std::string> rest;
  for (const auto& b : basis) {
    if (b.components.size() == 1 && b.components.front().affine) {
      const auto& c = b.components.front();
      single[{c.pair, c.output_family}].push_back(&c);
    } else {
      std::string s;
      for (const auto& c : b.components) s += (s.empty() ? "" : ", ") + c.pair + " -> " + c.rule;
      rest.push_back(s);
    }
  }
  for (const auto& [key, comps] : single) {
    // Constant term c = c0 + lambda*k across the shifts.
    bool same = comps.size() > 1;
    std::optional<Scalar> c0;
    std::optional<Scalar> lambda;
    for (const auto* c : comps) {
      if (c->a != comps.front()->a || c->b != comps.front()->b) same = false;
    }
    if (same) {
      const ComponentForm* p = comps[0];
      const ComponentForm* q = comps[1];
      lambda = (q->c - p->c) / (q->k - p->k).to_scalar();
      c0 = p->c - *lambda * p->k.to_scalar();
      for (const auto* c : comps) {
        if (c->c != *c0 + *lambda * c->k.to_scalar()) same = false;
      }
    }
    const bool arity2 = key.first.find(',') != std::string::npos;
    if (same) {
      const Scalar& a = comps.front()->a;
      const Scalar& b = comps.front()->b;
      std::string index = key.second + "_{" + index_text(arity2, "k") + "}";
      std::string rule;
      if (a.is_zero() && b.is_zero() && lambda->is_zero()) {
        rule = c0->is_one() ? index : c0->str() + " " + index;
      } else {
        rule = "(" + linear_text({{a, "m"}, {b, "n"}, {*lambda, "k"}, {*c0, ""}}) + ") " + index;
      }
      std::string ks;
      for (const auto* c : comps) ks += (ks.empty() ? "" : ",") + c->k.str();
      out.push_back(key.first + " -> " + rule + " for k in {" + ks + "}");
    } else {
      for (const auto* c : comps) out.push_back(key.first + " -> " + c->rule);
    }
  }
  for (auto& s : rest) out.push_back(std::move(s));
  return out;
}

std::string window_value(HalfInt h) { return h.str(); }

nlohmann::ordered_json window_json(const Window& w) {
  nlohmann::ordered_json j;
  j["N"] = window_value(w.N);
  j["K"] = window_value(w.K);
  j["N_int"] = window_value(w.N_int);
  return j;
}

nlohmann::ordered_json params_json(const Params& p) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : p) j[k] = v.str();
  return j;
}

nlohmann::ordered_json basis_json(const std::vector<BasisForm>& basis) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& b : basis) {
    nlohmann::ordered_json comps = nlohmann::ordered_json::array();
    for (const auto& c : b.components) {
      nlohmann::ordered_json cj;
      cj["pair"] = c.pair;
      cj["output_family"] = c.output_family;
      cj["k"] = c.k.str();
      cj["rule"] = c.rule;
      if (!c.affine) {
        nlohmann::ordered_json t = nlohmann::ordered_json::object();
        for (const auto& [key, v] : c.table) t[key] = v.str();
        cj["coefficients"] = t;
      }
      comps.push_back(cj);
    }
    nlohmann::ordered_json bj;
    bj["parity"] = to_string(b.parity);
    bj["components"] = comps;
    bj["normalized"] = true;
    arr.push_back(bj);
  }
  return arr;
}

nlohmann::ordered_json postlie_json(const PostLieResult& r, const AlgebraSpec& alg, bool rows) {
  nlohmann::ordered_json j;
  j["solution_status"] = r.status;
  j["symmetric_parameters"] = r.parameters.size();
  nlohmann::ordered_json params = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.parameters.size(); ++i) {
    auto k = single_shift(r.symmetric.parts.front().unknowns, r.parameters[i]);
    nlohmann::ordered_json pj;
    pj["parameter"] = "t" + std::to_string(i);
    pj["k"] = k ? nlohmann::ordered_json(k->str()) : nlohmann::ordered_json(nullptr);
    params.push_back(pj);
  }
  j["parameters"] = params;
  j["triples_used"] = r.triples_used;
  j["linear_rows"] = r.rows.size();
  j["quadratic_terms_checked"] = r.quadratic_terms_checked;
  j["nested_products_evaluated"] = r.nested_products_evaluated;
  j["quadratic_vanishes"] = r.quadratic_vanishes;
  if (!r.quadratic_witness.empty()) j["quadratic_witness"] = r.quadratic_witness;
  // Parameters forced to zero by a single-term row, with the first triple that does it.
  nlohmann::ordered_json forced = nlohmann::ordered_json::array();
  std::vector<char> seen(r.parameters.size(), 0);
  for (const auto& row : r.rows) {
    if (row.linear.size() != 1 || seen[row.linear.front().col]) continue;
    seen[row.linear.front().col] = 1;
    nlohmann::ordered_json f;
    f["parameter"] = row.linear.front().col;
    f["triple"] = "(" + alg.name_of(row.x) + "," + alg.name_of(row.y) + "," + alg.name_of(row.z) + ")";
    f["output"] = alg.name_of(row.output);
    forced.push_back(f);
  }
  j["forced_parameters"] = forced;
  if (rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
      std::string eq;
      for (const auto& e : row.linear) {
        std::string c = e.val.str();
        eq += (eq.empty() ? "" : " + ") + (e.val.is_one() ? "" : c + "*") + "t" + std::to_string(e.col);
      }
      nlohmann::ordered_json rj;
      rj["triple"] = "(" + alg.name_of(row.x) + "," + alg.name_of(row.y) + "," + alg.name_of(row.z) + ")";
      rj["output"] = alg.name_of(row.output);
      rj["equation"] = eq + " = 0";
      arr.push_back(rj);
    }
    j["rows"] = arr;
  }
  return j;
}

nlohmann::ordered_json sample_json(const TheoremCase& c, const SampleReport& s) {
  nlohmann::ordered_json j;
  j["label"] = s.label;
  j["algebra"] = s.algebra;
  j["module"] = s.module;
  j["window"] = window_json(s.window);
  j["parity"] = to_string(c.parity);
  j["symmetry"] = c.kind == CaseKind::centroid ? "none" : to_string(c.symmetry);
  j["interior_dimension"] = s.computed_dimension;
  j["expected_dimension"] = s.expected_dimension;
  j["expected_family"] = s.expected_text;
  j["expected_in_computed"] = s.expected_in_computed;
  j["computed_in_expected"] = s.computed_in_expected;
  j["sound"] = s.sound;
  j["status"] = s.status;
  j["witness"] = s.witness;
  j["notes"] = s.notes;
  if (s.space) {
    auto forms = basis_forms(*s.space);
    j["families"] = family_forms(forms);
    j["basis"] = basis_json(forms);
  }
  if (s.postlie) j["obstruction"] = postlie_json(*s.postlie, s.postlie->symmetric.module->algebra(), false);
  return j;
}

nlohmann::ordered_json verification_json(const TheoremCase& c, const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["id"] = r.case_id;
  j["title"] = r.title;
  j["status"] = r.status;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& s : r.samples) arr.push_back(sample_json(c, s));
  j["samples"] = arr;
  return j;
}

}  // namespace superbider
