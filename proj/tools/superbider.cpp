#include <array>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "superbider/bider_engine.hpp"
#include "superbider/catalog.hpp"
#include "superbider/postlie.hpp"
#include "superbider/report.hpp"
#include "superbider/verifier.hpp"

using namespace superbider;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WindowFlags {
  std::string N;
  std::string K = "2";
  std::string N_int = "2";
};

struct Common {
  std::string algebra;
  std::string module;
  bool adjoint = false;
  std::vector<std::string> params;
  WindowFlags window;
  bool json = false;
  std::string output;
  bool timing = false;
  bool serial = false;
};

void add_window_flags(CLI::App* cmd, WindowFlags& w) {
  cmd->add_option("-N", w.N, "generator index bound (integer or p/2)");
  cmd->add_option("-K", w.K, "degree-shift bound")->capture_default_str();
  cmd->add_option("--n-int", w.N_int, "interior bound")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, Common& c) {
  cmd->add_flag("--json", c.json, "print the JSON report");
  cmd->add_option("-o,--output", c.output, "write the JSON report to a file");
  cmd->add_flag("--timing", c.timing, "record elapsed_ms in the report");
  cmd->add_flag("--serial", c.serial, "use the serial reference solver");
}

Params parse_params(const std::vector<std::string>& raw) {
  Params p;
  for (const auto& s : raw) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + s + "'");
    try {
      p[s.substr(0, eq)] = parse_rational(s.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw UsageError("bad value for parameter '" + s.substr(0, eq) + "': " + e.what());
    }
  }
  return p;
}

std::vector<std::string> required_params(const std::string& name) {
  for (const auto& e : list_catalog()) {
    if (e.name == name) return e.required_params;
  }
  return {};
}

/// Routes each parameter to whichever of algebra / module declares it.
std::pair<CatalogKey, std::optional<CatalogKey>> resolve_keys(const Common& c) {
  if (c.algebra.empty()) throw UsageError("--algebra is required");
  Params all = parse_params(c.params);
  CatalogKey alg{c.algebra, {}};
  std::optional<CatalogKey> mod;
  if (!c.module.empty()) mod = CatalogKey{c.module, {}};
  for (const auto& [k, v] : all) {
    auto ar = required_params(c.algebra);
    if (std::find(ar.begin(), ar.end(), k) != ar.end()) {
      alg.params[k] = v;
    } else if (mod) {
      mod->params[k] = v;
    } else {
      alg.params[k] = v;
    }
  }
  return {alg, mod};
}

Window make_window(const WindowFlags& f, const AlgebraSpec& alg) {
  try {
    Window def = default_window(alg);
    HalfInt n = f.N.empty() ? def.N : parse_halfint(f.N);
    HalfInt k = parse_halfint(f.K);
    HalfInt ni = parse_halfint(f.N_int);
    if (ni > n) ni = n;
    return Window(n, k, ni);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad window: ") + e.what());
  }
}

void emit_json(const Common& c, const ojson& j) {
  std::string text = j.dump(2) + "\n";
  if (!c.output.empty()) {
    std::ofstream out(c.output);
    if (!out) throw UsageError("cannot write " + c.output);
    out << text;
  }
  if (c.json) std::cout << text;
}

ojson elapsed(const Common& c, std::chrono::steady_clock::time_point t0) {
  if (!c.timing) return nullptr;
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
}

ojson header(const std::string& command, const CatalogKey& alg, const std::optional<CatalogKey>& mod) {
  ojson j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["algebra"] = alg.name;
  j["module"] = mod ? mod->name : "adjoint";
  Params all = alg.params;
  if (mod) all.insert(mod->params.begin(), mod->params.end());
  j["params"] = params_json(all);
  return j;
}

std::string lattice_text(const Family& f) {
  if (f.central) return "central";
  return f.lattice == Lattice::integer ? "Z" : "Z+1/2";
}

// --- commands ---------------------------------------------------------------

int cmd_list(bool json) {
  auto entries = list_catalog();
  if (json) {
    ojson arr = ojson::array();
    for (const auto& e : entries) {
      ojson j;
      j["name"] = e.name;
      j["kind"] = e.is_module ? "module" : "algebra";
      if (e.is_module) j["over"] = e.over;
      j["params"] = e.required_params;
      ojson fams = ojson::array();
      for (const auto& f : e.families) {
        ojson fj;
        fj["name"] = f.name;
        fj["parity"] = to_string(f.parity);
        fj["lattice"] = lattice_text(f);
        fams.push_back(fj);
      }
      j["families"] = fams;
      arr.push_back(j);
    }
    std::cout << arr.dump(2) << "\n";
    return kExitPass;
  }
  for (const auto& e : entries) {
    std::cout << e.name << "  " << (e.is_module ? "module over " + e.over : std::string("algebra"));
    if (!e.required_params.empty()) {
      std::cout << "  params:";
      for (const auto& p : e.required_params) std::cout << " " << p;
    }
    std::cout << "  families:";
    for (const auto& f : e.families) std::cout << " " << f.name << "(" << to_string(f.parity) << ", " << lattice_text(f) << ")";
    std::cout << "\n";
  }
  return kExitPass;
}

int cmd_check(const Common& c) {
  auto t0 = std::chrono::steady_clock::now();
  auto [akey, mkey] = resolve_keys(c);
  AlgebraSpec alg = get_algebra(akey);
  Window w = make_window(c.window, alg);
  ojson j = header("check", akey, mkey);
  j["window"] = window_json(w);
  ojson checks = ojson::array();
  bool pass = true;
  auto record = [&](const std::string& name, const CheckReport& r) {
    pass = pass && r.pass;
    ojson cj;
    cj["check"] = name;
    cj["status"] = r.pass ? "pass" : "fail";
    cj["checked"] = r.checked;
    if (!r.pass) cj["witness"] = r.describe();
    checks.push_back(cj);
    if (!c.json) {
      std::cout << name << ": " << (r.pass ? "pass" : "FAIL") << " (" << r.checked << " tuples)";
      if (!r.pass) std::cout << "  " << r.describe();
      std::cout << "\n";
    }
  };
  if (!c.json) std::cout << akey.str() << " " << w.str() << "\n";
  record("super-jacobi", check_super_jacobi(alg, w));
  record("super-skew", check_super_skew(alg, w));
  if (mkey) record("module-axiom", check_module_axiom(get_module(*mkey, akey), w));
  j["checks"] = checks;
  j["status"] = pass ? "pass" : "fail";
  j["elapsed_ms"] = elapsed(c, t0);
  emit_json(c, j);
  return pass ? kExitPass : kExitFail;
}

int cmd_maps(const Common& c, bool centroid, const std::string& parity_s, const std::string& symmetry_s) {
  auto t0 = std::chrono::steady_clock::now();
  auto [akey, mkey] = resolve_keys(c);
  if (c.adjoint && mkey) throw UsageError("--adjoint and --module are exclusive");
  if (!c.adjoint && !mkey) throw UsageError("one of --module or --adjoint is required");
  ParityChoice parity;
  Symmetry symmetry;
  try {
    parity = parse_parity(parity_s);
    symmetry = parse_symmetry(symmetry_s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  AlgebraSpec alg = get_algebra(akey);
  ModuleSpec mod = mkey ? get_module(*mkey, akey) : adjoint_module(alg);
  Window w = make_window(c.window, alg);
  if (window_too_small(w)) throw UsageError("window too small: N - N_int must be at least 2 (" + w.str() + ")");
  Exec exec = c.serial ? Exec::serial : Exec::parallel;
  BiderSpace space = centroid ? solve_centroid(mod, parity, w, exec) : solve_bider(mod, parity, symmetry, w, exec);
  auto forms = basis_forms(space);
  auto fams = family_forms(forms);

  ojson j = header(centroid ? "centroid" : "bider", akey, mkey);
  j["window"] = window_json(w);
  j["parity"] = to_string(parity);
  j["symmetry"] = centroid ? "none" : to_string(symmetry);
  j["interior_dimension"] = space.interior_dimension();
  j["raw_dimension"] = space.raw_dimension();
  j["families"] = fams;
  j["basis"] = basis_json(forms);
  j["status"] = "ok";
  j["witnesses"] = ojson::array();
  j["elapsed_ms"] = elapsed(c, t0);
  if (!c.json) {
    std::cout << (centroid ? "centroid " : "bider ") << akey.str() << " -> " << (mkey ? mkey->str() : "adjoint")
              << "  parity=" << to_string(parity);
    if (!centroid) std::cout << " symmetry=" << to_string(symmetry);
    std::cout << "  " << w.str() << "\n";
    std::cout << "interior dimension: " << space.interior_dimension() << "\n";
    for (const auto& f : fams) std::cout << "  " << f << "\n";
  }
  emit_json(c, j);
  return kExitPass;
}

GenId parse_generator(const AlgebraSpec& alg, std::string text) {
  auto us = text.rfind('_');
  if (us == std::string::npos || us == 0) throw UsageError("generator must look like L_2 or G_{1/2}, got '" + text + "'");
  std::string fam = text.substr(0, us);
  std::string idx = text.substr(us + 1);
  if (idx.size() >= 2 && idx.front() == '{' && idx.back() == '}') idx = idx.substr(1, idx.size() - 2);
  try {
    return alg.gen(fam, parse_halfint(idx));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::array<GenId, 3> parse_triple(const AlgebraSpec& alg, const std::string& text) {
  std::array<GenId, 3> out;
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    auto comma = text.find(',', start);
    if ((i < 2) == (comma == std::string::npos)) throw UsageError("--triple expects x,y,z, got '" + text + "'");
    out[i] = parse_generator(alg, text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    start = comma + 1;
  }
  return out;
}

int cmd_postlie(const Common& c, bool rows, const std::vector<std::string>& triples) {
  auto t0 = std::chrono::steady_clock::now();
  auto [akey, mkey] = resolve_keys(c);
  if (mkey) throw UsageError("postlie takes no --module");
  AlgebraSpec alg = get_algebra(akey);
  Window w = make_window(c.window, alg);
  if (window_too_small(w)) throw UsageError("window too small: N - N_int must be at least 2 (" + w.str() + ")");
  PostLieResult r = solve_postlie(alg, w, c.serial ? Exec::serial : Exec::parallel);
  bool asserted = akey.name != "w0b";
  std::string status;
  if (!asserted) {
    status = "not asserted by paper";
  } else {
    status = r.status == "linear" && r.quadratic_vanishes && r.dimension() == 0 ? "pass" : "fail";
  }
  ojson j = header("postlie", akey, std::nullopt);
  j["window"] = window_json(w);
  j["parity"] = "even";
  j["symmetry"] = "symmetric";
  j["interior_dimension"] = r.dimension();
  BiderSpace products = r.symmetric;
  products.parts.front().interior = r.structures;
  auto forms = basis_forms(products);
  j["families"] = family_forms(forms);
  j["basis"] = basis_json(forms);
  j["obstruction"] = postlie_json(r, alg, rows);
  ojson selected = ojson::array();
  for (const auto& t : triples) {
    auto [x, y, z] = parse_triple(alg, t);
    ojson tj;
    tj["triple"] = "(" + alg.name_of(x) + "," + alg.name_of(y) + "," + alg.name_of(z) + ")";
    ojson eqs = ojson::array();
    for (const auto* row : r.rows_for(x, y, z)) {
      std::string eq;
      for (const auto& e : row->linear) {
        eq += (eq.empty() ? "" : " + ") + (e.val.is_one() ? "" : e.val.str() + "*") + "t" + std::to_string(e.col);
      }
      ojson ej;
      ej["output"] = alg.name_of(row->output);
      ej["equation"] = eq + " = 0";
      eqs.push_back(ej);
    }
    tj["used"] = !eqs.empty();
    tj["rows"] = eqs;
    selected.push_back(tj);
  }
  if (!triples.empty()) j["obstruction"]["selected_triples"] = selected;
  j["status"] = status;
  ojson wit = ojson::array();
  if (!r.quadratic_witness.empty()) wit.push_back(r.quadratic_witness);
  j["witnesses"] = wit;
  j["elapsed_ms"] = elapsed(c, t0);
  if (!c.json) {
    std::cout << "postlie " << akey.str() << "  " << w.str() << "\n";
    std::cout << "symmetric biderivation parameters: " << r.parameters.size() << "\n";
    std::cout << "obstruction: " << r.rows.size() << " linear rows from " << r.triples_used << " triples; quadratic "
              << (r.quadratic_vanishes ? "terms vanish" : "terms do not vanish: " + r.quadratic_witness) << "\n";
    for (const auto& f : j["obstruction"]["forced_parameters"]) {
      std::cout << "  t" << f["parameter"].get<std::size_t>() << " = 0 from " << f["triple"].get<std::string>() << " at "
                << f["output"].get<std::string>() << "\n";
    }
    for (const auto& tj : selected) {
      std::cout << "triple " << tj["triple"].get<std::string>() << (tj["used"].get<bool>() ? ":" : ": no rows") << "\n";
      for (const auto& ej : tj["rows"]) {
        std::cout << "  at " << ej["output"].get<std::string>() << ": " << ej["equation"].get<std::string>() << "\n";
      }
    }
    std::cout << "interior dimension: " << r.dimension() << "  status: " << status << "\n";
  }
  emit_json(c, j);
  if (!asserted) return kExitPass;
  return status == "pass" ? kExitPass : kExitFail;
}

int cmd_verify(const Common& c, const std::vector<std::string>& case_ids) {
  auto t0 = std::chrono::steady_clock::now();
  VerifyOptions opts;
  opts.exec = c.serial ? Exec::serial : Exec::parallel;
  bool window_given = !c.window.N.empty();
  if (window_given) opts.window = make_window(c.window, get_algebra(CatalogKey{"virasoro", {}}));
  if (!c.params.empty()) opts.params = parse_params(c.params);

  std::vector<const TheoremCase*> selected;
  if (case_ids.empty()) {
    for (const auto& tc : theorem_cases()) selected.push_back(&tc);
  } else {
    for (const auto& id : case_ids) {
      try {
        selected.push_back(&find_case(id));
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
  }
  if (opts.params) {
    for (const auto* tc : selected) {
      if (!tc->sample_for) throw UsageError("case " + tc->id + " takes no parameters");
    }
  }

  ojson j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "verify-paper";
  j["params"] = params_json(opts.params.value_or(Params{}));
  j["window"] = opts.window ? window_json(*opts.window) : ojson(nullptr);
  ojson cases = ojson::array();
  std::size_t passed = 0;
  for (const auto* tc : selected) {
    VerificationReport r = verify(*tc, opts);
    if (r.passed()) ++passed;
    cases.push_back(verification_json(*tc, r));
    if (!c.json) {
      std::cout << tc->id << "  " << r.status << "  " << tc->title << "\n";
      for (const auto& s : r.samples) {
        std::cout << "    " << s.label << "  " << s.status << "  dim " << s.computed_dimension << "/"
                  << s.expected_dimension << "  expected " << s.expected_text << "\n";
        if (!s.witness.empty()) std::cout << "      witness: " << s.witness << "\n";
        for (const auto& n : s.notes) std::cout << "      note: " << n << "\n";
      }
    }
  }
  j["cases"] = cases;
  j["passed"] = passed;
  j["total"] = selected.size();
  j["status"] = passed == selected.size() ? "pass" : "fail";
  j["elapsed_ms"] = elapsed(c, t0);
  if (!c.json) std::cout << passed << "/" << selected.size() << " cases pass\n";
  emit_json(c, j);
  return passed == selected.size() ? kExitPass : kExitFail;
}

void apply_thread_env() {
  const char* env = std::getenv("SUPERBIDER_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw UsageError("SUPERBIDER_THREADS must be a positive integer");
  set_solver_threads(static_cast<int>(n));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Super-biderivations, centroids and post-Lie structures on graded Lie superalgebras"};
  app.require_subcommand(1);

  bool list_json = false;
  auto* list = app.add_subcommand("list", "show catalog algebras and modules");
  list->add_flag("--json", list_json, "machine-readable listing");

  Common check_c;
  auto* check = app.add_subcommand("check", "super-Jacobi, super-skew and module-axiom checks");
  check->add_option("--algebra", check_c.algebra, "catalog algebra")->required();
  check->add_option("--module", check_c.module, "also check this module");
  check->add_option("--param", check_c.params, "parameter key=value (p or p/q)");
  add_window_flags(check, check_c.window);
  add_output_flags(check, check_c);

  Common bider_c;
  std::string parity = "both";
  std::string symmetry = "none";
  auto* bider = app.add_subcommand("bider", "solve for super-biderivations");
  bider->add_option("--algebra", bider_c.algebra, "catalog algebra")->required();
  bider->add_option("--module", bider_c.module, "target module");
  bider->add_flag("--adjoint", bider_c.adjoint, "target the adjoint module");
  bider->add_option("--param", bider_c.params, "parameter key=value (p or p/q)");
  bider->add_option("--parity", parity, "even|odd|both")->capture_default_str();
  bider->add_option("--symmetry", symmetry, "none|symmetric|skew")->capture_default_str();
  add_window_flags(bider, bider_c.window);
  add_output_flags(bider, bider_c);

  Common cent_c;
  std::string cent_parity = "both";
  auto* cent = app.add_subcommand("centroid", "solve for the centroid Cent_L(M)");
  cent->add_option("--algebra", cent_c.algebra, "catalog algebra")->required();
  cent->add_option("--module", cent_c.module, "target module");
  cent->add_flag("--adjoint", cent_c.adjoint, "target the adjoint module");
  cent->add_option("--param", cent_c.params, "parameter key=value (p or p/q)");
  cent->add_option("--parity", cent_parity, "even|odd|both")->capture_default_str();
  add_window_flags(cent, cent_c.window);
  add_output_flags(cent, cent_c);

  Common pl_c;
  bool pl_rows = false;
  std::vector<std::string> pl_triples;
  auto* pl = app.add_subcommand("postlie", "commutative post-Lie structures");
  pl->add_option("--algebra", pl_c.algebra, "catalog algebra")->required();
  pl->add_option("--param", pl_c.params, "parameter key=value (p or p/q)");
  pl->add_flag("--rows", pl_rows, "list every obstruction row in the JSON report");
  pl->add_option("--triple", pl_triples, "show the obstruction rows of a triple, e.g. L_2,L_1,L_3");
  add_window_flags(pl, pl_c.window);
  add_output_flags(pl, pl_c);

  Common ver_c;
  std::vector<std::string> case_ids;
  auto* ver = app.add_subcommand("verify-paper", "run the theorem verification suite");
  ver->add_option("--case", case_ids, "case id (repeatable)");
  ver->add_option("--param", ver_c.params, "parameter key=value replacing the default samples");
  add_window_flags(ver, ver_c.window);
  add_output_flags(ver, ver_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    apply_thread_env();
    if (*list) return cmd_list(list_json);
    if (*check) return cmd_check(check_c);
    if (*bider) return cmd_maps(bider_c, false, parity, symmetry);
    if (*cent) return cmd_maps(cent_c, true, cent_parity, "none");
    if (*pl) return cmd_postlie(pl_c, pl_rows, pl_triples);
    if (*ver) return cmd_verify(ver_c, case_ids);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
