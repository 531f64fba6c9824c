// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "recurrence_oracle.hpp"
#include "superbider/postlie.hpp"
#include "superbider/verifier.hpp"

using namespace superbider;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      details.push_back(what);
    }
  }
  void note(const std::string& what) { details.push_back(what); }
};

std::map<std::string, VerificationReport> g_reports;

const VerificationReport& report(const std::string& id) {
  auto it = g_reports.find(id);
  if (it == g_reports.end()) throw std::logic_error("no report for " + id);
  return it->second;
}

const SampleReport* sample(const std::string& id, const std::string& label) {
  for (const auto& s : report(id).samples) {
    if (s.label == label) return &s;
  }
  return nullptr;
}

std::string b_label(const std::string& b) { return "b=" + b; }

/// Every listed sample passes with the given interior dimension.
void require_dims(Outcome& o, const std::string& id, const std::map<std::string, std::size_t>& dims) {
  for (const auto& [b, dim] : dims) {
    const SampleReport* s = sample(id, b_label(b));
    if (!s) {
      o.require(false, id + " has no sample " + b_label(b));
      continue;
    }
    std::ostringstream what;
    what << id << " " << s->label << ": " << s->status << ", dim " << s->computed_dimension << " (want " << dim << ")";
    if (!s->witness.empty()) what << ", " << s->witness;
    o.require(s->status == "pass" && s->computed_dimension == dim, what.str());
  }
}

void require_case(Outcome& o, const std::string& id) {
  const VerificationReport& r = report(id);
  if (r.passed()) return;
  for (const auto& s : r.samples) {
    if (s.status != "pass" && s.status != "not asserted by paper") {
      o.require(false, id + " " + s.label + ": " + s.status + (s.witness.empty() ? "" : ", " + s.witness));
    }
  }
  o.require(false, id + " status " + r.status);
}

/// Number of shifts k with |k| <= K for which the family is nonzero on some
/// interior pair (m, n).
std::size_t admissible_shifts(const Window& w, const std::function<bool(int, int, int)>& nonzero) {
  std::size_t count = 0;
  int N = static_cast<int>(w.N_int.floor());
  int K = static_cast<int>(w.K.floor());
  for (int k = -K; k <= K; ++k) {
    bool seen = false;
    for (int m = -N; m <= N && !seen; ++m) {
      for (int n = -N; n <= N && !seen; ++n) seen = nonzero(m, n, k);
    }
    count += seen ? 1 : 0;
  }
  return count;
}

HalfInt lattice_bound(const AlgebraSpec& alg, int n) {
  for (const auto& f : alg.families()) {
    if (f.lattice == Lattice::half_odd) return HalfInt::from_twice(2 * n - 1);
  }
  return n;
}

Outcome criterion1() {
  Outcome o;
  auto t0 = Clock::now();
  for (const char* name : {"virasoro", "w0b", "svir-ramond", "sw22", "bms3-n1", "n2-ramond", "hv-super"}) {
    std::vector<Params> params = {{}};
    if (std::string(name) == "w0b") params = {{{"b", Scalar(0)}}, {{"b", Scalar(1)}}, {{"b", Scalar(2)}}};
    for (const auto& p : params) {
      AlgebraSpec alg = get_algebra({name, p});
      Window w(lattice_bound(alg, 8), 0, 1);
      auto j = check_super_jacobi(alg, w);
      auto s = check_super_skew(alg, w);
      o.require(j.pass, std::string(name) + " jacobi " + j.describe());
      o.require(s.pass, std::string(name) + " skew " + s.describe());
    }
  }
  for (const auto& b : {Scalar(-1), Scalar(-1, 2), Scalar(0), Scalar(1, 2), Scalar(1), Scalar(2)}) {
    auto f = get_module({"density-F", {{"b", b}}}, {"virasoro", {}});
    auto fs = get_module({"density-Fsuper", {{"b", b}}}, {"svir-ramond", {}});
    auto a = check_module_axiom(f, Window(8, 0, 1));
    auto c = check_module_axiom(fs, Window(8, 0, 1));
    o.require(a.pass, "density-F b=" + b.str() + " " + a.describe());
    o.require(c.pass, "density-Fsuper b=" + b.str() + " " + c.describe());
  }
  double secs = seconds_since(t0);
  o.require(secs < 60, "structural checks took " + std::to_string(secs) + " s");
  o.note("structural checks " + std::to_string(secs) + " s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  require_dims(o, "L3.1", {{"-1", 1}, {"-1/2", 0}, {"0", 0}, {"1/2", 0}, {"1", 0}, {"2", 0}});
  return o;
}

Outcome criterion3() {
  Outcome o;
  require_dims(o, "T3.2", {{"-1", 1}, {"0", 0}, {"1/2", 0}, {"1", 0}, {"2", 0}});
  return o;
}

Outcome criterion4() {
  Outcome o;
  require_dims(o, "T3.3", {{"-1", 0}, {"-1/2", 0}, {"1/2", 0}, {"2", 0}});
  for (int b : {0, 1}) {
    const SampleReport* s = sample("T3.3", b_label(std::to_string(b)));
    if (!s) {
      o.require(false, "T3.3 missing b=" + std::to_string(b));
      continue;
    }
    std::size_t shifts = admissible_shifts(s->window, [b](int m, int n, int k) { return b == 0 || m + n + k != 0; });
    o.require(s->status == "pass", "T3.3 " + s->label + ": " + s->status + " " + s->witness);
    o.require(s->expected_in_computed && s->computed_in_expected, "T3.3 " + s->label + " containment");
    o.require(s->computed_dimension == shifts, "T3.3 " + s->label + ": dim " +
                                                   std::to_string(s->computed_dimension) + ", shifts " +
                                                   std::to_string(shifts));
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  require_case(o, "C3.4");
  const SampleReport* vir = sample("C3.4", "virasoro");
  o.require(vir && vir->computed_dimension == 0, "Vir symmetric space not zero");
  require_case(o, "C3.5");
  for (const auto& s : report("C3.5").samples) {
    if (s.status != "pass") {
      o.note("W(0,b) " + s.label + ": computed dim " + std::to_string(s.computed_dimension) + ", family dim " +
             std::to_string(s.expected_dimension));
    }
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  require_dims(o, "L4.3", {{"-1", 1}, {"-1/2", 0}, {"0", 0}, {"1/2", 0}, {"1", 0}});
  require_case(o, "T4.4");
  require_dims(o, "T4.4", {{"-1", 1}, {"-1/2", 0}, {"0", 0}, {"1/2", 0}, {"1", 0}});
  require_case(o, "T4.5");
  for (const auto& s : report("T4.5").samples) {
    o.require(s.space && s.space->parts.size() == 2, "T4.5 " + s.label + " did not solve both parities");
    o.require(s.computed_dimension == 0, "T4.5 " + s.label + " nonzero");
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  for (const char* id : {"T5.1", "T5.2", "T5.4", "T5.6"}) {
    require_case(o, id);
    for (const auto& s : report(id).samples) {
      o.require(s.computed_dimension == 0, std::string(id) + " nonzero");
      o.require(s.space && s.space->parts.size() == 2, std::string(id) + " did not solve both parities");
    }
  }
  require_case(o, "T5.8");
  const SampleReport* s = sample("T5.8", "hv-super");
  if (s) {
    std::size_t shifts = admissible_shifts(s->window, [](int, int, int) { return true; });
    o.require(s->computed_dimension == shifts,
              "T5.8 dim " + std::to_string(s->computed_dimension) + ", shifts " + std::to_string(shifts));
  } else {
    o.require(false, "T5.8 sample missing");
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  require_case(o, "T6.3");
  for (const auto& s : report("T6.3").samples) {
    o.require(s.postlie != nullptr, s.label + " has no post-Lie result");
    if (!s.postlie) continue;
    o.require(s.postlie->status == "linear" && s.postlie->quadratic_vanishes,
              s.label + " quadratic terms do not vanish");
    o.require(s.computed_dimension == 0, s.label + " post-Lie dimension " + std::to_string(s.computed_dimension));
  }
  AlgebraSpec hv = get_algebra({"hv-super", {}});
  PostLieResult r = solve_postlie(hv, Window(5, 2, 2));
  auto rows = r.rows_for(hv.gen("L", 2), hv.gen("L", 1), hv.gen("L", 3));
  std::vector<SparseVec> vecs;
  for (const auto* row : rows) vecs.push_back(row->linear);
  auto n = static_cast<uint32_t>(r.parameters.size());
  SolutionSpace span = SolutionSpace::span_of(n, vecs);
  o.require(n > 0, "S has no symmetric parameters");
  for (uint32_t i = 0; i < n; ++i) {
    o.require(contains(span, make_sparse({{i, Scalar(1)}})),
              "triple (L_2,L_1,L_3) does not force t" + std::to_string(i) + " = 0");
  }
  o.require(r.dimension() == 0 && r.quadratic_vanishes, "S at N=5, K=2 not trivial");
  PostLieResult w1 = solve_postlie(get_algebra({"w0b", {{"b", Scalar(1)}}}), Window(4, 1, 2));
  o.note("w0b b=1 (outside the claim) has post-Lie dimension " + std::to_string(w1.dimension()));
  return o;
}

Outcome criterion9() {
  Outcome o;
  for (int b : {0, 1, 2, -1}) {
    auto cmp = oracle::compare_with_engine(b, 3, 1);
    o.require(cmp.same_span && cmp.central_zero,
              "b=" + std::to_string(b) + ": engine dim " + std::to_string(cmp.engine_dimension) + ", oracle dim " +
                  std::to_string(cmp.oracle_dimension));
  }
  return o;
}

Outcome criterion10() {
  Outcome o;
  auto t0 = Clock::now();
  for (const auto& c : theorem_cases()) {
    const VerificationReport& base = report(c.id);
    for (const auto& s : base.samples) {
      TheoremCase one = c;
      one.samples.clear();
      for (const auto& cs : c.samples) {
        if (cs.label == s.label) one.samples.push_back(cs);
      }
      Window wide(s.window.N + HalfInt(2), s.window.K, s.window.N_int);
      VerificationReport r = verify(one, {wide, std::nullopt, Exec::parallel});
      std::string now = r.samples.empty() ? "missing" : r.samples[0].status;
      o.require(now == s.status, c.id + " " + s.label + ": " + s.status + " -> " + now + " at N=" + wide.N.str());
    }
  }
  o.note("stability reruns " + std::to_string(seconds_since(t0)) + " s");

  struct Q {
    std::string label;
    ModuleSpec mod;
  };
  std::vector<Q> queries = {
      {"Vir on F_-1", get_module({"density-F", {{"b", Scalar(-1)}}}, {"virasoro", {}})},
      {"SVir on F_-1", get_module({"density-Fsuper", {{"b", Scalar(-1)}}}, {"svir-ramond", {}})},
      {"W(0,0) adjoint", adjoint_module(get_algebra({"w0b", {{"b", Scalar(0)}}}))},
  };
  for (const auto& q : queries) {
    BiderSpace full = solve_bider(q.mod, ParityChoice::both, Symmetry::none, Window(5, 2, 2));
    Decomposition d = decompose(full);
    o.require(d.valid(), q.label + ": full space is not symmetric (+) skew");
  }
  return o;
}

std::string run_cli(const std::string& args, int& code) {
  std::string cmd = std::string(SUPERBIDER_BIN) + " " + args;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("cannot run " + cmd);
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

Outcome criterion11() {
  Outcome o;
  int c1 = 0, c2 = 0;
  auto t0 = Clock::now();
  std::string a = run_cli("verify-paper --json", c1);
  double first = seconds_since(t0);
  std::string b = run_cli("verify-paper --json", c2);
  o.require(!a.empty() && a == b, "verify-paper --json output differs between runs");
  o.require(c1 == c2, "exit codes differ between runs");
  o.require(first < 300, "verify-paper took " + std::to_string(first) + " s");
  o.note("verify-paper " + std::to_string(first) + " s, " + std::to_string(a.size()) + " bytes, exit " +
         std::to_string(c1));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> expect_fail;
  std::vector<int> only;
  app.add_option("--expect-fail", expect_fail, "criteria known to fail");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},   {5, criterion5},   {6, criterion6},
      {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}, {11, criterion11},
  };
  std::set<int> selected(only.begin(), only.end());
  std::set<int> expected_failures(expect_fail.begin(), expect_fail.end());

  auto t0 = Clock::now();
  bool needs_reports = false;
  for (int id : {2, 3, 4, 5, 6, 7, 8, 10}) needs_reports |= selected.empty() || selected.count(id);
  if (needs_reports) {
    for (auto& r : verify_all()) g_reports.emplace(r.case_id, std::move(r));
  }

  int unexpected = 0;
  for (auto& [id, fn] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    bool want_fail = expected_failures.count(id) > 0;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL");
    if (want_fail) std::cout << (o.pass ? " (expected FAIL)" : " (expected)");
    std::cout << "\n";
    for (const auto& d : o.details) std::cout << "    " << d << "\n";
    std::cout.flush();
    if (o.pass == want_fail) ++unexpected;
  }
  std::cout << "total " << seconds_since(t0) << " s\n";
  return unexpected == 0 ? 0 : 1;
}
