// Acceptance driver: one PASS/FAIL line per criterion.
//   liesym_acceptance               all criteria
//   liesym_acceptance --criterion N one criterion; exit 1 when it fails

#include "cli.hpp"
#include "liesym/detsolve.hpp"
#include "liesym/liealg.hpp"
#include "liesym/numverify.hpp"
#include "liesym/optsys.hpp"
#include "liesym/prolong.hpp"
#include "liesym/reduce.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace liesym;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(double v, const char* f = "%.3g") {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

nlohmann::json tool_json(std::vector<std::string> args) {
  args.push_back("--json");
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (code != cli::Exit::ok) throw std::runtime_error("liesym " + args[0] + " exited " + std::to_string(code) + ": " + e.str());
  return nlohmann::json::parse(o.str());
}

const std::string& rnc_file() {
  static const std::string p = testing::data_path("rnc.json");
  return p;
}
const PdeSystem& rnc() { return testing::rnc_spec().system; }

const nlohmann::json& transcription() {
  static const nlohmann::json j = nlohmann::json::parse(read_file(testing::data_path("rnc_paper.json")));
  return j;
}

const LieAlgebra& alg() {
  static const LieAlgebra a = [] {
    std::vector<VectorField> b;
    std::vector<std::string> l;
    for (const auto& g : testing::rnc_spec().expected_generators) {
      b.push_back(g.field);
      l.push_back(g.label);
    }
    return structure_constants(b, rnc(), l);
  }();
  return a;
}

std::vector<VectorField> fields_of(const std::vector<LabeledField>& g) {
  std::vector<VectorField> out;
  for (const auto& f : g) out.push_back(f.field);
  return out;
}

Outcome symmetry_recovery() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  auto j = tool_json({"symm", rnc_file(), "--degree", "2"});
  const double dt = seconds_since(t0);
  auto computed = fields_of(generators_from_json(j, rnc()));
  auto expected = fields_of(testing::rnc_spec().expected_generators);
  bool expected_in = true, computed_in = true;
  for (const auto& X : expected) expected_in = expected_in && in_span(X, computed, rnc());
  std::vector<std::string> extra;
  for (std::size_t k = 0; k < computed.size(); ++k)
    if (!in_span(computed[k], expected, rnc())) {
      computed_in = false;
      extra.push_back(to_string(computed[k], rnc()));
    }
  o.require(computed.size() == 4, "dimension " + std::to_string(computed.size()) + ", expected 4");
  o.require(expected_in, "X1..X4 not all in the computed span");
  std::string ex;
  for (const auto& e : extra) ex += (ex.empty() ? "" : ", ") + e;
  o.require(computed_in, "outside span{X1..X4}: " + ex);
  o.require(dt <= 30, "runtime " + fmt(dt) + " s > 30 s");
  o.note("span{X1..X4} inside computed span: " + std::string(expected_in ? "yes" : "no"));
  o.note(fmt(dt) + " s");
  return o;
}

Outcome lie_table_entries() {
  Outcome o;
  const auto ctx = algebra_context(alg());
  const auto lt = lie_table(alg());
  const auto& tr = transcription()["lie_table"];
  std::size_t match = 0, nonzero = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) {
      if (same_entry(tr[i][k].get<std::string>(), lt[i][k], ctx)) ++match;
      else o.require(false, "[X" + std::to_string(i + 1) + ", X" + std::to_string(k + 1) + "] = " + to_string(lt[i][k]));
      o.require(simplify(lt[i][k] + lt[k][i]).is_zero(), "antisymmetry fails");
      if (i < k && !lt[i][k].is_zero()) ++nonzero;
    }
  o.require(nonzero == 3, std::to_string(nonzero) + " nonzero brackets above the diagonal");
  o.note(std::to_string(match) + "/16 entries match; nonzero: [X1,X3]=" + to_string(lt[0][2]) +
         ", [X1,X4]=" + to_string(lt[0][3]) + ", [X2,X4]=" + to_string(lt[1][3]));
  return o;
}

Outcome flows_match() {
  Outcome o;
  auto j = tool_json({"flows", rnc_file()});
  ParseContext ctx = rnc().context();
  ctx.extended = true;
  ctx.declare("h", SymbolKind::group_param);
  const auto& maps = transcription()["flows"]["maps"];
  std::size_t ok = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    bool all = true;
    for (std::size_t c = 0; c < 5; ++c) {
      Expr ours = parse_expr(j["maps"][k]["images"][c].get<std::string>(), ctx);
      Expr theirs = parse_expr(maps[k][c].get<std::string>(), ctx);
      all = all && simplify(ours - theirs).is_zero();
    }
    if (all) ++ok;
    else o.require(false, "g" + std::to_string(k + 1) + " differs");
  }
  std::string g4;
  for (const auto& e : j["maps"][3]["images"]) g4 += (g4.empty() ? "" : ", ") + e.get<std::string>();
  o.note(std::to_string(ok) + "/4 maps; g4 = (" + g4 + ")");
  return o;
}

Outcome adjoint_entries() {
  Outcome o;
  auto j = tool_json({"table", rnc_file(), "--adjoint-sign", "paper", "--diff-paper"});
  const auto ctx = algebra_context(alg());
  auto at = adjoint_table(alg(), AdjointSign::paper);
  struct Cell { std::size_t i, k; const char* text; };
  for (Cell c : {Cell{2, 0, "exp(-eps)*X1"}, Cell{3, 0, "exp(-2*eps)*X1"}, Cell{3, 1, "exp(-eps)*X2"}}) {
    const std::string printed = j["adjoint_table"][c.i][c.k].get<std::string>();
    o.require(same_entry(c.text, at[c.i][c.k], ctx) && same_entry(c.text, simplify(parse_expr(printed, ctx)), ctx),
              std::string("Ad entry ") + c.text + " computed as " + printed);
  }
  bool flagged = false;
  for (const auto& m : j["paper_diff"]["mismatches"])
    if (m["table"] == "adjoint" && m["row"] == "X1" &&
        m.value("note", "").find("not reproducible from the Lie table") != std::string::npos)
      flagged = true;
  o.require(flagged, "row X1 anomaly not flagged");
  o.note("scaling entries exact; " + std::to_string(j["paper_diff"]["mismatches"].size()) +
         " transcribed entries flagged, row X1 among them");
  return o;
}

Outcome optimal_audit() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const AdjointAction act = make_action(alg());
  std::vector<VectorQ> paper;
  std::vector<Representative> reps;
  for (const auto& l : transcription()["optimal_system"]) {
    paper.push_back(parse_element(l.get<std::string>(), alg()));
    reps.push_back({paper.back(), l.get<std::string>(), "paper"});
  }
  ClassifyReport rep = classify(act, 200, 42, paper);
  std::size_t in_paper = 0, x4 = 0, family = 0, other = 0;
  for (const auto& f : rep.forms) {
    const VectorQ& n = f.normal;
    if (f.in_paper) in_paper += f.count;
    else if (n(0).is_zero() && n(1).is_zero() && n(3).is_one()) (n(2).is_zero() ? x4 : family) += f.count;
    else {
      other += f.count;
      o.require(false, "sample normal form " + f.label + " outside the allowed classes");
    }
  }
  o.require(in_paper + x4 + family + other == 200, "sample count");
  o.require(rep.replay_ok, "transcript replay failed");
  std::size_t fixed = 0;
  for (const auto& p : paper)
    if (normalize_element(act, p).normal == p) ++fixed;
  o.require(fixed == paper.size(), std::to_string(fixed) + "/9 fixed points");
  o.require(verify_inequivalent(act, reps).all_distinct(), "paper list not pairwise separated");
  SampleRng r(2024);
  std::size_t invariant = 0;
  for (int t = 0; t < 100; ++t) {
    VectorQ a(4);
    for (Eigen::Index c = 0; c < 4; ++c) a(c) = r.rational();
    VectorQ b = a;
    bool exact = true;
    for (std::int64_t s = r.uniform(1, 5); s > 0; --s) {
      const auto i = static_cast<std::size_t>(r.uniform(0, 3));
      GroupParam eps = i < 2 ? GroupParam::rational(r.rational())
                             : GroupParam::log(Rational(1), Rational(r.uniform(1, 9), r.uniform(1, 9)));
      AdjointImage img = adjoint_apply(act, i, eps, b);
      exact = exact && img.is_exact;
      b = img.exact;
    }
    if (exact && b(2) == a(2) && b(3) == a(3)) ++invariant;
  }
  o.require(invariant == 100, std::to_string(invariant) + "/100 compositions keep (a3, a4)");
  const double dt = seconds_since(t0);
  o.require(dt <= 10, "runtime " + fmt(dt) + " s > 10 s");
  o.note("samples: " + std::to_string(in_paper) + " paper, " + std::to_string(x4) + " X4, " + std::to_string(family) +
         " X4+a*X3; 9/9 fixed and pairwise inequivalent; 100/100 compositions invariant; " + fmt(dt) + " s");
  return o;
}

Outcome reductions() {
  Outcome o;
  ParseContext c = rnc().context();
  c.extended = true;
  c.declare_function("F1");
  const auto& list = transcription()["reductions"];
  o.require(list.size() == 10, "transcription holds " + std::to_string(list.size()) + " reductions");
  std::size_t ok = 0;
  for (const auto& r : list) {
    const std::string g = r["element"].get<std::string>();
    try {
      VectorField X = alg().element(parse_element(g, alg()));
      SimilarityAnsatz an = invariants(X, rnc());
      bool same = simplify(parse_expr(r["s"].get<std::string>(), c) - an.s).is_zero();
      const char* keys[] = {"u", "v", "t"};
      for (std::size_t a = 0; a < 3; ++a)
        same = same && simplify(simplify(rename_functions(an.solution(a), "F1")) -
                                simplify(parse_expr(r[keys[a]].get<std::string>(), c))).is_zero();
      ReducedSystem rs = reduce_system(rnc(), an);
      bool free = true;
      for (const Poly& p : rs.system.equations) free = free && !p.contains(Symbol("x")) && !p.contains(Symbol("y"));
      o.require(same, g + ": ansatz differs");
      o.require(free, g + ": reduced system keeps x or y");
      if (same && free) ++ok;
    } catch (const std::exception& e) {
      o.require(false, g + ": " + e.what());
    }
  }
  o.note(std::to_string(ok) + "/10 reductions match with x, y eliminated");
  return o;
}

double exp_error(double h) {
  const auto n = static_cast<std::size_t>(std::lround(1.0 / h));
  Eigen::VectorXd y0(1);
  y0 << 1.0;
  Trajectory t = rk4_integrate(OdeIvp{[](double, const Eigen::VectorXd& y) { return y; }, 0.0, y0, h, n});
  return std::abs(t.states.back()(0) - std::exp(1.0));
}

double sine_error(double h) {
  FirstOrderForm fo = to_first_order(PdeSystem::from_strings("ode", {"s"}, {"F"}, {}, {"F_ss + F"}));
  Eigen::VectorXd y0(2);
  y0 << 0.0, 1.0;
  Trajectory t = rk4_integrate(fo.ivp({}, 0.0, y0, h, static_cast<std::size_t>(std::lround(2.0 / h))));
  return std::abs(t.states.back()(0) - std::sin(2.0));
}

Outcome numeric_plugback() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  Eigen::VectorXd y0(5);
  y0 << 0, 1, 0, 1, 0;
  VerifyRun run = verify_reduction(rnc(), alg().element(parse_element("X4", alg())), y0,
                                   {{"Pr", 0.7}, {"R", 0.1}, {"Gr", 1.0}, {"calpha", 1.0}}, 1e-3, Grid{});
  const double res = run.analytic.overall_max();
  o.require(res <= 1e-6, "max residual " + fmt(res) + " > 1e-6");
  std::string factors;
  for (auto [name, f] : {std::pair<const char*, double>{"exp", exp_error(0.1) / exp_error(0.05)},
                         {"sine", sine_error(0.1) / sine_error(0.05)}}) {
    o.require(f >= 12 && f <= 20, std::string(name) + " halving factor " + fmt(f) + " outside [12, 20]");
    factors += std::string(factors.empty() ? "" : ", ") + name + " " + fmt(f, "%.2f");
  }
  const double dt = seconds_since(t0);
  o.require(dt <= 5, "runtime " + fmt(dt) + " s > 5 s");
  o.note("X4 analytic max residual " + fmt(res) + "; halving factors " + factors + "; " + fmt(dt) + " s");
  return o;
}

Outcome oracle_consistency() {
  Outcome o;
  std::size_t checked = 0;
  struct Run { std::string file; int degree; };
  for (const Run& r : {Run{"rnc.json", 0}, Run{"rnc.json", 1}, Run{"rnc.json", 2}, Run{"heat.json", 1},
                       Run{"heat.json", 2}, Run{"heat.json", 3}}) {
    const SystemSpec& spec = r.file == "rnc.json" ? testing::rnc_spec() : testing::heat_spec();
    auto j = tool_json({"symm", testing::data_path(r.file), "--degree", std::to_string(r.degree)});
    for (const auto& g : generators_from_json(j, spec.system)) {
      ++checked;
      o.require(check_generator(g.field, spec.system), r.file + " d" + std::to_string(r.degree) + " " + g.label + " fails");
    }
  }
  testing::Rng rng(8);
  std::size_t agree = 0;
  for (int i = 0; i < 50; ++i) {
    VectorField X = testing::random_field(rng, rnc(), 2);
    ProlongedField a = prolong(X, 2, rnc());
    ProlongedField b = prolong_characteristic(X, 2, rnc());
    bool same = a.eta.size() == b.eta.size();
    for (const auto& [s, c] : a.eta) same = same && c == b.coefficient(s);
    if (same) ++agree;
  }
  o.require(agree == 50, std::to_string(agree) + "/50 prolongations agree");
  o.note(std::to_string(checked) + " emitted generators pass the criterion; 50/50 prolongations agree through order 2");
  return o;
}

Outcome heat_cross_check() {
  Outcome o;
  const auto& heat = testing::heat_spec();
  for (const auto& g : heat.expected_generators)
    o.require(check_generator(g.field, heat.system), g.label + " fails the criterion");
  auto span_at = [&](int d) {
    auto j = tool_json({"symm", testing::data_path("heat.json"), "--degree", std::to_string(d)});
    return std::pair{j["dimension"].get<std::size_t>(), fields_of(generators_from_json(j, heat.system))};
  };
  auto [dim2, span2] = span_at(2);
  std::string missing;
  for (const auto& g : heat.expected_generators)
    if (!in_span(g.field, span2, heat.system)) missing += (missing.empty() ? "" : ", ") + g.label;
  o.require(missing.empty(), "degree-2 span (dimension " + std::to_string(dim2) + ") misses " + missing);
  auto [dim3, span3] = span_at(3);
  bool all3 = true;
  for (const auto& g : heat.expected_generators) all3 = all3 && in_span(g.field, span3, heat.system);
  o.note("degree 3 (dimension " + std::to_string(dim3) + ") contains all six: " + (all3 ? "yes" : "no"));
  return o;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c = {
      {"symmetry recovery", symmetry_recovery}, {"Lie table", lie_table_entries},
      {"flows", flows_match},                   {"adjoint table", adjoint_entries},
      {"optimal system audit", optimal_audit},  {"reductions", reductions},
      {"numeric plug-back", numeric_plugback},  {"oracle consistency", oracle_consistency},
      {"heat cross-validation", heat_cross_check}};
  return c;
}

bool report(std::size_t k) {
  Outcome o;
  try {
    o = criteria()[k].run();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("error: ") + e.what();
  }
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << k + 1 << " " << criteria()[k].name << ": " << o.detail
            << std::endl;
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.size() == 2 && args[0] == "--criterion") {
    const std::size_t k = std::stoul(args[1]);
    if (k < 1 || k > criteria().size()) {
      std::cerr << "criterion must be 1.." << criteria().size() << "\n";
      return 2;
    }
    return report(k - 1) ? 0 : 1;
  }
  if (!args.empty()) {
    std::cerr << "usage: liesym_acceptance [--criterion N]\n";
    return 2;
  }
  std::size_t failed = 0;
  for (std::size_t k = 0; k < criteria().size(); ++k) failed += report(k) ? 0 : 1;
  std::cout << criteria().size() - failed << "/" << criteria().size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
