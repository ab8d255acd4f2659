#include "cli.hpp"

#include "liesym/detsolve.hpp"
#include "liesym/liealg.hpp"
#include "liesym/numverify.hpp"
#include "liesym/optsys.hpp"
#include "liesym/parser.hpp"
#include "liesym/reduce.hpp"
#include "liesym/system_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace liesym::cli {

namespace {

using json = nlohmann::ordered_json;

struct Config {
  std::string spec;
  int degree = 2;
  std::string sign = "eq6";
  std::uint64_t seed = 42;
  std::size_t samples = 200;
  std::string out;
  bool json = false;
  bool diff_paper = false;
  std::string paper;
  std::string generators;
  std::string expected;
  std::string element;
  // verify
  std::string init = "0,1,0,1,0";
  std::vector<std::string> params;
  double step = 1e-3;
  double tol = 1e-6;
  double fd_step = 1e-3;
  std::vector<double> x_range{1, 2}, y_range{0, 1};
  std::size_t points = 21;
};

struct Report {
  std::ostringstream text;
  json doc = json::object();
  int code = Exit::ok;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string plain(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

// left-aligned columns, two spaces apart
void write_grid(std::ostream& os, const std::vector<std::vector<std::string>>& rows, const std::string& indent = "  ") {
  std::vector<std::size_t> w;
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (w.size() <= c) w.push_back(0);
      w[c] = std::max(w[c], r[c].size());
    }
  for (const auto& r : rows) {
    std::string line = indent;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += r[c];
      if (c + 1 < r.size()) line += std::string(w[c] - r[c].size() + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << "\n";
  }
}

AdjointSign parse_sign(const std::string& s) { return s == "paper" ? AdjointSign::paper : AdjointSign::series; }

std::string paper_path(const Config& cfg) {
  if (!cfg.paper.empty()) return cfg.paper;
  std::filesystem::path p(cfg.spec);
  return (p.parent_path() / (p.stem().string() + "_paper.json")).string();
}

nlohmann::json load_paper(const Config& cfg) {
  const std::string path = paper_path(cfg);
  if (!std::filesystem::exists(path)) throw SpecError("no transcription file " + path + " (use --paper)");
  return nlohmann::json::parse(read_file(path));
}

std::vector<LabeledField> generators(const Config& cfg, const SystemSpec& spec) {
  if (!cfg.generators.empty()) return generators_from_json(nlohmann::json::parse(read_file(cfg.generators)), spec.system);
  if (spec.expected_generators.empty()) throw SpecError("the system file lists no generators; pass --generators");
  return spec.expected_generators;
}

LieAlgebra algebra(const Config& cfg, const SystemSpec& spec) {
  std::vector<VectorField> b;
  std::vector<std::string> l;
  for (const auto& g : generators(cfg, spec)) {
    b.push_back(g.field);
    l.push_back(g.label);
  }
  return structure_constants(b, spec.system, l);
}

json string_table(const std::vector<std::vector<Expr>>& t) {
  json a = json::array();
  for (const auto& row : t) {
    json r = json::array();
    for (const auto& e : row) r.push_back(to_string(e));
    a.push_back(std::move(r));
  }
  return a;
}

void write_table(std::ostream& os, const std::string& corner, const std::vector<std::string>& labels,
                 const std::vector<std::vector<Expr>>& t) {
  std::vector<std::vector<std::string>> rows{{corner}};
  for (const auto& l : labels) rows[0].push_back(l);
  for (std::size_t i = 0; i < t.size(); ++i) {
    rows.push_back({labels[i]});
    for (const auto& e : t[i]) rows.back().push_back(to_string(e));
  }
  write_grid(os, rows);
}

// ---------------------------------------------------------------- symm

void cmd_symm(const Config& cfg, Report& r) {
  SystemSpec spec = load_system_spec(cfg.spec);
  const PdeSystem& sys = spec.system;
  SymmetryResult res = solve_symmetries(sys, cfg.degree);
  const auto& basis = res.basis.basis;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < basis.size(); ++i) labels.push_back("Y" + std::to_string(i + 1));
  std::vector<bool> passes;
  for (const auto& X : basis) passes.push_back(check_generator(X, sys));

  auto& os = r.text;
  os << "system " << sys.name << ", polynomial ansatz of degree " << cfg.degree << "\n";
  os << "determining equations: " << res.determining_equations << " (distinct rows " << res.rows << ", rank "
     << res.rank << ", unknowns " << res.ansatz.unknowns.size() << ")\n";
  os << "dimension " << basis.size() << "\n";
  for (std::size_t i = 0; i < basis.size(); ++i) os << "  " << labels[i] << " = " << to_string(basis[i], sys) << "\n";
  const bool all_pass = std::all_of(passes.begin(), passes.end(), [](bool b) { return b; });
  os << "symmetry criterion: " << (all_pass ? "every generator passes" : "FAILED for some generator") << "\n";

  json doc;
  doc["system"] = sys.name;
  doc["degree"] = cfg.degree;
  doc["determining_equations"] = res.determining_equations;
  doc["rows"] = res.rows;
  doc["rank"] = res.rank;
  json g = generators_to_json(basis, sys, labels);
  doc["dimension"] = g["dimension"];
  doc["generators"] = g["generators"];
  doc["criterion"] = passes;

  std::vector<LabeledField> expected;
  if (!cfg.expected.empty()) expected = generators_from_json(nlohmann::json::parse(read_file(cfg.expected)), sys);
  else expected = spec.expected_generators;
  if (!expected.empty()) {
    std::vector<VectorField> ex;
    json missing = json::array();
    for (const auto& e : expected) {
      ex.push_back(e.field);
      if (!in_span(e.field, basis, sys)) missing.push_back(e.label);
    }
    bool contained = missing.empty();
    bool contains = std::all_of(basis.begin(), basis.end(), [&](const VectorField& X) { return in_span(X, ex, sys); });
    os << "expected generators (" << expected.size() << "): "
       << (contained ? "all in the computed span" : "missing " + join(missing.get<std::vector<std::string>>(), ", "))
       << "\n";
    os << "computed span inside the expected span: " << (contains ? "yes" : "no") << "\n";
    os << "spans equal: " << (contained && contains ? "yes" : "no") << "\n";
    if (contained && !contains) {
      os << "outside the expected span:\n";
      for (std::size_t i = 0; i < basis.size(); ++i)
        if (!in_span(basis[i], ex, sys)) os << "  " << labels[i] << "\n";
    }
    json e;
    e["count"] = expected.size();
    e["missing"] = missing;
    e["contained"] = contained;
    e["contains"] = contains;
    e["equal"] = contained && contains;
    doc["expected"] = e;
  }
  r.doc = std::move(doc);
  if (!all_pass) r.code = Exit::math;
}

// ---------------------------------------------------------------- table

struct Mismatch {
  std::string table;
  std::size_t row, col;
  std::string paper, computed, note;
};

void cmd_table(const Config& cfg, Report& r) {
  SystemSpec spec = load_system_spec(cfg.spec);
  LieAlgebra alg = algebra(cfg, spec);
  const AdjointSign sign = parse_sign(cfg.sign);
  auto lt = lie_table(alg);
  auto at = adjoint_table(alg, sign);
  auto& os = r.text;
  os << "Lie table, entry (i, j) = [Xi, Xj]\n";
  write_table(os, "[,]", alg.labels, lt);
  os << "\nadjoint table, entry (i, j) = Ad(exp(eps*Xi)) Xj, " << cfg.sign << " sign\n";
  write_table(os, "Ad", alg.labels, at);
  json doc;
  doc["basis"] = alg.labels;
  doc["lie_table"] = string_table(lt);
  doc["adjoint_sign"] = cfg.sign;
  doc["adjoint_table"] = string_table(at);

  if (cfg.diff_paper) {
    const auto paper = load_paper(cfg);
    const ParseContext ctx = algebra_context(alg);
    const auto other = adjoint_table(alg, sign == AdjointSign::series ? AdjointSign::paper : AdjointSign::series);
    std::vector<Mismatch> mm;
    std::size_t lie_ok = 0, ad_ok = 0;
    const std::size_t n = alg.dimension();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::string pl = paper["lie_table"][i][j].get<std::string>();
        if (same_entry(pl, lt[i][j], ctx)) ++lie_ok;
        else mm.push_back({"lie", i, j, pl, to_string(lt[i][j]), "differs from the computed bracket"});
        const std::string pa = paper["adjoint_table"][i][j].get<std::string>();
        if (same_entry(pa, at[i][j], ctx)) {
          ++ad_ok;
          continue;
        }
        std::string note;
        if (same_entry(pa, other[i][j], ctx)) note = "matches the other sign convention";
        else if (i == j) note = "[" + alg.labels[i] + ", " + alg.labels[i] + "] = 0 forces " + alg.labels[i] + "; not reproducible from the Lie table";
        else note = "not reproducible from the Lie table under either sign";
        mm.push_back({"adjoint", i, j, pa, to_string(at[i][j]), note});
      }
    os << "\ncomparison with " << std::filesystem::path(paper_path(cfg)).filename().string() << "\n";
    os << "  Lie table: " << lie_ok << "/" << n * n << " entries match\n";
    os << "  adjoint table: " << ad_ok << "/" << n * n << " entries match\n";
    json arr = json::array();
    for (const auto& m : mm) {
      os << "  " << m.table << " row " << alg.labels[m.row] << ", column " << alg.labels[m.col] << ": paper " << m.paper
         << ", computed " << m.computed << " (" << m.note << ")\n";
      json e;
      e["table"] = m.table;
      e["row"] = alg.labels[m.row];
      e["column"] = alg.labels[m.col];
      e["paper"] = m.paper;
      e["computed"] = m.computed;
      e["note"] = m.note;
      arr.push_back(std::move(e));
    }
    json d;
    d["lie_matches"] = lie_ok;
    d["adjoint_matches"] = ad_ok;
    d["entries"] = n * n;
    d["mismatches"] = arr;
    doc["paper_diff"] = d;
  }
  r.doc = std::move(doc);
}

// ---------------------------------------------------------------- flows

void cmd_flows(const Config& cfg, Report& r) {
  SystemSpec spec = load_system_spec(cfg.spec);
  const PdeSystem& sys = spec.system;
  auto gens = generators(cfg, spec);
  auto& os = r.text;
  json maps = json::array();
  std::vector<Flow> flows;
  for (const auto& g : gens) flows.push_back(flow(g.field, sys));
  std::vector<std::string> coords;
  for (Symbol s : flows.empty() ? base_coordinates(sys) : flows[0].coordinates) coords.push_back(s.name());
  os << "one-parameter groups, parameter h, acting on (" << join(coords, ", ") << ")\n";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    std::vector<std::string> im;
    for (const Expr& e : flows[k].images) im.push_back(to_string(e));
    rows.push_back({"g" + std::to_string(k + 1) + " (" + gens[k].label + "):", "(" + join(im, ", ") + ")"});
    json m;
    m["label"] = gens[k].label;
    m["images"] = im;
    maps.push_back(std::move(m));
  }
  write_grid(os, rows);
  json doc;
  doc["parameter"] = "h";
  doc["coordinates"] = coords;
  doc["maps"] = maps;

  if (cfg.diff_paper) {
    const auto paper = load_paper(cfg);
    ParseContext ctx = sys.context();
    ctx.extended = true;
    ctx.declare("h", SymbolKind::group_param);
    const auto& pm = paper["flows"]["maps"];
    std::size_t ok = 0;
    json mm = json::array();
    for (std::size_t k = 0; k < flows.size() && k < pm.size(); ++k) {
      bool same = true;
      for (std::size_t c = 0; c < flows[k].images.size(); ++c)
        same = same && simplify(parse_expr(pm[k][c].get<std::string>(), ctx) - flows[k].images[c]).is_zero();
      if (same) ++ok;
      else mm.push_back(gens[k].label);
    }
    os << "\ncomparison with " << std::filesystem::path(paper_path(cfg)).filename().string() << ": " << ok << "/"
       << pm.size() << " maps match";
    if (!mm.empty()) os << "; differing: " << join(mm.get<std::vector<std::string>>(), ", ");
    os << "\n";
    json d;
    d["matches"] = ok;
    d["maps"] = pm.size();
    d["differing"] = mm;
    doc["paper_diff"] = d;
  }
  r.doc = std::move(doc);
}

// ---------------------------------------------------------------- optimal

std::vector<std::string> qstrings(const VectorQ& a) {
  std::vector<std::string> v;
  for (Eigen::Index i = 0; i < a.size(); ++i) v.push_back(a(i).str());
  return v;
}

void cmd_optimal(const Config& cfg, Report& r) {
  SystemSpec spec = load_system_spec(cfg.spec);
  LieAlgebra alg = algebra(cfg, spec);
  AdjointAction act = make_action(alg, parse_sign(cfg.sign));
  auto& os = r.text;
  json doc;
  doc["adjoint_sign"] = cfg.sign;
  std::vector<std::string> der, quo;
  for (std::size_t k : act.derived) der.push_back(alg.labels[k]);
  for (std::size_t k : act.quotient) quo.push_back(alg.labels[k]);
  if (act.derived_is_coordinate)
    os << "[g, g] = span{" << join(der, ", ") << "}, quotient coordinates " << join(quo, ", ") << "\n";
  else
    os << "[g, g] is not a coordinate subspace; normalizing over all coordinates\n";
  doc["derived_algebra"] = der;
  doc["quotient"] = quo;

  if (!cfg.element.empty()) {
    Normalization nz = normalize_element(act, parse_element(cfg.element, alg));
    os << "element " << element_label(nz.input, alg.labels) << "\n";
    json moves = json::array();
    for (const auto& m : nz.transcript) {
      os << "  " << m.str(alg.labels) << " -> " << element_label(m.after, alg.labels) << "\n";
      json j;
      j["move"] = m.str(alg.labels);
      j["after"] = element_label(m.after, alg.labels);
      moves.push_back(std::move(j));
    }
    os << "normal form " << nz.label << " (proof case " << nz.proof_case << ")\n";
    doc["element"] = element_label(nz.input, alg.labels);
    doc["transcript"] = moves;
    doc["normal_form"] = nz.label;
    doc["proof_case"] = nz.proof_case;
    r.doc = std::move(doc);
    return;
  }

  std::vector<VectorQ> paper_reps;
  std::vector<std::string> paper_labels;
  const bool have_paper = std::filesystem::exists(paper_path(cfg));
  if (have_paper) {
    const auto paper = load_paper(cfg);
    for (const auto& l : paper["optimal_system"]) {
      paper_reps.push_back(parse_element(l.get<std::string>(), alg));
      paper_labels.push_back(l.get<std::string>());
    }
  }
  ClassifyReport rep = classify(act, cfg.samples, cfg.seed, paper_reps);
  os << "samples " << rep.samples << ", seed " << rep.seed << "\n";
  os << "normal forms (first appearance order):\n";
  std::vector<std::vector<std::string>> rows;
  json forms = json::array();
  for (const auto& f : rep.forms) {
    rows.push_back({f.label, std::to_string(f.count), "case " + f.proof_case, f.in_paper ? "paper" : "derived"});
    json j;
    j["label"] = f.label;
    j["normal"] = qstrings(f.normal);
    j["count"] = f.count;
    j["proof_case"] = f.proof_case;
    j["in_paper"] = f.in_paper;
    forms.push_back(std::move(j));
  }
  write_grid(os, rows);
  os << "proof cases:";
  json cases = json::object();
  for (const auto& [c, k] : rep.case_counts) {
    os << " " << c << " " << k << ";";
    cases[c] = k;
  }
  os << "\n";
  os << "transcripts replay exactly: " << (rep.replay_ok ? "yes" : "NO") << "\n";
  doc["samples"] = rep.samples;
  doc["seed"] = rep.seed;
  doc["forms"] = forms;
  doc["case_counts"] = cases;
  doc["replay_ok"] = rep.replay_ok;

  std::vector<Representative> all;
  if (have_paper) {
    os << "\npaper representatives:\n";
    json reps = json::array();
    rows.clear();
    for (std::size_t i = 0; i < paper_reps.size(); ++i) {
      Normalization nz = normalize_element(act, paper_reps[i]);
      const bool fixed = nz.normal == paper_reps[i];
      const bool found = std::any_of(rep.forms.begin(), rep.forms.end(),
                                     [&](const NormalFormCount& f) { return f.normal == paper_reps[i]; });
      rows.push_back({paper_labels[i], fixed ? "fixed point" : "normalizes to " + nz.label,
                      found ? "met in samples" : "not met in samples"});
      json j;
      j["label"] = paper_labels[i];
      j["fixed_point"] = fixed;
      j["normal_form"] = nz.label;
      j["sampled"] = found;
      reps.push_back(std::move(j));
      all.push_back({paper_reps[i], paper_labels[i], "paper"});
    }
    write_grid(os, rows);
    InequivalenceReport inv = verify_inequivalent(act, all);
    os << "pairwise inequivalent: " << (inv.all_distinct() ? "yes" : "NO") << "\n";
    os << "separating invariant for each pair:\n";
    std::vector<std::vector<std::string>> m{{""}};
    for (const auto& l : paper_labels) m[0].push_back(l);
    for (std::size_t i = 0; i < all.size(); ++i) {
      m.push_back({paper_labels[i]});
      for (std::size_t j = 0; j < all.size(); ++j) m.back().push_back(i == j ? "." : inv.reason[i][j].empty() ? "?" : inv.reason[i][j]);
    }
    write_grid(os, m, "    ");
    json pd;
    pd["representatives"] = reps;
    pd["pairwise_inequivalent"] = inv.all_distinct();
    pd["reasons"] = inv.reason;
    doc["paper"] = pd;
  }

  ExtraClasses extra = extra_classes(act, rep);
  os << "\nderived (normal forms outside the paper list):\n";
  json dj;
  json singles = json::array();
  for (const auto& s : extra.singles) {
    os << "  " << s.label << "\n";
    singles.push_back(s.label);
    all.push_back(s);
  }
  json fams = json::array();
  for (const auto& fam : extra.families) {
    std::vector<std::string> seen;
    for (const auto& t : fam.seen) seen.push_back(t.str());
    os << "  family " << fam.label << ", a != 0; sampled a: " << join(seen, ", ") << "\n";
    json fj;
    fj["label"] = fam.label;
    fj["sampled"] = seen;
    std::vector<std::string> deg;
    for (const auto& t : fam.degenerate) deg.push_back(t.str());
    fj["degenerate"] = deg;
    json ex = json::array();
    for (const auto& t : fam.seen) all.push_back({fam.base + fam.direction * t, element_label(fam.base + fam.direction * t, alg.labels), "derived"});
    if (!fam.degenerate.empty()) {
      std::vector<std::string> el;
      for (const auto& e : fam.exceptional) {
        el.push_back(e.label);
        ex.push_back(e.label);
        if (std::none_of(all.begin(), all.end(), [&](const Representative& x) { return x.element == e.element; })) all.push_back(e);
      }
      os << "    ad on [g, g] singular at a = " << join(deg, ", ") << "; classes there: " << join(el, ", ") << "\n";
    }
    fj["exceptional"] = ex;
    fams.push_back(std::move(fj));
  }
  InequivalenceReport inv_all = verify_inequivalent(act, all);
  os << "all listed classes pairwise inequivalent: " << (inv_all.all_distinct() ? "yes" : "NO") << "\n";
  dj["singles"] = singles;
  dj["families"] = fams;
  dj["all_inequivalent"] = inv_all.all_distinct();
  doc["derived"] = dj;

  if (have_paper && cfg.diff_paper) {
    std::size_t met = 0;
    for (const auto& p : paper_reps)
      met += std::any_of(rep.forms.begin(), rep.forms.end(), [&](const NormalFormCount& f) { return f.normal == p; });
    std::size_t outside = 0;
    for (const auto& f : rep.forms) outside += f.in_paper ? 0 : f.count;
    os << "\ncomparison with " << std::filesystem::path(paper_path(cfg)).filename().string() << ": " << met << "/"
       << paper_reps.size() << " paper representatives met as normal forms; " << outside << " of " << rep.samples
       << " samples normalize outside the paper list\n";
    json d;
    d["paper_met"] = met;
    d["samples_outside"] = outside;
    doc["paper_diff"] = d;
  }
  r.doc = std::move(doc);
}

// ---------------------------------------------------------------- reduce

VectorField element_field(const Config& cfg, const SystemSpec& spec, LieAlgebra& alg) {
  alg = algebra(cfg, spec);
  return alg.element(parse_element(cfg.element, alg));
}

void cmd_reduce(const Config& cfg, Report& r) {
  if (cfg.element.empty()) throw CLI::ValidationError("--element", "reduce needs --element");
  SystemSpec spec = load_system_spec(cfg.spec);
  const PdeSystem& sys = spec.system;
  LieAlgebra alg;
  const VectorField X = element_field(cfg, spec, alg);
  auto& os = r.text;
  const std::string label = element_label(parse_element(cfg.element, alg), alg.labels);
  os << "element " << label << " = " << to_string(X, sys) << "\n";
  json doc;
  doc["element"] = label;
  doc["field"] = to_string(X, sys);

  os << "characteristic:\n";
  const VarOrder order = sys.var_order();
  json q = json::object();
  auto Q = characteristic(X, sys);
  for (std::size_t a = 0; a < Q.size(); ++a) {
    os << "  Q_" << sys.dependents[a].name() << " = " << to_string(Q[a], order) << "\n";
    q[sys.dependents[a].name()] = to_string(Q[a], order);
  }
  doc["characteristic"] = q;

  SimilarityAnsatz an = invariants(X, sys);
  os << "similarity ansatz:\n";
  for (const auto& line : describe(an, sys)) os << "  " << line << "\n";
  json aj;
  aj["s"] = to_string(an.s);
  json pre = json::object();
  for (std::size_t a = 0; a < an.prefactor.size(); ++a) pre[sys.dependents[a].name()] = to_string(an.prefactor[a]);
  aj["prefactors"] = pre;
  aj["functions"] = an.functions;
  aj["domain"] = an.domain;
  doc["ansatz"] = aj;

  ReducedSystem rs = reduce_system(sys, an);
  os << "reduced system in s:\n";
  auto lines = describe(rs);
  for (const auto& line : lines) os << "  " << line << "\n";
  std::vector<std::string> fac;
  for (const auto& f : rs.factor) fac.push_back(to_string(f));
  os << "factors divided out: " << join(fac, ", ") << "\n";
  doc["reduced"] = lines;
  doc["factors"] = fac;

  if (cfg.diff_paper) {
    const auto paper = load_paper(cfg);
    ParseContext ctx = sys.context();
    ctx.extended = true;
    ctx.declare_function("F1");
    const nlohmann::json* entry = nullptr;
    for (const auto& e : paper["reductions"])
      if (parse_element(e["element"].get<std::string>(), alg) == parse_element(cfg.element, alg)) entry = &e;
    os << "\ncomparison with " << std::filesystem::path(paper_path(cfg)).filename().string() << ": ";
    json d;
    if (!entry) {
      os << "element not listed\n";
      d["listed"] = false;
    } else {
      d["listed"] = true;
      json diffs = json::array();
      if (!simplify(parse_expr((*entry)["s"].get<std::string>(), ctx) - an.s).is_zero()) diffs.push_back("s");
      for (std::size_t a = 0; a < sys.dependents.size(); ++a) {
        std::string key = sys.dependents[a].name();
        for (const auto& [k, v] : sys.aliases)
          if (v == key && entry->contains(k)) key = k;
        if (!entry->contains(key)) continue;
        Expr theirs = simplify(parse_expr((*entry)[key].get<std::string>(), ctx));
        if (!simplify(rename_functions(an.solution(a), "F1") - theirs).is_zero()) diffs.push_back(key);
      }
      os << (diffs.empty() ? "similarity variable and prefactors match"
                           : "differs in " + join(diffs.get<std::vector<std::string>>(), ", "))
         << " (shape functions compared up to naming)\n";
      d["differing"] = diffs;
    }
    doc["paper_diff"] = d;
  }
  r.doc = std::move(doc);
}

// ---------------------------------------------------------------- verify

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      v.push_back(std::stod(item, &pos));
      if (item.find_first_not_of(" \t", pos) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("list", "not a number: '" + item + "'");
    }
  }
  return v;
}

void cmd_verify(const Config& cfg, Report& r) {
  if (cfg.element.empty()) throw CLI::ValidationError("--element", "verify needs --element");
  SystemSpec spec = load_system_spec(cfg.spec);
  const PdeSystem& sys = spec.system;
  LieAlgebra alg;
  const VectorField X = element_field(cfg, spec, alg);
  ParamValues params;
  const ParamValues defaults = default_parameters();
  for (Symbol p : sys.parameters)
    if (auto it = defaults.find(p.name()); it != defaults.end()) params[p.name()] = it->second;
  for (const auto& kv : cfg.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--param", "expected NAME=VALUE, got " + kv);
    params[kv.substr(0, eq)] = parse_list(kv.substr(eq + 1)).at(0);
  }
  for (Symbol p : sys.parameters)
    if (!params.count(p.name())) throw CLI::ValidationError("--param", "no value for parameter " + p.name());
  std::vector<double> init = parse_list(cfg.init);
  Eigen::VectorXd y0(static_cast<Eigen::Index>(init.size()));
  for (std::size_t i = 0; i < init.size(); ++i) y0(static_cast<Eigen::Index>(i)) = init[i];
  if (cfg.x_range.size() != 2 || cfg.y_range.size() != 2) throw CLI::ValidationError("range", "ranges take two values");
  Grid grid{cfg.x_range[0], cfg.x_range[1], cfg.y_range[0], cfg.y_range[1], cfg.points, cfg.points};

  SimilarityAnsatz an = invariants(X, sys);
  FirstOrderForm fo = to_first_order(reduce_system(sys, an));
  if (static_cast<std::size_t>(y0.size()) != fo.dimension())
    throw CLI::ValidationError("--init", "state (" + join(fo.labels(), ", ") + ") needs " +
                                             std::to_string(fo.dimension()) + " values");
  VerifyRun run = verify_reduction(sys, X, y0, params, cfg.step, grid, cfg.fd_step);

  const std::string label = element_label(parse_element(cfg.element, alg), alg.labels);
  auto& os = r.text;
  os << "element " << label << ", s = " << to_string(run.ansatz.s) << "\n";
  std::vector<std::string> iv;
  for (double v : init) iv.push_back(plain(v));
  os << "state (" << join(run.form.labels(), ", ") << ") = (" << join(iv, ", ") << ") at s = 0\n";
  std::vector<std::string> pv;
  for (const auto& [k, v] : params) pv.push_back(k + " = " + plain(v));
  os << "parameters: " << join(pv, ", ") << "\n";
  const Trajectory& tr = run.rec.trajectory();
  os << "RK4 step " << plain(cfg.step) << ", s in [" << plain(tr.s_begin()) << ", " << plain(tr.s_end()) << "], "
     << tr.states.size() << " nodes\n";
  os << "grid x in [" << plain(grid.x0) << ", " << plain(grid.x1) << "], y in [" << plain(grid.y0) << ", "
     << plain(grid.y1) << "], " << grid.nx << " x " << grid.ny << "\n";
  std::vector<std::vector<std::string>> rows{{"equation", "analytic max", "analytic mean", "fd max", "fd mean"}};
  json eqs = json::array();
  for (std::size_t nu = 0; nu < run.analytic.max.size(); ++nu) {
    rows.push_back({std::to_string(nu + 1), sci(run.analytic.max[nu]), sci(run.analytic.mean[nu]), sci(run.fd.max[nu]),
                    sci(run.fd.mean[nu])});
    json e;
    e["analytic_max"] = run.analytic.max[nu];
    e["analytic_mean"] = run.analytic.mean[nu];
    e["fd_max"] = run.fd.max[nu];
    e["fd_mean"] = run.fd.mean[nu];
    eqs.push_back(std::move(e));
  }
  write_grid(os, rows);
  const bool pass = run.analytic.overall_max() <= cfg.tol;
  os << "finite-difference step " << plain(cfg.fd_step) << "\n";
  os << "analytic max residual " << sci(run.analytic.overall_max()) << " " << (pass ? "<=" : ">") << " tolerance "
     << plain(cfg.tol) << ": " << (pass ? "pass" : "FAIL") << "\n";
  json doc;
  doc["element"] = label;
  doc["s"] = to_string(run.ansatz.s);
  doc["state"] = run.form.labels();
  doc["initial"] = init;
  doc["parameters"] = params;
  doc["step"] = cfg.step;
  doc["grid"] = {{"x", {grid.x0, grid.x1}}, {"y", {grid.y0, grid.y1}}, {"points", cfg.points}};
  doc["fd_step"] = cfg.fd_step;
  doc["equations"] = eqs;
  doc["max_residual"] = run.analytic.overall_max();
  doc["tolerance"] = cfg.tol;
  doc["pass"] = pass;
  r.doc = std::move(doc);
  if (!pass) r.code = Exit::tolerance;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Lie point symmetries, optimal systems and similarity reductions for polynomial PDE systems",
               "liesym"};
  app.require_subcommand(1);
  app.add_option("--degree", cfg.degree, "polynomial degree of the generator ansatz")->check(CLI::NonNegativeNumber);
  app.add_option("--adjoint-sign", cfg.sign, "Ad(exp(eps X)) = exp(-eps ad X) (eq6) or exp(+eps ad X) (paper)")
      ->check(CLI::IsMember({"eq6", "paper"}));
  app.add_option("--seed", cfg.seed, "seed for the classification samples");
  app.add_option("--samples", cfg.samples, "number of classification samples")->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out, "write the report here instead of stdout");
  app.add_flag("--json", cfg.json, "JSON report");
  app.add_flag("--diff-paper", cfg.diff_paper, "compare with the bundled transcription");
  app.add_option("--paper", cfg.paper, "transcription file (default: <system>_paper.json next to the system file)");
  app.add_option("--generators", cfg.generators, "generator basis file (default: expected_generators of the system)");
  app.add_option("--element", cfg.element, "algebra element, e.g. \"X4-X3\"");

  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("system", cfg.spec, "system file (JSON)")->required();
    s->fallthrough();
    return s;
  };
  CLI::App* symm = sub("symm", "solve the determining equations");
  symm->add_option("--expected", cfg.expected, "generator file to compare spans with");
  sub("table", "commutator and adjoint tables");
  sub("flows", "one-parameter groups of the generators");
  sub("optimal", "classify one-dimensional subalgebras under the adjoint action");
  sub("reduce", "similarity reduction along --element");
  CLI::App* verify = sub("verify", "integrate the reduced system and measure the PDE residual");
  verify->add_option("--init", cfg.init, "initial state at s = 0, comma separated");
  verify->add_option("--param", cfg.params, "parameter value NAME=VALUE (repeatable)");
  verify->add_option("--step", cfg.step, "RK4 step")->check(CLI::PositiveNumber);
  verify->add_option("--tol", cfg.tol, "tolerance on the analytic max residual")->check(CLI::NonNegativeNumber);
  verify->add_option("--fd-step", cfg.fd_step, "finite-difference step")->check(CLI::PositiveNumber);
  verify->add_option("--x-range", cfg.x_range, "x interval")->expected(2)->delimiter(',');
  verify->add_option("--y-range", cfg.y_range, "y interval")->expected(2)->delimiter(',');
  verify->add_option("--points", cfg.points, "grid points per direction")->check(CLI::Range(2, 1000));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Exit::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return Exit::usage;
  }

  Report rep;
  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "symm") cmd_symm(cfg, rep);
    else if (cmd == "table") cmd_table(cfg, rep);
    else if (cmd == "flows") cmd_flows(cfg, rep);
    else if (cmd == "optimal") cmd_optimal(cfg, rep);
    else if (cmd == "reduce") cmd_reduce(cfg, rep);
    else cmd_verify(cfg, rep);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return Exit::usage;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return Exit::usage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return Exit::usage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return Exit::usage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return Exit::usage;
  } catch (const std::exception& e) {
    // closure, unsupported class, unsolvable leading terms, numeric blow-up
    err << "error: " << e.what() << "\n";
    return Exit::math;
  }

  const std::string body = cfg.json ? rep.doc.dump(2) + "\n" : rep.text.str();
  if (cfg.out.empty()) {
    out << body;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << cfg.out << "\n";
      return Exit::usage;
    }
    f << body;
  }
  return rep.code;
}

}  // namespace liesym::cli
