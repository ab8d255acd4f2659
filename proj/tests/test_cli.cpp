#include "cli.hpp"
#include "liesym/detsolve.hpp"
#include "liesym/liealg.hpp"
#include "liesym/optsys.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace liesym;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  int c = cli::run(args, o, e);
  return {c, o.str(), e.str()};
}

std::string rnc_path() { return testing::data_path("rnc.json"); }

// golden files live in tests/golden; LIESYM_UPDATE_GOLDEN=1 rewrites them
void golden(const std::string& name, const std::vector<std::string>& args) {
  Run r = run(args);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const std::string path = std::string(LIESYM_GOLDEN_DIR) + "/" + name;
  if (const char* u = std::getenv("LIESYM_UPDATE_GOLDEN"); u && std::string(u) == "1") {
    std::ofstream(path, std::ios::binary) << r.out;
    return;
  }
  REQUIRE_MESSAGE(std::filesystem::exists(path), "missing golden file ", path);
  CHECK_MESSAGE(r.out == read_file(path), "output differs from ", name);
}

nlohmann::json json_of(std::vector<std::string> args) {
  args.push_back("--json");
  Run r = run(args);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  return nlohmann::json::parse(r.out);
}

const LieAlgebra& alg() {
  static const LieAlgebra a = [] {
    std::vector<VectorField> b;
    std::vector<std::string> l;
    for (const auto& g : testing::rnc_spec().expected_generators) {
      b.push_back(g.field);
      l.push_back(g.label);
    }
    return structure_constants(b, testing::rnc_spec().system, l);
  }();
  return a;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("golden outputs") {
    const std::string rnc = rnc_path(), heat = testing::data_path("heat.json");
    golden("symm_rnc_d2.txt", {"symm", rnc, "--degree", "2"});
    golden("symm_rnc_d0.txt", {"symm", rnc, "--degree", "0"});
    golden("symm_heat_d2.txt", {"symm", heat, "--degree", "2"});
    golden("table_paper.txt", {"table", rnc, "--adjoint-sign", "paper", "--diff-paper"});
    golden("table_series.txt", {"table", rnc});
    golden("flows.txt", {"flows", rnc, "--diff-paper"});
    golden("optimal.txt", {"optimal", rnc, "--diff-paper"});
    golden("optimal_element.txt", {"optimal", rnc, "--element", "X1+X2+X4"});
    golden("reduce_X4.txt", {"reduce", rnc, "--element", "X4", "--diff-paper"});
    golden("reduce_X4-X3.txt", {"reduce", rnc, "--element", "X4-X3", "--diff-paper"});
    golden("reduce_X2-X1.txt", {"reduce", rnc, "--element", "X2-X1", "--diff-paper"});
    golden("verify_X4.txt", {"verify", rnc, "--element", "X4"});
    golden("optimal.json", {"optimal", rnc, "--json"});
    golden("symm_rnc_d2.json", {"symm", rnc, "--json"});
  }

  TEST_CASE("reruns are byte-identical") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"optimal", rnc_path(), "--seed", "7", "--samples", "120"},
             {"table", rnc_path(), "--diff-paper", "--json"},
             {"verify", rnc_path(), "--element", "X3+X4", "--json"}}) {
      Run a = run(args), b = run(args);
      CHECK(a.code == 0);
      CHECK(a.out == b.out);
    }
  }

  TEST_CASE("symm examples") {
    auto d2 = json_of({"symm", rnc_path(), "--degree", "2"});
    CHECK(d2["expected"]["contained"] == true);
    auto d0 = json_of({"symm", rnc_path(), "--degree", "0"});
    CHECK(d0["dimension"] == 2);
    auto heat = json_of({"symm", testing::data_path("heat.json"), "--degree", "2"});
    CHECK(heat["expected"]["missing"] == nlohmann::json::array({"projective"}));
    auto heat3 = json_of({"symm", testing::data_path("heat.json"), "--degree", "3"});
    CHECK(heat3["expected"]["contained"] == true);
  }

  TEST_CASE("symm JSON round-trips into generators") {
    const PdeSystem& sys = testing::rnc_spec().system;
    auto j = json_of({"symm", rnc_path(), "--degree", "2"});
    auto gens = generators_from_json(j, sys);
    REQUIRE(gens.size() == j["dimension"].get<std::size_t>());
    std::vector<VectorField> fields;
    for (const auto& g : gens) {
      fields.push_back(g.field);
      CHECK(check_generator(g.field, sys));
    }
    CHECK(same_span(fields, solve_symmetries(sys, 2).basis.basis, sys));
    for (const auto& ok : j["criterion"]) CHECK(ok == true);
  }

  TEST_CASE("table JSON round-trips") {
    auto j = json_of({"table", rnc_path(), "--adjoint-sign", "paper", "--diff-paper"});
    const ParseContext ctx = algebra_context(alg());
    auto lt = lie_table(alg());
    auto at = adjoint_table(alg(), AdjointSign::paper);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t k = 0; k < 4; ++k) {
        CHECK(same_entry(j["lie_table"][i][k].get<std::string>(), lt[i][k], ctx));
        CHECK(same_entry(j["adjoint_table"][i][k].get<std::string>(), at[i][k], ctx));
      }
    CHECK(j["paper_diff"]["lie_matches"] == 16);
    bool row1 = false;
    for (const auto& m : j["paper_diff"]["mismatches"])
      if (m["row"] == "X1" && m["column"] == "X1" && m["paper"] == "X1 + eps*X3 + 2*eps*X4") row1 = true;
    CHECK(row1);
    // the scaling entries hold under the paper sign
    auto cell = [&](std::size_t i, std::size_t k) { return j["adjoint_table"][i][k].get<std::string>(); };
    CHECK(same_entry("exp(-eps)*X1", simplify(parse_expr(cell(2, 0), ctx)), ctx));
    CHECK(same_entry("exp(-2*eps)*X1", simplify(parse_expr(cell(3, 0), ctx)), ctx));
    CHECK(same_entry("exp(-eps)*X2", simplify(parse_expr(cell(3, 1), ctx)), ctx));
  }

  TEST_CASE("flows JSON round-trips") {
    auto j = json_of({"flows", rnc_path(), "--diff-paper"});
    CHECK(j["paper_diff"]["matches"] == 4);
    const PdeSystem& sys = testing::rnc_spec().system;
    ParseContext ctx = sys.context();
    ctx.extended = true;
    ctx.declare("h", SymbolKind::group_param);
    for (std::size_t k = 0; k < 4; ++k) {
      Flow f = flow(alg().basis[k], sys);
      for (std::size_t c = 0; c < 5; ++c)
        CHECK(simplify(parse_expr(j["maps"][k]["images"][c].get<std::string>(), ctx) - f.images[c]).is_zero());
    }
  }

  TEST_CASE("optimal JSON round-trips") {
    auto j = json_of({"optimal", rnc_path(), "--diff-paper"});
    const AdjointAction act = make_action(alg());
    std::size_t total = 0;
    for (const auto& f : j["forms"]) {
      VectorQ a(4);
      for (Eigen::Index i = 0; i < 4; ++i) a(i) = Rational::parse(f["normal"][static_cast<std::size_t>(i)].get<std::string>());
      CHECK(normalize_element(act, a).label == f["label"].get<std::string>());
      total += f["count"].get<std::size_t>();
    }
    CHECK(total == 200);
    CHECK(j["paper"]["pairwise_inequivalent"] == true);
    for (const auto& r : j["paper"]["representatives"]) CHECK(r["fixed_point"] == true);
    CHECK(j["derived"]["singles"] == nlohmann::json::array({"X4"}));
    CHECK(j["derived"]["families"][0]["label"] == "X4+a*X3");
    CHECK(j["derived"]["all_inequivalent"] == true);
    CHECK(j["paper_diff"]["paper_met"] == 9);
  }

  TEST_CASE("reduce examples") {
    const PdeSystem& sys = testing::rnc_spec().system;
    ParseContext ctx = sys.context();
    ctx.extended = true;
    auto same = [&](const nlohmann::json& v, const std::string& e) {
      return simplify(parse_expr(v.get<std::string>(), ctx) - parse_expr(e, ctx)).is_zero();
    };
    auto x4 = json_of({"reduce", rnc_path(), "--element", "X4"});
    CHECK(same(x4["ansatz"]["s"], "y/x^(1/2)"));
    CHECK(same(x4["ansatz"]["prefactors"]["u"], "1"));
    CHECK(same(x4["ansatz"]["prefactors"]["v"], "x^(-1/2)"));
    CHECK(same(x4["ansatz"]["prefactors"]["theta"], "x^(-1)"));
    auto x43 = json_of({"reduce", rnc_path(), "--element", "X4-X3", "--diff-paper"});
    CHECK(same(x43["ansatz"]["s"], "y/x"));
    CHECK(same(x43["ansatz"]["prefactors"]["u"], "x^(-1)"));
    CHECK(same(x43["ansatz"]["prefactors"]["theta"], "x^(-3)"));
    CHECK(x43["paper_diff"]["differing"].empty());
    auto x21 = json_of({"reduce", rnc_path(), "--element", "X2-X1"});
    CHECK(same(x21["ansatz"]["s"], "x + y"));
  }

  TEST_CASE("verify report") {
    auto j = json_of({"verify", rnc_path(), "--element", "X4"});
    CHECK(j["pass"] == true);
    CHECK(j["max_residual"].get<double>() <= 1e-6);
    CHECK(j["state"] == nlohmann::json::array({"Fu", "Fu_s", "Fv", "Ftheta", "Ftheta_s"}));
    auto z = json_of({"verify", rnc_path(), "--element", "X1", "--init", "0,0,0,0,0"});
    CHECK(z["max_residual"] == 0.0);
  }

  TEST_CASE("exit codes") {
    CHECK(run({"symm", rnc_path()}).code == cli::Exit::ok);
    CHECK(run({}).code == cli::Exit::usage);
    CHECK(run({"reduce", rnc_path()}).code == cli::Exit::usage);
    CHECK(run({"table", "/nonexistent.json"}).code == cli::Exit::usage);
    CHECK(run({"symm", rnc_path(), "--adjoint-sign", "left"}).code == cli::Exit::usage);
    CHECK(run({"reduce", rnc_path(), "--element", "X1*X2"}).code == cli::Exit::usage);
    CHECK(run({"verify", rnc_path(), "--element", "X4", "--init", "1,2"}).code == cli::Exit::usage);
    Run x2 = run({"verify", rnc_path(), "--element", "X2"});
    CHECK(x2.code == cli::Exit::math);
    CHECK(x2.err.find("never differentiated") != std::string::npos);
    CHECK(run({"verify", rnc_path(), "--element", "X4", "--tol", "1e-12"}).code == cli::Exit::tolerance);
    // a basis that does not close
    const std::string tmp = (std::filesystem::temp_directory_path() / "liesym_open_basis.json").string();
    std::ofstream(tmp) << R"([{"label": "A", "xi_x": "1"}, {"label": "B", "xi_x": "x^2"}])";
    Run open = run({"table", rnc_path(), "--generators", tmp});
    CHECK(open.code == cli::Exit::math);
    std::filesystem::remove(tmp);
  }

  TEST_CASE("--out writes the report") {
    const std::string tmp = (std::filesystem::temp_directory_path() / "liesym_out.txt").string();
    Run r = run({"flows", rnc_path(), "--out", tmp});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(read_file(tmp) == run({"flows", rnc_path()}).out);
    std::filesystem::remove(tmp);
  }
}
