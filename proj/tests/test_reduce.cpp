#include "liesym/liealg.hpp"
#include "liesym/optsys.hpp"
#include "liesym/parser.hpp"
#include "liesym/reduce.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace liesym;
using testing::field;
using testing::Rng;

namespace {

const PdeSystem& rnc() { return testing::rnc_spec().system; }
Poly J(const std::string& s) { return testing::parse_poly(s, rnc()); }

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

VectorField gen(const std::string& label) { return alg().element(parse_element(label, alg())); }

ParseContext paper_ctx() {
  ParseContext c = rnc().context();
  c.extended = true;
  c.declare_function("F1");
  c.declare("h", SymbolKind::group_param);
  return c;
}

Poly reduced_poly(const std::string& s, const ReducedSystem& rs) {
  return poly_normalize(parse_expr(s, rs.system.context()));
}

bool free_of_xy(const ReducedSystem& rs) {
  for (const Poly& p : rs.system.equations)
    if (p.contains(Symbol("x")) || p.contains(Symbol("y"))) return false;
  return true;
}

// F_u = sin(s) + 2, F_v = cos(2 s), F_theta = exp(-s/3)
double shape(const std::string& name, int k, double s) {
  if (name == "Fu") return k % 4 == 0 ? std::sin(s) + (k == 0 ? 2 : 0) : k % 4 == 1 ? std::cos(s) : k % 4 == 2 ? -std::sin(s) : -std::cos(s);
  if (name == "Fv") {
    double m = std::pow(2.0, k);
    switch (k % 4) {
      case 0: return m * std::cos(2 * s);
      case 1: return -m * std::sin(2 * s);
      case 2: return -m * std::cos(2 * s);
      default: return m * std::sin(2 * s);
    }
  }
  return std::pow(-1.0 / 3, k) * std::exp(-s / 3);
}

}  // namespace

TEST_SUITE("reduce") {
  TEST_CASE("characteristics") {
    auto Q1 = characteristic(gen("X1"), rnc());
    CHECK(Q1 == std::vector<Poly>{J("-u_x"), J("-v_x"), J("-theta_x")});
    auto Q3 = characteristic(gen("X3"), rnc());
    CHECK(Q3 == std::vector<Poly>{J("u - x*u_x"), J("-x*v_x"), J("theta - x*theta_x")});
    CHECK(characteristic(gen("X4"), rnc())[1] == J("-v - 2*x*v_x - y*v_y"));
  }

  TEST_CASE("similarity variables and prefactors") {
    auto chk = [](const std::string& g, const std::string& s, std::vector<std::string> p) {
      SimilarityAnsatz an = invariants(gen(g), rnc());
      ParseContext c = paper_ctx();
      CHECK_MESSAGE(simplify(parse_expr(s, c) - an.s).is_zero(), g, ": ", to_string(an.s));
      for (std::size_t a = 0; a < 3; ++a)
        CHECK_MESSAGE(simplify(parse_expr(p[a], c) - an.prefactor[a]).is_zero(), g, ": ", to_string(an.prefactor[a]));
    };
    chk("X4", "y/x^(1/2)", {"1", "x^(-1/2)", "x^(-1)"});
    chk("X3+X4", "y/x^(1/3)", {"x^(1/3)", "x^(-1/3)", "x^(-1/3)"});
    chk("X2+X3", "y - ln(x)", {"x", "1", "x"});
    chk("X1+X2", "y - x", {"1", "1", "1"});
    chk("X4-X3", "y/x", {"x^(-1)", "x^(-1)", "x^(-3)"});
    chk("X2-X1", "x + y", {"1", "1", "1"});
    CHECK(invariants(gen("X4"), rnc()).domain == "x > 0");
    CHECK(invariants(gen("X4-X3"), rnc()).domain == "x != 0");
    CHECK(invariants(gen("X1"), rnc()).domain.empty());
  }

  TEST_CASE("classes outside the affine-diagonal form are rejected") {
    CHECK_THROWS_WITH_AS(invariants(field(rnc(), {{"xi_x", "y"}}), rnc()), doctest::Contains("xi_x = y"), ReduceError);
    CHECK_THROWS_WITH_AS(invariants(field(rnc(), {{"xi_x", "1"}, {"phi_v", "u"}}), rnc()), doctest::Contains("phi_v"),
                         ReduceError);
    CHECK_THROWS_AS(invariants(field(rnc(), {{"phi_u", "u"}}), rnc()), ReduceError);
    CHECK_THROWS_AS(invariants(field(rnc(), {{"xi_x", "x^2"}}), rnc()), ReduceError);
  }

  TEST_CASE("the ten transcribed reductions") {
    const auto j = nlohmann::json::parse(read_file(testing::data_path("rnc_paper.json")));
    ParseContext c = paper_ctx();
    REQUIRE(j["reductions"].size() == 10);
    for (const auto& r : j["reductions"]) {
      const std::string g = r["element"].get<std::string>();
      SimilarityAnsatz an = invariants(gen(g), rnc());
      CHECK_MESSAGE(simplify(parse_expr(r["s"].get<std::string>(), c) - an.s).is_zero(), g);
      const char* keys[] = {"u", "v", "t"};
      for (std::size_t a = 0; a < 3; ++a) {
        Expr ours = simplify(rename_functions(an.solution(a), "F1"));
        Expr theirs = simplify(parse_expr(r[keys[a]].get<std::string>(), c));
        CHECK_MESSAGE(simplify(ours - theirs).is_zero(), g, " ", keys[a], ": ", to_string(ours), " vs ", to_string(theirs));
      }
      for (const Expr& q : characteristic_on_ansatz(gen(g), an, rnc())) CHECK(q.is_zero());
      ReducedSystem rs = reduce_system(rnc(), an);
      CHECK(rs.system.equations.size() == 3);
      CHECK(free_of_xy(rs));
    }
  }

  TEST_CASE("random affine-diagonal generators") {
    Rng r(55);
    for (int t = 0; t < 40; ++t) {
      std::map<std::string, std::string> comps;
      auto q = [&] { return "(" + r.rational().str() + ")"; };
      const long pick = r.uniform(0, 3);
      if (pick != 1) comps["xi_x"] = q() + "*x + " + q();
      if (pick != 2) comps["xi_y"] = q() + "*y + " + q();
      comps["phi_u"] = q() + "*u";
      comps["phi_v"] = q() + "*v";
      comps["phi_theta"] = q() + "*theta";
      VectorField X = field(rnc(), comps);
      SimilarityAnsatz an;
      try {
        an = invariants(X, rnc());
      } catch (const ReduceError&) {
        CHECK((X.xi[0].is_zero() && X.xi[1].is_zero()));
        continue;
      }
      for (const Expr& e : characteristic_on_ansatz(X, an, rnc())) REQUIRE_MESSAGE(e.is_zero(), to_string(e));
    }
  }

  TEST_CASE("scaling flows preserve the ansatz") {
    for (const char* g : {"X3", "X4", "X3+X4", "X4-X3"}) {
      VectorField X = gen(g);
      SimilarityAnsatz an = invariants(X, rnc());
      Flow fl = flow(X, rnc());
      std::unordered_map<Symbol, Expr> moved{{Symbol("x"), fl.images[0]}, {Symbol("y"), fl.images[1]}};
      CHECK_MESSAGE(simplify(substitute(an.s, moved) - an.s).is_zero(), g);
      for (std::size_t a = 0; a < 3; ++a) {
        Symbol dep = rnc().dependents[a];
        Expr factor = diff(fl.images[2 + a], dep);
        CHECK_MESSAGE(simplify(substitute(an.prefactor[a], moved) - factor * an.prefactor[a]).is_zero(), g, " ", dep.name());
      }
    }
  }

  TEST_CASE("reduced equations for the scaling X4") {
    ReducedSystem rs = reduce_system(rnc(), invariants(gen("X4"), rnc()));
    const auto& eq = rs.system.equations;
    CHECK(eq[0] == reduced_poly("Fv_s - 1/2*s*Fu_s", rs));
    CHECK(eq[1] == reduced_poly("Fu_ss + 1/2*s*Fu*Fu_s - Fv*Fu_s + Gr*calpha*Ftheta", rs));
    CHECK(eq[2] == reduced_poly("(1 + 4*R)*Ftheta_ss + Pr*(1/2*s*Fu*Ftheta_s + Fu*Ftheta - Fv*Ftheta_s)", rs));
    CHECK(to_string(rs.factor[0]) == "x^(-1)");
    CHECK(to_string(rs.factor[2]) == "x^(-2)");
  }

  TEST_CASE("reduced continuity for translations") {
    ReducedSystem r1 = reduce_system(rnc(), invariants(gen("X1"), rnc()));
    CHECK(r1.system.equations[0] == reduced_poly("Fv_s", r1));
    ReducedSystem r12 = reduce_system(rnc(), invariants(gen("X1+X2"), rnc()));
    CHECK(r12.system.equations[0] == reduced_poly("-Fu_s + Fv_s", r12));
    ReducedSystem r2 = reduce_system(rnc(), invariants(gen("X2"), rnc()));
    CHECK(r2.system.equations[0] == reduced_poly("Fu_s", r2));
  }

  TEST_CASE("non-invariant ansatz leaves residual dependence") {
    VectorField X = field(rnc(), {{"xi_x", "2*x"}, {"xi_y", "y"}});
    CHECK_THROWS_WITH_AS(reduce_system(rnc(), invariants(X, rnc())), doctest::Contains("keeps x"), ReduceError);
  }

  TEST_CASE("reduced equations agree numerically with the substituted PDE") {
    // factor(x) * ODE(s(x, y)) must equal the PDE evaluated on the ansatz
    const std::map<std::string, double> params{{"Gr", 1.3}, {"Pr", 0.7}, {"R", 0.1}, {"calpha", 0.8}};
    Rng r(8);
    for (const char* g : {"X1", "X3", "X4", "X2+X3", "X3-X2", "X3+X4", "X4-X3", "X1+X2", "X1+X3", "X2+X4"}) {
      CAPTURE(g);
      SimilarityAnsatz an = invariants(gen(g), rnc());
      ReducedSystem rs = reduce_system(rnc(), an);
      std::vector<double> first(3, 0.0);
      for (int t = 0; t < 10; ++t) {
        const double x = r.real(0.5, 2), y = r.real(-1, 1);
        auto val = [&](Symbol s) {
          if (s.name() == "x") return x;
          if (s.name() == "y") return y;
          return params.at(s.name());
        };
        const double sv = eval(an.s, val, shape);
        for (std::size_t nu = 0; nu < 3; ++nu) {
          const double pde = eval(rs.raw[nu], val, shape);
          const double fac = eval(rs.factor[nu], val, shape);
          const double ode = rs.system.equations[nu].eval([&](Symbol s) {
            if (s.name() == "s") return sv;
            if (params.count(s.name())) return params.at(s.name());
            auto jc = rs.system.jet_of(s);
            return shape(rs.system.dependents[static_cast<std::size_t>(jc->dep)].name(), jc->counts[0], sv);
          });
          // normalization rescales by one nonzero constant per equation
          REQUIRE(std::abs(fac * ode) > 1e-9);
          const double ratio = pde / (fac * ode);
          if (t == 0) first[nu] = ratio;
          CHECK_MESSAGE(ratio == doctest::Approx(first[nu]).epsilon(1e-9), g, " eq ", nu);
          CHECK(std::abs(ratio) > 1e-6);
        }
      }
    }
  }
}
