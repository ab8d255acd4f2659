#include "liesym/liealg.hpp"
#include "liesym/parser.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace liesym;
using testing::field;
using testing::Rng;

namespace {

const PdeSystem& rnc() { return testing::rnc_spec().system; }

std::vector<VectorField> paper_basis() {
  std::vector<VectorField> out;
  for (const auto& g : testing::rnc_spec().expected_generators) out.push_back(g.field);
  return out;
}

const LieAlgebra& rnc_alg() {
  static const LieAlgebra a = structure_constants(paper_basis(), rnc());
  return a;
}

const nlohmann::json& transcription() {
  static const nlohmann::json j = nlohmann::json::parse(read_file(testing::data_path("rnc_paper.json")));
  return j;
}

VectorQ vec(std::initializer_list<long> v) {
  VectorQ r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (long x : v) r(i++) = Rational(x);
  return r;
}

Expr image(const AdjointMap& M, std::size_t j, const LieAlgebra& alg) {
  std::vector<Expr> t;
  for (std::size_t k = 0; k < M.n; ++k) t.push_back(M(k, j).to_expr(Symbol("eps")) * Expr(Symbol(alg.labels[k])));
  return simplify(Expr::sum(std::move(t)));
}

Expr E(const std::string& s, const LieAlgebra& alg) { return simplify(parse_expr(s, algebra_context(alg))); }

MatrixQ random_split_matrix(Rng& r, Eigen::Index n) {
  // P T P^{-1} with T upper triangular and small integer eigenvalues
  MatrixQ T = MatrixQ::Zero(n, n), P = MatrixQ::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    T(i, i) = Rational(r.uniform(-2, 2));
    for (Eigen::Index j = i + 1; j < n; ++j) T(i, j) = Rational(r.uniform(-2, 2));
    for (Eigen::Index j = 0; j < i; ++j) P(i, j) = Rational(r.uniform(-1, 1));  // unit lower triangular
  }
  MatrixQ Pinv = MatrixQ::Identity(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) {
      Rational s;
      for (Eigen::Index k = j; k < i; ++k) s += P(i, k) * Pinv(k, j);
      Pinv(i, j) = -s;
    }
  REQUIRE((P * Pinv).isIdentity());
  return P * T * Pinv;
}

void check_against_series(const AdjointMap& M, const MatrixQ& A, int order) {
  AdjointMap S = exp_series(A, order);
  for (std::size_t i = 0; i < M.n; ++i)
    for (std::size_t j = 0; j < M.n; ++j) {
      auto a = M(i, j).taylor(order), b = S(i, j).taylor(order);
      REQUIRE(a == b);
    }
}

}  // namespace

TEST_SUITE("liealg") {
  TEST_CASE("bracket examples") {
    auto B = paper_basis();
    CHECK(bracket(B[0], B[2], rnc()) == B[0]);
    CHECK(bracket(B[0], B[3], rnc()) == Rational(2) * B[0]);
    CHECK(bracket(B[1], B[2], rnc()).is_zero());
    CHECK(bracket(B[3], B[3], rnc()).is_zero());
    auto X = field(rnc(), {{"xi_x", "x^2"}}), Y = field(rnc(), {{"xi_x", "1"}});
    CHECK(bracket(Y, X, rnc()) == field(rnc(), {{"xi_x", "2*x"}}));
  }

  TEST_CASE("bracket is antisymmetric and satisfies Jacobi on random fields") {
    Rng r(41);
    for (int t = 0; t < 15; ++t) {
      auto X = testing::random_field(r, rnc(), 2, 2), Y = testing::random_field(r, rnc(), 2, 2),
           Z = testing::random_field(r, rnc(), 2, 2);
      REQUIRE(bracket(X, Y, rnc()) == Rational(-1) * bracket(Y, X, rnc()));
      VectorField J = bracket(X, bracket(Y, Z, rnc()), rnc()) + bracket(Y, bracket(Z, X, rnc()), rnc()) +
                      bracket(Z, bracket(X, Y, rnc()), rnc());
      REQUIRE(J.is_zero());
    }
  }

  TEST_CASE("structure constants of the RNC basis") {
    const LieAlgebra& a = rnc_alg();
    REQUIRE(a.dimension() == 4);
    int nonzero = 0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = 0; k < 4; ++k) nonzero += a.c(k, i, j).is_zero() ? 0 : 1;
    CHECK(nonzero == 6);
    CHECK(a.c(0, 0, 2) == Rational(1));
    CHECK(a.c(0, 0, 3) == Rational(2));
    CHECK(a.c(1, 1, 3) == Rational(1));
    CHECK(a.c(0, 2, 0) == Rational(-1));
    CHECK(a.c(0, 3, 0) == Rational(-2));
    CHECK(a.c(1, 3, 1) == Rational(-1));
  }

  TEST_CASE("small algebras") {
    auto dx = field(rnc(), {{"xi_x", "1"}}), dy = field(rnc(), {{"xi_y", "1"}}), xdx = field(rnc(), {{"xi_x", "x"}});
    auto ab = structure_constants({dx, dy}, rnc());
    CHECK(ab.ad[0].isZero());
    CHECK(ab.ad[1].isZero());
    auto aff = structure_constants({dx, xdx}, rnc());
    CHECK(aff.c(0, 0, 1) == Rational(1));
    CHECK(aff.c(0, 1, 0) == Rational(-1));
    try {
      structure_constants({dx, field(rnc(), {{"xi_x", "x^2"}})}, rnc());
      FAIL("expected a closure error");
    } catch (const ClosureError& e) {
      CHECK(e.i == 0);
      CHECK(e.j == 1);
      CHECK(e.residual == "2*x*d_x");
    }
  }

  TEST_CASE("the degree-2 solution space is a Lie algebra") {
    SymmetryResult r = solve_symmetries(rnc(), 2);
    LieAlgebra a = structure_constants(r.basis.basis, rnc());
    CHECK(a.dimension() == 6);
    for (std::size_t i = 0; i < 6; ++i) check_against_series(adjoint_exp(a, i), -a.ad[i], 6);
  }

  TEST_CASE("ad matrices") {
    const LieAlgebra& a = rnc_alg();
    MatrixQ ad3 = ad_matrix(a, 2);
    CHECK(ad3(0, 0) == Rational(-1));
    ad3(0, 0) = Rational(0);
    CHECK(ad3.isZero());
    MatrixQ ad4 = ad_matrix(a, 3);
    CHECK(ad4(0, 0) == Rational(-2));
    CHECK(ad4(1, 1) == Rational(-1));
    Rng r(5);
    for (int t = 0; t < 20; ++t) {
      VectorQ v(4);
      for (Eigen::Index i = 0; i < 4; ++i) v(i) = r.rational();
      CHECK((ad_matrix(a, v) * v).isZero());
    }
  }

  TEST_CASE("characteristic polynomial and rational roots") {
    MatrixQ A(2, 2);
    A << Rational(2), Rational(1), Rational(0), Rational(2);
    CHECK(characteristic_polynomial(A) == std::vector<Rational>{4, -4, 1});
    CHECK(rational_roots({4, -4, 1}) == std::vector<Rational>{2, 2});
    std::vector<Rational> rest;
    auto roots = rational_roots({Rational(-2), Rational(0), Rational(0), Rational(1)}, &rest);  // x^3 - 2
    CHECK(roots.empty());
    CHECK(poly_string(rest, "lambda") == "lambda^3 - 2");
    roots = rational_roots({Rational(0), Rational(-1, 4), Rational(0), Rational(1)}, &rest);  // x^3 - x/4
    CHECK(roots == std::vector<Rational>{Rational(-1, 2), 0, Rational(1, 2)});
    CHECK(rest == std::vector<Rational>{1});
    CHECK(characteristic_polynomial(ad_matrix(rnc_alg(), 3)) == std::vector<Rational>{0, 0, 2, 3, 1});
  }

  TEST_CASE("adjoint action examples") {
    const LieAlgebra& a = rnc_alg();
    CHECK(image(adjoint_exp(a, 0), 2, a) == E("X3 - eps*X1", a));
    CHECK(image(adjoint_exp(a, 2), 0, a) == E("exp(eps)*X1", a));
    CHECK(image(adjoint_exp(a, 2, AdjointSign::paper), 0, a) == E("exp(-eps)*X1", a));
    CHECK(image(adjoint_exp(a, 3, AdjointSign::paper), 1, a) == E("exp(-eps)*X2", a));
    CHECK(image(adjoint_exp(a, 3, AdjointSign::paper), 0, a) == E("exp(-2*eps)*X1", a));
    CHECK(image(adjoint_exp(a, 3), 1, a) == E("exp(eps)*X2", a));
    CHECK(image(adjoint_exp(a, 1, AdjointSign::paper), 3, a) == E("X4 + eps*X2", a));
    CHECK(image(adjoint_exp(a, 0), 0, a) == E("X1", a));
  }

  TEST_CASE("adjoint maps are the identity at zero and satisfy the group law") {
    const LieAlgebra& a = rnc_alg();
    Symbol e1("e1"), e2("e2"), s("eps");
    Rng r(77);
    for (auto sign : {AdjointSign::series, AdjointSign::paper}) {
      for (std::size_t i = 0; i < 4; ++i) {
        AdjointMap M = adjoint_exp(a, i, sign);
        CHECK_FALSE(M.approximate);
        CHECK(M.eval(0.0).isIdentity());
        for (std::size_t p = 0; p < 4; ++p)
          for (std::size_t q = 0; q < 4; ++q) {
            std::vector<Expr> t;
            for (std::size_t l = 0; l < 4; ++l) t.push_back(M(p, l).to_expr(e1) * M(l, q).to_expr(e2));
            Expr lhs = simplify(Expr::sum(std::move(t)));
            Expr rhs = simplify(substitute(M(p, q).to_expr(s), {{s, Expr(e1) + Expr(e2)}}));
            REQUIRE_MESSAGE(simplify(lhs - rhs).is_zero(), to_string(lhs), " vs ", to_string(rhs));
          }
        for (int t = 0; t < 20; ++t) {
          double x = r.real(-2, 2), y = r.real(-2, 2);
          CHECK((M.eval(x) * M.eval(y) - M.eval(x + y)).cwiseAbs().maxCoeff() <= 1e-12);
        }
      }
    }
  }

  TEST_CASE("closed forms agree with the truncated Lie series") {
    const LieAlgebra& a = rnc_alg();
    for (std::size_t i = 0; i < 4; ++i) {
      check_against_series(adjoint_exp(a, i), -a.ad[i], 6);
      check_against_series(adjoint_exp(a, i, AdjointSign::paper), a.ad[i], 6);
    }
    // the Lie series Y - eps[X,Y] + eps^2/2 [X,[X,Y]] - ..., spelled out on fields
    auto B = paper_basis();
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        AdjointMap M = adjoint_exp(a, i);
        VectorField term = B[j];
        Rational fact(1);
        for (int k = 0; k <= 6; ++k) {
          if (k > 0) {
            term = bracket(B[i], term, rnc());
            fact = fact * Rational(-k);
          }
          VectorField from_map = VectorField::zero(rnc());
          for (std::size_t l = 0; l < 4; ++l) from_map += M(l, j).taylor(6)[static_cast<std::size_t>(k)] * B[l];
          REQUIRE(from_map == (Rational(1) / fact) * term);
        }
      }
  }

  TEST_CASE("Putzer exponential on random split matrices") {
    Rng r(123);
    for (int t = 0; t < 40; ++t) {
      MatrixQ A = random_split_matrix(r, r.uniform(1, 5));
      AdjointMap M = matrix_exp(A);
      check_against_series(M, A, 8);
      for (int k = 0; k < 3; ++k) {
        double x = r.real(-1, 1), y = r.real(-1, 1);
        REQUIRE((M.eval(x) * M.eval(y) - M.eval(x + y)).cwiseAbs().maxCoeff() <= 1e-9);
      }
    }
    MatrixQ J(2, 2);
    J << Rational(2), Rational(1), Rational(0), Rational(2);
    AdjointMap M = matrix_exp(J);
    CHECK(M(0, 1) == ExpPoly::term(Rational(1), 1, Rational(2)));
    CHECK(M(0, 0) == ExpPoly::exp(Rational(2)));
    CHECK(M(1, 0).is_zero());
  }

  TEST_CASE("non-split characteristic polynomial") {
    MatrixQ R(2, 2);
    R << Rational(0), Rational(-1), Rational(1), Rational(0);
    try {
      matrix_exp(R);
      FAIL("expected a split error");
    } catch (const SplitError& e) {
      CHECK(std::string(e.what()).find("lambda^2 + 1") != std::string::npos);
    }
    AdjointMap S = matrix_exp(R, 7);
    CHECK(S.approximate);
    CHECK(S.series_order == 7);
    CHECK(std::abs(S.eval(0.5)(0, 0) - std::cos(0.5)) < 1e-6);
  }

  TEST_CASE("linear integration of exponential polynomials") {
    Rng r(17);
    for (int t = 0; t < 100; ++t) {
      ExpPoly f;
      for (int k = 0; k < 3; ++k) f += ExpPoly::term(r.rational(), static_cast<int>(r.uniform(0, 3)), Rational(r.uniform(-2, 2)));
      Rational mu(r.uniform(-2, 2));
      ExpPoly y = ExpPoly::integrate_linear(mu, f);
      REQUIRE(y.derivative() - mu * y == f);
      REQUIRE(y.taylor(0)[0].is_zero());
    }
  }

  TEST_CASE("exact evaluation at group parameters") {
    ExpPoly e = ExpPoly::exp(Rational(2)) + ExpPoly::eps();
    CHECK_FALSE(e.eval_exact(GroupParam::log(Rational(1), Rational(3))));
    CHECK(ExpPoly::exp(Rational(2)).eval_exact(GroupParam::log(Rational(1, 2), Rational(9))) == Rational(9));
    CHECK(ExpPoly::exp(Rational(1)).eval_exact(GroupParam::log(Rational(1, 2), Rational(2))) == std::nullopt);
    CHECK(ExpPoly::eps(2).eval_exact(GroupParam::rational(Rational(3))) == Rational(9));
    CHECK(GroupParam::log(Rational(-1), Rational(3)).str() == "-ln(3)");
    CHECK(GroupParam::log(Rational(1, 2), Rational(5, 3)).str() == "1/2*ln(5/3)");
  }

  TEST_CASE("tables against the transcription") {
    const LieAlgebra& a = rnc_alg();
    auto ctx = algebra_context(a);
    const auto& tr = transcription();
    auto lt = lie_table(a);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(same_entry(tr["lie_table"][i][j].get<std::string>(), lt[i][j], ctx));
    CHECK(to_string(lt[0][3]) == "2*X1");
    auto at = adjoint_table(a, AdjointSign::paper);
    CHECK(same_entry(tr["adjoint_table"][2][0].get<std::string>(), at[2][0], ctx));
    CHECK(same_entry(tr["adjoint_table"][3][0].get<std::string>(), at[3][0], ctx));
    CHECK(same_entry(tr["adjoint_table"][3][1].get<std::string>(), at[3][1], ctx));
    // row X1 col X1 cannot hold: [X1, X1] = 0
    CHECK_FALSE(same_entry(tr["adjoint_table"][0][0].get<std::string>(), at[0][0], ctx));
    CHECK(to_string(at[0][0]) == "X1");
  }

  TEST_CASE("flows reproduce the transcribed one-parameter groups") {
    const auto& sys = rnc();
    ParseContext ctx = sys.context();
    ctx.extended = true;
    ctx.declare("h", SymbolKind::group_param);
    const auto& maps = transcription()["flows"]["maps"];
    auto B = paper_basis();
    for (std::size_t k = 0; k < 4; ++k) {
      Flow g = flow(B[k], sys);
      REQUIRE(g.images.size() == 5);
      for (std::size_t c = 0; c < 5; ++c)
        CHECK_MESSAGE(simplify(parse_expr(maps[k][c].get<std::string>(), ctx) - g.images[c]).is_zero(),
                      to_string(g.images[c]));
    }
    CHECK(to_string(flow(B[3], sys).images[0]) == "x*exp(2*h)");
  }

  TEST_CASE("flow derivative at zero recovers the field") {
    const auto& sys = rnc();
    Rng r(3);
    auto coords = base_coordinates(sys);
    for (int t = 0; t < 20; ++t) {
      VectorField X = VectorField::zero(sys);
      for (std::size_t k = 0; k < X.size(); ++k)
        X.component(k) = Poly::var(coords[k]) * r.rational() + Poly(r.uniform(0, 1) ? r.rational() : Rational(0));
      Flow g = flow(X, sys);
      for (std::size_t k = 0; k < X.size(); ++k) {
        Expr d = simplify(substitute(diff(g.images[k], g.parameter), {{g.parameter, Expr(0)}}));
        REQUIRE(simplify(d - from_poly(X.component(k))).is_zero());
        Expr at0 = simplify(substitute(g.images[k], {{g.parameter, Expr(0)}}));
        REQUIRE(at0 == Expr(coords[k]));
      }
    }
    CHECK_THROWS_AS(flow(field(sys, {{"xi_x", "y"}}), sys), FlowError);
    CHECK_THROWS_AS(flow(field(sys, {{"xi_x", "x^2"}}), sys), FlowError);
  }

  TEST_CASE("pulled-back equations vanish on solutions") {
    const auto& sys = rnc();
    SolvedForm sf = solve_leading(sys);
    Rng r(11);
    auto B = paper_basis();
    for (std::size_t k = 0; k < 4; ++k) {
      Flow g = flow(B[k], sys);
      for (int t = 0; t < 10; ++t) {
        // h = ln q keeps exp(a h) rational; translations take h rational
        Rational q(r.uniform(1, 9), r.uniform(1, 9));
        Expr h = k < 2 ? Expr(r.rational()) : Expr::log(Expr(q));
        for (const Poly& eq : sys.equations) {
          Expr pulled = simplify(substitute(transform_equation(eq, g, sys), {{g.parameter, h}}));
          REQUIRE(reduce_mod_system(poly_normalize(pulled), sf).is_zero());
        }
      }
    }
    // a non-symmetry does not survive
    Flow g = flow(field(sys, {{"phi_u", "u"}}), sys);
    Expr pulled = simplify(substitute(transform_equation(sys.equations[1], g, sys), {{g.parameter, Expr::log(Expr(2))}}));
    CHECK_FALSE(reduce_mod_system(poly_normalize(pulled), sf).is_zero());
  }
}
