#include "liesym/liealg.hpp"

#include "liesym/parser.hpp"

#include <algorithm>

namespace liesym {

Poly apply_field(const VectorField& X, const Poly& f, const PdeSystem& sys) {
  auto coords = base_coordinates(sys);
  Poly r;
  for (std::size_t k = 0; k < coords.size(); ++k)
    if (!X.component(k).is_zero()) r += X.component(k) * f.diff(coords[k]);
  return r;
}

VectorField bracket(const VectorField& X, const VectorField& Y, const PdeSystem& sys) {
  VectorField Z = VectorField::zero(sys);
  for (std::size_t k = 0; k < Z.size(); ++k)
    Z.component(k) = apply_field(X, Y.component(k), sys) - apply_field(Y, X.component(k), sys);
  return Z;
}

VectorField LieAlgebra::element(const VectorQ& a) const {
  VectorField X = basis.empty() ? VectorField{} : Rational(0) * basis[0];
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (!a(static_cast<Eigen::Index>(i)).is_zero()) X += a(static_cast<Eigen::Index>(i)) * basis[i];
  return X;
}

ClosureError::ClosureError(std::size_t i_, std::size_t j_, std::string residual_)
    : std::runtime_error("bracket of generators " + std::to_string(i_ + 1) + " and " + std::to_string(j_ + 1) +
                         " leaves the span: " + residual_),
      i(i_), j(j_), residual(std::move(residual_)) {}

LieAlgebra structure_constants(const std::vector<VectorField>& basis, const PdeSystem& sys,
                               std::vector<std::string> labels) {
  const std::size_t n = basis.size();
  if (labels.empty())
    for (std::size_t i = 0; i < n; ++i) labels.push_back("X" + std::to_string(i + 1));
  if (labels.size() != n) throw std::invalid_argument("label count differs from basis size");
  LieAlgebra alg{basis, std::move(labels), std::vector<MatrixQ>(n, MatrixQ::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)))};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      VectorField B = bracket(basis[i], basis[j], sys);
      VectorQ c;
      try {
        c = coordinates_in(B, basis, sys);
      } catch (const BasisError&) {
        throw ClosureError(i, j, to_string(B, sys));
      }
      alg.ad[i].col(static_cast<Eigen::Index>(j)) = c;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (alg.c(k, i, j) != -alg.c(k, j, i)) throw std::logic_error("structure constants are not antisymmetric");
  // Jacobi in the form ad([X_i, X_j]) = [ad X_i, ad X_j]
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      MatrixQ lhs = ad_matrix(alg, VectorQ(alg.ad[i].col(static_cast<Eigen::Index>(j))));
      MatrixQ rhs = alg.ad[i] * alg.ad[j] - alg.ad[j] * alg.ad[i];
      if (lhs != rhs) throw std::logic_error("structure constants violate the Jacobi identity");
    }
  return alg;
}

const MatrixQ& ad_matrix(const LieAlgebra& alg, std::size_t i) { return alg.ad.at(i); }

MatrixQ ad_matrix(const LieAlgebra& alg, const VectorQ& a) {
  const auto n = static_cast<Eigen::Index>(alg.dimension());
  MatrixQ r = MatrixQ::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (!a(i).is_zero()) r += alg.ad[static_cast<std::size_t>(i)] * a(i);
  return r;
}

std::vector<Rational> characteristic_polynomial(const MatrixQ& A) {
  // Faddeev-LeVerrier
  const Eigen::Index n = A.rows();
  std::vector<Rational> c(static_cast<std::size_t>(n + 1));
  c[static_cast<std::size_t>(n)] = Rational(1);
  MatrixQ M = MatrixQ::Zero(n, n);
  const MatrixQ I = MatrixQ::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    M = A * M + I * c[static_cast<std::size_t>(n - k + 1)];
    MatrixQ AM = A * M;
    Rational tr;
    for (Eigen::Index d = 0; d < n; ++d) tr += AM(d, d);
    c[static_cast<std::size_t>(n - k)] = -tr / Rational(k);
  }
  return c;
}

namespace {

Rational horner(const std::vector<Rational>& p, const Rational& x) {
  Rational v;
  for (std::size_t k = p.size(); k-- > 0;) v = v * x + p[k];
  return v;
}

// p / (x - r), exact division assumed
std::vector<Rational> deflate(const std::vector<Rational>& p, const Rational& r) {
  std::vector<Rational> q(p.size() - 1);
  Rational carry;
  for (std::size_t k = p.size(); k-- > 1;) {
    carry = carry * r + p[k];
    q[k - 1] = carry;
  }
  return q;
}

std::vector<mpz_class> divisors(mpz_class v) {
  v = abs(v);
  std::vector<mpz_class> out;
  for (mpz_class d = 1; d * d <= v; ++d) {
    if (v % d != 0) continue;
    out.push_back(d);
    if (d * d != v) out.push_back(v / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void trim(std::vector<Rational>& p) {
  while (p.size() > 1 && p.back().is_zero()) p.pop_back();
}

}  // namespace

std::vector<Rational> rational_roots(std::vector<Rational> p, std::vector<Rational>* rest) {
  trim(p);
  std::vector<Rational> roots;
  while (p.size() > 1 && p[0].is_zero()) {
    roots.emplace_back(0);
    p.erase(p.begin());
  }
  if (p.size() > 1) {
    mpz_class l = lcm_of_denominators(p.data(), p.data() + p.size());
    std::vector<mpz_class> ints;
    for (const auto& q : p) ints.push_back((q * Rational(l)).num());
    std::vector<Rational> candidates;
    for (const auto& a : divisors(ints.front()))
      for (const auto& b : divisors(ints.back())) {
        candidates.emplace_back(a, b);
        candidates.emplace_back(-a, b);
      }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (const auto& r : candidates) {
      while (p.size() > 1 && horner(p, r).is_zero()) {
        roots.push_back(r);
        p = deflate(p, r);
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  if (rest) {
    Rational lead = p.back();
    for (auto& q : p) q = q / lead;
    *rest = p;
  }
  return roots;
}

std::string poly_string(const std::vector<Rational>& p, const std::string& var) {
  std::vector<Expr> terms;
  for (std::size_t k = 0; k < p.size(); ++k)
    terms.push_back(Expr(p[k]) * Expr::power(Expr(Symbol(var)), Rational(static_cast<long>(k))));
  return to_string(simplify(Expr::sum(std::move(terms))));
}

Eigen::MatrixXd AdjointMap::eval(double eps) const {
  Eigen::MatrixXd r(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).eval(eps);
  return r;
}

std::optional<VectorQ> AdjointMap::apply_exact(const GroupParam& eps, const VectorQ& a) const {
  VectorQ out = VectorQ::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const Rational& aj = a(static_cast<Eigen::Index>(j));
    if (aj.is_zero()) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const ExpPoly& e = (*this)(i, j);
      if (e.is_zero()) continue;
      auto v = e.eval_exact(eps);
      if (!v) return std::nullopt;
      out(static_cast<Eigen::Index>(i)) += *v * aj;
    }
  }
  return out;
}

Eigen::VectorXd AdjointMap::apply(double eps, const Eigen::VectorXd& a) const { return eval(eps) * a; }

AdjointMap exp_series(const MatrixQ& A, int order) {
  const auto n = static_cast<std::size_t>(A.rows());
  AdjointMap M{n, std::vector<ExpPoly>(n * n), true, order};
  MatrixQ P = MatrixQ::Identity(A.rows(), A.cols());
  Rational fact(1);
  for (int k = 0; k <= order; ++k) {
    if (k > 0) {
      P = P * A;
      fact = fact * Rational(k);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Rational& v = P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (!v.is_zero()) M(i, j) += ExpPoly::term(v / fact, k, Rational(0));
      }
  }
  return M;
}

AdjointMap matrix_exp(const MatrixQ& A, int series_fallback) {
  const auto n = static_cast<std::size_t>(A.rows());
  std::vector<Rational> rest;
  std::vector<Rational> mu = rational_roots(characteristic_polynomial(A), &rest);
  if (rest.size() > 1) {
    if (series_fallback > 0) return exp_series(A, series_fallback);
    throw SplitError("characteristic polynomial has a factor without rational roots: " + poly_string(rest, "lambda"));
  }
  // Putzer: exp(eps A) = sum_k r_{k+1}(eps) P_k, P_k = prod_{j<=k} (A - mu_j I)
  AdjointMap M{n, std::vector<ExpPoly>(n * n), false, 0};
  const MatrixQ I = MatrixQ::Identity(A.rows(), A.cols());
  MatrixQ P = I;
  ExpPoly r = ExpPoly::exp(mu.empty() ? Rational(0) : mu[0]);
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      P = P * (A - I * mu[k - 1]);
      if (P.isZero()) break;
      r = ExpPoly::integrate_linear(mu[k], r);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Rational& v = P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (!v.is_zero()) M(i, j) += v * r;
      }
  }
  return M;
}

AdjointMap adjoint_exp(const LieAlgebra& alg, std::size_t i, AdjointSign sign, int series_fallback) {
  MatrixQ A = ad_matrix(alg, i);
  if (sign == AdjointSign::series) A = -A;
  return matrix_exp(A, series_fallback);
}

std::vector<std::vector<Expr>> lie_table(const LieAlgebra& alg) {
  const std::size_t n = alg.dimension();
  std::vector<std::vector<Expr>> t(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Expr> terms;
      for (std::size_t k = 0; k < n; ++k)
        if (!alg.c(k, i, j).is_zero()) terms.push_back(Expr(alg.c(k, i, j)) * Expr(Symbol(alg.labels[k])));
      t[i][j] = simplify(Expr::sum(std::move(terms)));
    }
  return t;
}

std::vector<std::vector<Expr>> adjoint_table(const LieAlgebra& alg, AdjointSign sign, const std::string& eps) {
  const std::size_t n = alg.dimension();
  std::vector<std::vector<Expr>> t(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i) {
    AdjointMap M = adjoint_exp(alg, i, sign);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Expr> terms;
      for (std::size_t k = 0; k < n; ++k)
        if (!M(k, j).is_zero()) terms.push_back(M(k, j).to_expr(Symbol(eps)) * Expr(Symbol(alg.labels[k])));
      t[i][j] = simplify(Expr::sum(std::move(terms)));
    }
  }
  return t;
}

ParseContext algebra_context(const LieAlgebra& alg) {
  ParseContext ctx;
  for (const auto& l : alg.labels) ctx.declare(l, SymbolKind::other);
  ctx.declare("eps", SymbolKind::group_param);
  ctx.declare("h", SymbolKind::group_param);
  ctx.extended = true;
  return ctx;
}

bool same_entry(const std::string& transcribed, const Expr& computed, const ParseContext& ctx) {
  Expr p = parse_expr(transcribed, ctx);
  return simplify(p - computed).is_zero();
}

Flow flow(const VectorField& X, const PdeSystem& sys, const std::string& parameter) {
  Flow g;
  g.coordinates = base_coordinates(sys);
  g.parameter = Symbol(parameter);
  const Expr h(g.parameter);
  for (std::size_t k = 0; k < g.coordinates.size(); ++k) {
    const Symbol z = g.coordinates[k];
    const Poly& C = X.component(k);
    auto vars = C.variables();
    if (C.total_degree() > 1 || std::any_of(vars.begin(), vars.end(), [&](Symbol s) { return s != z; }))
      throw FlowError("component along " + z.name() + " is not of the form a*" + z.name() + " + b: " + to_string(C));
    Rational a = C.coeff(z, 1).constant_value(), b = C.coeff(z, 0).constant_value();
    Expr img = a.is_zero() ? Expr(z) + Expr(b) * h
                           : (Expr(z) + Expr(b / a)) * Expr::exp(Expr(a) * h) - Expr(b / a);
    g.images.push_back(simplify(img));
  }
  return g;
}

Expr transform_equation(const Poly& eq, const Flow& g, const PdeSystem& sys) {
  std::unordered_map<Symbol, Expr> img;
  for (std::size_t k = 0; k < g.coordinates.size(); ++k) img.emplace(g.coordinates[k], g.images[k]);
  std::unordered_map<Symbol, Expr> bind;
  for (Symbol s : eq.variables()) {
    if (img.count(s)) {
      bind.emplace(s, img.at(s));
      continue;
    }
    auto j = sys.jet_of(s);
    if (!j) continue;
    Symbol dep = sys.dependents[static_cast<std::size_t>(j->dep)];
    Expr f = diff(img.at(dep), dep);
    for (std::size_t i = 0; i < sys.independents.size(); ++i) {
      if (j->counts[i] == 0) continue;
      Symbol x = sys.independents[i];
      f = f * Expr::power(diff(img.at(x), x), Rational(-j->counts[i]));
    }
    bind.emplace(s, f * Expr(s));
  }
  return simplify(substitute(from_poly(eq), bind));
}

}  // namespace liesym
