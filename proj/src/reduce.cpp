#include "liesym/reduce.hpp"

#include "liesym/parser.hpp"

#include <functional>

namespace liesym {

std::vector<Poly> characteristic(const VectorField& X, const PdeSystem& sys) {
  std::vector<Poly> Q;
  const std::vector<int> zero(sys.independents.size(), 0);
  for (std::size_t a = 0; a < sys.dependents.size(); ++a) {
    Poly q = X.phi[a];
    JetCoord base{static_cast<int>(a), zero};
    for (std::size_t i = 0; i < sys.independents.size(); ++i)
      q -= X.xi[i] * Poly::var(sys.jet_symbol(base.shifted(i)));
    Q.push_back(std::move(q));
  }
  return Q;
}

Symbol similarity_symbol() { return Symbol("s"); }

Expr SimilarityAnsatz::solution(std::size_t a) const {
  return simplify(prefactor.at(a) * Expr::function(functions.at(a), 0, s));
}

namespace {

// a*z + b with rational a, b and no other symbol; false otherwise
bool affine_in(const Poly& p, Symbol z, Rational& a, Rational& b) {
  for (Symbol s : p.variables())
    if (s != z) return false;
  if (p.total_degree() > 1) return false;
  a = p.coeff(z, 1).constant_value();
  b = p.coeff(z, 0).constant_value();
  return true;
}

Expr map_functions(const Expr& e, const std::function<Expr(const Expr&)>& f) {
  switch (e.kind()) {
    case ExprKind::constant:
    case ExprKind::symbol: return e;
    case ExprKind::function: return f(Expr::function(e.function_name(), e.derivative_order(), map_functions(e.arg(), f)));
    case ExprKind::log: return Expr::log(map_functions(e.arg(), f));
    case ExprKind::exp: return Expr::exp(map_functions(e.arg(), f));
    case ExprKind::power: return Expr::power(map_functions(e.arg(), f), e.value());
    case ExprKind::product:
    case ExprKind::sum: {
      std::vector<Expr> a;
      for (const Expr& x : e.args()) a.push_back(map_functions(x, f));
      return e.kind() == ExprKind::sum ? Expr::sum(std::move(a)) : Expr::product(std::move(a));
    }
  }
  return e;
}

}  // namespace

Expr rename_functions(const Expr& e, const std::string& name) {
  return map_functions(e, [&](const Expr& f) { return Expr::function(name, f.derivative_order(), f.arg()); });
}

SimilarityAnsatz invariants(const VectorField& X, const PdeSystem& sys) {
  if (sys.independents.size() != 2) throw ReduceError("similarity reduction needs exactly two independents");
  const Symbol x = sys.independents[0], y = sys.independents[1];
  const auto names = component_names(sys);
  Rational a, b, c, d;
  if (!affine_in(X.xi[0], x, a, b))
    throw ReduceError(names[0] + " = " + to_string(X.xi[0]) + " is not of the form a*" + x.name() + " + b");
  if (!affine_in(X.xi[1], y, c, d))
    throw ReduceError(names[1] + " = " + to_string(X.xi[1]) + " is not of the form c*" + y.name() + " + d");
  std::vector<Rational> lambda;
  for (std::size_t k = 0; k < sys.dependents.size(); ++k) {
    Rational l, off;
    if (!affine_in(X.phi[k], sys.dependents[k], l, off) || !off.is_zero())
      throw ReduceError(names[2 + k] + " = " + to_string(X.phi[k]) + " is not of the form lambda*" +
                        sys.dependents[k].name());
    lambda.push_back(l);
  }

  SimilarityAnsatz an;
  for (Symbol dep : sys.dependents) an.functions.push_back("F" + dep.name());
  const Expr X_(x), Y_(y), S(similarity_symbol());
  Expr r;                // base of the prefactor powers
  Rational scale;        // prefactor exponent lambda / scale
  bool uses_log = false, fractional = false, negative = false;
  if (!a.is_zero()) {
    r = simplify(X_ + Expr(b / a));
    an.shift = b / a;
    an.eliminated = y;
    an.kept = x;
    if (!c.is_zero()) {
      an.s = (Y_ + Expr(d / c)) * Expr::power(r, -c / a);
      an.inverse = S * Expr::power(r, c / a) - Expr(d / c);
      fractional = !(c / a).is_integer();
      negative = true;
    } else {
      an.s = Y_ - Expr(d / a) * Expr::log(r);
      an.inverse = S + Expr(d / a) * Expr::log(r);
      uses_log = !d.is_zero();
    }
    scale = a;
  } else if (!c.is_zero()) {
    r = simplify(Y_ + Expr(d / c));
    an.shift = d / c;
    an.eliminated = x;
    an.kept = y;
    an.s = X_ - Expr(b / c) * Expr::log(r);
    an.inverse = S + Expr(b / c) * Expr::log(r);
    uses_log = !b.is_zero();
    scale = c;
  } else if (!b.is_zero()) {
    an.eliminated = y;
    an.kept = x;
    an.s = Y_ - Expr(d / b) * X_;
    an.inverse = S + Expr(d / b) * X_;
    for (std::size_t k = 0; k < lambda.size(); ++k) an.prefactor.push_back(simplify(Expr::exp(Expr(lambda[k] / b) * X_)));
  } else if (!d.is_zero()) {
    an.eliminated = x;
    an.kept = y;
    an.s = X_;
    an.inverse = S;
    for (std::size_t k = 0; k < lambda.size(); ++k) an.prefactor.push_back(simplify(Expr::exp(Expr(lambda[k] / d) * Y_)));
  } else {
    throw ReduceError("generator moves no independent variable; there is no similarity variable");
  }
  if (an.prefactor.empty()) {
    for (const Rational& l : lambda) {
      Rational e = l / scale;
      fractional = fractional || !e.is_integer();
      negative = negative || e.sign() < 0;
      an.prefactor.push_back(simplify(Expr::power(r, e)));
    }
  }
  an.s = simplify(an.s);
  an.inverse = simplify(an.inverse);
  if (fractional || uses_log) an.domain = to_string(r) + " > 0";
  else if (negative) an.domain = to_string(r) + " != 0";
  return an;
}

namespace {

// derivative of the ansatz for every jet symbol in the equation
std::unordered_map<Symbol, Expr> jet_bindings(const Poly& eq, const SimilarityAnsatz& an, const PdeSystem& sys) {
  std::unordered_map<Symbol, Expr> bind;
  for (Symbol v : eq.variables()) {
    auto j = sys.jet_of(v);
    if (!j) continue;
    Expr e = an.solution(static_cast<std::size_t>(j->dep));
    for (std::size_t i = 0; i < sys.independents.size(); ++i)
      for (int k = 0; k < j->counts[i]; ++k) e = diff(e, sys.independents[i]);
    bind.emplace(v, e);
  }
  return bind;
}

}  // namespace

std::vector<Expr> characteristic_on_ansatz(const VectorField& X, const SimilarityAnsatz& an, const PdeSystem& sys) {
  std::vector<Expr> out;
  // in the shifted coordinate xi and the prefactor base coincide up to a constant
  const std::unordered_map<Symbol, Expr> unshift{{an.kept, Expr(an.kept) - Expr(an.shift)}};
  for (const Poly& q : characteristic(X, sys)) {
    Expr e = substitute(from_poly(q), jet_bindings(q, an, sys));
    if (!an.shift.is_zero()) e = substitute(e, unshift);
    out.push_back(simplify(e));
  }
  return out;
}

ReducedSystem reduce_system(const PdeSystem& sys, const SimilarityAnsatz& an) {
  ReducedSystem rs;
  PdeSystem& red = rs.system;
  red.name = sys.name + " reduced";
  red.independents = {similarity_symbol()};
  for (const auto& f : an.functions) red.dependents.emplace_back(f);
  red.parameters = sys.parameters;
  const Symbol S = similarity_symbol();
  const VarOrder order = red.var_order();

  for (std::size_t nu = 0; nu < sys.equations.size(); ++nu) {
    const Poly& eq = sys.equations[nu];
    Expr E = simplify(substitute(from_poly(eq), jet_bindings(eq, an, sys)));
    rs.raw.push_back(E);
    E = substitute(E, {{an.eliminated, an.inverse}});
    // work in the shifted coordinate so powers of the base stay monomials
    if (!an.shift.is_zero()) E = substitute(E, {{an.kept, Expr(an.kept) - Expr(an.shift)}});
    E = simplify(E);

    // common factor: the part of the first term that depends on the kept coordinate
    Expr factor(1);
    if (!E.is_zero()) {
      const Expr first = E.kind() == ExprKind::sum ? E.arg(0) : E;
      std::vector<Expr> dep;
      if (first.kind() == ExprKind::product) {
        for (const Expr& f : first.args())
          if (contains(f, an.kept)) dep.push_back(f);
      } else if (contains(first, an.kept)) {
        dep.push_back(first);
      }
      factor = simplify(Expr::product(std::move(dep)));
      E = simplify(E / factor);
    }
    if (!an.shift.is_zero()) factor = simplify(substitute(factor, {{an.kept, Expr(an.kept) + Expr(an.shift)}}));
    rs.factor.push_back(factor);
    for (Symbol z : sys.independents)
      if (contains(E, z))
        throw ReduceError("equation " + std::to_string(nu + 1) + " keeps " + z.name() +
                          " after cancellation: " + to_string(E));

    Expr J = map_functions(E, [&](const Expr& f) {
      if (!(f.arg() == Expr(S))) throw ReduceError("shape function argument is not the similarity variable: " + to_string(f));
      std::vector<int> counts{f.derivative_order()};
      return Expr(Symbol(jet_symbol_name(f.function_name(), counts, red.independents)));
    });
    Poly p;
    try {
      p = poly_normalize(simplify(J));
    } catch (const NonPolynomialError& e) {
      throw ReduceError("reduced equation " + std::to_string(nu + 1) + " is not polynomial: " + to_string(J));
    }
    if (!p.is_zero()) {
      JetCoord lead = choose_leading(p, red);
      Poly lc = p.coeff(red.jet_symbol(lead), 1);
      if (lc.is_constant() && !lc.is_zero()) p *= Rational(1) / lc.constant_value();
      else if (!lc.is_zero() && sorted_terms(lc, order).front().second.sign() < 0) p = -p;
    }
    red.equations.push_back(std::move(p));
  }
  red.leading.assign(red.equations.size(), std::nullopt);
  return rs;
}

std::vector<std::string> describe(const SimilarityAnsatz& an, const PdeSystem& sys) {
  std::vector<std::string> out{"s = " + to_string(an.s)};
  const Expr S(similarity_symbol());
  for (std::size_t a = 0; a < an.prefactor.size(); ++a)
    out.push_back(sys.dependents[a].name() + " = " +
                  to_string(simplify(an.prefactor[a] * Expr::function(an.functions[a], 0, S))));
  if (!an.domain.empty()) out.push_back("domain: " + an.domain);
  return out;
}

std::vector<std::string> describe(const ReducedSystem& rs) {
  std::vector<std::string> out;
  const VarOrder order = rs.system.var_order();
  for (const Poly& p : rs.system.equations) out.push_back(to_string(p, order) + " = 0");
  return out;
}

}  // namespace liesym
