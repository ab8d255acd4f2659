#ifndef LIESYM_EXPPOLY_HPP
#define LIESYM_EXPPOLY_HPP

#include "liesym/expr.hpp"
#include "liesym/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace liesym {

/// Group parameter value a + c*ln(q), q > 0. Scaling moves produce the log
/// part, translation moves the rational part.
struct GroupParam {
  Rational a;
  Rational c;
  Rational q{1};

  static GroupParam rational(Rational v) { return {std::move(v), Rational(0), Rational(1)}; }
  /// c*ln(q)
  static GroupParam log(Rational c, Rational q);

  bool is_rational() const { return c.is_zero() || q.is_one(); }
  double value() const;
  Expr to_expr() const;
  std::string str() const;
};

/// Finite sum of c * eps^k * exp(lambda*eps) with rational c and lambda.
class ExpPoly {
public:
  using Key = std::pair<Rational, int>;  // (lambda, k)

  ExpPoly() = default;
  ExpPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
  ExpPoly(long c) : ExpPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  static ExpPoly term(Rational c, int k, Rational lambda);
  static ExpPoly eps(int k = 1) { return term(Rational(1), k, Rational(0)); }
  static ExpPoly exp(Rational lambda) { return term(Rational(1), 0, std::move(lambda)); }

  const std::map<Key, Rational>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;
  /// True when no exp factor is present.
  bool is_polynomial() const;
  int eps_degree() const;

  ExpPoly& operator+=(const ExpPoly& o);
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a += -b; }
  ExpPoly operator-() const;
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);
  friend ExpPoly operator*(const Rational& c, const ExpPoly& a);
  friend bool operator==(const ExpPoly& a, const ExpPoly& b) { return a.t_ == b.t_; }

  /// f(s*eps)
  ExpPoly scaled(const Rational& s) const;
  ExpPoly derivative() const;
  /// Taylor coefficients at eps = 0 through eps^order.
  std::vector<Rational> taylor(int order) const;

  double eval(double eps) const;
  /// Exact value when every term is rational at this parameter.
  std::optional<Rational> eval_exact(const GroupParam& eps) const;

  Expr to_expr(Symbol eps) const;

  /// Solution of r' = mu*r + f with r(0) = 0.
  static ExpPoly integrate_linear(const Rational& mu, const ExpPoly& f);

private:
  void add(const Key& k, const Rational& c);
  std::map<Key, Rational> t_;
};

std::string to_string(const ExpPoly& p, const std::string& eps = "eps");

}  // namespace liesym

#endif  // LIESYM_EXPPOLY_HPP
