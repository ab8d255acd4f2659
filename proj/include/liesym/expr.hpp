#ifndef LIESYM_EXPR_HPP
#define LIESYM_EXPR_HPP

#include "liesym/poly.hpp"
#include "liesym/rational.hpp"
#include "liesym/symbol.hpp"

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace liesym {

enum class ExprKind { constant, symbol, function, log, exp, power, product, sum };

const char* to_string(ExprKind k);

/// Immutable expression tree. Nodes are shared; copying an Expr is cheap.
///
/// `power` carries a rational exponent (an integer power when the denominator
/// is 1). `function` is an opaque shape function F applied to one argument,
/// with a derivative count (F, F', F'', ...).
class Expr {
public:
  Expr();  // zero
  Expr(const Rational& c);  // NOLINT(google-explicit-constructor)
  Expr(long c) : Expr(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  Expr(int c) : Expr(Rational(c)) {}   // NOLINT(google-explicit-constructor)
  Expr(Symbol s);  // NOLINT(google-explicit-constructor)

  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(Expr base, Rational exponent);
  static Expr exp(Expr arg);
  static Expr log(Expr arg);
  static Expr function(std::string name, int derivative, Expr arg);

  ExprKind kind() const;
  const Rational& value() const;     // constant value or power exponent
  Symbol symbol() const;
  std::span<const Expr> args() const;
  const Expr& arg(std::size_t i = 0) const { return args()[i]; }
  const std::string& function_name() const;
  int derivative_order() const;

  bool is_constant() const { return kind() == ExprKind::constant; }
  bool is_zero() const { return is_constant() && value().is_zero(); }
  bool is_one() const { return is_constant() && value().is_one(); }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

/// Total structural order: -1, 0, 1.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

/// Prints in the expression grammar; parse(to_string(e)) rebuilds e.
std::string to_string(const Expr& e);

/// Thrown by poly_normalize when the tree leaves the polynomial subset.
class NonPolynomialError : public std::runtime_error {
public:
  NonPolynomialError(ExprKind kind, const std::string& detail);
  ExprKind kind() const { return kind_; }

private:
  ExprKind kind_;
};

/// Canonical polynomial form; only constants, symbols, sums, products and
/// nonnegative integer powers are accepted.
Poly poly_normalize(const Expr& e);
Expr from_poly(const Poly& p, const VarOrder& order = {});

/// Fixed local rewrite pass: expands products and positive integer powers of
/// sums, combines powers of equal bases, collects exponentials into a single
/// exp factor per term, splits logarithms of products, and collects like terms.
/// Bases of rational powers are taken on the principal real branch (positive).
/// Idempotent; structural equality of simplified trees is the equality used by
/// the extended subset.
Expr simplify(const Expr& e);

/// Partial derivative, returned simplified. d/da F^(k)(a) = F^(k+1)(a).
Expr diff(const Expr& e, Symbol s);

/// Simultaneous substitution; the result is not simplified.
Expr substitute(const Expr& e, const std::unordered_map<Symbol, Expr>& bindings);

bool contains(const Expr& e, Symbol s);
std::vector<Symbol> free_symbols(const Expr& e);  // sorted by name

using FunctionEvaluator = std::function<double(const std::string& name, int derivative, double arg)>;
double eval(const Expr& e, const std::function<double(Symbol)>& value, const FunctionEvaluator& fn = {});

/// Rational value of a constant-only tree (after simplify), if exact.
bool exact_constant(const Expr& e, Rational& out);

}  // namespace liesym

#endif  // LIESYM_EXPR_HPP
