#ifndef LIESYM_POLY_HPP
#define LIESYM_POLY_HPP

#include "liesym/rational.hpp"
#include "liesym/symbol.hpp"

#include <boost/container/small_vector.hpp>

#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace liesym {

struct VarPower {
  std::uint32_t var;
  std::int32_t exp;
  friend bool operator==(const VarPower&, const VarPower&) = default;
};

/// Power product with positive exponents, factors sorted by symbol id.
class Monomial {
public:
  Monomial() = default;
  static Monomial of(Symbol s, int exp = 1);

  std::span<const VarPower> factors() const { return {f_.data(), f_.size()}; }
  bool is_one() const { return f_.empty(); }
  int degree(Symbol s) const;
  int total_degree() const;
  Monomial without(Symbol s) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.f_ == b.f_; }
  /// Internal storage order (by id); not the printing order.
  friend bool operator<(const Monomial& a, const Monomial& b);

  std::size_t hash() const;

private:
  boost::container::small_vector<VarPower, 4> f_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Sparse multivariate polynomial over the rationals; the canonical "PolyForm".
/// Terms are kept sorted with no zero coefficients, so two polynomials are equal
/// iff their term vectors are equal.
class Poly {
public:
  using Term = std::pair<Monomial, Rational>;

  Poly() = default;
  Poly(const Rational& c);  // NOLINT(google-explicit-constructor)
  Poly(long c) : Poly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  Poly(int c) : Poly(Rational(c)) {}   // NOLINT(google-explicit-constructor)
  static Poly var(Symbol s, int exp = 1);
  static Poly term(Monomial m, Rational c);
  /// Builds from unsorted terms, merging duplicates and dropping zeros.
  static Poly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }
  Rational constant_value() const;  // coefficient of the unit monomial

  int degree(Symbol s) const;
  int total_degree() const;
  bool contains(Symbol s) const { return degree(s) > 0; }
  /// Coefficient of s^k viewed as a polynomial in s.
  Poly coeff(Symbol s, int k) const;
  /// Sorted by name.
  std::vector<Symbol> variables() const;

  Poly diff(Symbol s) const;
  /// Simultaneous substitution of symbols by polynomials.
  Poly substitute(const std::unordered_map<Symbol, Poly>& bindings) const;
  double eval(const std::function<double(Symbol)>& value) const;
  Rational eval_exact(const std::function<Rational(Symbol)>& value) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Rational& c) { Poly r = a; r *= c; return r; }
  friend Poly operator*(const Rational& c, const Poly& a) { return a * c; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

private:
  std::vector<Term> terms_;
};

Poly pow(const Poly& p, unsigned e);

using PolyForm = Poly;

/// Graded-lexicographic order over an explicit symbol list; symbols not in the
/// list rank after it, by name.
class VarOrder {
public:
  VarOrder() = default;
  explicit VarOrder(std::vector<Symbol> order) : order_(std::move(order)) {}
  /// True when monomial a precedes b in printing order (higher degree first).
  bool precedes(const Monomial& a, const Monomial& b) const;
  const std::vector<Symbol>& symbols() const { return order_; }

private:
  std::vector<Symbol> order_;
};

/// Terms in canonical grlex order.
std::vector<Poly::Term> sorted_terms(const Poly& p, const VarOrder& order = {});
std::string to_string(const Monomial& m, const VarOrder& order = {});
/// Prints with the expression grammar, e.g. "x^2 - 1/2".
std::string to_string(const Poly& p, const VarOrder& order = {});

/// Multiplies by the lcm of denominators and divides by the content, so the
/// result has coprime integer coefficients and positive leading coefficient.
Poly primitive_part(const Poly& p, const VarOrder& order = {});

}  // namespace liesym

#endif  // LIESYM_POLY_HPP
