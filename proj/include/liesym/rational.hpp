#ifndef LIESYM_RATIONAL_HPP
#define LIESYM_RATIONAL_HPP

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace liesym {

/// Exact rational number backed by GMP. Always canonical: gcd(num, den) = 1, den > 0.
///
/// mpq_class expression templates do not compose with Eigen's own templates, so
/// arithmetic here always materializes a value.
class Rational {
public:
  Rational() = default;
  Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : v_(n) {}   // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(const mpz_class& n) : v_(n) {}
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "n" or "n/d" (optional leading sign). Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  bool fits_int() const;
  long to_long() const;  // requires is_integer() && fits_int()
  double to_double() const { return v_.get_d(); }
  std::string str() const;

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  std::size_t hash() const;

private:
  mpq_class v_;
};

Rational abs(const Rational& q);
/// Integer power; negative exponents invert (q must be nonzero then).
Rational pow(const Rational& q, long e);
/// Exact q^(p/r) when it is rational (perfect powers), otherwise false.
bool exact_root_power(const Rational& q, const Rational& exponent, Rational& out);
mpz_class lcm_of_denominators(const Rational* begin, const Rational* end);

std::ostream& operator<<(std::ostream& os, const Rational& q);

}  // namespace liesym

template <>
struct std::hash<liesym::Rational> {
  std::size_t operator()(const liesym::Rational& q) const { return q.hash(); }
};

namespace Eigen {
template <>
struct NumTraits<liesym::Rational> : GenericNumTraits<liesym::Rational> {
  using Real = liesym::Rational;
  using NonInteger = liesym::Rational;
  using Nested = liesym::Rational;
  using Literal = liesym::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 50,
    MulCost = 100
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen

namespace liesym {
using MatrixQ = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using VectorQ = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
}  // namespace liesym

#endif  // LIESYM_RATIONAL_HPP
