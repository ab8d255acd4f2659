#include "liesym/rational.hpp"

#include <climits>
#include <ostream>
#include <stdexcept>

namespace liesym {

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](std::string t) {
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    return t;
  };
  if (slash == std::string::npos) {
    if (!valid_int(s)) throw std::invalid_argument("invalid rational literal: " + s);
    return Rational(mpz_class(strip_plus(s)));
  }
  std::string n = s.substr(0, slash), d = s.substr(slash + 1);
  if (!valid_int(n) || !valid_int(d)) throw std::invalid_argument("invalid rational literal: " + s);
  mpz_class dz(strip_plus(d));
  if (dz == 0) throw std::domain_error("Rational: zero denominator");
  return Rational(mpz_class(strip_plus(n)), dz);
}

bool Rational::fits_int() const {
  return v_.get_num().fits_slong_p() && v_.get_den().fits_slong_p();
}

long Rational::to_long() const {
  if (!is_integer() || !fits_int()) throw std::overflow_error("Rational::to_long: " + str());
  return v_.get_num().get_si();
}

std::string Rational::str() const { return v_.get_str(); }

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  v_ /= o.v_;
  return *this;
}

std::size_t Rational::hash() const {
  std::size_t h = mpz_get_ui(v_.get_num_mpz_t()) * 1000003u;
  h ^= mpz_get_ui(v_.get_den_mpz_t()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h ^ static_cast<std::size_t>(sgn(v_) + 1);
}

Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }

Rational pow(const Rational& q, long e) {
  if (e < 0) {
    if (q.is_zero()) throw std::domain_error("Rational: zero to a negative power");
    return pow(Rational(1) / q, -e);
  }
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), q.raw().get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), q.raw().get_den_mpz_t(), static_cast<unsigned long>(e));
  return Rational(n, d);
}

bool exact_root_power(const Rational& q, const Rational& exponent, Rational& out) {
  if (exponent.is_integer()) {
    if (q.is_zero() && exponent.sign() < 0) return false;
    out = pow(q, exponent.to_long());
    return true;
  }
  if (!exponent.den().fits_ulong_p() || !exponent.num().fits_slong_p()) return false;
  unsigned long root = exponent.den().get_ui();
  if (q.sign() < 0) return false;
  if (q.is_zero()) {
    if (exponent.sign() < 0) return false;
    out = Rational(0);
    return true;
  }
  mpz_class rn, rd;
  if (!mpz_root(rn.get_mpz_t(), q.raw().get_num_mpz_t(), root)) return false;
  if (!mpz_root(rd.get_mpz_t(), q.raw().get_den_mpz_t(), root)) return false;
  out = pow(Rational(rn, rd), exponent.num().get_si());
  return true;
}

mpz_class lcm_of_denominators(const Rational* begin, const Rational* end) {
  mpz_class l = 1;
  for (auto* it = begin; it != end; ++it) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), it->raw().get_den_mpz_t());
  return l;
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

}  // namespace liesym
