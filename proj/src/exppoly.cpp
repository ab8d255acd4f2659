#include "liesym/exppoly.hpp"

#include <cmath>
#include <stdexcept>

namespace liesym {

GroupParam GroupParam::log(Rational c, Rational q) {
  if (q.sign() <= 0) throw std::invalid_argument("logarithm of a non-positive value");
  return {Rational(0), std::move(c), std::move(q)};
}

double GroupParam::value() const {
  double v = a.to_double();
  if (!is_rational()) v += c.to_double() * std::log(q.to_double());
  return v;
}

Expr GroupParam::to_expr() const {
  if (is_rational()) return Expr(a);
  return Expr(a) + Expr(c) * Expr::log(Expr(q));
}

std::string GroupParam::str() const {
  if (is_rational()) return a.str();
  std::string ln = "ln(" + q.str() + ")";
  std::string out;
  if (c == Rational(1)) out = ln;
  else if (c == Rational(-1)) out = "-" + ln;
  else out = c.str() + "*" + ln;
  if (!a.is_zero()) out = a.str() + (out[0] == '-' ? " - " + out.substr(1) : " + " + out);
  return out;
}

ExpPoly::ExpPoly(const Rational& c) {
  if (!c.is_zero()) t_[{Rational(0), 0}] = c;
}

ExpPoly ExpPoly::term(Rational c, int k, Rational lambda) {
  ExpPoly p;
  p.add({std::move(lambda), k}, c);
  return p;
}

void ExpPoly::add(const Key& k, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = t_.emplace(k, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) t_.erase(it);
}

bool ExpPoly::is_constant() const {
  return t_.empty() || (t_.size() == 1 && t_.begin()->first.first.is_zero() && t_.begin()->first.second == 0);
}

bool ExpPoly::is_polynomial() const {
  for (const auto& [k, c] : t_)
    if (!k.first.is_zero()) return false;
  return true;
}

int ExpPoly::eps_degree() const {
  int d = 0;
  for (const auto& [k, c] : t_) d = std::max(d, k.second);
  return d;
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
  for (const auto& [k, c] : o.t_) add(k, c);
  return *this;
}

ExpPoly ExpPoly::operator-() const {
  ExpPoly r = *this;
  for (auto& [k, c] : r.t_) c = -c;
  return r;
}

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly r;
  for (const auto& [ka, ca] : a.t_)
    for (const auto& [kb, cb] : b.t_) r.add({ka.first + kb.first, ka.second + kb.second}, ca * cb);
  return r;
}

ExpPoly operator*(const Rational& c, const ExpPoly& a) {
  if (c.is_zero()) return {};
  ExpPoly r = a;
  for (auto& [k, v] : r.t_) v = v * c;
  return r;
}

ExpPoly ExpPoly::scaled(const Rational& s) const {
  ExpPoly r;
  for (const auto& [k, c] : t_) r.add({k.first * s, k.second}, c * pow(s, k.second));
  return r;
}

ExpPoly ExpPoly::derivative() const {
  ExpPoly r;
  for (const auto& [k, c] : t_) {
    r.add(k, c * k.first);
    if (k.second > 0) r.add({k.first, k.second - 1}, c * Rational(k.second));
  }
  return r;
}

std::vector<Rational> ExpPoly::taylor(int order) const {
  std::vector<Rational> out(static_cast<std::size_t>(order + 1));
  for (const auto& [k, c] : t_) {
    // eps^k * sum_j lambda^j eps^j / j!
    Rational f(1);
    for (int j = 0; k.second + j <= order; ++j) {
      if (j > 0) f = f * k.first / Rational(j);
      out[static_cast<std::size_t>(k.second + j)] += c * f;
      if (k.first.is_zero()) break;
    }
  }
  return out;
}

double ExpPoly::eval(double eps) const {
  double s = 0;
  for (const auto& [k, c] : t_) s += c.to_double() * std::pow(eps, k.second) * std::exp(k.first.to_double() * eps);
  return s;
}

std::optional<Rational> ExpPoly::eval_exact(const GroupParam& eps) const {
  Rational sum;
  for (const auto& [k, c] : t_) {
    Rational v = c;
    if (k.second > 0) {
      if (!eps.is_rational()) return std::nullopt;
      v = v * pow(eps.a, k.second);
    }
    if (!k.first.is_zero()) {
      if (!eps.a.is_zero()) return std::nullopt;
      if (!eps.is_rational()) {
        Rational f;
        if (!exact_root_power(eps.q, k.first * eps.c, f)) return std::nullopt;
        v = v * f;
      }
    }
    sum += v;
  }
  return sum;
}

Expr ExpPoly::to_expr(Symbol eps) const {
  std::vector<Expr> terms;
  for (const auto& [k, c] : t_) {
    std::vector<Expr> f{Expr(c)};
    if (k.second > 0) f.push_back(Expr::power(Expr(eps), Rational(k.second)));
    if (!k.first.is_zero()) f.push_back(Expr::exp(Expr(k.first) * Expr(eps)));
    terms.push_back(Expr::product(std::move(f)));
  }
  return simplify(Expr::sum(std::move(terms)));
}

ExpPoly ExpPoly::integrate_linear(const Rational& mu, const ExpPoly& f) {
  ExpPoly r;
  for (const auto& [key, c] : f.t_) {
    const auto& [nu, k] = key;
    Rational delta = nu - mu;
    if (delta.is_zero()) {
      r.add({mu, k + 1}, c / Rational(k + 1));
      continue;
    }
    // integral of tau^k e^{delta tau} from 0 to t, times e^{mu t}
    Rational fall(1);  // k!/(k-j)!
    for (int j = 0; j <= k; ++j) {
      if (j > 0) fall = fall * Rational(k - j + 1);
      Rational coef = c * fall / pow(delta, j + 1);
      if (j % 2) coef = -coef;
      r.add({nu, k - j}, coef);
    }
    Rational tail = c * fall / pow(delta, k + 1);
    if (k % 2) tail = -tail;
    r.add({mu, 0}, -tail);
  }
  return r;
}

std::string to_string(const ExpPoly& p, const std::string& eps) { return to_string(p.to_expr(Symbol(eps))); }

}  // namespace liesym
