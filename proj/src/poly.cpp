#include "liesym/poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace liesym {

Monomial Monomial::of(Symbol s, int exp) {
  if (exp < 0) throw std::invalid_argument("Monomial: negative exponent");
  Monomial m;
  if (exp > 0) m.f_.push_back({s.id(), exp});
  return m;
}

int Monomial::degree(Symbol s) const {
  for (const auto& vp : f_)
    if (vp.var == s.id()) return vp.exp;
  return 0;
}

int Monomial::total_degree() const {
  int d = 0;
  for (const auto& vp : f_) d += vp.exp;
  return d;
}

Monomial Monomial::without(Symbol s) const {
  Monomial m;
  for (const auto& vp : f_)
    if (vp.var != s.id()) m.f_.push_back(vp);
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.f_.reserve(a.f_.size() + b.f_.size());
  std::size_t i = 0, j = 0;
  while (i < a.f_.size() && j < b.f_.size()) {
    if (a.f_[i].var < b.f_[j].var) {
      r.f_.push_back(a.f_[i++]);
    } else if (b.f_[j].var < a.f_[i].var) {
      r.f_.push_back(b.f_[j++]);
    } else {
      r.f_.push_back({a.f_[i].var, a.f_[i].exp + b.f_[j].exp});
      ++i;
      ++j;
    }
  }
  for (; i < a.f_.size(); ++i) r.f_.push_back(a.f_[i]);
  for (; j < b.f_.size(); ++j) r.f_.push_back(b.f_[j]);
  return r;
}

bool operator<(const Monomial& a, const Monomial& b) {
  return std::lexicographical_compare(a.f_.begin(), a.f_.end(), b.f_.begin(), b.f_.end(),
                                      [](const VarPower& x, const VarPower& y) {
                                        return x.var != y.var ? x.var < y.var : x.exp < y.exp;
                                      });
}

std::size_t Monomial::hash() const {
  std::size_t h = 1469598103934665603ULL;
  for (const auto& vp : f_) {
    h ^= (static_cast<std::size_t>(vp.var) << 8) ^ static_cast<std::size_t>(vp.exp);
    h *= 1099511628211ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------

Poly::Poly(const Rational& c) {
  if (!c.is_zero()) terms_.emplace_back(Monomial{}, c);
}

Poly Poly::var(Symbol s, int exp) { return term(Monomial::of(s, exp), Rational(1)); }

Poly Poly::term(Monomial m, Rational c) {
  Poly p;
  if (!c.is_zero()) p.terms_.emplace_back(std::move(m), std::move(c));
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  Poly p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
      if (p.terms_.back().second.is_zero()) p.terms_.pop_back();
    } else if (!t.second.is_zero()) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

Rational Poly::constant_value() const {
  if (!terms_.empty() && terms_[0].first.is_one()) return terms_[0].second;
  return Rational(0);
}

int Poly::degree(Symbol s) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree(s));
  return d;
}

int Poly::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
  return d;
}

Poly Poly::coeff(Symbol s, int k) const {
  std::vector<Term> out;
  for (const auto& [m, c] : terms_)
    if (m.degree(s) == k) out.emplace_back(m.without(s), c);
  return from_terms(std::move(out));
}

std::vector<Symbol> Poly::variables() const {
  std::vector<std::uint32_t> ids;
  for (const auto& [m, c] : terms_)
    for (const auto& vp : m.factors()) ids.push_back(vp.var);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<Symbol> syms;
  syms.reserve(ids.size());
  for (auto id : ids) syms.push_back(Symbol::from_id(id));
  std::sort(syms.begin(), syms.end(), SymbolNameLess{});
  return syms;
}

Poly Poly::diff(Symbol s) const {
  std::vector<Term> out;
  for (const auto& [m, c] : terms_) {
    int d = m.degree(s);
    if (d == 0) continue;
    Monomial rest = m.without(s);
    if (d > 1) rest = rest * Monomial::of(s, d - 1);
    out.emplace_back(std::move(rest), c * Rational(d));
  }
  return from_terms(std::move(out));
}

Poly Poly::substitute(const std::unordered_map<Symbol, Poly>& bindings) const {
  if (bindings.empty()) return *this;
  std::map<std::pair<std::uint32_t, int>, Poly> power_cache;
  auto power_of = [&](Symbol s, const Poly& p, int e) -> const Poly& {
    auto key = std::make_pair(s.id(), e);
    auto it = power_cache.find(key);
    if (it != power_cache.end()) return it->second;
    return power_cache.emplace(key, pow(p, static_cast<unsigned>(e))).first->second;
  };
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  for (const auto& [m, c] : terms_) {
    Monomial kept;
    Poly factor(c);
    bool substituted = false;
    for (const auto& vp : m.factors()) {
      Symbol s = Symbol::from_id(vp.var);
      auto it = bindings.find(s);
      if (it == bindings.end()) {
        kept = kept * Monomial::of(s, vp.exp);
      } else {
        factor = factor * power_of(s, it->second, vp.exp);
        substituted = true;
      }
    }
    if (!substituted) {
      acc[kept] += c;
      continue;
    }
    for (const auto& [fm, fc] : factor.terms()) acc[kept * fm] += fc;
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (!c.is_zero()) out.emplace_back(m, c);
  return from_terms(std::move(out));
}

double Poly::eval(const std::function<double(Symbol)>& value) const {
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c.to_double();
    for (const auto& vp : m.factors()) t *= std::pow(value(Symbol::from_id(vp.var)), vp.exp);
    sum += t;
  }
  return sum;
}

Rational Poly::eval_exact(const std::function<Rational(Symbol)>& value) const {
  Rational sum(0);
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (const auto& vp : m.factors()) t *= pow(value(Symbol::from_id(vp.var)), vp.exp);
    sum += t;
  }
  return sum;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

namespace {
template <class Op>
std::vector<Poly::Term> merge(const std::vector<Poly::Term>& a, const std::vector<Poly::Term>& b, Op op) {
  std::vector<Poly::Term> r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      r.push_back(a[i++]);
    } else if (b[j].first < a[i].first) {
      r.emplace_back(b[j].first, op(Rational(0), b[j].second));
      ++j;
    } else {
      Rational c = op(a[i].second, b[j].second);
      if (!c.is_zero()) r.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) r.push_back(a[i]);
  for (; j < b.size(); ++j) r.emplace_back(b[j].first, op(Rational(0), b[j].second));
  return r;
}
}  // namespace

Poly& Poly::operator+=(const Poly& o) {
  terms_ = merge(terms_, o.terms_, [](const Rational& x, const Rational& y) { return x + y; });
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  terms_ = merge(terms_, o.terms_, [](const Rational& x, const Rational& y) { return x - y; });
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r = a;
  r += b;
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly r = a;
  r -= b;
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly{};
  if (a.is_constant()) return b * a.constant_value();
  if (b.is_constant()) return a * b.constant_value();
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(a.size() * b.size());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) acc[ma * mb] += ca * cb;
  std::vector<Poly::Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (!c.is_zero()) out.emplace_back(m, std::move(c));
  return Poly::from_terms(std::move(out));
}

Poly pow(const Poly& p, unsigned e) {
  Poly result(1);
  Poly base = p;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

/// Rank key used for printing: explicit order first, then by name.
struct RankedFactor {
  std::size_t rank;
  std::string name;
  int exp;
};

std::vector<RankedFactor> ranked(const Monomial& m, const VarOrder& order) {
  std::vector<RankedFactor> r;
  const auto& syms = order.symbols();
  for (const auto& vp : m.factors()) {
    Symbol s = Symbol::from_id(vp.var);
    auto it = std::find(syms.begin(), syms.end(), s);
    std::size_t rank = it == syms.end() ? syms.size() : static_cast<std::size_t>(it - syms.begin());
    r.push_back({rank, s.name(), vp.exp});
  }
  std::sort(r.begin(), r.end(), [](const RankedFactor& a, const RankedFactor& b) {
    return a.rank != b.rank ? a.rank < b.rank : a.name < b.name;
  });
  return r;
}

}  // namespace

bool VarOrder::precedes(const Monomial& a, const Monomial& b) const {
  int da = a.total_degree(), db = b.total_degree();
  if (da != db) return da > db;
  auto ra = ranked(a, *this), rb = ranked(b, *this);
  std::size_t n = std::min(ra.size(), rb.size());
  for (std::size_t i = 0; i < n; ++i) {
    bool same_var = ra[i].rank == rb[i].rank && ra[i].name == rb[i].name;
    if (!same_var) {
      // the monomial containing the earlier variable is larger
      return ra[i].rank != rb[i].rank ? ra[i].rank < rb[i].rank : ra[i].name < rb[i].name;
    }
    if (ra[i].exp != rb[i].exp) return ra[i].exp > rb[i].exp;
  }
  return ra.size() > rb.size();
}

std::vector<Poly::Term> sorted_terms(const Poly& p, const VarOrder& order) {
  std::vector<Poly::Term> t = p.terms();
  std::stable_sort(t.begin(), t.end(), [&](const Poly::Term& a, const Poly::Term& b) {
    return order.precedes(a.first, b.first);
  });
  return t;
}

std::string to_string(const Monomial& m, const VarOrder& order) {
  if (m.is_one()) return "1";
  std::string s;
  for (const auto& f : ranked(m, order)) {
    if (!s.empty()) s += "*";
    s += f.name;
    if (f.exp != 1) s += "^" + std::to_string(f.exp);
  }
  return s;
}

std::string to_string(const Poly& p, const VarOrder& order) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : sorted_terms(p, order)) {
    Rational mag = abs(c);
    if (first) {
      if (c.sign() < 0) os << "-";
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    if (m.is_one()) {
      os << mag;
    } else {
      if (!mag.is_one()) os << mag << "*";
      os << to_string(m, order);
    }
  }
  return os.str();
}

Poly primitive_part(const Poly& p, const VarOrder& order) {
  if (p.is_zero()) return p;
  mpz_class l = 1, g = 0;
  for (const auto& [m, c] : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.raw().get_den_mpz_t());
  for (const auto& [m, c] : p.terms()) {
    mpz_class n = c.num() * (l / c.den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  Rational scale(l, g);
  auto lead = sorted_terms(p, order).front();
  if (lead.second.sign() < 0) scale = -scale;
  return p * scale;
}

}  // namespace liesym
