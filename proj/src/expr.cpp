#include "liesym/expr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace liesym {

struct Expr::Node {
  ExprKind kind = ExprKind::constant;
  Rational value;
  Symbol sym;
  std::vector<Expr> args;
  std::string name;
  int deriv = 0;
};

const char* to_string(ExprKind k) {
  switch (k) {
    case ExprKind::constant: return "constant";
    case ExprKind::symbol: return "symbol";
    case ExprKind::function: return "function";
    case ExprKind::log: return "ln";
    case ExprKind::exp: return "exp";
    case ExprKind::power: return "power";
    case ExprKind::product: return "product";
    case ExprKind::sum: return "sum";
  }
  return "?";
}

Expr::Expr() : Expr(Rational(0)) {}

Expr::Expr(const Rational& c) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::constant;
  n->value = c;
  n_ = std::move(n);
}

Expr::Expr(Symbol s) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::symbol;
  n->sym = s;
  n_ = std::move(n);
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  for (auto& t : terms) {
    if (t.kind() == ExprKind::sum) {
      for (const auto& c : t.args()) flat.push_back(c);
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (flat.empty()) return Expr(0);
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::sum;
  n->args = std::move(flat);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  for (auto& f : factors) {
    if (f.kind() == ExprKind::product) {
      for (const auto& c : f.args()) flat.push_back(c);
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (flat.empty()) return Expr(1);
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::product;
  n->args = std::move(flat);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::power(Expr base, Rational exponent) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::power;
  n->value = std::move(exponent);
  n->args.push_back(std::move(base));
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::exp(Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::exp;
  n->args.push_back(std::move(arg));
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::log(Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::log;
  n->args.push_back(std::move(arg));
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::function(std::string name, int derivative, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::function;
  n->name = std::move(name);
  n->deriv = derivative;
  n->args.push_back(std::move(arg));
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

ExprKind Expr::kind() const { return n_->kind; }
const Rational& Expr::value() const { return n_->value; }
Symbol Expr::symbol() const { return n_->sym; }
std::span<const Expr> Expr::args() const { return {n_->args.data(), n_->args.size()}; }
const std::string& Expr::function_name() const { return n_->name; }
int Expr::derivative_order() const { return n_->deriv; }

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_constant()) return Expr::product({a, Expr(Rational(1) / b.value())});
  return Expr::product({a, Expr::power(b, Rational(-1))});
}

Expr Expr::operator-() const {
  if (is_constant()) return Expr(-value());
  if (kind() == ExprKind::product && args()[0].is_constant()) {
    std::vector<Expr> f(args().begin(), args().end());
    f[0] = Expr(-f[0].value());
    if (f[0].is_one()) f.erase(f.begin());
    return Expr::product(std::move(f));
  }
  return Expr::product({Expr(-1), *this});
}

// ---------------------------------------------------------------------------
// ordering and equality

int compare(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case ExprKind::constant:
      return a.value() == b.value() ? 0 : (a.value() < b.value() ? -1 : 1);
    case ExprKind::symbol: {
      if (a.symbol() == b.symbol()) return 0;
      return a.symbol().name() < b.symbol().name() ? -1 : 1;
    }
    case ExprKind::function: {
      if (a.function_name() != b.function_name()) return a.function_name() < b.function_name() ? -1 : 1;
      if (a.derivative_order() != b.derivative_order()) return a.derivative_order() < b.derivative_order() ? -1 : 1;
      return compare(a.arg(), b.arg());
    }
    case ExprKind::log:
    case ExprKind::exp:
      return compare(a.arg(), b.arg());
    case ExprKind::power: {
      int c = compare(a.arg(), b.arg());
      if (c) return c;
      return a.value() == b.value() ? 0 : (a.value() < b.value() ? -1 : 1);
    }
    case ExprKind::product:
    case ExprKind::sum: {
      auto x = a.args(), y = b.args();
      std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i) {
        int c = compare(x[i], y[i]);
        if (c) return c;
      }
      if (x.size() == y.size()) return 0;
      return x.size() < y.size() ? -1 : 1;
    }
  }
  return 0;
}

bool operator==(const Expr& a, const Expr& b) { return a.n_ == b.n_ || compare(a, b) == 0; }

// ---------------------------------------------------------------------------
// printing

namespace {

constexpr int kPrecSum = 1;
constexpr int kPrecProduct = 2;
constexpr int kPrecPower = 3;

bool is_negative_term(const Expr& e) {
  if (e.is_constant()) return e.value().sign() < 0;
  return e.kind() == ExprKind::product && e.arg(0).is_constant() && e.arg(0).value().sign() < 0;
}

void print(std::ostream& os, const Expr& e, int prec);

void print_product_body(std::ostream& os, std::span<const Expr> f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) os << "*";
    if (i > 0 && f[i].is_constant() && f[i].value().sign() < 0) {
      os << "(" << f[i].value() << ")";
    } else {
      print(os, f[i], kPrecProduct);
    }
  }
}

void print(std::ostream& os, const Expr& e, int prec) {
  switch (e.kind()) {
    case ExprKind::constant: {
      const Rational& v = e.value();
      bool wrap = prec >= kPrecPower && (v.sign() < 0 || !v.is_integer());
      if (wrap) os << "(";
      os << v;
      if (wrap) os << ")";
      return;
    }
    case ExprKind::symbol:
      os << e.symbol().name();
      return;
    case ExprKind::function:
      os << e.function_name() << std::string(static_cast<std::size_t>(e.derivative_order()), '\'') << "(";
      print(os, e.arg(), 0);
      os << ")";
      return;
    case ExprKind::log:
      os << "ln(";
      print(os, e.arg(), 0);
      os << ")";
      return;
    case ExprKind::exp:
      os << "exp(";
      print(os, e.arg(), 0);
      os << ")";
      return;
    case ExprKind::power: {
      if (e.arg().kind() == ExprKind::power) {
        os << "(";
        print(os, e.arg(), 0);
        os << ")";
      } else {
        print(os, e.arg(), kPrecPower + 1);
      }
      const Rational& q = e.value();
      if (q.is_integer() && q.sign() >= 0) {
        os << "^" << q;
      } else {
        os << "^(" << q << ")";
      }
      return;
    }
    case ExprKind::product: {
      bool wrap = prec > kPrecProduct;
      if (wrap) os << "(";
      auto f = e.args();
      if (f[0].is_constant() && f[0].value() == Rational(-1) && f.size() > 1) {
        os << "-";
        print_product_body(os, f.subspan(1));
      } else {
        print_product_body(os, f);
      }
      if (wrap) os << ")";
      return;
    }
    case ExprKind::sum: {
      bool wrap = prec > kPrecSum;
      if (wrap) os << "(";
      auto t = e.args();
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i == 0) {
          print(os, t[i], kPrecSum);
        } else if (is_negative_term(t[i])) {
          os << " - ";
          print(os, -t[i], kPrecSum);
        } else {
          os << " + ";
          print(os, t[i], kPrecSum);
        }
      }
      if (wrap) os << ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(os, e, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// polynomial subset

NonPolynomialError::NonPolynomialError(ExprKind kind, const std::string& detail)
    : std::runtime_error(std::string("non-polynomial node (") + to_string(kind) + "): " + detail), kind_(kind) {}

Poly poly_normalize(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::constant: return Poly(e.value());
    case ExprKind::symbol: return Poly::var(e.symbol());
    case ExprKind::sum: {
      Poly p;
      for (const auto& c : e.args()) p += poly_normalize(c);
      return p;
    }
    case ExprKind::product: {
      Poly p(1);
      for (const auto& c : e.args()) p = p * poly_normalize(c);
      return p;
    }
    case ExprKind::power: {
      const Rational& q = e.value();
      if (!q.is_integer() || q.sign() < 0 || !q.fits_int())
        throw NonPolynomialError(ExprKind::power, to_string(e));
      return pow(poly_normalize(e.arg()), static_cast<unsigned>(q.to_long()));
    }
    default:
      throw NonPolynomialError(e.kind(), to_string(e));
  }
}

Expr from_poly(const Poly& p, const VarOrder& order) {
  std::vector<Expr> terms;
  for (const auto& [m, c] : sorted_terms(p, order)) {
    std::vector<Expr> f;
    if (!c.is_one() || m.is_one()) f.emplace_back(c);
    std::vector<std::pair<Symbol, int>> vars;
    for (const auto& vp : m.factors()) vars.emplace_back(Symbol::from_id(vp.var), vp.exp);
    const auto& syms = order.symbols();
    auto rank = [&](Symbol s) {
      auto it = std::find(syms.begin(), syms.end(), s);
      return it == syms.end() ? syms.size() : static_cast<std::size_t>(it - syms.begin());
    };
    std::sort(vars.begin(), vars.end(), [&](const auto& a, const auto& b) {
      auto ra = rank(a.first), rb = rank(b.first);
      return ra != rb ? ra < rb : a.first.name() < b.first.name();
    });
    for (const auto& [s, k] : vars) f.push_back(k == 1 ? Expr(s) : Expr::power(Expr(s), Rational(k)));
    terms.push_back(Expr::product(std::move(f)));
  }
  return Expr::sum(std::move(terms));
}

// ---------------------------------------------------------------------------
// canonical form
//
// A canonical expression is a map from power products of atoms to rational
// coefficients. Atoms are symbols, opaque functions, logarithms, at most one
// exponential per product (exponent 1), and bases of non-expandable powers
// (sums with non-positive-integer exponents, or constants without an exact root).

namespace {

using Factor = std::pair<Expr, Rational>;
using AtomProduct = std::vector<Factor>;

struct ProductLess {
  bool operator()(const AtomProduct& a, const AtomProduct& b) const {
    if (a.empty() != b.empty()) return b.empty();  // constant term last
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      int c = compare(a[i].first, b[i].first);
      if (c) return c < 0;
      if (a[i].second != b[i].second) return a[i].second > b[i].second;
    }
    return a.size() < b.size();
  }
};

using Canon = std::map<AtomProduct, Rational, ProductLess>;

Canon canon(const Expr& e);
Expr to_expr(const Canon& c);
Canon c_mul(const Canon& a, const Canon& b);
Canon c_pow(const Canon& a, const Rational& q);
Canon c_exp(const Canon& a);

Canon c_const(const Rational& c) {
  Canon r;
  if (!c.is_zero()) r.emplace(AtomProduct{}, c);
  return r;
}

Canon c_atom(const Expr& atom, const Rational& e = Rational(1)) {
  Canon r;
  r.emplace(AtomProduct{{atom, e}}, Rational(1));
  return r;
}

void c_add_into(Canon& acc, const Canon& b, const Rational& scale = Rational(1)) {
  for (const auto& [p, c] : b) {
    auto it = acc.find(p);
    if (it == acc.end()) {
      acc.emplace(p, c * scale);
    } else {
      it->second += c * scale;
      if (it->second.is_zero()) acc.erase(it);
    }
  }
}

Canon c_sum_of_children(const Expr& sum_atom) {
  Canon r;
  for (const auto& t : sum_atom.args()) c_add_into(r, canon(t));
  return r;
}

/// Normalizes one product (with coefficient) into canonical form.
Canon c_product(const std::vector<Factor>& factors, Rational coef) {
  std::map<Expr, Rational, ExprLess> merged;
  std::vector<Factor> exps;
  for (const auto& [atom, e] : factors) {
    if (atom.kind() == ExprKind::exp) {
      exps.emplace_back(atom, e);
    } else {
      merged[atom] += e;
    }
  }
  AtomProduct out;
  std::vector<Factor> expand;
  for (const auto& [atom, e] : merged) {
    if (e.is_zero()) continue;
    if (atom.is_constant()) {
      Rational r;
      if (exact_root_power(atom.value(), e, r)) {
        coef *= r;
        continue;
      }
      out.emplace_back(atom, e);
    } else if (atom.kind() == ExprKind::sum && e.is_integer() && e.sign() > 0) {
      expand.emplace_back(atom, e);
    } else {
      out.emplace_back(atom, e);
    }
  }
  Canon result;
  if (coef.is_zero()) return result;
  if (exps.size() == 1 && exps[0].second.is_one()) {
    out.push_back(exps[0]);
    std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) { return compare(a.first, b.first) < 0; });
    result.emplace(std::move(out), coef);
  } else {
    std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) { return compare(a.first, b.first) < 0; });
    result.emplace(std::move(out), coef);
    if (!exps.empty()) {
      Canon arg;
      for (const auto& [atom, e] : exps) c_add_into(arg, canon(atom.arg()), e);
      result = c_mul(result, c_exp(arg));
    }
  }
  for (const auto& [atom, e] : expand) result = c_mul(result, c_pow(c_sum_of_children(atom), e));
  return result;
}

Canon c_mul(const Canon& a, const Canon& b) {
  Canon r;
  for (const auto& [pa, ca] : a) {
    for (const auto& [pb, cb] : b) {
      std::vector<Factor> f(pa.begin(), pa.end());
      f.insert(f.end(), pb.begin(), pb.end());
      c_add_into(r, c_product(f, ca * cb));
    }
  }
  return r;
}

Canon c_pow(const Canon& a, const Rational& q) {
  if (q.is_zero()) return c_const(Rational(1));
  if (a.empty()) {
    if (q.sign() > 0) return {};
    throw std::domain_error("zero raised to a non-positive power");
  }
  if (a.size() == 1) {
    const auto& [p, c] = *a.begin();
    std::vector<Factor> f;
    Rational coef(1);
    Rational r;
    if (exact_root_power(c, q, r)) {
      coef = r;
    } else if (c.sign() > 0) {
      f.emplace_back(Expr(c), q);
    } else if (!(q.den() % 2 == 0)) {
      // odd root of a negative constant
      if (q.num() % 2 != 0) coef = Rational(-1);
      if (exact_root_power(-c, q, r)) {
        coef *= r;
      } else {
        f.emplace_back(Expr(-c), q);
      }
    } else {
      throw std::domain_error("even root of a negative constant");
    }
    for (const auto& [atom, e] : p) f.emplace_back(atom, e * q);
    return c_product(f, coef);
  }
  if (q.is_integer() && q.sign() > 0) {
    long n = q.to_long();
    Canon result = c_const(Rational(1));
    Canon base = a;
    while (n) {
      if (n & 1) result = c_mul(result, base);
      n >>= 1;
      if (n) base = c_mul(base, base);
    }
    return result;
  }
  return c_product({{to_expr(a), q}}, Rational(1));
}

Canon c_exp(const Canon& a) {
  Canon result = c_const(Rational(1));
  Canon rest;
  for (const auto& [p, c] : a) {
    if (p.size() == 1 && p[0].first.kind() == ExprKind::log && p[0].second.is_one()) {
      result = c_mul(result, c_pow(canon(p[0].first.arg()), c));
    } else {
      rest.emplace(p, c);
    }
  }
  if (!rest.empty()) result = c_mul(result, c_atom(Expr::exp(to_expr(rest))));
  return result;
}

Canon c_log(const Canon& a) {
  if (a.empty()) throw std::domain_error("logarithm of zero");
  if (a.size() == 1 && a.begin()->second.sign() > 0) {
    const auto& [p, c] = *a.begin();
    Canon r;
    if (!c.is_one()) c_add_into(r, c_atom(Expr::log(Expr(c))));
    for (const auto& [atom, e] : p) {
      if (atom.kind() == ExprKind::exp) {
        c_add_into(r, canon(atom.arg()), e);
      } else {
        c_add_into(r, c_atom(Expr::log(atom)), e);
      }
    }
    return r;
  }
  return c_atom(Expr::log(to_expr(a)));
}

Canon canon(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::constant: return c_const(e.value());
    case ExprKind::symbol: return c_atom(e);
    case ExprKind::sum: {
      Canon r;
      for (const auto& t : e.args()) c_add_into(r, canon(t));
      return r;
    }
    case ExprKind::product: {
      Canon r = c_const(Rational(1));
      for (const auto& f : e.args()) {
        r = c_mul(r, canon(f));
        if (r.empty()) break;
      }
      return r;
    }
    case ExprKind::power: return c_pow(canon(e.arg()), e.value());
    case ExprKind::exp: return c_exp(canon(e.arg()));
    case ExprKind::log: return c_log(canon(e.arg()));
    case ExprKind::function:
      return c_atom(Expr::function(e.function_name(), e.derivative_order(), to_expr(canon(e.arg()))));
  }
  return {};
}

Expr to_expr(const Canon& c) {
  std::vector<Expr> terms;
  for (const auto& [p, coef] : c) {
    std::vector<Expr> f;
    if (!coef.is_one() || p.empty()) f.emplace_back(coef);
    for (const auto& [atom, e] : p) f.push_back(e.is_one() ? atom : Expr::power(atom, e));
    terms.push_back(Expr::product(std::move(f)));
  }
  return Expr::sum(std::move(terms));
}

}  // namespace

Expr simplify(const Expr& e) { return to_expr(canon(e)); }

// ---------------------------------------------------------------------------

namespace {

Expr diff_raw(const Expr& e, Symbol s) {
  switch (e.kind()) {
    case ExprKind::constant: return Expr(0);
    case ExprKind::symbol: return Expr(e.symbol() == s ? 1 : 0);
    case ExprKind::sum: {
      std::vector<Expr> t;
      for (const auto& c : e.args()) t.push_back(diff_raw(c, s));
      return Expr::sum(std::move(t));
    }
    case ExprKind::product: {
      std::vector<Expr> t;
      auto f = e.args();
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (!contains(f[i], s)) continue;
        std::vector<Expr> g(f.begin(), f.end());
        g[i] = diff_raw(f[i], s);
        t.push_back(Expr::product(std::move(g)));
      }
      return Expr::sum(std::move(t));
    }
    case ExprKind::power: {
      if (!contains(e.arg(), s)) return Expr(0);
      const Rational& q = e.value();
      return Expr::product({Expr(q), Expr::power(e.arg(), q - Rational(1)), diff_raw(e.arg(), s)});
    }
    case ExprKind::exp:
      return Expr::product({e, diff_raw(e.arg(), s)});
    case ExprKind::log:
      return Expr::product({diff_raw(e.arg(), s), Expr::power(e.arg(), Rational(-1))});
    case ExprKind::function:
      if (!contains(e.arg(), s)) return Expr(0);
      return Expr::product({Expr::function(e.function_name(), e.derivative_order() + 1, e.arg()),
                            diff_raw(e.arg(), s)});
  }
  return Expr(0);
}

void collect_symbols(const Expr& e, std::set<Symbol, SymbolNameLess>& out) {
  if (e.kind() == ExprKind::symbol) {
    out.insert(e.symbol());
    return;
  }
  for (const auto& c : e.args()) collect_symbols(c, out);
}

}  // namespace

Expr diff(const Expr& e, Symbol s) { return simplify(diff_raw(e, s)); }

Expr substitute(const Expr& e, const std::unordered_map<Symbol, Expr>& bindings) {
  switch (e.kind()) {
    case ExprKind::constant: return e;
    case ExprKind::symbol: {
      auto it = bindings.find(e.symbol());
      return it == bindings.end() ? e : it->second;
    }
    case ExprKind::sum:
    case ExprKind::product: {
      std::vector<Expr> c;
      for (const auto& a : e.args()) c.push_back(substitute(a, bindings));
      return e.kind() == ExprKind::sum ? Expr::sum(std::move(c)) : Expr::product(std::move(c));
    }
    case ExprKind::power: return Expr::power(substitute(e.arg(), bindings), e.value());
    case ExprKind::exp: return Expr::exp(substitute(e.arg(), bindings));
    case ExprKind::log: return Expr::log(substitute(e.arg(), bindings));
    case ExprKind::function:
      return Expr::function(e.function_name(), e.derivative_order(), substitute(e.arg(), bindings));
  }
  return e;
}

bool contains(const Expr& e, Symbol s) {
  if (e.kind() == ExprKind::symbol) return e.symbol() == s;
  for (const auto& c : e.args())
    if (contains(c, s)) return true;
  return false;
}

std::vector<Symbol> free_symbols(const Expr& e) {
  std::set<Symbol, SymbolNameLess> s;
  collect_symbols(e, s);
  return {s.begin(), s.end()};
}

double eval(const Expr& e, const std::function<double(Symbol)>& value, const FunctionEvaluator& fn) {
  switch (e.kind()) {
    case ExprKind::constant: return e.value().to_double();
    case ExprKind::symbol: return value(e.symbol());
    case ExprKind::sum: {
      double s = 0;
      for (const auto& c : e.args()) s += eval(c, value, fn);
      return s;
    }
    case ExprKind::product: {
      double p = 1;
      for (const auto& c : e.args()) p *= eval(c, value, fn);
      return p;
    }
    case ExprKind::power: {
      double b = eval(e.arg(), value, fn);
      const Rational& q = e.value();
      if (q.is_integer() && q.fits_int()) return std::pow(b, static_cast<double>(q.to_long()));
      if (q.den() == 3) return std::pow(std::cbrt(b), q.num().get_d());
      return std::pow(b, q.to_double());
    }
    case ExprKind::exp: return std::exp(eval(e.arg(), value, fn));
    case ExprKind::log: return std::log(eval(e.arg(), value, fn));
    case ExprKind::function: {
      if (!fn) throw std::invalid_argument("no evaluator for function " + e.function_name());
      return fn(e.function_name(), e.derivative_order(), eval(e.arg(), value, fn));
    }
  }
  return 0;
}

bool exact_constant(const Expr& e, Rational& out) {
  Expr s = simplify(e);
  if (!s.is_constant()) return false;
  out = s.value();
  return true;
}

}  // namespace liesym
