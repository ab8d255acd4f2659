#include "liesym/prolong.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace liesym {

VectorField VectorField::zero(const PdeSystem& sys) {
  VectorField X;
  X.xi.assign(sys.independents.size(), Poly());
  X.phi.assign(sys.dependents.size(), Poly());
  return X;
}

bool VectorField::is_zero() const {
  for (std::size_t k = 0; k < size(); ++k)
    if (!component(k).is_zero()) return false;
  return true;
}

int VectorField::degree() const {
  int d = 0;
  for (std::size_t k = 0; k < size(); ++k) d = std::max(d, component(k).total_degree());
  return d;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (std::size_t k = 0; k < size(); ++k) component(k) += o.component(k);
  return *this;
}

VectorField operator*(const Rational& c, VectorField a) {
  for (std::size_t k = 0; k < a.size(); ++k) a.component(k) *= c;
  return a;
}

std::vector<std::string> component_names(const PdeSystem& sys) {
  std::vector<std::string> n;
  for (Symbol s : sys.independents) n.push_back("xi_" + s.name());
  for (Symbol s : sys.dependents) n.push_back("phi_" + s.name());
  return n;
}

std::vector<Symbol> base_coordinates(const PdeSystem& sys) {
  std::vector<Symbol> c = sys.independents;
  c.insert(c.end(), sys.dependents.begin(), sys.dependents.end());
  return c;
}

VectorField parse_field(const std::map<std::string, std::string>& comps, const PdeSystem& sys) {
  VectorField X = VectorField::zero(sys);
  auto names = component_names(sys);
  ParseContext ctx = sys.context();
  for (const auto& [key, text] : comps) {
    auto it = std::find(names.begin(), names.end(), key);
    if (it == names.end()) {
      // aliases apply to component names too (phi_t -> phi_theta)
      std::string k = key;
      auto us = k.find('_');
      if (us != std::string::npos) {
        auto a = sys.aliases.find(k.substr(us + 1));
        if (a != sys.aliases.end()) k = k.substr(0, us + 1) + a->second;
      }
      it = std::find(names.begin(), names.end(), k);
      if (it == names.end()) throw std::invalid_argument("unknown vector field component '" + key + "'");
    }
    X.component(static_cast<std::size_t>(it - names.begin())) = poly_normalize(parse_expr(text, ctx));
  }
  return X;
}

std::string to_string(const VectorField& X, const PdeSystem& sys) {
  auto coords = base_coordinates(sys);
  VarOrder order = sys.var_order();
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < X.size(); ++k) {
    const Poly& c = X.component(k);
    if (c.is_zero()) continue;
    std::string body;
    std::string sign = " + ";
    if (c.size() == 1) {
      Rational coef = c.terms()[0].second;
      const Monomial& m = c.terms()[0].first;
      if (coef.sign() < 0) {
        sign = " - ";
        coef = -coef;
      }
      if (m.is_one()) {
        body = coef.is_one() ? "" : coef.str() + "*";
      } else {
        body = (coef.is_one() ? "" : coef.str() + "*") + to_string(m, order) + "*";
      }
    } else {
      body = "(" + to_string(c, order) + ")*";
    }
    if (first) {
      os << (sign == " - " ? "-" : "");
    } else {
      os << sign;
    }
    os << body << "d_" << coords[k].name();
    first = false;
  }
  return first ? "0" : os.str();
}

const Poly& ProlongedField::coefficient(Symbol jet) const {
  static const Poly zero;
  auto it = eta.find(jet);
  return it == eta.end() ? zero : it->second;
}

std::vector<std::vector<int>> multi_indices(std::size_t dims, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(dims, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
    if (k + 1 == dims) {
      cur[k] = left;
      out.push_back(cur);
      return;
    }
    for (int c = left; c >= 0; --c) {
      cur[k] = c;
      rec(k + 1, left - c);
    }
  };
  if (dims == 0) return out;
  rec(0, order);
  return out;
}

namespace {

Poly jet_var(const PdeSystem& sys, int dep, const std::vector<int>& counts) {
  return Poly::var(sys.jet_symbol(JetCoord{dep, counts}));
}

}  // namespace

ProlongedField prolong(const VectorField& X, int n, const PdeSystem& sys) {
  ProlongedField P;
  P.base = X;
  P.order = n;
  const std::size_t p = sys.independents.size();
  std::vector<std::vector<Poly>> dxi(p);  // dxi[i][k] = D_i xi^k
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t k = 0; k < p; ++k) dxi[i].push_back(total_derivative(X.xi[k], i, sys));

  for (std::size_t a = 0; a < sys.m(); ++a) {
    std::vector<int> zero(p, 0);
    P.eta[sys.jet_symbol(JetCoord{static_cast<int>(a), zero})] = X.phi[a];
    for (int ord = 1; ord <= n; ++ord) {
      for (const auto& J1 : multi_indices(p, ord)) {
        std::size_t i = 0;
        while (J1[i] == 0) ++i;
        std::vector<int> J = J1;
        --J[i];
        const Poly& prev = P.eta.at(sys.jet_symbol(JetCoord{static_cast<int>(a), J}));
        Poly r = total_derivative(prev, i, sys);
        for (std::size_t k = 0; k < p; ++k) {
          if (dxi[i][k].is_zero()) continue;
          std::vector<int> Jk = J;
          ++Jk[k];
          r -= dxi[i][k] * jet_var(sys, static_cast<int>(a), Jk);
        }
        P.eta[sys.jet_symbol(JetCoord{static_cast<int>(a), J1})] = std::move(r);
      }
    }
  }
  return P;
}

ProlongedField prolong_characteristic(const VectorField& X, int n, const PdeSystem& sys) {
  ProlongedField P;
  P.base = X;
  P.order = n;
  const std::size_t p = sys.independents.size();
  for (std::size_t a = 0; a < sys.m(); ++a) {
    const int dep = static_cast<int>(a);
    Poly Q = X.phi[a];
    for (std::size_t k = 0; k < p; ++k) {
      std::vector<int> e(p, 0);
      e[k] = 1;
      Q -= X.xi[k] * jet_var(sys, dep, e);
    }
    for (int ord = 0; ord <= n; ++ord) {
      for (const auto& J : multi_indices(p, ord)) {
        Poly r = total_derivative(Q, J, sys);
        for (std::size_t k = 0; k < p; ++k) {
          std::vector<int> Jk = J;
          ++Jk[k];
          r += X.xi[k] * jet_var(sys, dep, Jk);
        }
        P.eta[sys.jet_symbol(JetCoord{dep, J})] = std::move(r);
      }
    }
  }
  return P;
}

std::vector<Poly> apply_criterion(const VectorField& X, const PdeSystem& sys, const SolvedForm& sf) {
  ProlongedField P = prolong(X, sys.max_order(), sys);
  std::vector<Poly> out;
  for (const Poly& eq : sys.equations) {
    Poly r;
    for (Symbol s : eq.variables()) {
      Poly d = eq.diff(s);
      int i = sys.independent_index(s);
      if (i >= 0) {
        r += X.xi[static_cast<std::size_t>(i)] * d;
      } else if (sys.jet_of(s)) {
        r += P.coefficient(s) * d;
      }
    }
    out.push_back(reduce_mod_system(r, sf));
  }
  return out;
}

std::vector<Poly> extract_determining(const std::vector<Poly>& residuals, const std::vector<Symbol>& unknowns) {
  std::unordered_set<std::uint32_t> unk;
  for (Symbol s : unknowns) unk.insert(s.id());
  std::vector<Poly> out;
  for (const Poly& r : residuals) {
    std::map<Monomial, std::vector<Poly::Term>> groups;
    for (const auto& [m, c] : r.terms()) {
      Monomial rest;
      std::optional<std::uint32_t> which;
      for (const auto& vp : m.factors()) {
        if (unk.count(vp.var)) {
          if (which || vp.exp != 1)
            throw DeterminingError("residual is nonlinear in the unknowns: " + to_string(m));
          which = vp.var;
        } else {
          rest = rest * Monomial::of(Symbol::from_id(vp.var), vp.exp);
        }
      }
      if (!which) throw DeterminingError("residual has a term free of unknowns: " + to_string(m));
      groups[rest].emplace_back(Monomial::of(Symbol::from_id(*which)), c);
    }
    for (auto& [key, terms] : groups) {
      Poly eq = Poly::from_terms(std::move(terms));
      if (!eq.is_zero()) out.push_back(std::move(eq));
    }
  }
  return out;
}

}  // namespace liesym
