#ifndef LIESYM_PROLONG_HPP
#define LIESYM_PROLONG_HPP

#include "liesym/jet.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace liesym {

/// Generator xi^i d/dx_i + phi_a d/du^a with polynomial components in the
/// independents and dependents (coefficients may carry unknowns or parameters).
struct VectorField {
  std::vector<Poly> xi;
  std::vector<Poly> phi;

  static VectorField zero(const PdeSystem& sys);
  std::size_t size() const { return xi.size() + phi.size(); }
  /// Flat access: xi components first, then phi.
  const Poly& component(std::size_t k) const { return k < xi.size() ? xi[k] : phi[k - xi.size()]; }
  Poly& component(std::size_t k) { return k < xi.size() ? xi[k] : phi[k - xi.size()]; }
  bool is_zero() const;
  int degree() const;  // max total degree of the components in the base coordinates

  VectorField& operator+=(const VectorField& o);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator*(const Rational& c, VectorField a);
  friend bool operator==(const VectorField&, const VectorField&) = default;
};

/// Component names: xi_<independent>, phi_<dependent>.
std::vector<std::string> component_names(const PdeSystem& sys);
/// Base coordinates in order: independents then dependents.
std::vector<Symbol> base_coordinates(const PdeSystem& sys);
/// Parses a map component-name -> expression string; missing components are 0.
VectorField parse_field(const std::map<std::string, std::string>& comps, const PdeSystem& sys);
/// "x*d_x + u*d_u + theta*d_theta"; "0" for the zero field.
std::string to_string(const VectorField& X, const PdeSystem& sys);

struct ProlongedField {
  VectorField base;
  int order = 0;
  std::unordered_map<Symbol, Poly> eta;  // keyed by jet symbol, order 0 included

  const Poly& coefficient(Symbol jet) const;
};

/// Standard recursion: phi^{J,i} = D_i phi^J - sum_k (D_i xi^k) u_{J,k}.
ProlongedField prolong(const VectorField& X, int n, const PdeSystem& sys);
/// Characteristic form: phi^J = D_J Q + sum_k xi^k u_{J,k}, Q = phi - sum_k xi^k u_k.
ProlongedField prolong_characteristic(const VectorField& X, int n, const PdeSystem& sys);

/// All multi-indices of the given order, in a fixed order.
std::vector<std::vector<int>> multi_indices(std::size_t dims, int order);

/// Pr X[Delta_nu] reduced modulo the system, one entry per equation.
std::vector<Poly> apply_criterion(const VectorField& X, const PdeSystem& sys, const SolvedForm& sf);

class DeterminingError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Splits each residual by monomials in everything except the unknowns; every
/// coefficient must be homogeneous linear in the unknowns.
std::vector<Poly> extract_determining(const std::vector<Poly>& residuals, const std::vector<Symbol>& unknowns);

}  // namespace liesym

#endif  // LIESYM_PROLONG_HPP
