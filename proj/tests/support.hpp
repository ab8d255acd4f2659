#pragma once

#include "liesym/expr.hpp"

#include <random>
#include <vector>

namespace testing {

using namespace liesym;

struct Rng {
  explicit Rng(std::uint64_t seed) : g(seed) {}
  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }
  Rational rational(long span = 9) {
    long n = uniform(-span, span);
    long d = uniform(1, span);
    return Rational(n, d);
  }
  std::mt19937_64 g;
};

/// Random tree in the polynomial subset over the given symbols.
inline Expr random_poly_expr(Rng& r, const std::vector<Symbol>& vars, int depth) {
  if (depth <= 0 || r.uniform(0, 3) == 0) {
    if (r.uniform(0, 2) == 0) return Expr(r.rational());
    return Expr(vars[static_cast<std::size_t>(r.uniform(0, static_cast<long>(vars.size()) - 1))]);
  }
  switch (r.uniform(0, 2)) {
    case 0: {
      std::vector<Expr> t;
      for (long i = 0, n = r.uniform(2, 3); i < n; ++i) t.push_back(random_poly_expr(r, vars, depth - 1));
      return Expr::sum(std::move(t));
    }
    case 1: {
      std::vector<Expr> t;
      for (long i = 0, n = r.uniform(2, 3); i < n; ++i) t.push_back(random_poly_expr(r, vars, depth - 1));
      return Expr::product(std::move(t));
    }
    default:
      return Expr::power(random_poly_expr(r, vars, depth - 1), Rational(r.uniform(1, 3)));
  }
}

}  // namespace testing

#include "liesym/system_io.hpp"

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(LIESYM_DATA_DIR) + "/" + name; }

inline const SystemSpec& rnc_spec() {
  static const SystemSpec s = load_system_spec(data_path("rnc.json"));
  return s;
}

inline const SystemSpec& heat_spec() {
  static const SystemSpec s = load_system_spec(data_path("heat.json"));
  return s;
}

inline Poly parse_poly(const std::string& text, const PdeSystem& sys) {
  return poly_normalize(parse_expr(text, sys.context()));
}

inline VectorField field(const PdeSystem& sys, std::map<std::string, std::string> comps) {
  return parse_field(comps, sys);
}

/// Random polynomial field of degree <= d in the base coordinates.
inline VectorField random_field(Rng& r, const PdeSystem& sys, int d, int terms = 3) {
  VectorField X = VectorField::zero(sys);
  auto coords = base_coordinates(sys);
  for (std::size_t c = 0; c < X.size(); ++c) {
    for (int t = 0; t < terms; ++t) {
      Monomial m;
      long deg = r.uniform(0, d);
      for (long k = 0; k < deg; ++k) m = m * Monomial::of(coords[static_cast<std::size_t>(r.uniform(0, static_cast<long>(coords.size()) - 1))]);
      X.component(c) += Poly::term(m, r.rational());
    }
  }
  return X;
}

}  // namespace testing
