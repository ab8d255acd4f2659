#ifndef LIESYM_LIEALG_HPP
#define LIESYM_LIEALG_HPP

#include "liesym/detsolve.hpp"
#include "liesym/exppoly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace liesym {

/// X acting on a function of the base coordinates.
Poly apply_field(const VectorField& X, const Poly& f, const PdeSystem& sys);
/// Componentwise X(Y) - Y(X).
VectorField bracket(const VectorField& X, const VectorField& Y, const PdeSystem& sys);

/// Basis with exact structure constants: [X_i, X_j] = sum_k c^k_ij X_k, stored
/// as ad matrices, ad[i](k, j) = c^k_ij.
struct LieAlgebra {
  std::vector<VectorField> basis;
  std::vector<std::string> labels;
  std::vector<MatrixQ> ad;

  std::size_t dimension() const { return basis.size(); }
  const Rational& c(std::size_t k, std::size_t i, std::size_t j) const {
    return ad[i](static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
  }
  /// sum_i a_i X_i
  VectorField element(const VectorQ& a) const;
};

class ClosureError : public std::runtime_error {
public:
  ClosureError(std::size_t i, std::size_t j, std::string residual);
  std::size_t i, j;
  std::string residual;
};

/// Labels default to X1, X2, ...; throws ClosureError when a bracket leaves the
/// span and std::logic_error if antisymmetry or Jacobi fails.
LieAlgebra structure_constants(const std::vector<VectorField>& basis, const PdeSystem& sys,
                               std::vector<std::string> labels = {});

const MatrixQ& ad_matrix(const LieAlgebra& alg, std::size_t i);
/// ad of sum_i a_i X_i
MatrixQ ad_matrix(const LieAlgebra& alg, const VectorQ& a);

/// Characteristic polynomial det(lambda I - A), coefficients low to high.
std::vector<Rational> characteristic_polynomial(const MatrixQ& A);

/// Rational roots with multiplicity; `rest` receives the cofactor without
/// rational roots (constant 1 when the polynomial splits).
std::vector<Rational> rational_roots(std::vector<Rational> p, std::vector<Rational>* rest = nullptr);

std::string poly_string(const std::vector<Rational>& p, const std::string& var);

/// series: Ad(exp(eps X_i)) Y = Y - eps [X_i, Y] + ... (CLI value "eq6"); paper: eps negated.
enum class AdjointSign { series, paper };

/// Matrix of Ad(exp(eps X_i)): column j holds the coordinates of the image of X_j.
struct AdjointMap {
  std::size_t n = 0;
  std::vector<ExpPoly> m;  // column-major
  /// Truncated series, not a closed form.
  bool approximate = false;
  int series_order = 0;

  const ExpPoly& operator()(std::size_t i, std::size_t j) const { return m[j * n + i]; }
  ExpPoly& operator()(std::size_t i, std::size_t j) { return m[j * n + i]; }
  Eigen::MatrixXd eval(double eps) const;
  /// Image of a, exact when every entry needed is rational at eps.
  std::optional<VectorQ> apply_exact(const GroupParam& eps, const VectorQ& a) const;
  Eigen::VectorXd apply(double eps, const Eigen::VectorXd& a) const;
};

class SplitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// exp(-eps ad_i) (series) or exp(eps ad_i) (paper) in closed form via Putzer's
/// algorithm over rational eigenvalues. A characteristic polynomial with a
/// factor lacking rational roots throws SplitError unless series_fallback > 0,
/// in which case the series truncated at that order is returned, flagged.
AdjointMap adjoint_exp(const LieAlgebra& alg, std::size_t i, AdjointSign sign = AdjointSign::series,
                       int series_fallback = 0);
AdjointMap matrix_exp(const MatrixQ& A, int series_fallback = 0);
/// sum_{k<=order} (eps A)^k / k!
AdjointMap exp_series(const MatrixQ& A, int order);

/// Commutator table entries [X_i, X_j] as expressions in the labels.
std::vector<std::vector<Expr>> lie_table(const LieAlgebra& alg);
/// Entry (i, j) is Ad(exp(eps X_i)) X_j.
std::vector<std::vector<Expr>> adjoint_table(const LieAlgebra& alg, AdjointSign sign, const std::string& eps = "eps");

/// Parse context for table entries: labels, eps and h as symbols, extended mode.
ParseContext algebra_context(const LieAlgebra& alg);
/// Compares a transcribed entry with a computed one after simplification.
bool same_entry(const std::string& transcribed, const Expr& computed, const ParseContext& ctx);

/// One-parameter group of a coordinatewise-affine field.
struct Flow {
  std::vector<Symbol> coordinates;
  std::vector<Expr> images;  // in the parameter
  Symbol parameter;
};

class FlowError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// z -> z + b h when the z-component is b, z -> (z + b/a) e^{ah} - b/a when it
/// is a z + b. Any other component throws FlowError naming the coordinate.
Flow flow(const VectorField& X, const PdeSystem& sys, const std::string& parameter = "h");

/// Equation pulled back through the flow: each coordinate and jet replaced by
/// its transformed value. Vanishes on solutions when X is a symmetry.
Expr transform_equation(const Poly& eq, const Flow& g, const PdeSystem& sys);

}  // namespace liesym

#endif  // LIESYM_LIEALG_HPP
