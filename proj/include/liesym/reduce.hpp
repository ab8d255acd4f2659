#ifndef LIESYM_REDUCE_HPP
#define LIESYM_REDUCE_HPP

#include "liesym/prolong.hpp"

#include <string>
#include <vector>

namespace liesym {

class ReduceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Q_a = phi_a - sum_i xi^i u^a_i, one per dependent.
std::vector<Poly> characteristic(const VectorField& X, const PdeSystem& sys);

/// u^a = p_a(x, y) F_a(s(x, y)) with one shape function per dependent.
struct SimilarityAnsatz {
  Expr s;
  std::vector<Expr> prefactor;
  std::vector<std::string> functions;  // F<dependent>
  /// y (or x) as a function of the invariant symbol and the remaining coordinate.
  Symbol eliminated;
  Symbol kept;
  Expr inverse;
  /// prefactor base is kept + shift
  Rational shift;
  std::string domain;  // e.g. "x > 0"

  /// p_a * F_a(s)
  Expr solution(std::size_t a) const;
};

/// The symbol standing for the similarity variable.
Symbol similarity_symbol();

/// Case analysis for xi^1 = a x + b, xi^2 = c y + d, phi_a = lambda_a u^a.
/// Throws ReduceError naming the first component outside this class.
SimilarityAnsatz invariants(const VectorField& X, const PdeSystem& sys);

/// Q_a with the ansatz substituted, simplified; all zero for a valid ansatz.
std::vector<Expr> characteristic_on_ansatz(const VectorField& X, const SimilarityAnsatz& an, const PdeSystem& sys);

/// ODE system in s for the shape functions.
struct ReducedSystem {
  PdeSystem system;         // independent s, dependents F<dep>
  std::vector<Expr> raw;    // substituted equations before cancellation
  std::vector<Expr> factor; // common factor divided out, per equation
};

/// Substitutes the ansatz, expands by the chain rule, eliminates one
/// coordinate through s, divides out the common factor and normalizes each
/// equation so its leading derivative has a positive (unit when constant)
/// coefficient.
ReducedSystem reduce_system(const PdeSystem& sys, const SimilarityAnsatz& an);

/// Renames every opaque function application (used to compare with forms that
/// share one function name).
Expr rename_functions(const Expr& e, const std::string& name);

/// Pretty forms: "s = ...", "u = ...".
std::vector<std::string> describe(const SimilarityAnsatz& an, const PdeSystem& sys);
std::vector<std::string> describe(const ReducedSystem& rs);

}  // namespace liesym

#endif  // LIESYM_REDUCE_HPP
