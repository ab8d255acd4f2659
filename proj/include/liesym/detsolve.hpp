#ifndef LIESYM_DETSOLVE_HPP
#define LIESYM_DETSOLVE_HPP

#include "liesym/linalg.hpp"
#include "liesym/prolong.hpp"

#include <string>
#include <vector>

namespace liesym {

/// Generic degree-<=d polynomial template for every component.
struct Ansatz {
  int degree = 0;
  std::vector<Symbol> unknowns;  // c0, c1, ... in column order
  /// Column k is unknown k: (component index, monomial in the base coordinates).
  std::vector<std::pair<std::size_t, Monomial>> columns;
  VectorField field;

  /// Field with the unknowns replaced by the entries of v.
  VectorField instantiate(const VectorQ& v, const PdeSystem& sys) const;
};

/// Monomials of total degree <= d in the given variables, by degree then grlex.
std::vector<Monomial> monomials_up_to(const std::vector<Symbol>& vars, int d);

Ansatz build_ansatz(const PdeSystem& sys, int d);

/// Homogeneous sparse system over a fixed column count.
struct LinearSystem {
  std::size_t cols = 0;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;

  MatrixQ dense() const;
};

/// Converts linear equations in the unknowns into primitive, deduplicated rows.
LinearSystem assemble(const std::vector<Poly>& equations, const std::vector<Symbol>& unknowns);

/// Solution space basis by fraction-free elimination and reduced echelon form.
std::vector<VectorQ> nullspace_exact(const LinearSystem& sys);

struct GeneratorBasis {
  std::vector<VectorField> basis;
  std::size_t dimension() const { return basis.size(); }
};

class BasisError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Coordinates of fields over a shared (component, monomial) support, columns
/// ordered by monomial degree descending, then component, then grlex.
struct FieldCoordinates {
  std::vector<std::pair<std::size_t, Monomial>> columns;
  MatrixQ rows;  // one row per field
};
FieldCoordinates field_coordinates(const std::vector<VectorField>& fields, const PdeSystem& sys);

/// Unique basis of span(raw): reduced echelon form over degree-descending columns,
/// members sorted by degree then pivot, each a primitive integer combination with
/// positive leading coefficient.
GeneratorBasis canonical_basis(const std::vector<VectorField>& raw, const PdeSystem& sys);

bool in_span(const VectorField& X, const std::vector<VectorField>& basis, const PdeSystem& sys);
/// Exact span equality, checked by membership in both directions.
bool same_span(const std::vector<VectorField>& a, const std::vector<VectorField>& b, const PdeSystem& sys);
/// Coefficients of X in the basis; throws BasisError when X is outside the span.
VectorQ coordinates_in(const VectorField& X, const std::vector<VectorField>& basis, const PdeSystem& sys);

bool check_generator(const VectorField& X, const PdeSystem& sys);
bool check_generator(const VectorField& X, const PdeSystem& sys, const SolvedForm& sf);

struct SymmetryResult {
  Ansatz ansatz;
  std::size_t determining_equations = 0;  // before deduplication
  std::size_t rows = 0;                   // after deduplication
  std::size_t rank = 0;
  GeneratorBasis basis;
};

/// jet -> prolong -> detsolve pipeline at ansatz degree d.
SymmetryResult solve_symmetries(const PdeSystem& sys, int d);

}  // namespace liesym

#endif  // LIESYM_DETSOLVE_HPP
