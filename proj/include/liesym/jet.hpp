#ifndef LIESYM_JET_HPP
#define LIESYM_JET_HPP

#include "liesym/parser.hpp"
#include "liesym/poly.hpp"

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace liesym {

/// Derivative coordinate u^dep_J; J holds one count per independent.
struct JetCoord {
  int dep = 0;
  std::vector<int> counts;

  int order() const;
  JetCoord shifted(std::size_t independent, int by = 1) const;
  friend bool operator==(const JetCoord&, const JetCoord&) = default;
};

/// Ranking: order, then dependent index, then reverse-lexicographic multi-index
/// (more derivatives in the last independent ranks higher).
bool rank_less(const JetCoord& a, const JetCoord& b);

/// A polynomial PDE system; every equation means expression = 0.
class PdeSystem {
public:
  std::string name;
  std::vector<Symbol> independents;
  std::vector<Symbol> dependents;
  std::vector<Symbol> parameters;
  std::map<std::string, std::string> aliases;
  std::vector<Poly> equations;
  /// Optional per-equation leading coordinate; chosen automatically when empty.
  std::vector<std::optional<JetCoord>> leading;

  std::size_t m() const { return dependents.size(); }
  Symbol jet_symbol(const JetCoord& j) const;
  std::optional<JetCoord> jet_of(Symbol s) const;
  bool is_parameter(Symbol s) const;
  int independent_index(Symbol s) const;  // -1 when not independent
  int max_order() const;
  /// Symbol order for printing: independents, dependents, jets by rank, parameters.
  VarOrder var_order(const std::vector<Symbol>& extra = {}) const;
  ParseContext context() const;

  /// Parses equation strings against this system's symbols.
  static PdeSystem from_strings(std::string name, const std::vector<std::string>& independents,
                                const std::vector<std::string>& dependents,
                                const std::vector<std::string>& parameters,
                                const std::vector<std::string>& equations,
                                const std::map<std::string, std::string>& aliases = {});
};

/// D_i e: explicit x_i dependence plus the chain through every jet symbol.
/// Symbols that are neither independents nor jets are constants.
Poly total_derivative(const Poly& e, std::size_t i, const PdeSystem& sys);
Poly total_derivative(const Poly& e, const std::vector<int>& counts, const PdeSystem& sys);

/// One solved relation lc * lead = rhs, with lc a polynomial in the parameters.
struct SolvedEntry {
  JetCoord lead;
  Symbol symbol;
  Poly lc;
  Poly rhs;
  /// Index of the equation it comes from, and the derivative taken of it.
  std::size_t equation = 0;
  std::vector<int> derived;
};

class SolvedForm {
public:
  const std::vector<SolvedEntry>& entries() const { return entries_; }
  const SolvedEntry* find(Symbol s) const;
  int closure_order() const { return closure_order_; }

private:
  friend SolvedForm solve_leading(const PdeSystem& sys, int closure_order);
  std::vector<SolvedEntry> entries_;  // sorted by rank of lead
  std::unordered_map<Symbol, std::size_t> index_;
  int closure_order_ = 0;
};

class JetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Leading coordinate rule: highest order, ties broken by the last independent.
JetCoord choose_leading(const Poly& eq, const PdeSystem& sys);

/// Solves every equation for its leading coordinate and closes the table under
/// total derivatives up to `closure_order` (defaults to max order + 1). Entries
/// are fully reduced against each other.
///
/// A non-unit leading coefficient is kept on the left: reduction multiplies by
/// it instead of dividing. This is valid for generic parameter values.
SolvedForm solve_leading(const PdeSystem& sys, int closure_order = -1);

/// Substitutes table entries until no leading coordinate remains. The result
/// equals the true reduction times a product of leading coefficients.
Poly reduce_mod_system(const Poly& e, const SolvedForm& sf);

}  // namespace liesym

#endif  // LIESYM_JET_HPP
