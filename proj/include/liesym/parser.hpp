#ifndef LIESYM_PARSER_HPP
#define LIESYM_PARSER_HPP

#include "liesym/expr.hpp"

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace liesym {

class ParseError : public std::runtime_error {
public:
  /// Syntax error at a byte offset.
  ParseError(const std::string& what, std::size_t offset);
  /// Identifier that does not resolve in the context.
  static ParseError unknown_identifier(const std::string& name, std::size_t offset);

  std::size_t offset() const { return offset_; }
  /// Empty for syntax errors.
  const std::string& identifier() const { return ident_; }

private:
  std::size_t offset_ = 0;
  std::string ident_;
};

/// Canonical jet symbol name: `u_xyy`, letters grouped in independent order.
/// An all-zero count gives the dependent name itself.
std::string jet_symbol_name(const std::string& dependent, std::span<const int> counts,
                            std::span<const Symbol> independents);

/// Symbol table for parsing.
///
/// Jet identifiers `<dep>_<letters>` resolve when `<dep>` is a dependent and each
/// letter names an independent; they are normalized (`u_yx` becomes `u_xy`).
/// Aliases rename plain identifiers and the dependent part of jet names.
class ParseContext {
public:
  void declare(const std::string& name, SymbolKind kind);
  void declare_independent(const std::string& name);
  void declare_dependent(const std::string& name);
  void declare_parameter(const std::string& name) { declare(name, SymbolKind::parameter); }
  void alias(const std::string& from, const std::string& to) { aliases_[from] = to; }
  /// Opaque function names accepted in extended mode (`Fu(s)`, `Fu''(s)`).
  void declare_function(const std::string& name) { functions_.insert(name); }

  /// Extended mode admits exp, ln, rational exponents `^(p/q)`, division by
  /// non-constants and opaque function applications.
  bool extended = false;

  std::optional<SymbolKind> kind_of(const std::string& name) const;
  const std::vector<Symbol>& independents() const { return independents_; }
  const std::vector<Symbol>& dependents() const { return dependents_; }
  bool is_function(const std::string& name) const { return functions_.count(name) > 0; }
  /// Resolves an identifier (alias, plain or jet). Empty when unknown.
  std::optional<Symbol> resolve(const std::string& name) const;

private:
  std::map<std::string, SymbolKind> kinds_;
  std::map<std::string, std::string> aliases_;
  std::set<std::string> functions_;
  std::vector<Symbol> independents_;
  std::vector<Symbol> dependents_;
};

Expr parse_expr(std::string_view text, const ParseContext& ctx);

}  // namespace liesym

#endif  // LIESYM_PARSER_HPP
