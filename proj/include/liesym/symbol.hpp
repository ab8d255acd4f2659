#ifndef LIESYM_SYMBOL_HPP
#define LIESYM_SYMBOL_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace liesym {

enum class SymbolKind { independent, dependent, parameter, jet, function_arg, group_param, unknown, other };

const char* to_string(SymbolKind k);

/// Interned name. Ids come from a process-wide append-only pool, so two Symbols
/// with the same name always compare equal. The pool is the only shared state and
/// it is internally synchronized; a name never changes once interned.
///
/// Id order depends on interning order and is only used for hashing and internal
/// storage; anything user-visible orders by name.
class Symbol {
public:
  Symbol() = default;
  explicit Symbol(std::string_view name);
  /// Rebuilds a symbol from an id previously obtained from id().
  static Symbol from_id(std::uint32_t id);

  std::uint32_t id() const { return id_; }
  const std::string& name() const;
  bool valid() const { return id_ != kInvalid; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend bool operator!=(Symbol a, Symbol b) { return a.id_ != b.id_; }

private:
  static constexpr std::uint32_t kInvalid = 0xffffffffu;
  std::uint32_t id_ = kInvalid;
};

/// Orders symbols by name (deterministic across runs).
struct SymbolNameLess {
  bool operator()(Symbol a, Symbol b) const { return a.name() < b.name(); }
};

}  // namespace liesym

template <>
struct std::hash<liesym::Symbol> {
  std::size_t operator()(liesym::Symbol s) const { return std::hash<std::uint32_t>{}(s.id()); }
};

#endif  // LIESYM_SYMBOL_HPP
