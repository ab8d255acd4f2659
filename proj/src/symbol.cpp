#include "liesym/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace liesym {

namespace {

class SymbolPool {
public:
  std::uint32_t intern(std::string_view name) {
    {
      std::shared_lock lock(mutex_);
      auto it = ids_.find(std::string(name));
      if (it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = ids_.try_emplace(std::string(name), static_cast<std::uint32_t>(names_.size()));
    if (inserted) names_.emplace_back(name);
    return it->second;
  }

  const std::string& name(std::uint32_t id) {
    std::shared_lock lock(mutex_);
    return names_.at(id);
  }

private:
  std::shared_mutex mutex_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::deque<std::string> names_;  // deque keeps references stable
};

SymbolPool& pool() {
  static SymbolPool p;
  return p;
}

}  // namespace

Symbol::Symbol(std::string_view name) : id_(pool().intern(name)) {}

Symbol Symbol::from_id(std::uint32_t id) {
  Symbol s;
  s.id_ = id;
  return s;
}

const std::string& Symbol::name() const {
  static const std::string invalid = "<invalid>";
  if (!valid()) return invalid;
  return pool().name(id_);
}

const char* to_string(SymbolKind k) {
  switch (k) {
    case SymbolKind::independent: return "independent";
    case SymbolKind::dependent: return "dependent";
    case SymbolKind::parameter: return "parameter";
    case SymbolKind::jet: return "jet";
    case SymbolKind::function_arg: return "function-arg";
    case SymbolKind::group_param: return "group-param";
    case SymbolKind::unknown: return "unknown";
    case SymbolKind::other: return "other";
  }
  return "?";
}

}  // namespace liesym
