#ifndef LIESYM_SYSTEM_IO_HPP
#define LIESYM_SYSTEM_IO_HPP

#include "liesym/prolong.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace liesym {

struct LabeledField {
  std::string label;
  VectorField field;
};

/// A system file: name, independents, dependents, parameters, equations
/// (each meaning expression = 0), optional aliases and expected generators.
struct SystemSpec {
  PdeSystem system;
  std::vector<LabeledField> expected_generators;
};

class SpecError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
SystemSpec parse_system_spec(const nlohmann::json& j);
SystemSpec load_system_spec(const std::string& path);

/// {"dimension": n, "generators": [{"xi_x": "...", ...}, ...]}; components
/// that vanish are written as "0".
nlohmann::ordered_json generators_to_json(const std::vector<VectorField>& fields, const PdeSystem& sys,
                                  const std::vector<std::string>& labels = {});
/// Accepts the document above or a bare array of component maps.
std::vector<LabeledField> generators_from_json(const nlohmann::json& j, const PdeSystem& sys);

}  // namespace liesym

#endif  // LIESYM_SYSTEM_IO_HPP
