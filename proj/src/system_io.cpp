#include "liesym/system_io.hpp"

#include <fstream>
#include <sstream>

namespace liesym {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::string> strings(const nlohmann::json& j, const char* key, bool required) {
  if (!j.contains(key)) {
    if (required) throw SpecError(std::string("missing key '") + key + "'");
    return {};
  }
  return j.at(key).get<std::vector<std::string>>();
}

}  // namespace

SystemSpec parse_system_spec(const nlohmann::json& j) {
  SystemSpec spec;
  try {
    std::map<std::string, std::string> aliases;
    if (j.contains("aliases")) aliases = j.at("aliases").get<std::map<std::string, std::string>>();
    spec.system = PdeSystem::from_strings(j.value("name", std::string("system")), strings(j, "independents", true),
                                          strings(j, "dependents", true), strings(j, "parameters", false),
                                          strings(j, "equations", true), aliases);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed system spec: ") + e.what());
  }
  if (j.contains("expected_generators")) spec.expected_generators = generators_from_json(j.at("expected_generators"), spec.system);
  return spec;
}

SystemSpec load_system_spec(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(path + ": " + e.what());
  }
  return parse_system_spec(j);
}

nlohmann::ordered_json generators_to_json(const std::vector<VectorField>& fields, const PdeSystem& sys,
                                          const std::vector<std::string>& labels) {
  auto names = component_names(sys);
  VarOrder order = sys.var_order();
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    nlohmann::ordered_json g;
    if (i < labels.size()) g["label"] = labels[i];
    for (std::size_t k = 0; k < names.size(); ++k) g[names[k]] = to_string(fields[i].component(k), order);
    arr.push_back(std::move(g));
  }
  nlohmann::ordered_json out;
  out["dimension"] = fields.size();
  out["generators"] = arr;
  return out;
}

std::vector<LabeledField> generators_from_json(const nlohmann::json& j, const PdeSystem& sys) {
  const nlohmann::json& arr = j.is_object() ? j.at("generators") : j;
  std::vector<LabeledField> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::map<std::string, std::string> comps;
    std::string label = "X" + std::to_string(i + 1);
    for (const auto& [k, v] : arr[i].items()) {
      if (k == "label") {
        label = v.get<std::string>();
      } else {
        comps[k] = v.get<std::string>();
      }
    }
    out.push_back({label, parse_field(comps, sys)});
  }
  return out;
}

}  // namespace liesym
