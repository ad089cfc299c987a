#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dlab/constants.hpp"
#include "dlab/material.hpp"

namespace dlab {

/// Parse a material spec from its JSON text form:
///   {"eps0": 1, "mu0": 1,
///    "electric": [{"omega": 2, "coupling": 1, "damping": 0}, ...],
///    "magnetic": [...]}
/// Numbers are in normalized units unless "units": "si", in which case a
/// missing eps0/mu0 defaults to the SI vacuum values.
inline MaterialSpec parse_spec(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("spec root must be an object");

  bool si = false;
  if (j.contains("units")) {
    if (!j["units"].is_string()) throw SchemaError("units must be a string");
    const std::string u = j["units"].get<std::string>();
    if (u == "si")
      si = true;
    else if (u != "normalized")
      throw SchemaError("units must be \"normalized\" or \"si\"");
  }

  auto number_at = [&](const char *key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw SchemaError(std::string(key) + " must be a number");
    return j[key].get<double>();
  };
  const double eps0 = number_at("eps0", si ? si::eps0 : 1.0);
  const double mu0 = number_at("mu0", si ? si::mu0 : 1.0);

  auto parse_list = [&](const char *key) {
    std::vector<Oscillator> list;
    if (!j.contains(key)) return list;
    if (!j[key].is_array()) throw SchemaError(std::string(key) + " must be an array");
    std::size_t i = 0;
    for (const auto &entry : j[key]) {
      const std::string at = std::string(key) + "[" + std::to_string(i) + "]";
      if (!entry.is_object()) throw SchemaError(at + " must be an object");
      Oscillator o;
      if (!entry.contains("omega") || !entry["omega"].is_number())
        throw SchemaError(at + ".omega missing or not a number");
      if (!entry.contains("coupling") || !entry["coupling"].is_number())
        throw SchemaError(at + ".coupling missing or not a number");
      o.resonance = entry["omega"].get<double>();
      o.coupling = entry["coupling"].get<double>();
      if (entry.contains("damping")) {
        if (!entry["damping"].is_number()) throw SchemaError(at + ".damping must be a number");
        o.damping = entry["damping"].get<double>();
      }
      list.push_back(o);
      ++i;
    }
    return list;
  };

  return MaterialSpec(eps0, mu0, parse_list("electric"), parse_list("magnetic"));
}

inline nlohmann::json spec_to_json(const MaterialSpec &spec) {
  nlohmann::json j;
  j["eps0"] = spec.eps0();
  j["mu0"] = spec.mu0();
  j["electric"] = nlohmann::json::array();
  j["magnetic"] = nlohmann::json::array();
  for (const auto &o : spec.electric())
    j["electric"].push_back({{"omega", o.resonance}, {"coupling", o.coupling}, {"damping", o.damping}});
  for (const auto &o : spec.magnetic())
    j["magnetic"].push_back({{"omega", o.resonance}, {"coupling", o.coupling}, {"damping", o.damping}});
  return j;
}

} // namespace dlab
