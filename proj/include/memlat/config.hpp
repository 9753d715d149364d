#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "memlat/params.hpp"

namespace memlat {

using json = nlohmann::json;

enum class Dimension { Length, Power, Mass, Temperature, AngularFrequency, Time, Dimensionless };

/// Converts a config value to SI. Numbers are taken as SI already; strings
/// are "<number> <unit>" from a fixed table. Cyclic units (Hz, kHz, MHz,
/// GHz) on angular-frequency fields are multiplied by 2 pi. Throws
/// ParseError on unknown units or a unit of the wrong dimension.
double parse_quantity(const json& value, Dimension dim, const std::string& field);

/// Reads the parameter block of a config:
///   { "preset": "case_study", "physical": { <PhysicalParams fields> } }
/// Fields under "physical" override the preset; without a preset every field
/// except trap_freq_override is required.
PhysicalParams parse_physical(const json& config);

/// Applies the optional "model_overrides" object (ModelParams rate fields) on
/// top of a derived model.
void apply_model_overrides(const json& config, ModelParams& model);

/// parse_physical + derive_model (+ field couplings when defined) +
/// apply_model_overrides.
ModelParams load_model(const json& config);

/// Reads and parses a JSON file; ParseError on I/O or syntax failure.
json read_json_file(const std::filesystem::path& path);

json to_json(const PhysicalParams& phys);
json to_json(const ModelParams& model);

}  // namespace memlat
