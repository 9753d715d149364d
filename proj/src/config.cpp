#include "memlat/config.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "memlat/constants.hpp"
#include "memlat/errors.hpp"

namespace memlat {

namespace {

struct UnitEntry {
  std::string_view symbol;
  Dimension dim;
  double factor;
};

constexpr double kTwoPi = constants::two_pi;

constexpr std::array kUnits = {
    UnitEntry{"m", Dimension::Length, 1.0},
    UnitEntry{"cm", Dimension::Length, 1e-2},
    UnitEntry{"mm", Dimension::Length, 1e-3},
    UnitEntry{"um", Dimension::Length, 1e-6},
    UnitEntry{"nm", Dimension::Length, 1e-9},
    UnitEntry{"W", Dimension::Power, 1.0},
    UnitEntry{"mW", Dimension::Power, 1e-3},
    UnitEntry{"uW", Dimension::Power, 1e-6},
    UnitEntry{"kg", Dimension::Mass, 1.0},
    UnitEntry{"g", Dimension::Mass, 1e-3},
    UnitEntry{"ng", Dimension::Mass, 1e-12},
    UnitEntry{"pg", Dimension::Mass, 1e-15},
    UnitEntry{"K", Dimension::Temperature, 1.0},
    UnitEntry{"mK", Dimension::Temperature, 1e-3},
    UnitEntry{"uK", Dimension::Temperature, 1e-6},
    UnitEntry{"rad/s", Dimension::AngularFrequency, 1.0},
    UnitEntry{"krad/s", Dimension::AngularFrequency, 1e3},
    UnitEntry{"Mrad/s", Dimension::AngularFrequency, 1e6},
    UnitEntry{"Hz", Dimension::AngularFrequency, kTwoPi},
    UnitEntry{"kHz", Dimension::AngularFrequency, kTwoPi * 1e3},
    UnitEntry{"MHz", Dimension::AngularFrequency, kTwoPi * 1e6},
    UnitEntry{"GHz", Dimension::AngularFrequency, kTwoPi * 1e9},
    UnitEntry{"s", Dimension::Time, 1.0},
    UnitEntry{"ms", Dimension::Time, 1e-3},
    UnitEntry{"us", Dimension::Time, 1e-6},
};

struct FieldSpec {
  const char* name;
  Dimension dim;
  double PhysicalParams::*member;
};

constexpr std::array kPhysicalFields = {
    FieldSpec{"laser_wavelength", Dimension::Length, &PhysicalParams::laser_wavelength},
    FieldSpec{"laser_power", Dimension::Power, &PhysicalParams::laser_power},
    FieldSpec{"beam_waist", Dimension::Length, &PhysicalParams::beam_waist},
    FieldSpec{"detuning", Dimension::AngularFrequency, &PhysicalParams::detuning},
    FieldSpec{"atom_mass", Dimension::Mass, &PhysicalParams::atom_mass},
    FieldSpec{"atom_linewidth", Dimension::AngularFrequency, &PhysicalParams::atom_linewidth},
    FieldSpec{"atom_number", Dimension::Dimensionless, &PhysicalParams::atom_number},
    FieldSpec{"membrane_freq", Dimension::AngularFrequency, &PhysicalParams::membrane_freq},
    FieldSpec{"membrane_mass", Dimension::Mass, &PhysicalParams::membrane_mass},
    FieldSpec{"membrane_Q", Dimension::Dimensionless, &PhysicalParams::membrane_Q},
    FieldSpec{"reflectivity", Dimension::Dimensionless, &PhysicalParams::reflectivity},
    FieldSpec{"temperature", Dimension::Temperature, &PhysicalParams::temperature},
    FieldSpec{"cool_rate", Dimension::AngularFrequency, &PhysicalParams::cool_rate},
};

struct ModelFieldSpec {
  const char* name;
  Dimension dim;
  double ModelParams::*member;
};

constexpr std::array kModelRateFields = {
    ModelFieldSpec{"omega_m", Dimension::AngularFrequency, &ModelParams::omega_m},
    ModelFieldSpec{"omega_at", Dimension::AngularFrequency, &ModelParams::omega_at},
    ModelFieldSpec{"g", Dimension::AngularFrequency, &ModelParams::g},
    ModelFieldSpec{"gamma_cool", Dimension::AngularFrequency, &ModelParams::gamma_cool},
    ModelFieldSpec{"gamma_m", Dimension::AngularFrequency, &ModelParams::gamma_m},
    ModelFieldSpec{"gamma_diff_at", Dimension::AngularFrequency, &ModelParams::gamma_diff_at},
    ModelFieldSpec{"gamma_diff_m", Dimension::AngularFrequency, &ModelParams::gamma_diff_m},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ParseError, field + ": " + what);
}

}  // namespace

double parse_quantity(const json& value, Dimension dim, const std::string& field) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) parse_error(field, "expected a number or a \"<value> <unit>\" string");

  const std::string text = value.get<std::string>();
  std::string_view sv = trim(text);
  double number = 0.0;
  const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), number);
  if (ec != std::errc()) parse_error(field, "cannot parse number in \"" + text + "\"");
  const std::string_view unit = trim(sv.substr(static_cast<std::size_t>(ptr - sv.data())));
  if (unit.empty()) return number;
  for (const auto& entry : kUnits) {
    if (entry.symbol == unit) {
      if (entry.dim != dim) parse_error(field, "unit \"" + std::string(unit) + "\" has the wrong dimension");
      return number * entry.factor;
    }
  }
  parse_error(field, "unknown unit \"" + std::string(unit) + "\"");
}

PhysicalParams parse_physical(const json& config) {
  if (!config.is_object()) parse_error("config", "top level must be an object");

  PhysicalParams phys;
  bool from_preset = false;
  if (config.contains("preset")) {
    const auto& preset = config.at("preset");
    if (!preset.is_string() || preset.get<std::string>() != "case_study") {
      parse_error("preset", "only \"case_study\" is known");
    }
    phys = preset_case_study();
    from_preset = true;
  }

  const json empty = json::object();
  const json& block = config.contains("physical") ? config.at("physical") : empty;
  if (!block.is_object()) parse_error("physical", "must be an object");

  for (const auto& key : block.items()) {
    bool known = key.key() == "trap_freq_override";
    for (const auto& f : kPhysicalFields) known = known || key.key() == f.name;
    if (!known) parse_error("physical." + key.key(), "unknown field");
  }
  for (const auto& f : kPhysicalFields) {
    if (block.contains(f.name)) {
      phys.*(f.member) = parse_quantity(block.at(f.name), f.dim, std::string("physical.") + f.name);
    } else if (!from_preset) {
      parse_error(std::string("physical.") + f.name, "missing (no preset given)");
    }
  }
  if (block.contains("trap_freq_override")) {
    const auto& v = block.at("trap_freq_override");
    if (v.is_null()) {
      phys.trap_freq_override.reset();
    } else if (v.is_string() && v.get<std::string>() == "membrane_freq") {
      phys.trap_freq_override = phys.membrane_freq;
    } else {
      phys.trap_freq_override =
          parse_quantity(v, Dimension::AngularFrequency, "physical.trap_freq_override");
    }
  }
  return phys;
}

void apply_model_overrides(const json& config, ModelParams& model) {
  if (!config.contains("model_overrides")) return;
  const auto& block = config.at("model_overrides");
  if (!block.is_object()) parse_error("model_overrides", "must be an object");
  for (const auto& item : block.items()) {
    const std::string field = "model_overrides." + item.key();
    if (item.key() == "reflectivity") {
      model.set_reflectivity(parse_quantity(item.value(), Dimension::Dimensionless, field));
      continue;
    }
    if (item.key() == "nbar") {
      model.nbar = parse_quantity(item.value(), Dimension::Dimensionless, field);
      continue;
    }
    bool found = false;
    for (const auto& f : kModelRateFields) {
      if (item.key() == f.name) {
        model.*(f.member) = parse_quantity(item.value(), f.dim, field);
        found = true;
      }
    }
    if (!found) parse_error(field, "unknown field");
  }
  const double fields[] = {model.omega_m, model.omega_at, model.g, model.gamma_cool,
                           model.gamma_m, model.gamma_diff_at, model.gamma_diff_m, model.nbar};
  for (double v : fields) {
    if (!(v >= 0.0)) throw Error(ErrorCode::NonPositiveInput, "model overrides must be >= 0");
  }
  if (!(model.reflectivity >= 0.0 && model.reflectivity <= 1.0)) {
    throw Error(ErrorCode::NonPositiveInput, "reflectivity override must lie in [0, 1]");
  }
}

ModelParams load_model(const json& config) {
  const PhysicalParams phys = parse_physical(config);
  ModelParams model = derive_model(phys);
  try {
    model.qsse = derive_qsse_couplings(phys, model);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ReflectivityZero) throw;
  }
  apply_model_overrides(config, model);
  return model;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

json to_json(const PhysicalParams& phys) {
  json j;
  for (const auto& f : kPhysicalFields) j[f.name] = phys.*(f.member);
  j["trap_freq_override"] =
      phys.trap_freq_override ? json(*phys.trap_freq_override) : json(nullptr);
  return j;
}

json to_json(const ModelParams& m) {
  json rates;
  json cyclic;
  for (const auto& f : kModelRateFields) {
    rates[f.name] = m.*(f.member);
    cyclic[f.name] = m.*(f.member) / kTwoPi;
  }
  rates["gamma_th_m"] = m.gamma_m * m.nbar;
  cyclic["gamma_th_m"] = m.gamma_m * m.nbar / kTwoPi;

  json j;
  j["units"] = "rates in rad/s; *_over_2pi blocks in Hz";
  j["model"] = rates;
  j["model"]["reflectivity"] = m.reflectivity;
  j["model"]["transmittivity"] = m.transmittivity;
  j["model"]["nbar"] = m.nbar;
  j["model_over_2pi"] = cyclic;
  j["intermediates"] = {{"V0_J", m.V0}, {"ell_at_m", m.ell_at}, {"ell_m_m", m.ell_m}};
  if (m.qsse) {
    const auto& c = *m.qsse;
    j["intermediates"]["alpha_sq"] = c.alpha_sq;
    j["qsse_couplings"] = {{"g_mR", c.g_mR}, {"g_mL", c.g_mL}, {"g_atR", c.g_atR}, {"g_atL", c.g_atL},
                           {"g_from_couplings", coupling_from_qsse(c)}};
    j["qsse_couplings_over_2pi"] = {{"g_mR", c.g_mR / kTwoPi},
                                    {"g_mL", c.g_mL / kTwoPi},
                                    {"g_atR", c.g_atR / kTwoPi},
                                    {"g_atL", c.g_atL / kTwoPi}};
  } else {
    j["qsse_couplings"] = nullptr;
  }
  return j;
}

}  // namespace memlat
