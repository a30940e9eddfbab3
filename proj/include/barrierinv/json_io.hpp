#pragma once

// JSON descriptions of potentials and discrete spectra.
//
//   {"kind": "cold_emission", "params": {"u0": 1.0, "field": 1.0}, "shape": "barrier"}
//   {"kind": "tabulated", "params": {"csv": "table.csv"}, "shape": "barrier"}
//   {"levels": [{"kappa": 1.0, "c": 1.4142135623730951}]}
//
// Tabulated kinds reference a two-column x,U CSV resolved relative to the
// JSON file's directory.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "barrierinv/csv.hpp"
#include "barrierinv/errors.hpp"
#include "barrierinv/marchenko.hpp"
#include "barrierinv/potentials.hpp"

namespace barrierinv {

namespace detail {

inline nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open '" + path.string() + "' for reading");
  const auto parsed = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded())
    raise(errc::config_error, "'" + path.string() + "' is not valid JSON");
  return parsed;
}

inline double require_number(const nlohmann::json& params, const char* key, const char* kind) {
  if (!params.contains(key) || !params.at(key).is_number())
    raise(errc::config_error,
          std::string("potential kind '") + kind + "' needs numeric param '" + key + "'");
  return params.at(key).get<double>();
}

}  // namespace detail

inline shape_kind shape_from_name(const std::string& s) {
  if (s == "well") return shape_kind::well;
  if (s == "barrier") return shape_kind::barrier;
  raise(errc::config_error, "unknown shape '" + s + "' (expected 'well' or 'barrier')");
}

inline potential_spec potential_from_json(const nlohmann::json& j,
                                          const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("kind"))
    raise(errc::config_error, "potential JSON must be an object with a 'kind' field");
  const std::string kind = j.at("kind").get<std::string>();
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  const std::string shape_str = j.value("shape", "");

  if (kind == "harmonic_well") {
    if (!shape_str.empty() && shape_from_name(shape_str) != shape_kind::well)
      raise(errc::config_error, "harmonic_well must declare shape 'well'");
    return potential_spec::harmonic(detail::require_number(params, "omega", "harmonic_well"));
  }
  if (kind == "linear_well") {
    if (!shape_str.empty() && shape_from_name(shape_str) != shape_kind::well)
      raise(errc::config_error, "linear_well must declare shape 'well'");
    return potential_spec::linear(detail::require_number(params, "slope", "linear_well"));
  }
  if (kind == "cold_emission") {
    if (!shape_str.empty() && shape_from_name(shape_str) != shape_kind::barrier)
      raise(errc::config_error, "cold_emission must declare shape 'barrier'");
    return potential_spec::cold(detail::require_number(params, "u0", "cold_emission"),
                                detail::require_number(params, "field", "cold_emission"));
  }
  if (kind == "parabolic_barrier") {
    if (!shape_str.empty() && shape_from_name(shape_str) != shape_kind::barrier)
      raise(errc::config_error, "parabolic_barrier must declare shape 'barrier'");
    return potential_spec::parabolic(detail::require_number(params, "u0", "parabolic_barrier"),
                                     detail::require_number(params, "omega", "parabolic_barrier"));
  }
  if (kind == "tabulated") {
    if (!params.contains("csv"))
      raise(errc::config_error, "tabulated potential needs params.csv");
    if (shape_str.empty())
      raise(errc::config_error, "tabulated potential needs an explicit 'shape'");
    std::filesystem::path csv_path = params.at("csv").get<std::string>();
    if (csv_path.is_relative()) csv_path = base_dir / csv_path;
    return potential_spec::tabulated(read_xu_csv(csv_path), shape_from_name(shape_str));
  }
  raise(errc::config_error, "unknown potential kind '" + kind + "'");
}

inline potential_spec load_potential(const std::filesystem::path& path) {
  return potential_from_json(detail::load_json_file(path), path.parent_path());
}

// Analytic kinds round-trip; tabulated kinds reference the CSV path given by
// the caller.
inline nlohmann::json potential_to_json(const potential_spec& p,
                                        const std::string& table_csv = "") {
  nlohmann::json j;
  j["shape"] = shape_name(p.shape());
  if (const auto* hw = std::get_if<harmonic_well>(&p.kind())) {
    j["kind"] = "harmonic_well";
    j["params"] = {{"omega", hw->omega}};
  } else if (const auto* lw = std::get_if<linear_well>(&p.kind())) {
    j["kind"] = "linear_well";
    j["params"] = {{"slope", lw->slope}};
  } else if (const auto* ce = std::get_if<cold_emission>(&p.kind())) {
    j["kind"] = "cold_emission";
    j["params"] = {{"u0", ce->u0}, {"field", ce->field}};
  } else if (const auto* pb = std::get_if<parabolic_barrier>(&p.kind())) {
    j["kind"] = "parabolic_barrier";
    j["params"] = {{"u0", pb->u0}, {"omega", pb->omega}};
  } else {
    j["kind"] = "tabulated";
    j["params"] = {{"csv", table_csv}};
  }
  return j;
}

inline discrete_spectrum spectrum_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("levels") || !j.at("levels").is_array())
    raise(errc::config_error, "spectrum JSON must be an object with a 'levels' array");
  discrete_spectrum spec;
  for (const auto& lv : j.at("levels")) {
    if (!lv.is_object() || !lv.contains("kappa") || !lv.contains("c"))
      raise(errc::config_error, "each level needs numeric 'kappa' and 'c'");
    spec.levels.push_back({lv.at("kappa").get<double>(), lv.at("c").get<double>()});
  }
  std::sort(spec.levels.begin(), spec.levels.end(),
            [](const bound_state& a, const bound_state& b) { return a.kappa > b.kappa; });
  try {
    spec.validate();
  } catch (const error& err) {
    raise(errc::config_error, err.what());
  }
  return spec;
}

inline discrete_spectrum load_spectrum(const std::filesystem::path& path) {
  return spectrum_from_json(detail::load_json_file(path));
}

inline nlohmann::json spectrum_to_json(const discrete_spectrum& spec) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& lv : spec.levels) levels.push_back({{"kappa", lv.kappa}, {"c", lv.c}});
  return {{"levels", levels}};
}

}  // namespace barrierinv
