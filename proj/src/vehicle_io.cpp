#include "vpcro/vehicle_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vpcro/error.hpp"

namespace vpcro {

namespace {

using json = nlohmann::json;

json parse_document(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(source, 0, e.what());
  }
}

std::optional<PerTraffic<double>> read_factors(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  PerTraffic<double> out;
  out[TrafficClass::Low] = it->at("low").get<double>();
  out[TrafficClass::Average] = it->at("avg").get<double>();
  out[TrafficClass::Heavy] = it->at("heavy").get<double>();
  return out;
}

VehicleSpec read_vehicle(const json& obj, const std::string& source) {
  VehicleSpec spec;
  spec.name = obj.at("name").get<std::string>();
  const auto kind = obj.at("kind").get<std::string>();
  auto parsed = parse_powertrain(kind);
  if (!parsed) throw ParseError(source, 0, fmt::format("vehicle '{}': unknown kind '{}'", spec.name, kind));
  spec.kind = *parsed;
  spec.battery_kwh = obj.value("battery_kwh", 0.0);
  spec.soc_initial = obj.value("soc_initial", 0.0);
  spec.soc_target = obj.value("soc_target", 0.0);
  spec.factors.charge_depleting = read_factors(obj, "cd_mi_per_kwh");
  spec.factors.charge_sustaining = read_factors(obj, "cs_mi_per_gal");
  return spec;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::vector<VehicleSpec> parse_vehicles(std::string_view text, const std::string& source) {
  const auto doc = parse_document(text, source);
  std::vector<VehicleSpec> out;
  try {
    if (doc.is_array()) {
      for (const auto& item : doc) out.push_back(read_vehicle(item, source));
    } else if (doc.is_object()) {
      out.push_back(read_vehicle(doc, source));
    } else {
      throw ParseError(source, 0, "expected a vehicle object or an array of vehicles");
    }
  } catch (const json::exception& e) {
    throw ParseError(source, 0, e.what());
  }
  for (const auto& spec : out) spec.validate();
  return out;
}

std::vector<VehicleSpec> load_vehicles(const std::filesystem::path& path) {
  return parse_vehicles(slurp(path), path.string());
}

EnergyPrices parse_prices(std::string_view text, const std::string& source) {
  const auto doc = parse_document(text, source);
  if (!doc.is_object()) throw ParseError(source, 0, "expected a prices object");
  EnergyPrices prices;
  try {
    prices.electricity_per_kwh = doc.value("price_ele_per_kwh", prices.electricity_per_kwh);
    prices.gasoline_per_gallon = doc.value("price_gas_per_gal", prices.gasoline_per_gallon);
  } catch (const json::exception& e) {
    throw ParseError(source, 0, e.what());
  }
  prices.validate();
  return prices;
}

EnergyPrices load_prices(const std::filesystem::path& path) { return parse_prices(slurp(path), path.string()); }

std::string to_json(const VehicleSpec& spec) {
  json obj{{"name", spec.name},
           {"kind", std::string(to_string(spec.kind))},
           {"battery_kwh", spec.battery_kwh},
           {"soc_initial", spec.soc_initial},
           {"soc_target", spec.soc_target}};
  auto put = [&](const char* key, const std::optional<PerTraffic<double>>& f) {
    if (f) {
      obj[key] = {{"low", (*f)[TrafficClass::Low]},
                  {"avg", (*f)[TrafficClass::Average]},
                  {"heavy", (*f)[TrafficClass::Heavy]}};
    }
  };
  put("cd_mi_per_kwh", spec.factors.charge_depleting);
  put("cs_mi_per_gal", spec.factors.charge_sustaining);
  return obj.dump(2);
}

}  // namespace vpcro
