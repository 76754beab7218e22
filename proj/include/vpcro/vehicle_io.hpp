#ifndef VPCRO_VEHICLE_IO_HPP
#define VPCRO_VEHICLE_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vpcro/powertrain.hpp"

namespace vpcro {

/// Reads either a single vehicle object or an array of them. Every spec is validated.
std::vector<VehicleSpec> parse_vehicles(std::string_view text, const std::string& source = "<input>");
std::vector<VehicleSpec> load_vehicles(const std::filesystem::path& path);

/// Object with `price_ele_per_kwh` and `price_gas_per_gal`; missing keys keep their defaults.
EnergyPrices parse_prices(std::string_view text, const std::string& source = "<input>");
EnergyPrices load_prices(const std::filesystem::path& path);

std::string to_json(const VehicleSpec& spec);

}  // namespace vpcro

#endif  // VPCRO_VEHICLE_IO_HPP
