#include "vpcro/powertrain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <fmt/format.h>

#include "vpcro/error.hpp"
#include "vpcro/vehicle_io.hpp"
#include "fleet_data.hpp"

namespace vpcro {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void check_factors(const VehicleSpec& spec, const std::optional<PerTraffic<double>>& factors,
                   std::string_view what) {
  if (!factors) throw InvalidInput(fmt::format("vehicle '{}': {} factors are required", spec.name, what));
  for (auto traffic : kTrafficClasses) {
    if (!positive_finite((*factors)[traffic])) {
      throw InvalidInput(fmt::format("vehicle '{}': {} factor for {} traffic must be positive", spec.name, what,
                                     to_token(traffic)));
    }
  }
}

}  // namespace

std::string_view to_string(PowertrainKind kind) noexcept {
  switch (kind) {
    case PowertrainKind::CV: return "CV";
    case PowertrainKind::HEV: return "HEV";
    case PowertrainKind::PHEV: return "PHEV";
    case PowertrainKind::BEV: return "BEV";
  }
  return "CV";
}

std::optional<PowertrainKind> parse_powertrain(std::string_view token) noexcept {
  const auto u = upper(token);
  if (u == "CV") return PowertrainKind::CV;
  if (u == "HEV") return PowertrainKind::HEV;
  if (u == "PHEV") return PowertrainKind::PHEV;
  if (u == "BEV") return PowertrainKind::BEV;
  return std::nullopt;
}

void VehicleSpec::validate() const {
  auto fraction = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
  if (!fraction(soc_initial) || !fraction(soc_target)) {
    throw InvalidInput(fmt::format("vehicle '{}': SOC values must lie in [0, 1]", name));
  }
  if (!std::isfinite(battery_kwh) || battery_kwh < 0.0) {
    throw InvalidInput(fmt::format("vehicle '{}': battery capacity must be non-negative", name));
  }
  switch (kind) {
    case PowertrainKind::CV:
    case PowertrainKind::HEV:
      if (factors.charge_depleting) {
        throw InvalidInput(fmt::format("vehicle '{}': {} has no charge-depleting mode", name, to_string(kind)));
      }
      check_factors(*this, factors.charge_sustaining, "charge-sustaining");
      break;
    case PowertrainKind::PHEV:
      check_factors(*this, factors.charge_depleting, "charge-depleting");
      check_factors(*this, factors.charge_sustaining, "charge-sustaining");
      break;
    case PowertrainKind::BEV:
      if (factors.charge_sustaining) throw InvalidInput(fmt::format("vehicle '{}': BEV has no engine", name));
      check_factors(*this, factors.charge_depleting, "charge-depleting");
      break;
  }
  if (is_plug_in(kind) && !(battery_kwh > 0.0)) {
    throw InvalidInput(fmt::format("vehicle '{}': plug-in vehicles need a positive battery capacity", name));
  }
}

VehicleSpec VehicleSpec::with_soc(double soc) const {
  if (!is_plug_in(kind)) {
    throw InvalidInput(fmt::format("vehicle '{}': SOC override only applies to plug-in vehicles", name));
  }
  VehicleSpec copy = *this;
  copy.soc_initial = soc;
  copy.validate();
  return copy;
}

void EnergyPrices::validate() const {
  if (!positive_finite(electricity_per_kwh) || !positive_finite(gasoline_per_gallon)) {
    throw InvalidInput("energy prices must be positive");
  }
}

void CycleSpeeds::validate() const {
  for (auto traffic : kTrafficClasses) {
    if (!positive_finite(mph[traffic])) {
      throw InvalidInput(fmt::format("average speed for {} traffic must be positive", to_token(traffic)));
    }
  }
}

double initial_energy(const VehicleSpec& spec) {
  if (!is_plug_in(spec.kind)) return 0.0;
  return spec.battery_kwh * std::max(0.0, spec.soc_initial - spec.soc_target);
}

double segment_time(double length, TrafficClass traffic, const CycleSpeeds& speeds) {
  return length / speeds.mph[traffic];
}

CostBranch select_branch(const VehicleSpec& spec, double length, TrafficClass traffic, double energy) {
  switch (spec.kind) {
    case PowertrainKind::CV:
    case PowertrainKind::HEV: return CostBranch::ChargeSustaining;
    case PowertrainKind::BEV: return CostBranch::ChargeDepleting;
    case PowertrainKind::PHEV: break;
  }
  if (energy <= 0.0) return CostBranch::ChargeSustaining;
  if (energy >= length / (*spec.factors.charge_depleting)[traffic]) return CostBranch::ChargeDepleting;
  return CostBranch::Mixed;
}

std::optional<SegmentStep> try_segment_cost(const VehicleSpec& spec, const EnergyPrices& prices, double length,
                                            TrafficClass traffic, double energy_before) {
  auto gas_only = [&] {
    const double mpg = (*spec.factors.charge_sustaining)[traffic];
    return SegmentStep{prices.gasoline_per_gallon * length / mpg, energy_before, 0.0, length};
  };
  auto electric_only = [&](double needed) {
    return SegmentStep{prices.electricity_per_kwh * needed, std::max(0.0, energy_before - needed), length, 0.0};
  };

  switch (spec.kind) {
    case PowertrainKind::CV:
    case PowertrainKind::HEV: return gas_only();

    case PowertrainKind::BEV: {
      const double needed = length / (*spec.factors.charge_depleting)[traffic];
      if (energy_before < needed) return std::nullopt;
      return electric_only(needed);
    }

    case PowertrainKind::PHEV: {
      const double mi_per_kwh = (*spec.factors.charge_depleting)[traffic];
      const double needed = length / mi_per_kwh;
      if (energy_before <= 0.0) {
        auto step = gas_only();
        step.energy_after = 0.0;
        return step;
      }
      if (energy_before >= needed) return electric_only(needed);

      // Battery runs out partway: electric until the window is empty, gasoline for the rest.
      const double electric_miles = mi_per_kwh * energy_before;
      const double gas_miles = length - electric_miles;
      const double mpg = (*spec.factors.charge_sustaining)[traffic];
      return SegmentStep{prices.electricity_per_kwh * energy_before + prices.gasoline_per_gallon * gas_miles / mpg,
                         0.0, electric_miles, gas_miles};
    }
  }
  return std::nullopt;
}

SegmentStep segment_cost(const VehicleSpec& spec, const EnergyPrices& prices, double length, TrafficClass traffic,
                         double energy_before) {
  if (auto step = try_segment_cost(spec, prices, length, traffic, energy_before)) return *step;
  throw RangeExhausted(fmt::format("{}: {:.6g} kWh cannot cover {:.6g} mi of {} traffic", spec.name, energy_before,
                                   length, to_token(traffic)));
}

const std::vector<VehicleSpec>& builtin_fleet() {
  static const std::vector<VehicleSpec> fleet = parse_vehicles(detail::kFleetJson, "builtin fleet");
  return fleet;
}

std::optional<VehicleSpec> find_builtin(std::string_view name) {
  const auto wanted = upper(name);
  for (const auto& spec : builtin_fleet()) {
    if (upper(spec.name) == wanted) return spec;
  }
  return std::nullopt;
}

}  // namespace vpcro
