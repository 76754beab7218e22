#ifndef VPCRO_POWERTRAIN_HPP
#define VPCRO_POWERTRAIN_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vpcro/network.hpp"

namespace vpcro {

enum class PowertrainKind { CV, HEV, PHEV, BEV };

std::string_view to_string(PowertrainKind kind) noexcept;
std::optional<PowertrainKind> parse_powertrain(std::string_view token) noexcept;

constexpr bool is_plug_in(PowertrainKind kind) noexcept {
  return kind == PowertrainKind::PHEV || kind == PowertrainKind::BEV;
}

/// Miles per unit of energy for each traffic class.
/// `charge_depleting` is mi/kWh (plug-ins), `charge_sustaining` is mi/gal (anything with an engine).
struct ConversionFactors {
  std::optional<PerTraffic<double>> charge_depleting;
  std::optional<PerTraffic<double>> charge_sustaining;

  friend bool operator==(const ConversionFactors&, const ConversionFactors&) = default;
};

struct VehicleSpec {
  std::string name;
  PowertrainKind kind = PowertrainKind::CV;
  ConversionFactors factors;
  double battery_kwh = 0.0;
  double soc_initial = 0.0;
  double soc_target = 0.0;

  /// Throws InvalidInput naming the first broken invariant.
  void validate() const;

  /// Copy with a different starting state of charge. Only meaningful for plug-in kinds.
  VehicleSpec with_soc(double soc) const;

  friend bool operator==(const VehicleSpec&, const VehicleSpec&) = default;
};

struct EnergyPrices {
  double electricity_per_kwh = 0.114;
  double gasoline_per_gallon = 2.75;

  void validate() const;
};

/// Mean speed of the drive cycle behind each traffic class, in mph.
struct CycleSpeeds {
  PerTraffic<double> mph{{48.28, 19.58, 7.05}};  // HWFET, UDDS, NYC

  void validate() const;
};

/// Which piece of the plug-in hybrid cost function applies to a segment.
enum class CostBranch { ChargeSustaining, ChargeDepleting, Mixed };

/// Outcome of driving one segment.
struct SegmentStep {
  double cost = 0.0;          // dollars
  double energy_after = 0.0;  // kWh left in the usable battery window
  double electric_miles = 0.0;
  double gas_miles = 0.0;
};

/// Usable battery energy at departure: capacity x (soc_initial - soc_target), floored at zero.
/// Zero for CV and HEV, whose cost model never draws on the battery.
double initial_energy(const VehicleSpec& spec);

/// Hours to cover `length` miles at the cycle's average speed.
double segment_time(double length, TrafficClass traffic, const CycleSpeeds& speeds);

/// Cost-function branch a PHEV takes for this segment given `energy` kWh remaining.
/// Energy at or below zero selects charge-sustaining, enough energy for the whole segment selects
/// charge-depleting, anything in between is mixed. Non-PHEV kinds always report their single mode.
CostBranch select_branch(const VehicleSpec& spec, double length, TrafficClass traffic, double energy);

/// Cost and energy use for one segment. Returns nullopt when a BEV lacks the energy to finish it.
std::optional<SegmentStep> try_segment_cost(const VehicleSpec& spec, const EnergyPrices& prices, double length,
                                            TrafficClass traffic, double energy_before);

/// As try_segment_cost, but a BEV shortfall throws RangeExhausted.
SegmentStep segment_cost(const VehicleSpec& spec, const EnergyPrices& prices, double length, TrafficClass traffic,
                         double energy_before);

/// CV, HEV, PHEV20, PHEV40, PHEV60, BEV100 with their published component and efficiency data.
const std::vector<VehicleSpec>& builtin_fleet();

/// Built-in vehicle by (case-insensitive) name.
std::optional<VehicleSpec> find_builtin(std::string_view name);

}  // namespace vpcro

#endif  // VPCRO_POWERTRAIN_HPP
