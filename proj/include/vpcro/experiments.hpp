#ifndef VPCRO_EXPERIMENTS_HPP
#define VPCRO_EXPERIMENTS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "vpcro/routing.hpp"

namespace vpcro {

enum class PairMode { Ordered, Unordered };

std::string_view to_string(PairMode mode) noexcept;
std::optional<PairMode> parse_pair_mode(std::string_view token) noexcept;

/// What one strategy's route looks like for the sweep's vehicle.
struct RouteSummary {
  double distance = 0.0;
  double time = 0.0;
  double cost = 0.0;
  std::uint64_t path_hash = 0;
  PerTraffic<double> miles;
  PerTraffic<double> hours;
};

enum class PairStatus {
  Ok,
  /// No path at all, or none the vehicle has the energy for.
  Unreachable,
  /// A least-cost route exists but a baseline route strands the vehicle (BEV only).
  Infeasible,
};

struct PairRecord {
  NodeId origin = 0;
  NodeId dest = 0;
  PairStatus status = PairStatus::Ok;
  std::array<RouteSummary, 3> routes;  // indexed by Strategy

  const RouteSummary& operator[](Strategy s) const { return routes[static_cast<std::size_t>(s)]; }
  RouteSummary& operator[](Strategy s) { return routes[static_cast<std::size_t>(s)]; }
};

struct Sweep {
  std::string vehicle;
  PairMode mode = PairMode::Unordered;
  std::vector<PairRecord> records;  // ascending (origin, dest)
};

/// FNV-1a over the node ids; identifies a path without storing it.
std::uint64_t path_hash(std::span<const NodeId> nodes) noexcept;

RouteSummary summarize(const Route& route);

/// All three strategies for every O-D pair. Unordered mode visits each pair once with origin < dest.
/// Sources are spread over `jobs` threads (0 = hardware concurrency); output does not depend on it.
Sweep all_pairs_sweep(const Network& net, const Scenario& scenario, PairMode mode = PairMode::Unordered,
                      unsigned jobs = 1);

struct StrategyComposition {
  PerTraffic<double> mean_miles;
  PerTraffic<double> mean_hours;
  double mean_distance = 0.0;
  double mean_time = 0.0;
};

struct CompositionReport {
  std::size_t pairs = 0;
  bool changed_only = false;
  std::array<StrategyComposition, 3> by_strategy;
  /// Least-cost minus baseline travel time, averaged over pairs (hours).
  double mean_time_delta_h = 0.0;
  /// Mean and max of (least-cost time - baseline time) / baseline time.
  double mean_time_delta_ratio = 0.0;
  double max_time_delta_ratio = 0.0;

  const StrategyComposition& operator[](Strategy s) const { return by_strategy[static_cast<std::size_t>(s)]; }
};

struct SweepReport {
  std::string vehicle;
  Strategy baseline = Strategy::ShortestDistance;
  std::size_t evaluated = 0;    // pairs with status Ok
  std::size_t unreachable = 0;  // Unreachable + Infeasible
  std::size_t changed = 0;
  double changed_fraction = 0.0;
  double mean_saving_on_changed = 0.0;
  double max_saving = 0.0;
  double bin_width = 0.05;
  /// Pairs per saving bin over [0, 1]; unchanged pairs sit in the first bin.
  std::vector<std::size_t> histogram;
  CompositionReport composition;
};

inline constexpr double kDefaultBinWidth = 0.05;

/// Changed-route share and cost savings of least-cost routing against `baseline`.
/// Saving for a pair = (baseline-path cost - least-cost cost) / baseline-path cost.
/// Throws InvalidInput when the sweep has no evaluable pairs.
SweepReport changed_and_savings(const Sweep& sweep, Strategy baseline, double bin_width = kDefaultBinWidth,
                                bool composition_changed_only = false);

/// Mean per-class miles and hours for each strategy, plus least-cost vs baseline time deltas.
CompositionReport traffic_composition(const Sweep& sweep, Strategy baseline = Strategy::ShortestDistance,
                                      bool changed_only = false);

struct SocSweepResult {
  std::string vehicle;
  std::vector<double> levels;
  std::vector<Sweep> sweeps;                          // one per level
  std::vector<std::array<SweepReport, 2>> reports;    // vs ShortestDistance, vs ShortestTime
  std::vector<std::vector<double>> divergence;        // share of pairs whose least-cost path differs
};

/// Least-cost sweeps of one PHEV at several starting SOC levels.
/// Throws InvalidInput for non-PHEV specs or levels outside [soc_target, 1].
SocSweepResult soc_sweep(const Network& net, const VehicleSpec& phev, std::span<const double> levels,
                         const EnergyPrices& prices, const CycleSpeeds& speeds, PairMode mode = PairMode::Unordered,
                         unsigned jobs = 1);

/// Share of pairs (Ok in both sweeps) whose least-cost path differs.
double route_divergence(const Sweep& a, const Sweep& b);

}  // namespace vpcro

#endif  // VPCRO_EXPERIMENTS_HPP
