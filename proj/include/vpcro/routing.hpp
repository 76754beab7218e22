#ifndef VPCRO_ROUTING_HPP
#define VPCRO_ROUTING_HPP

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vpcro/network.hpp"
#include "vpcro/powertrain.hpp"

namespace vpcro {

/// Objective minimized by a search: total miles, total hours, or total dollars for the vehicle.
enum class Strategy { ShortestDistance = 0, ShortestTime = 1, LeastCost = 2 };

inline constexpr std::array<Strategy, 3> kStrategies{Strategy::ShortestDistance, Strategy::ShortestTime,
                                                      Strategy::LeastCost};

std::string_view to_string(Strategy strategy) noexcept;
/// Accepts "distance", "time", "cost" and the full names.
std::optional<Strategy> parse_strategy(std::string_view token) noexcept;

/// Everything besides the network that a search depends on.
struct Scenario {
  VehicleSpec vehicle;
  EnergyPrices prices;
  CycleSpeeds speeds;
};

/// Best known way to reach one node.
struct CostLabel {
  NodeId node = 0;
  bool reachable = false;
  double weight = 0.0;  // objective units: miles, hours or dollars
  double energy = 0.0;  // usable kWh left on arrival
  NodeId predecessor = kNoNode;
  SegmentId via = kNoSegment;
};

/// Single-source result: one label per node plus the order nodes were settled in.
struct SearchTree {
  Strategy strategy = Strategy::LeastCost;
  NodeId source = 0;
  double initial_energy = 0.0;
  std::vector<CostLabel> labels;
  std::vector<NodeId> settle_order;

  bool reachable(NodeId node) const { return labels.at(node).reachable; }
  /// Segment ids from the source to `dest`; empty when unreachable or dest == source.
  std::vector<SegmentId> path_to(NodeId dest) const;
};

/// Label-setting search from `source`.
///
/// Labels are extracted in order of weight; ties go to the smaller node id, and a relaxation that
/// only matches the current weight wins if it comes from a smaller predecessor (then a smaller
/// segment id). For LeastCost the segment cost is evaluated from the settling label's remaining
/// energy. A PHEV's label cost and remaining energy are tied one-to-one while the battery window
/// is non-empty, so a cheaper label never has less energy and one label per node suffices.
/// A BEV never relaxes a segment it lacks the energy for; nodes it cannot reach stay unreachable.
SearchTree search(const Network& net, Strategy strategy, const Scenario& scenario, NodeId source);

struct RouteLeg {
  SegmentId segment = kNoSegment;
  NodeId from = 0;
  NodeId to = 0;
  TrafficClass traffic = TrafficClass::Low;
  double length = 0.0;
  double time = 0.0;
  SegmentStep step;
};

struct Route {
  Strategy strategy = Strategy::LeastCost;
  std::vector<NodeId> nodes;
  std::vector<RouteLeg> legs;
  double distance = 0.0;
  double time = 0.0;
  /// Dollars along the path for the scenario's vehicle. Infinite when `feasible` is false.
  double cost = 0.0;
  double final_energy = 0.0;
  /// False when a BEV runs out of energy somewhere along the path.
  bool feasible = true;

  double objective() const noexcept;
  PerTraffic<double> miles_by_traffic() const noexcept;
  PerTraffic<double> hours_by_traffic() const noexcept;
};

/// Drives `segments` (which must form a connected walk) from full initial energy and records each leg.
Route replay(const Network& net, Strategy strategy, const Scenario& scenario, std::span<const SegmentId> segments);

/// Route to `dest` recovered from an existing tree. nullopt when unreachable.
std::optional<Route> route_from_tree(const Network& net, const SearchTree& tree, const Scenario& scenario,
                                     NodeId dest);

/// Optimal route for `strategy`. nullopt means no route exists (for this vehicle).
/// Throws InvalidInput when origin == dest or either node does not exist.
std::optional<Route> route(const Network& net, Strategy strategy, const Scenario& scenario, NodeId origin,
                           NodeId dest);

inline constexpr std::size_t kBruteForceNodeLimit = 12;

/// Exhaustive oracle: evaluates every simple path origin->dest and keeps the best one. Equal
/// objectives are ordered by the node sequence read backwards from the destination, then by the
/// segment ids read the same way, which is the order the label-setting search settles ties in.
/// Refuses (InvalidInput) networks with more than kBruteForceNodeLimit nodes.
std::optional<Route> brute_force_route(const Network& net, Strategy strategy, const Scenario& scenario,
                                       NodeId origin, NodeId dest);

/// Remaining energy back-computed from a least-cost label's accumulated cost:
/// initial energy minus cost divided by the electricity price. Goes negative once gasoline has been
/// bought, which is exactly when the explicit energy field reads zero.
double eq15_energy(const CostLabel& label, const Scenario& scenario);

/// Memoizes search trees per (source, strategy) for one network and scenario. Thread-safe.
class RouteCache {
 public:
  RouteCache(const Network& net, Scenario scenario) : net_(net), scenario_(std::move(scenario)) {}

  std::shared_ptr<const SearchTree> tree(NodeId source, Strategy strategy);
  std::optional<Route> route(Strategy strategy, NodeId origin, NodeId dest);

  std::size_t size() const;
  const Scenario& scenario() const noexcept { return scenario_; }

 private:
  const Network& net_;
  Scenario scenario_;
  mutable std::mutex mutex_;
  std::map<std::pair<NodeId, Strategy>, std::shared_ptr<const SearchTree>> trees_;
};

}  // namespace vpcro

#endif  // VPCRO_ROUTING_HPP
