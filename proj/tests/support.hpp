// Test-only fixtures and independent oracles.
#ifndef VPCRO_TESTS_SUPPORT_HPP
#define VPCRO_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "vpcro/network.hpp"
#include "vpcro/powertrain.hpp"
#include "vpcro/routing.hpp"

namespace vpcro::testing {

inline bool close_rel(double a, double b, double rel = 1e-9) {
  if (a == b) return true;
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

inline Node make_node(NodeId id, double lon = 0.0, double lat = 0.0) {
  return Node{id, static_cast<std::int64_t>(id), lon, lat};
}

inline std::vector<Node> make_nodes(std::size_t n) {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back(make_node(static_cast<NodeId>(i), double(i), 0.0));
  return nodes;
}

/// Node 0 -> node 1 directly over `direct` (Heavy by default), or 0 -> 2 -> 1 over two legs of `leg`.
inline Network diamond(double direct = 10.0, double leg = 10.0, TrafficClass direct_traffic = TrafficClass::Heavy,
                       TrafficClass detour_traffic = TrafficClass::Low) {
  return Network(make_nodes(3), {{0, 1, direct_traffic, direct}, {0, 2, detour_traffic, leg},
                                 {2, 1, detour_traffic, leg}});
}

/// Random directed graph: 2..max_nodes nodes, at most max_edges distinct directed pairs,
/// random traffic, lengths uniform in [0.5, 20] miles.
inline Network random_network(std::mt19937_64& rng, std::size_t max_nodes = 9, std::size_t max_edges = 20) {
  std::uniform_int_distribution<std::size_t> node_count(2, max_nodes);
  const auto n = node_count(rng);
  std::vector<std::pair<NodeId, NodeId>> candidates;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = 0; b < n; ++b) {
      if (a != b) candidates.emplace_back(a, b);
    }
  }
  std::shuffle(candidates.begin(), candidates.end(), rng);
  std::uniform_int_distribution<std::size_t> edge_count(1, std::min(max_edges, candidates.size()));
  candidates.resize(edge_count(rng));

  std::uniform_real_distribution<double> length(0.5, 20.0);
  std::uniform_int_distribution<int> traffic(0, 2);
  std::vector<Segment> segments;
  for (auto [a, b] : candidates) {
    segments.push_back({a, b, static_cast<TrafficClass>(traffic(rng)), length(rng)});
  }
  std::vector<Node> nodes;
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (NodeId i = 0; i < n; ++i) nodes.push_back(make_node(i, coord(rng), coord(rng)));
  return Network(std::move(nodes), std::move(segments));
}

inline Scenario scenario_for(const VehicleSpec& spec) { return Scenario{spec, EnergyPrices{}, CycleSpeeds{}}; }

inline const VehicleSpec& fleet(std::string_view name) {
  for (const auto& spec : builtin_fleet()) {
    if (spec.name == name) return spec;
  }
  throw std::out_of_range("no such built-in vehicle");
}

/// Fixed-point relaxation: sweep every segment until no label improves.
/// Returns per-node (weight, energy); unreachable nodes keep infinite weight.
struct FixedPointLabel {
  double weight = std::numeric_limits<double>::infinity();
  double energy = 0.0;
};

inline std::vector<FixedPointLabel> fixed_point_labels(const Network& net, Strategy strategy,
                                                       const Scenario& scenario, NodeId source) {
  std::vector<FixedPointLabel> labels(net.num_nodes());
  labels[source] = {0.0, initial_energy(scenario.vehicle)};
  for (std::size_t round = 0; round <= net.num_nodes() + 1; ++round) {
    bool changed = false;
    for (const auto& seg : net.segments()) {
      const auto& from = labels[seg.from];
      if (!std::isfinite(from.weight)) continue;
      double weight = 0.0;
      double energy = 0.0;
      const auto step = try_segment_cost(scenario.vehicle, scenario.prices, seg.length, seg.traffic, from.energy);
      switch (strategy) {
        case Strategy::ShortestDistance: weight = seg.length; break;
        case Strategy::ShortestTime: weight = seg.length / scenario.speeds.mph[seg.traffic]; break;
        case Strategy::LeastCost:
          if (!step) continue;
          weight = step->cost;
          break;
      }
      energy = step ? step->energy_after : 0.0;
      if (from.weight + weight < labels[seg.to].weight) {
        labels[seg.to] = {from.weight + weight, energy};
        changed = true;
      }
    }
    if (!changed) break;
  }
  return labels;
}

}  // namespace vpcro::testing

#endif  // VPCRO_TESTS_SUPPORT_HPP
