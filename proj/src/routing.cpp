#include "vpcro/routing.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <queue>

#include <fmt/format.h>

#include "vpcro/error.hpp"

namespace vpcro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Advance {
  double weight;
  double energy;
};

// Weight and post-segment energy for relaxing `seg` out of a label holding `energy`.
std::optional<Advance> advance(const Segment& seg, Strategy strategy, const Scenario& scenario, double energy) {
  auto step = try_segment_cost(scenario.vehicle, scenario.prices, seg.length, seg.traffic, energy);
  switch (strategy) {
    case Strategy::ShortestDistance: return Advance{seg.length, step ? step->energy_after : 0.0};
    case Strategy::ShortestTime:
      return Advance{segment_time(seg.length, seg.traffic, scenario.speeds), step ? step->energy_after : 0.0};
    case Strategy::LeastCost:
      if (!step) return std::nullopt;
      return Advance{step->cost, step->energy_after};
  }
  return std::nullopt;
}

void check_node(const Network& net, NodeId id, std::string_view what) {
  if (id >= net.num_nodes()) {
    throw InvalidInput(fmt::format("{} node {} is out of range (network has {} nodes)", what, id, net.num_nodes()));
  }
}

}  // namespace

std::string_view to_string(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::ShortestDistance: return "shortest-distance";
    case Strategy::ShortestTime: return "shortest-time";
    case Strategy::LeastCost: return "least-cost";
  }
  return "least-cost";
}

std::optional<Strategy> parse_strategy(std::string_view token) noexcept {
  std::string t(token);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "distance" || t == "shortest-distance" || t == "sd") return Strategy::ShortestDistance;
  if (t == "time" || t == "shortest-time" || t == "st") return Strategy::ShortestTime;
  if (t == "cost" || t == "least-cost" || t == "lc" || t == "vpcro") return Strategy::LeastCost;
  return std::nullopt;
}

std::vector<SegmentId> SearchTree::path_to(NodeId dest) const {
  std::vector<SegmentId> path;
  if (!labels.at(dest).reachable) return path;
  for (NodeId at = dest; at != source; at = labels[at].predecessor) path.push_back(labels[at].via);
  std::reverse(path.begin(), path.end());
  return path;
}

SearchTree search(const Network& net, Strategy strategy, const Scenario& scenario, NodeId source) {
  check_node(net, source, "source");
  const auto n = net.num_nodes();

  SearchTree tree;
  tree.strategy = strategy;
  tree.source = source;
  tree.initial_energy = initial_energy(scenario.vehicle);
  tree.labels.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    tree.labels[i].node = i;
    tree.labels[i].weight = kInf;
  }
  tree.settle_order.reserve(n);

  auto& start = tree.labels[source];
  start.reachable = true;
  start.weight = 0.0;
  start.energy = tree.initial_energy;

  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  std::vector<bool> settled(n, false);
  queue.emplace(0.0, source);

  while (!queue.empty()) {
    const auto [weight, u] = queue.top();
    queue.pop();
    if (settled[u] || weight != tree.labels[u].weight) continue;
    settled[u] = true;
    tree.settle_order.push_back(u);

    const auto& from = tree.labels[u];
    for (const SegmentId s : net.out_segments(u)) {
      const auto& seg = net.segment(s);
      const NodeId v = seg.to;
      if (settled[v]) continue;
      const auto step = advance(seg, strategy, scenario, from.energy);
      if (!step) continue;

      auto& to = tree.labels[v];
      const double candidate = from.weight + step->weight;
      const bool better = candidate < to.weight ||
                          (candidate == to.weight && (u < to.predecessor || (u == to.predecessor && s < to.via)));
      if (!better) continue;
      to.reachable = true;
      to.weight = candidate;
      to.energy = step->energy;
      to.predecessor = u;
      to.via = s;
      queue.emplace(candidate, v);
    }
  }
  return tree;
}

double Route::objective() const noexcept {
  switch (strategy) {
    case Strategy::ShortestDistance: return distance;
    case Strategy::ShortestTime: return time;
    case Strategy::LeastCost: return cost;
  }
  return cost;
}

PerTraffic<double> Route::miles_by_traffic() const noexcept {
  PerTraffic<double> out;
  for (const auto& leg : legs) out[leg.traffic] += leg.length;
  return out;
}

PerTraffic<double> Route::hours_by_traffic() const noexcept {
  PerTraffic<double> out;
  for (const auto& leg : legs) out[leg.traffic] += leg.time;
  return out;
}

Route replay(const Network& net, Strategy strategy, const Scenario& scenario, std::span<const SegmentId> segments) {
  Route route;
  route.strategy = strategy;
  route.legs.reserve(segments.size());
  route.nodes.reserve(segments.size() + 1);

  double energy = initial_energy(scenario.vehicle);
  for (const SegmentId s : segments) {
    const auto& seg = net.segment(s);
    if (route.nodes.empty()) {
      route.nodes.push_back(seg.from);
    } else if (route.nodes.back() != seg.from) {
      throw InvalidInput(fmt::format("segment {} does not continue the path at node {}", s, route.nodes.back()));
    }
    route.nodes.push_back(seg.to);

    RouteLeg leg{s, seg.from, seg.to, seg.traffic, seg.length, segment_time(seg.length, seg.traffic, scenario.speeds),
                 {}};
    auto step = route.feasible
                    ? try_segment_cost(scenario.vehicle, scenario.prices, seg.length, seg.traffic, energy)
                    : std::nullopt;
    if (step) {
      leg.step = *step;
    } else {
      route.feasible = false;
      leg.step = SegmentStep{kInf, 0.0, 0.0, 0.0};
    }
    energy = leg.step.energy_after;

    route.distance += leg.length;
    route.time += leg.time;
    route.cost += leg.step.cost;
    route.legs.push_back(leg);
  }
  route.final_energy = energy;
  return route;
}

std::optional<Route> route_from_tree(const Network& net, const SearchTree& tree, const Scenario& scenario,
                                     NodeId dest) {
  check_node(net, dest, "destination");
  if (!tree.reachable(dest)) return std::nullopt;
  const auto segments = tree.path_to(dest);
  auto r = replay(net, tree.strategy, scenario, segments);
  if (segments.empty()) r.nodes = {tree.source};
  return r;
}

std::optional<Route> route(const Network& net, Strategy strategy, const Scenario& scenario, NodeId origin,
                           NodeId dest) {
  check_node(net, origin, "origin");
  check_node(net, dest, "destination");
  if (origin == dest) throw InvalidInput("origin and destination must differ");
  const auto tree = search(net, strategy, scenario, origin);
  return route_from_tree(net, tree, scenario, dest);
}

std::optional<Route> brute_force_route(const Network& net, Strategy strategy, const Scenario& scenario,
                                       NodeId origin, NodeId dest) {
  if (net.num_nodes() > kBruteForceNodeLimit) {
    throw InvalidInput(fmt::format("brute_force_route refuses networks above {} nodes (got {})", kBruteForceNodeLimit,
                                   net.num_nodes()));
  }
  check_node(net, origin, "origin");
  check_node(net, dest, "destination");
  if (origin == dest) throw InvalidInput("origin and destination must differ");

  std::vector<NodeId> nodes{origin};
  std::vector<SegmentId> segs;
  std::vector<bool> on_path(net.num_nodes(), false);
  on_path[origin] = true;

  bool found = false;
  double best_weight = kInf;
  std::vector<NodeId> best_nodes;
  std::vector<SegmentId> best_segs;

  auto prefer = [&](double weight) {
    if (!found || weight < best_weight) return true;
    if (weight > best_weight) return false;
    if (std::lexicographical_compare(nodes.rbegin(), nodes.rend(), best_nodes.rbegin(), best_nodes.rend())) {
      return true;
    }
    if (!std::equal(nodes.begin(), nodes.end(), best_nodes.begin(), best_nodes.end())) return false;
    return std::lexicographical_compare(segs.rbegin(), segs.rend(), best_segs.rbegin(), best_segs.rend());
  };

  std::function<void(NodeId, double, double)> dfs = [&](NodeId at, double weight, double energy) {
    if (at == dest) {
      if (prefer(weight)) {
        found = true;
        best_weight = weight;
        best_nodes = nodes;
        best_segs = segs;
      }
      return;
    }
    for (const SegmentId s : net.out_segments(at)) {
      const auto& seg = net.segment(s);
      if (on_path[seg.to]) continue;
      const auto step = advance(seg, strategy, scenario, energy);
      if (!step) continue;
      on_path[seg.to] = true;
      nodes.push_back(seg.to);
      segs.push_back(s);
      dfs(seg.to, weight + step->weight, step->energy);
      segs.pop_back();
      nodes.pop_back();
      on_path[seg.to] = false;
    }
  };
  dfs(origin, 0.0, initial_energy(scenario.vehicle));

  if (!found) return std::nullopt;
  return replay(net, strategy, scenario, best_segs);
}

double eq15_energy(const CostLabel& label, const Scenario& scenario) {
  return initial_energy(scenario.vehicle) - label.weight / scenario.prices.electricity_per_kwh;
}

std::shared_ptr<const SearchTree> RouteCache::tree(NodeId source, Strategy strategy) {
  const auto key = std::pair{source, strategy};
  {
    std::lock_guard lock(mutex_);
    if (auto it = trees_.find(key); it != trees_.end()) return it->second;
  }
  auto built = std::make_shared<const SearchTree>(search(net_, strategy, scenario_, source));
  std::lock_guard lock(mutex_);
  return trees_.try_emplace(key, std::move(built)).first->second;
}

std::optional<Route> RouteCache::route(Strategy strategy, NodeId origin, NodeId dest) {
  check_node(net_, origin, "origin");
  check_node(net_, dest, "destination");
  if (origin == dest) throw InvalidInput("origin and destination must differ");
  return route_from_tree(net_, *tree(origin, strategy), scenario_, dest);
}

std::size_t RouteCache::size() const {
  std::lock_guard lock(mutex_);
  return trees_.size();
}

}  // namespace vpcro
