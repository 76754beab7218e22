#include "vpcro/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "vpcro/error.hpp"

namespace vpcro {

std::string_view to_string(PairMode mode) noexcept { return mode == PairMode::Ordered ? "ordered" : "unordered"; }

std::optional<PairMode> parse_pair_mode(std::string_view token) noexcept {
  if (token == "ordered") return PairMode::Ordered;
  if (token == "unordered") return PairMode::Unordered;
  return std::nullopt;
}

std::uint64_t path_hash(std::span<const NodeId> nodes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const NodeId id : nodes) {
    for (int byte = 0; byte < 4; ++byte) {
      h ^= (id >> (8 * byte)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

RouteSummary summarize(const Route& route) {
  return {route.distance, route.time, route.cost, path_hash(route.nodes), route.miles_by_traffic(),
          route.hours_by_traffic()};
}

namespace {

std::vector<PairRecord> sweep_source(const Network& net, const Scenario& scenario, PairMode mode, NodeId origin) {
  std::array<SearchTree, 3> trees;
  for (auto s : kStrategies) trees[static_cast<std::size_t>(s)] = search(net, s, scenario, origin);

  std::vector<PairRecord> out;
  const auto n = static_cast<NodeId>(net.num_nodes());
  const NodeId first = mode == PairMode::Unordered ? origin + 1 : 0;
  out.reserve(n - first);
  for (NodeId dest = first; dest < n; ++dest) {
    if (dest == origin) continue;
    PairRecord rec;
    rec.origin = origin;
    rec.dest = dest;
    const bool reachable = std::all_of(trees.begin(), trees.end(), [&](const auto& t) { return t.reachable(dest); });
    if (!reachable) {
      rec.status = PairStatus::Unreachable;
      out.push_back(rec);
      continue;
    }
    for (auto s : kStrategies) {
      const auto route = route_from_tree(net, trees[static_cast<std::size_t>(s)], scenario, dest);
      rec[s] = summarize(*route);
      if (!route->feasible) rec.status = PairStatus::Infeasible;
    }
    out.push_back(rec);
  }
  return out;
}

}  // namespace

Sweep all_pairs_sweep(const Network& net, const Scenario& scenario, PairMode mode, unsigned jobs) {
  scenario.vehicle.validate();
  scenario.prices.validate();
  scenario.speeds.validate();

  const auto n = net.num_nodes();
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(n, 1)));

  std::vector<std::vector<PairRecord>> per_source(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      for (std::size_t o = next++; o < n; o = next++) {
        per_source[o] = sweep_source(net, scenario, mode, static_cast<NodeId>(o));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };

  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  Sweep sweep;
  sweep.vehicle = scenario.vehicle.name;
  sweep.mode = mode;
  std::size_t total = 0;
  for (const auto& part : per_source) total += part.size();
  sweep.records.reserve(total);
  for (auto& part : per_source) {
    sweep.records.insert(sweep.records.end(), part.begin(), part.end());
  }
  return sweep;
}

CompositionReport traffic_composition(const Sweep& sweep, Strategy baseline, bool changed_only) {
  CompositionReport report;
  report.changed_only = changed_only;
  double ratio_sum = 0.0;
  double delta_sum = 0.0;
  for (const auto& rec : sweep.records) {
    if (rec.status != PairStatus::Ok) continue;
    const auto& least = rec[Strategy::LeastCost];
    const auto& base = rec[baseline];
    if (changed_only && least.path_hash == base.path_hash) continue;

    ++report.pairs;
    for (auto s : kStrategies) {
      auto& agg = report.by_strategy[static_cast<std::size_t>(s)];
      const auto& r = rec[s];
      for (auto t : kTrafficClasses) {
        agg.mean_miles[t] += r.miles[t];
        agg.mean_hours[t] += r.hours[t];
      }
      agg.mean_distance += r.distance;
      agg.mean_time += r.time;
    }
    const double delta = least.time - base.time;
    const double ratio = delta / base.time;
    delta_sum += delta;
    ratio_sum += ratio;
    report.max_time_delta_ratio = report.pairs == 1 ? ratio : std::max(report.max_time_delta_ratio, ratio);
  }
  if (report.pairs == 0) return report;

  const auto count = static_cast<double>(report.pairs);
  for (auto& agg : report.by_strategy) {
    for (auto t : kTrafficClasses) {
      agg.mean_miles[t] /= count;
      agg.mean_hours[t] /= count;
    }
    agg.mean_distance /= count;
    agg.mean_time /= count;
  }
  report.mean_time_delta_h = delta_sum / count;
  report.mean_time_delta_ratio = ratio_sum / count;
  return report;
}

SweepReport changed_and_savings(const Sweep& sweep, Strategy baseline, double bin_width,
                                bool composition_changed_only) {
  if (!(bin_width > 0.0 && bin_width <= 1.0)) throw InvalidInput("histogram bin width must lie in (0, 1]");

  SweepReport report;
  report.vehicle = sweep.vehicle;
  report.baseline = baseline;
  report.bin_width = bin_width;
  const auto bins = static_cast<std::size_t>(std::ceil(1.0 / bin_width - 1e-9));
  report.histogram.assign(bins, 0);

  double saving_sum = 0.0;
  for (const auto& rec : sweep.records) {
    if (rec.status != PairStatus::Ok) {
      ++report.unreachable;
      continue;
    }
    ++report.evaluated;
    const auto& least = rec[Strategy::LeastCost];
    const auto& base = rec[baseline];
    double saving = 0.0;
    if (least.path_hash != base.path_hash) {
      ++report.changed;
      saving = (base.cost - least.cost) / base.cost;
      saving_sum += saving;
      report.max_saving = std::max(report.max_saving, saving);
    }
    const auto bin = std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, saving) / bin_width));
    ++report.histogram[bin];
  }
  if (report.evaluated == 0) {
    throw InvalidInput(fmt::format("no evaluable O-D pairs in the {} sweep", sweep.vehicle));
  }
  report.changed_fraction = static_cast<double>(report.changed) / static_cast<double>(report.evaluated);
  if (report.changed > 0) report.mean_saving_on_changed = saving_sum / static_cast<double>(report.changed);
  report.composition = traffic_composition(sweep, baseline, composition_changed_only);
  return report;
}

double route_divergence(const Sweep& a, const Sweep& b) {
  if (a.records.size() != b.records.size()) throw InvalidInput("route_divergence: sweeps cover different pairs");
  std::size_t both = 0;
  std::size_t differ = 0;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& ra = a.records[i];
    const auto& rb = b.records[i];
    if (ra.origin != rb.origin || ra.dest != rb.dest) {
      throw InvalidInput("route_divergence: sweeps cover different pairs");
    }
    if (ra.status != PairStatus::Ok || rb.status != PairStatus::Ok) continue;
    ++both;
    if (ra[Strategy::LeastCost].path_hash != rb[Strategy::LeastCost].path_hash) ++differ;
  }
  return both == 0 ? 0.0 : static_cast<double>(differ) / static_cast<double>(both);
}

SocSweepResult soc_sweep(const Network& net, const VehicleSpec& phev, std::span<const double> levels,
                         const EnergyPrices& prices, const CycleSpeeds& speeds, PairMode mode, unsigned jobs) {
  if (phev.kind != PowertrainKind::PHEV) {
    throw InvalidInput(fmt::format("SOC sweep needs a PHEV, '{}' is {}", phev.name, to_string(phev.kind)));
  }
  for (const double level : levels) {
    if (!(level >= phev.soc_target && level <= 1.0)) {
      throw InvalidInput(
          fmt::format("SOC level {} is outside [{}, 1] for '{}'", level, phev.soc_target, phev.name));
    }
  }

  SocSweepResult result;
  result.vehicle = phev.name;
  result.levels.assign(levels.begin(), levels.end());
  for (const double level : levels) {
    const Scenario scenario{phev.with_soc(level), prices, speeds};
    auto sweep = all_pairs_sweep(net, scenario, mode, jobs);
    sweep.vehicle = fmt::format("{}@soc{:g}", phev.name, level);
    result.reports.push_back(
        {changed_and_savings(sweep, Strategy::ShortestDistance), changed_and_savings(sweep, Strategy::ShortestTime)});
    result.sweeps.push_back(std::move(sweep));
  }

  const auto k = levels.size();
  result.divergence.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      result.divergence[i][j] = result.divergence[j][i] = route_divergence(result.sweeps[i], result.sweeps[j]);
    }
  }
  return result;
}

}  // namespace vpcro
