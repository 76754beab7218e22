#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "vpcro/error.hpp"
#include "vpcro/experiments.hpp"
#include "vpcro/network_io.hpp"
#include "vpcro/report.hpp"
#include "vpcro/routing.hpp"
#include "vpcro/vehicle_io.hpp"

namespace vpcro::cli {

namespace {

struct RunConfig {
  std::string network;
  std::vector<std::string> vehicles;
  bool fleet = false;
  std::string prices;
  std::vector<double> speeds;
  std::string strategy = "cost";
  std::optional<double> soc;
  std::string out = "reports";
  std::string pairs = "unordered";
  unsigned jobs = 0;
};

struct RouteArgs {
  std::int64_t origin = 0;
  std::int64_t dest = 0;
};

struct SweepArgs {
  std::vector<double> soc_levels;
  double bin_width = kDefaultBinWidth;
  bool changed_only = false;
};

struct GenArgs {
  std::size_t rows = 19;
  std::size_t cols = 19;
  double spacing = 1.0;
  std::vector<double> weights{0.3, 0.5, 0.2};
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "text";
};

/// Failure the user can act on; reported as "error: ..." with exit code 1.
struct CommandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string builtin_names() {
  std::vector<std::string> names;
  for (const auto& spec : builtin_fleet()) names.push_back(spec.name);
  return fmt::format("{}", fmt::join(names, ", "));
}

std::vector<VehicleSpec> resolve_vehicles(const RunConfig& cfg) {
  std::vector<VehicleSpec> out;
  if (cfg.fleet) out = builtin_fleet();
  for (const auto& name : cfg.vehicles) {
    if (auto spec = find_builtin(name)) {
      out.push_back(*spec);
    } else if (std::filesystem::is_regular_file(name)) {
      auto loaded = load_vehicles(name);
      out.insert(out.end(), loaded.begin(), loaded.end());
    } else {
      throw CommandError(fmt::format("unknown vehicle '{}' (built-ins: {}; or pass a vehicle config file)", name,
                                     builtin_names()));
    }
  }
  if (out.empty()) out.push_back(*find_builtin("CV"));
  if (cfg.soc) {
    for (auto& spec : out) {
      if (!is_plug_in(spec.kind)) {
        throw CommandError(fmt::format("--soc applies to plug-in vehicles only; '{}' is {}", spec.name,
                                       to_string(spec.kind)));
      }
      spec = spec.with_soc(*cfg.soc);
    }
  }
  return out;
}

EnergyPrices resolve_prices(const RunConfig& cfg) {
  if (cfg.prices.empty()) return EnergyPrices{};
  return load_prices(cfg.prices);
}

CycleSpeeds resolve_speeds(const RunConfig& cfg) {
  CycleSpeeds speeds;
  if (cfg.speeds.empty()) return speeds;
  if (cfg.speeds.size() != 3) throw CommandError("--speeds takes three values: low,avg,heavy (mph)");
  for (auto t : kTrafficClasses) speeds.mph[t] = cfg.speeds[index_of(t)];
  speeds.validate();
  return speeds;
}

NodeId resolve_node(const Network& net, std::int64_t external, std::string_view what) {
  if (auto id = net.find(external)) return *id;
  throw CommandError(fmt::format("{} node {} does not exist in the network", what, external));
}

std::string g6(double x) { return fmt::format("{:.6g}", x); }

int cmd_route(const RunConfig& cfg, const RouteArgs& args, std::ostream& out) {
  const auto net = load_network(cfg.network);
  auto vehicles = resolve_vehicles(cfg);
  if (vehicles.size() != 1) throw CommandError("route takes exactly one vehicle");
  const auto strategy = parse_strategy(cfg.strategy);
  if (!strategy) throw CommandError(fmt::format("unknown strategy '{}'", cfg.strategy));
  const Scenario scenario{vehicles.front(), resolve_prices(cfg), resolve_speeds(cfg)};

  const auto origin = resolve_node(net, args.origin, "origin");
  const auto dest = resolve_node(net, args.dest, "destination");
  if (origin == dest) throw CommandError("origin and destination must differ");

  const auto found = route(net, *strategy, scenario, origin, dest);
  if (!found) {
    fmt::print(out, "no route from {} to {} for {}\n", args.origin, args.dest, scenario.vehicle.name);
    return kNoRoute;
  }

  const auto ext = [&](NodeId id) { return net.node(id).external_id; };
  std::vector<std::int64_t> path;
  for (auto id : found->nodes) path.push_back(ext(id));
  fmt::print(out, "{} {} route {} -> {}\n", scenario.vehicle.name, to_string(*strategy), args.origin, args.dest);
  fmt::print(out, "nodes: {}\n", fmt::join(path, " "));
  fmt::print(out, "{:>4} {:>8} {:>8} {:>7} {:>10} {:>10} {:>10} {:>10} {:>10}\n", "leg", "from", "to", "traffic",
             "miles", "hours", "cost_usd", "elec_mi", "kwh_left");
  for (std::size_t i = 0; i < found->legs.size(); ++i) {
    const auto& leg = found->legs[i];
    fmt::print(out, "{:>4} {:>8} {:>8} {:>7} {:>10} {:>10} {:>10} {:>10} {:>10}\n", i + 1, ext(leg.from), ext(leg.to),
               to_token(leg.traffic), g6(leg.length), g6(leg.time), g6(leg.step.cost), g6(leg.step.electric_miles),
               g6(leg.step.energy_after));
  }
  fmt::print(out, "total: distance {} mi, time {} h, cost ${}, energy left {} kWh\n", g6(found->distance),
             g6(found->time), g6(found->cost), g6(found->final_energy));
  if (!found->feasible) fmt::print(out, "warning: {} runs out of energy on this route\n", scenario.vehicle.name);
  return kSuccess;
}

void print_report_line(std::ostream& out, const SweepReport& r) {
  fmt::print(out,
             "{} vs {}: changed {:.2f}% of {} pairs, mean saving on changed {:.2f}%, max saving {:.2f}%, "
             "unreachable {}\n",
             r.vehicle, to_string(r.baseline), 100.0 * r.changed_fraction, r.evaluated,
             100.0 * r.mean_saving_on_changed, 100.0 * r.max_saving, r.unreachable);
}

int cmd_sweep(const RunConfig& cfg, const SweepArgs& args, std::ostream& out) {
  const auto net = load_network(cfg.network);
  const auto mode = parse_pair_mode(cfg.pairs);
  if (!mode) throw CommandError(fmt::format("unknown pair mode '{}'", cfg.pairs));
  const auto prices = resolve_prices(cfg);
  const auto speeds = resolve_speeds(cfg);

  if (!args.soc_levels.empty()) {
    RunConfig base = cfg;
    base.soc.reset();
    const auto vehicles = resolve_vehicles(base);
    if (vehicles.size() != 1) throw CommandError("--soc-sweep takes exactly one PHEV");
    const auto result = soc_sweep(net, vehicles.front(), args.soc_levels, prices, speeds, *mode, cfg.jobs);
    for (const auto& level : result.reports) {
      for (const auto& r : level) print_report_line(out, r);
    }
    fmt::print(out, "least-cost route divergence for {} (share of pairs with a different path):\n", result.vehicle);
    fmt::print(out, "{:>8}", "soc");
    for (double level : result.levels) fmt::print(out, " {:>8}", g6(level));
    fmt::print(out, "\n");
    for (std::size_t i = 0; i < result.levels.size(); ++i) {
      fmt::print(out, "{:>8}", g6(result.levels[i]));
      for (double d : result.divergence[i]) fmt::print(out, " {:>8.4f}", d);
      fmt::print(out, "\n");
    }
    const auto files = write_soc_report(result, cfg.out, result.vehicle);
    fmt::print(out, "wrote {}\n", files.summary.string());
    return kSuccess;
  }

  for (const auto& vehicle : resolve_vehicles(cfg)) {
    const Scenario scenario{vehicle, prices, speeds};
    const auto sweep = all_pairs_sweep(net, scenario, *mode, cfg.jobs);
    std::vector<SweepReport> reports;
    for (auto baseline : {Strategy::ShortestDistance, Strategy::ShortestTime}) {
      reports.push_back(changed_and_savings(sweep, baseline, args.bin_width, args.changed_only));
      print_report_line(out, reports.back());
    }
    const auto files = write_report(sweep, reports, cfg.out, vehicle.name);
    fmt::print(out, "wrote {} and {}\n", files.table.string(), files.summary.string());
  }
  return kSuccess;
}

int cmd_gen(const GenArgs& args, std::ostream& out) {
  if (args.weights.size() != 3) throw CommandError("--weights takes three values: low,avg,heavy");
  const auto format = args.format == "json" ? NetworkFormat::Json : NetworkFormat::Text;
  const auto net = generate_grid(args.rows, args.cols, args.spacing,
                                 {args.weights[0], args.weights[1], args.weights[2]}, args.seed);
  save_network(net, args.out, format);
  fmt::print(out, "wrote {} ({} nodes, {} directed segments)\n", args.out, net.num_nodes(), net.num_segments());
  return kSuccess;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open network file '{}'", path));
  const auto draft = parse_network(in, path);
  const auto problems = validate(draft);
  if (!problems.empty()) {
    for (const auto& p : problems) fmt::print(out, "{}: {}\n", path, p);
    fmt::print(out, "{} violation(s)\n", problems.size());
    return kError;
  }
  const auto net = build_network(draft);
  fmt::print(out, "{}: ok ({} nodes, {} directed segments, coord_scale {})\n", path, net.num_nodes(),
             net.num_segments(), net.coord_scale());
  return kSuccess;
}

void add_network(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--network", cfg.network, "Network file (text or JSON format)")->required()->check(CLI::ExistingFile);
}

void add_vehicle_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--vehicle", cfg.vehicles, "Built-in vehicle name or vehicle config file (default CV)");
  cmd->add_option("--prices", cfg.prices, "Energy prices file (default 0.114 $/kWh, 2.75 $/gal)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--speeds", cfg.speeds, "Average speeds low,avg,heavy in mph (default 48.28,19.58,7.05)")
      ->delimiter(',')
      ->expected(3);
  cmd->add_option("--soc", cfg.soc, "Initial state of charge for plug-in vehicles")->check(CLI::Range(0.0, 1.0));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Powertrain-aware least-cost routing and routing-strategy experiments", "vpcro"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 success, 1 error, 2 no route, 64 usage.");

  RunConfig cfg;
  RouteArgs route_args;
  SweepArgs sweep_args;
  GenArgs gen_args;
  std::string validate_path;

  auto* route_cmd = app.add_subcommand("route", "Find one route and print its per-segment breakdown");
  add_network(route_cmd, cfg);
  add_vehicle_options(route_cmd, cfg);
  route_cmd->add_option("--strategy", cfg.strategy, "Objective: distance, time or cost (default cost)")
      ->check(CLI::IsMember({"distance", "time", "cost"}));
  route_cmd->add_option("--origin", route_args.origin, "Origin node id")->required();
  route_cmd->add_option("--dest", route_args.dest, "Destination node id")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "All-pairs comparison of least-cost against the two baselines");
  add_network(sweep_cmd, cfg);
  add_vehicle_options(sweep_cmd, cfg);
  sweep_cmd->add_flag("--fleet", cfg.fleet, "Sweep all six built-in vehicles");
  sweep_cmd->add_option("--out", cfg.out, "Output directory for reports (default reports)");
  sweep_cmd->add_option("--pairs", cfg.pairs, "O-D pair mode: ordered or unordered (default unordered)")
      ->check(CLI::IsMember({"ordered", "unordered"}));
  sweep_cmd->add_option("--jobs", cfg.jobs, "Worker threads, 0 = all cores (default 0)");
  sweep_cmd->add_option("--soc-sweep", sweep_args.soc_levels, "Comma-separated SOC levels for a PHEV sweep")
      ->delimiter(',');
  sweep_cmd->add_option("--bin-width", sweep_args.bin_width, "Saving histogram bin width (default 0.05)")
      ->check(CLI::Range(1e-6, 1.0));
  sweep_cmd->add_flag("--changed-only", sweep_args.changed_only, "Average traffic composition over changed routes only");

  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic grid network");
  gen_cmd->add_option("--rows", gen_args.rows, "Grid rows (default 19)");
  gen_cmd->add_option("--cols", gen_args.cols, "Grid columns (default 19)");
  gen_cmd->add_option("--spacing", gen_args.spacing, "Road length in miles (default 1)");
  gen_cmd->add_option("--weights", gen_args.weights, "Traffic mix low,avg,heavy (default 0.3,0.5,0.2)")
      ->delimiter(',')
      ->expected(3);
  gen_cmd->add_option("--seed", gen_args.seed, "Random seed (default 1)");
  gen_cmd->add_option("--out", gen_args.out, "Output network file")->required();
  gen_cmd->add_option("--format", gen_args.format, "text or json (default text)")
      ->check(CLI::IsMember({"text", "json"}));

  auto* validate_cmd = app.add_subcommand("validate", "Check a network file and list every violation");
  validate_cmd->add_option("--network,network", validate_path, "Network file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*route_cmd) return cmd_route(cfg, route_args, out);
    if (*sweep_cmd) return cmd_sweep(cfg, sweep_args, out);
    if (*gen_cmd) return cmd_gen(gen_args, out);
    if (*validate_cmd) return cmd_validate(validate_path, out);
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kError;
  }
  return kUsage;
}

}  // namespace vpcro::cli
