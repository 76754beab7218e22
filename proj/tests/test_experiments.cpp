#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "support.hpp"
#include "vpcro/error.hpp"
#include "vpcro/experiments.hpp"
#include "vpcro/report.hpp"

using namespace vpcro;
using vpcro::testing::close_rel;
using vpcro::testing::diamond;
using vpcro::testing::fleet;
using vpcro::testing::scenario_for;

namespace {

std::string table_text(const Sweep& sweep) {
  std::ostringstream out;
  write_pair_table(sweep, out);
  return out.str();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("vpcro_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("pair counts") {
    const auto net = generate_grid(4, 4, 1.0, {0.3, 0.5, 0.2}, 1);
    const auto sc = scenario_for(fleet("CV"));
    const auto unordered = all_pairs_sweep(net, sc, PairMode::Unordered);
    CHECK(unordered.records.size() == 16 * 15 / 2);
    const auto ordered = all_pairs_sweep(net, sc, PairMode::Ordered);
    CHECK(ordered.records.size() == 16 * 15);
    for (std::size_t i = 1; i < ordered.records.size(); ++i) {
      const auto& a = ordered.records[i - 1];
      const auto& b = ordered.records[i];
      CHECK(std::pair{a.origin, a.dest} < std::pair{b.origin, b.dest});
    }
    for (const auto& r : unordered.records) CHECK(r.origin < r.dest);
  }

  TEST_CASE("isolated node pairs are unreachable") {
    const Network net(vpcro::testing::make_nodes(4), {{0, 1, TrafficClass::Low, 2.0},
                                                      {1, 2, TrafficClass::Low, 2.0},
                                                      {2, 0, TrafficClass::Heavy, 2.0}});
    const auto sweep = all_pairs_sweep(net, scenario_for(fleet("HEV")), PairMode::Ordered);
    CHECK(sweep.records.size() == 12);
    std::size_t unreachable = 0;
    for (const auto& r : sweep.records) {
      const bool touches_isolated = r.origin == 3 || r.dest == 3;
      CHECK((r.status == PairStatus::Unreachable) == touches_isolated);
      unreachable += r.status == PairStatus::Unreachable;
    }
    const auto report = changed_and_savings(sweep, Strategy::ShortestDistance);
    CHECK(report.unreachable == unreachable);
    CHECK(report.evaluated == 6);
  }

  TEST_CASE("least cost against itself changes nothing") {
    const auto net = generate_grid(5, 5, 1.0, {0.3, 0.5, 0.2}, 8);
    const auto sweep = all_pairs_sweep(net, scenario_for(fleet("PHEV40")));
    const auto report = changed_and_savings(sweep, Strategy::LeastCost);
    CHECK(report.changed == 0);
    CHECK(report.changed_fraction == 0.0);
    CHECK(report.mean_saving_on_changed == 0.0);
    CHECK(report.histogram[0] == report.evaluated);
  }

  TEST_CASE("diamond saving") {
    const auto sweep = all_pairs_sweep(diamond(), scenario_for(fleet("CV")), PairMode::Ordered);
    const auto report = changed_and_savings(sweep, Strategy::ShortestDistance);
    // Pairs reachable in the diamond: 0->1, 0->2, 2->1.
    CHECK(report.evaluated == 3);
    CHECK(report.changed == 1);
    CHECK(close_rel(report.max_saving, 0.3787878787878788, 1e-9));
    CHECK(close_rel(report.mean_saving_on_changed, 0.3787878787878788, 1e-9));
    CHECK(report.histogram.size() == 20);
    CHECK(report.histogram[7] == 1);
    CHECK(report.histogram[0] == 2);

    const auto comp = traffic_composition(sweep, Strategy::ShortestDistance, true);
    CHECK(comp.pairs == 1);
    CHECK(comp[Strategy::LeastCost].mean_miles[TrafficClass::Low] == 20.0);
    CHECK(comp[Strategy::ShortestDistance].mean_miles[TrafficClass::Heavy] == 10.0);
    CHECK(close_rel(comp.mean_time_delta_h, 20.0 / 48.28 - 10.0 / 7.05));
    CHECK(comp.mean_time_delta_ratio < 0.0);

    const auto all = traffic_composition(sweep, Strategy::ShortestDistance, false);
    CHECK(all.pairs == 3);
    CHECK(close_rel(all[Strategy::LeastCost].mean_distance, 40.0 / 3.0));
  }

  TEST_CASE("bin width checks") {
    const auto sweep = all_pairs_sweep(diamond(), scenario_for(fleet("CV")));
    CHECK_THROWS_AS(changed_and_savings(sweep, Strategy::ShortestDistance, 0.0), InvalidInput);
    CHECK_THROWS_AS(changed_and_savings(sweep, Strategy::ShortestDistance, 1.5), InvalidInput);
    CHECK(changed_and_savings(sweep, Strategy::ShortestDistance, 0.1).histogram.size() == 10);
    const Network lonely(vpcro::testing::make_nodes(3), {});
    CHECK_THROWS_AS(changed_and_savings(all_pairs_sweep(lonely, scenario_for(fleet("CV"))), Strategy::ShortestDistance),
                    InvalidInput);
  }

  TEST_CASE("savings are never negative against either baseline") {
    const auto net = generate_grid(6, 6, 1.0, {0.3, 0.5, 0.2}, 77);
    for (const auto& spec : builtin_fleet()) {
      const auto sweep = all_pairs_sweep(net, scenario_for(spec));
      for (const auto& r : sweep.records) {
        if (r.status != PairStatus::Ok) continue;
        CHECK(r[Strategy::LeastCost].cost <= r[Strategy::ShortestDistance].cost * (1 + 1e-12));
        CHECK(r[Strategy::LeastCost].cost <= r[Strategy::ShortestTime].cost * (1 + 1e-12));
        CHECK(r[Strategy::ShortestDistance].distance <= r[Strategy::LeastCost].distance * (1 + 1e-12));
        CHECK(r[Strategy::ShortestTime].time <= r[Strategy::LeastCost].time * (1 + 1e-12));
      }
    }
  }

  TEST_CASE("results do not depend on the thread count") {
    const auto net = generate_grid(7, 7, 1.0, {0.3, 0.5, 0.2}, 4);
    const auto sc = scenario_for(fleet("PHEV20"));
    const auto one = table_text(all_pairs_sweep(net, sc, PairMode::Unordered, 1));
    CHECK(one == table_text(all_pairs_sweep(net, sc, PairMode::Unordered, 3)));
    CHECK(one == table_text(all_pairs_sweep(net, sc, PairMode::Unordered, 0)));
  }

  TEST_CASE("path hash") {
    const NodeId a[] = {0, 1, 2};
    const NodeId b[] = {0, 2, 1};
    CHECK(path_hash(a) != path_hash(b));
    CHECK(path_hash(std::span<const NodeId>{}) == 0xcbf29ce484222325ULL);
    const NodeId one[] = {1};
    // FNV-1a 64 over bytes 01 00 00 00
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char byte : {1, 0, 0, 0}) h = (h ^ byte) * 0x100000001b3ULL;
    CHECK(path_hash(one) == h);
  }

  TEST_CASE("soc sweep on the divergence diamond") {
    const auto net = diamond(10.0, 6.6);
    const double levels[] = {0.9, 0.4};
    const auto result = soc_sweep(net, fleet("PHEV20"), levels, EnergyPrices{}, CycleSpeeds{}, PairMode::Ordered);
    REQUIRE(result.sweeps.size() == 2);
    CHECK(result.sweeps[0].vehicle == "PHEV20@soc0.9");
    CHECK(result.divergence[0][1] == doctest::Approx(1.0 / 3.0));
    CHECK(result.divergence[0][0] == 0.0);
    CHECK(result.divergence[1][0] == result.divergence[0][1]);
    CHECK(result.reports.size() == 2);
  }

  TEST_CASE("soc sweep guards") {
    const auto net = diamond();
    const double bad[] = {0.2};
    const double fine[] = {0.5};
    CHECK_THROWS_AS(soc_sweep(net, fleet("PHEV20"), bad, {}, {}), InvalidInput);
    CHECK_THROWS_AS(soc_sweep(net, fleet("BEV100"), fine, {}, {}), InvalidInput);
    CHECK_THROWS_AS(soc_sweep(net, fleet("CV"), fine, {}, {}), InvalidInput);
  }

  TEST_CASE("divergence needs matching sweeps") {
    const auto a = all_pairs_sweep(diamond(), scenario_for(fleet("CV")), PairMode::Ordered);
    const auto b = all_pairs_sweep(diamond(), scenario_for(fleet("CV")), PairMode::Unordered);
    CHECK_THROWS_AS(route_divergence(a, b), InvalidInput);
    CHECK(route_divergence(a, a) == 0.0);
  }

  TEST_CASE("pair table layout") {
    const auto header = pair_table_header();
    REQUIRE(header.size() == 3 + 3 * 10);
    CHECK(header[0] == "origin");
    CHECK(header[3] == "sd_distance_mi");
    CHECK(header[13] == "st_distance_mi");
    CHECK(header.back() == "lc_hours_heavy");

    const auto sweep = all_pairs_sweep(diamond(), scenario_for(fleet("CV")), PairMode::Ordered);
    const auto text = table_text(sweep);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("origin,dest,vehicle,sd_distance_mi", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("0,1,CV,10,", 0) == 0);
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows + 1 == sweep.records.size());
  }

  TEST_CASE("pair table round trip") {
    const auto net = generate_grid(5, 5, 1.0, {0.3, 0.5, 0.2}, 2);
    for (const char* name : {"CV", "PHEV20", "BEV100"}) {
      const auto sweep = all_pairs_sweep(net, scenario_for(fleet(name)));
      const auto text = table_text(sweep);
      std::istringstream in(text);
      const auto back = read_pair_table(in);
      CHECK(back.vehicle == sweep.vehicle);
      CHECK(back.mode == sweep.mode);
      REQUIRE(back.records.size() == sweep.records.size());
      CHECK(table_text(back) == text);
      for (auto baseline : {Strategy::ShortestDistance, Strategy::ShortestTime}) {
        const auto a = changed_and_savings(sweep, baseline);
        const auto b = changed_and_savings(back, baseline);
        CHECK(a.changed == b.changed);
        // Rounded costs can move a saving that sits on a bin edge into the neighbouring bin.
        INFO(fmt::format("{} vs {}", fmt::join(a.histogram, " "), fmt::join(b.histogram, " ")));
        REQUIRE(a.histogram.size() == b.histogram.size());
        std::size_t moved = 0;
        for (std::size_t i = 0; i < a.histogram.size(); ++i) {
          moved += a.histogram[i] > b.histogram[i] ? a.histogram[i] - b.histogram[i] : b.histogram[i] - a.histogram[i];
        }
        CHECK(moved <= 2);
        CHECK(close_rel(a.mean_saving_on_changed, b.mean_saving_on_changed, 1e-5));
      }
    }
  }

  TEST_CASE("pair table read errors") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_pair_table(empty), ParseError);
    std::istringstream wrong("a,b,c\n");
    CHECK_THROWS_AS(read_pair_table(wrong), ParseError);
    const auto text = table_text(all_pairs_sweep(diamond(), scenario_for(fleet("CV"))));
    std::istringstream truncated(text.substr(0, text.size() - 20));
    CHECK_THROWS_AS(read_pair_table(truncated), ParseError);
  }

  TEST_CASE("report files are deterministic") {
    const auto net = generate_grid(5, 5, 1.0, {0.3, 0.5, 0.2}, 6);
    const auto sweep = all_pairs_sweep(net, scenario_for(fleet("PHEV60")));
    const std::vector<SweepReport> reports{changed_and_savings(sweep, Strategy::ShortestDistance),
                                           changed_and_savings(sweep, Strategy::ShortestTime)};
    const auto dir = scratch_dir("reports");
    const auto first = write_report(sweep, reports, dir / "a", "PHEV60");
    const auto second = write_report(sweep, reports, dir / "b", "PHEV60");
    CHECK(first.table.filename() == "PHEV60_pairs.csv");
    CHECK(first.summary.filename() == "PHEV60_summary.json");
    CHECK(slurp(first.table) == slurp(second.table));
    CHECK(slurp(first.summary) == slurp(second.summary));
    CHECK(slurp(first.summary).find("\"changed_fraction\"") != std::string::npos);

    const double levels[] = {0.9, 0.6};
    const auto soc = soc_sweep(net, fleet("PHEV20"), levels, {}, {});
    const auto files = write_soc_report(soc, dir / "soc", "PHEV20");
    CHECK(std::filesystem::exists(files.summary));
    CHECK(soc_summary_json(soc).find("divergence") != std::string::npos);

    std::ofstream(dir / "blocker") << "x";
    CHECK_THROWS_AS(write_report(sweep, reports, dir / "blocker", "x"), IoError);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("pair mode tokens") {
    CHECK(parse_pair_mode("ordered") == PairMode::Ordered);
    CHECK(parse_pair_mode(to_string(PairMode::Unordered)) == PairMode::Unordered);
    CHECK_FALSE(parse_pair_mode("random").has_value());
  }
}
