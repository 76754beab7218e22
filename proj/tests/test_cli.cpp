#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = vpcro::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("vpcro_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

constexpr const char* kDiamond =
    "node 0 0 0\n"
    "node 1 0.2 0\n"
    "node 2 0.1 0.1\n"
    "edge 0 1 heavy 10\n"
    "edge 0 2 low 10\n"
    "edge 2 1 low 10\n";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("route prints the least-cost path") {
    const auto dir = scratch_dir("route");
    const auto net = write_file(dir / "diamond.net", kDiamond).string();
    auto r = run({"route", "--network", net, "--vehicle", "CV", "--origin", "0", "--dest", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("nodes: 0 2 1") != std::string::npos);
    CHECK(r.out.find("cost $1.04167") != std::string::npos);

    r = run({"route", "--network", net, "--vehicle", "hev", "--origin", "0", "--dest", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("nodes: 0 1\n") != std::string::npos);

    r = run({"route", "--network", net, "--strategy", "distance", "--origin", "0", "--dest", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("shortest-distance") != std::string::npos);
  }

  TEST_CASE("route exit codes") {
    const auto dir = scratch_dir("codes");
    const auto net = write_file(dir / "diamond.net", kDiamond).string();
    CHECK(run({"route", "--network", net, "--origin", "1", "--dest", "0"}).code == 2);
    CHECK(run({"route", "--network", net, "--origin", "0", "--dest", "9"}).code == 1);
    CHECK(run({"route", "--network", net, "--origin", "0", "--dest", "0"}).code == 1);
    const auto unknown = run({"route", "--network", net, "--vehicle", "Tesla", "--origin", "0", "--dest", "1"});
    CHECK(unknown.code == 1);
    CHECK(unknown.err.find("PHEV20") != std::string::npos);
    CHECK(run({"route", "--network", net, "--vehicle", "CV", "--soc", "0.5", "--origin", "0", "--dest", "1"}).code == 1);
    CHECK(run({"route", "--network", net, "--origin", "0"}).code == 64);
    CHECK(run({"route", "--network", (dir / "missing.net").string(), "--origin", "0", "--dest", "1"}).code == 64);
    CHECK(run({"route", "--network", net, "--strategy", "scenic", "--origin", "0", "--dest", "1"}).code == 64);
    CHECK(run({}).code == 64);
    CHECK(run({"fly"}).code == 64);
  }

  TEST_CASE("vehicle and price files") {
    const auto dir = scratch_dir("files");
    const auto net = write_file(dir / "diamond.net", kDiamond).string();
    const auto prices = write_file(dir / "prices.json", R"({"price_gas_per_gal": 5.5})").string();
    auto r = run({"route", "--network", net, "--prices", prices, "--origin", "0", "--dest", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("cost $2.08333") != std::string::npos);

    const auto car = write_file(dir / "car.json",
                                R"({"name": "Mine", "kind": "CV", "cs_mi_per_gal": {"low": 10, "avg": 10, "heavy": 10}})")
                         .string();
    r = run({"route", "--network", net, "--vehicle", car, "--origin", "0", "--dest", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("Mine least-cost") != std::string::npos);
    CHECK(r.out.find("nodes: 0 1\n") != std::string::npos);

    const auto broken = write_file(dir / "broken.json", R"({"name": "X", "kind": "BEV"})").string();
    CHECK(run({"route", "--network", net, "--vehicle", broken, "--origin", "0", "--dest", "1"}).code == 1);
  }

  TEST_CASE("gen then validate") {
    const auto dir = scratch_dir("gen");
    const auto path = (dir / "grid.net").string();
    auto r = run({"gen", "--rows", "3", "--cols", "4", "--seed", "7", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("12 nodes, 34 directed segments") != std::string::npos);
    const auto first = slurp(path);
    run({"gen", "--rows", "3", "--cols", "4", "--seed", "7", "--out", path});
    CHECK(slurp(path) == first);

    r = run({"validate", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("ok (12 nodes") != std::string::npos);

    const auto json = (dir / "grid.json").string();
    CHECK(run({"gen", "--rows", "3", "--cols", "3", "--format", "json", "--out", json}).code == 0);
    CHECK(run({"validate", "--network", json}).code == 0);

    CHECK(run({"gen", "--rows", "1", "--out", path}).code == 1);
    CHECK(run({"gen", "--weights", "1,2", "--out", path}).code == 64);
    CHECK(run({"gen", "--format", "xml", "--out", path}).code == 64);
  }

  TEST_CASE("validate lists every violation") {
    const auto dir = scratch_dir("validate");
    const auto bad = write_file(dir / "bad.net", "node 0 0 0\nnode 1 1 1\nedge 0 5 low 1\nedge 1 0 avg -3\n").string();
    auto r = run({"validate", bad});
    CHECK(r.code == 1);
    CHECK(r.out.find("2 violation(s)") != std::string::npos);
    CHECK(r.out.find("record 3") != std::string::npos);

    const auto garbled = write_file(dir / "garbled.net", "node 0 0 0\nnode x\n").string();
    r = run({"validate", garbled});
    CHECK(r.code == 1);
    CHECK(r.err.find(":2") != std::string::npos);
  }

  TEST_CASE("sweep writes reports") {
    const auto dir = scratch_dir("sweep");
    const auto net = (dir / "grid.net").string();
    run({"gen", "--rows", "4", "--cols", "4", "--seed", "3", "--out", net});
    const auto out = (dir / "reports").string();
    auto r = run({"sweep", "--network", net, "--vehicle", "PHEV20", "--out", out, "--jobs", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PHEV20 vs shortest-distance: changed") != std::string::npos);
    CHECK(fs::exists(dir / "reports" / "PHEV20_pairs.csv"));
    CHECK(fs::exists(dir / "reports" / "PHEV20_summary.json"));
    const auto table = slurp(dir / "reports" / "PHEV20_pairs.csv");

    r = run({"sweep", "--network", net, "--vehicle", "PHEV20", "--out", out, "--jobs", "1"});
    CHECK(slurp(dir / "reports" / "PHEV20_pairs.csv") == table);

    r = run({"sweep", "--network", net, "--fleet", "--out", out});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "reports" / "BEV100_summary.json"));

    r = run({"sweep", "--network", net, "--vehicle", "PHEV40", "--soc-sweep", "0.9,0.6,0.4", "--out", out});
    CHECK(r.code == 0);
    CHECK(r.out.find("route divergence for PHEV40") != std::string::npos);
    CHECK(fs::exists(dir / "reports" / "PHEV40_soc_summary.json"));

    CHECK(run({"sweep", "--network", net, "--vehicle", "BEV100", "--soc-sweep", "0.9", "--out", out}).code == 1);
    CHECK(run({"sweep", "--network", net, "--pairs", "some", "--out", out}).code == 64);
  }

  TEST_CASE("help text matches the recorded snapshots") {
    for (const char* cmd : {"", "route", "sweep", "gen", "validate"}) {
      std::vector<std::string> args;
      if (*cmd) args.emplace_back(cmd);
      args.emplace_back("--help");
      const auto r = run(args);
      CHECK(r.code == 0);
      const auto name = std::string(*cmd ? cmd : "main") + ".txt";
      const auto expected = slurp(fs::path(VPCRO_SNAPSHOT_DIR) / name);
      INFO("snapshot ", name);
      CHECK(r.out == expected);
    }
  }
}
