#include "vpcro/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vpcro/error.hpp"

namespace vpcro {

namespace {

using json = nlohmann::json;

constexpr std::array<std::string_view, 3> kPrefix{"sd", "st", "lc"};
constexpr std::size_t kFieldsPerStrategy = 10;

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

json per_traffic_json(const PerTraffic<double>& v) {
  return {{"low", v[TrafficClass::Low]}, {"avg", v[TrafficClass::Average]}, {"heavy", v[TrafficClass::Heavy]}};
}

json composition_json(const CompositionReport& c) {
  json by = json::object();
  for (auto s : kStrategies) {
    const auto& agg = c[s];
    by[std::string(to_string(s))] = {{"mean_miles", per_traffic_json(agg.mean_miles)},
                                     {"mean_hours", per_traffic_json(agg.mean_hours)},
                                     {"mean_distance_mi", agg.mean_distance},
                                     {"mean_time_h", agg.mean_time}};
  }
  return {{"pairs", c.pairs},
          {"changed_only", c.changed_only},
          {"by_strategy", by},
          {"mean_time_delta_h", c.mean_time_delta_h},
          {"mean_time_delta_ratio", c.mean_time_delta_ratio},
          {"max_time_delta_ratio", c.max_time_delta_ratio}};
}

json report_json(const SweepReport& r) {
  return {{"vehicle", r.vehicle},
          {"baseline", std::string(to_string(r.baseline))},
          {"evaluated", r.evaluated},
          {"unreachable", r.unreachable},
          {"changed", r.changed},
          {"changed_fraction", r.changed_fraction},
          {"mean_saving_on_changed", r.mean_saving_on_changed},
          {"max_saving", r.max_saving},
          {"bin_width", r.bin_width},
          {"histogram", r.histogram},
          {"composition", composition_json(r.composition)}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << text;
  out.flush();
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create directory '{}': {}", dir.string(), ec.message()));
}

std::filesystem::path write_table_file(const Sweep& sweep, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  write_pair_table(sweep, out);
  out.flush();
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
  return path;
}

}  // namespace

std::vector<std::string> pair_table_header() {
  std::vector<std::string> header{"origin", "dest", "vehicle"};
  for (auto prefix : kPrefix) {
    for (const char* field : {"distance_mi", "time_h", "cost_usd", "path_hash", "miles_low", "miles_avg",
                              "miles_heavy", "hours_low", "hours_avg", "hours_heavy"}) {
      header.push_back(fmt::format("{}_{}", prefix, field));
    }
  }
  return header;
}

void write_pair_table(const Sweep& sweep, std::ostream& out) {
  const auto header = pair_table_header();
  out << fmt::format("{}\n", fmt::join(header, ","));

  const auto vehicle = csv_field(sweep.vehicle);
  fmt::memory_buffer buf;
  for (const auto& rec : sweep.records) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{},{},{}", rec.origin, rec.dest, vehicle);
    for (auto s : kStrategies) {
      if (rec.status == PairStatus::Unreachable) {
        fmt::format_to(std::back_inserter(buf), ",,,,,,,,,,");
        continue;
      }
      const auto& r = rec[s];
      fmt::format_to(std::back_inserter(buf), ",{:.6g},{:.6g},{:.6g},{:016x}", r.distance, r.time, r.cost,
                     r.path_hash);
      for (auto t : kTrafficClasses) fmt::format_to(std::back_inserter(buf), ",{:.6g}", r.miles[t]);
      for (auto t : kTrafficClasses) fmt::format_to(std::back_inserter(buf), ",{:.6g}", r.hours[t]);
    }
    buf.push_back('\n');
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

Sweep read_pair_table(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (split_csv(line) != pair_table_header()) throw ParseError(source, 1, "unexpected header");

  Sweep sweep;
  const std::size_t width = 3 + 3 * kFieldsPerStrategy;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != width) throw ParseError(source, line_no, fmt::format("expected {} fields, got {}", width, f.size()));

    auto number = [&](const std::string& text, auto& value) {
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(source, line_no, fmt::format("bad numeric field '{}'", text));
      }
    };
    auto hex = [&](const std::string& text, std::uint64_t& value) {
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 16);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(source, line_no, fmt::format("bad path hash '{}'", text));
      }
    };

    PairRecord rec;
    number(f[0], rec.origin);
    number(f[1], rec.dest);
    if (sweep.records.empty()) sweep.vehicle = f[2];
    if (f[3].empty()) {
      rec.status = PairStatus::Unreachable;
    } else {
      for (std::size_t si = 0; si < 3; ++si) {
        const std::size_t base = 3 + si * kFieldsPerStrategy;
        auto& r = rec.routes[si];
        number(f[base + 0], r.distance);
        number(f[base + 1], r.time);
        number(f[base + 2], r.cost);
        hex(f[base + 3], r.path_hash);
        for (std::size_t t = 0; t < 3; ++t) {
          number(f[base + 4 + t], r.miles.values[t]);
          number(f[base + 7 + t], r.hours.values[t]);
        }
        if (!std::isfinite(r.cost)) rec.status = PairStatus::Infeasible;
      }
    }
    sweep.records.push_back(rec);
  }
  sweep.mode = std::all_of(sweep.records.begin(), sweep.records.end(),
                           [](const PairRecord& r) { return r.origin < r.dest; })
                   ? PairMode::Unordered
                   : PairMode::Ordered;
  return sweep;
}

std::string summary_json(const Sweep& sweep, const std::vector<SweepReport>& reports) {
  json doc{{"vehicle", sweep.vehicle}, {"pair_mode", std::string(to_string(sweep.mode))},
           {"pairs", sweep.records.size()}};
  auto& list = doc["reports"] = json::array();
  for (const auto& r : reports) list.push_back(report_json(r));
  return doc.dump(2) + "\n";
}

std::string soc_summary_json(const SocSweepResult& result) {
  json doc{{"vehicle", result.vehicle}, {"levels", result.levels}, {"divergence", result.divergence}};
  auto& per_level = doc["per_level"] = json::array();
  for (std::size_t i = 0; i < result.levels.size(); ++i) {
    per_level.push_back({{"soc_initial", result.levels[i]},
                         {"vs_shortest_distance", report_json(result.reports[i][0])},
                         {"vs_shortest_time", report_json(result.reports[i][1])}});
  }
  return doc.dump(2) + "\n";
}

ReportFiles write_report(const Sweep& sweep, const std::vector<SweepReport>& reports,
                         const std::filesystem::path& dir, const std::string& stem) {
  ensure_dir(dir);
  ReportFiles files{dir / (stem + "_pairs.csv"), dir / (stem + "_summary.json")};
  write_table_file(sweep, files.table);
  write_text(files.summary, summary_json(sweep, reports));
  return files;
}

ReportFiles write_soc_report(const SocSweepResult& result, const std::filesystem::path& dir,
                             const std::string& stem) {
  ensure_dir(dir);
  ReportFiles files;
  for (std::size_t i = 0; i < result.levels.size(); ++i) {
    files.table = write_table_file(result.sweeps[i], dir / fmt::format("{}_soc{:g}_pairs.csv", stem, result.levels[i]));
  }
  files.summary = dir / (stem + "_soc_summary.json");
  write_text(files.summary, soc_summary_json(result));
  return files;
}

}  // namespace vpcro
