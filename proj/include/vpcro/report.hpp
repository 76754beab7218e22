#ifndef VPCRO_REPORT_HPP
#define VPCRO_REPORT_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "vpcro/experiments.hpp"

namespace vpcro {

/// Column names of the per-pair table, in order.
std::vector<std::string> pair_table_header();

/// One row per pair, ascending (origin, dest). Numbers carry 6 significant digits.
/// Unreachable pairs keep their row with empty route columns.
void write_pair_table(const Sweep& sweep, std::ostream& out);
Sweep read_pair_table(std::istream& in, const std::string& source = "<input>");

std::string summary_json(const Sweep& sweep, const std::vector<SweepReport>& reports);
std::string soc_summary_json(const SocSweepResult& result);

struct ReportFiles {
  std::filesystem::path table;
  std::filesystem::path summary;
};

/// Writes `<dir>/<stem>_pairs.csv` and `<dir>/<stem>_summary.json`, creating `dir` if needed.
/// Throws IoError naming the offending path.
ReportFiles write_report(const Sweep& sweep, const std::vector<SweepReport>& reports,
                         const std::filesystem::path& dir, const std::string& stem);

/// Writes `<dir>/<stem>_soc_summary.json` plus one pair table per SOC level.
ReportFiles write_soc_report(const SocSweepResult& result, const std::filesystem::path& dir, const std::string& stem);

}  // namespace vpcro

#endif  // VPCRO_REPORT_HPP
