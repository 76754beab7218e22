#ifndef VPCRO_NETWORK_IO_HPP
#define VPCRO_NETWORK_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vpcro/network.hpp"

namespace vpcro {

/// Network as read from a file, before id resolution and invariant checks.
struct NetworkDraft {
  struct NodeRecord {
    std::int64_t id = 0;
    double lon = 0.0;
    double lat = 0.0;
    std::size_t line = 0;
  };
  struct EdgeRecord {
    std::int64_t from = 0;
    std::int64_t to = 0;
    TrafficClass traffic = TrafficClass::Low;
    std::optional<double> length;
    std::size_t line = 0;
  };

  std::string source = "<input>";
  double coord_scale = kDefaultCoordScale;
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
};

enum class NetworkFormat { Text, Json };

/// Line-oriented format: `meta coord_scale <f>`, `node <id> <lon> <lat>`,
/// `edge <from> <to> <low|avg|heavy> [length]`, `road ...` (same fields, both directions).
/// Throws ParseError with line context.
NetworkDraft parse_network_text(std::istream& in, const std::string& source = "<input>");
/// Object with `coord_scale`, `nodes`, `edges` keys.
NetworkDraft parse_network_json(std::istream& in, const std::string& source = "<input>");
/// Picks the format from the first non-blank character (`{` means structured).
NetworkDraft parse_network(std::istream& in, const std::string& source = "<input>");

/// Every invariant violation in the draft, one message per problem. Empty when valid.
std::vector<std::string> validate(const NetworkDraft& draft);

/// Resolves ids and fills missing lengths. Throws ValidationError listing all violations.
Network build_network(const NetworkDraft& draft);

Network load_network(const std::filesystem::path& path);

void write_network(const Network& net, std::ostream& out, NetworkFormat format = NetworkFormat::Text);
void save_network(const Network& net, const std::filesystem::path& path, NetworkFormat format = NetworkFormat::Text);

}  // namespace vpcro

#endif  // VPCRO_NETWORK_IO_HPP
