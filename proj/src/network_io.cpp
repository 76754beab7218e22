#include "vpcro/network_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vpcro/error.hpp"

namespace vpcro {

namespace {

using json = nlohmann::json;

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const auto start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view token) {
  T value{};
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

struct LineParser {
  const std::string& source;
  std::size_t line;

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(source, line, message); }

  double real(std::string_view token, std::string_view what) const {
    auto v = parse_number<double>(token);
    if (!v) fail(fmt::format("expected a number for {}, got '{}'", what, token));
    return *v;
  }

  std::int64_t id(std::string_view token, std::string_view what) const {
    auto v = parse_number<std::int64_t>(token);
    if (!v) fail(fmt::format("expected an integer node id for {}, got '{}'", what, token));
    return *v;
  }

  TrafficClass traffic(std::string_view token) const {
    auto t = parse_traffic(token);
    if (!t) fail(fmt::format("unknown traffic class '{}' (expected low, avg or heavy)", token));
    return *t;
  }
};

}  // namespace

NetworkDraft parse_network_text(std::istream& in, const std::string& source) {
  NetworkDraft draft;
  draft.source = source;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    const LineParser p{source, line_no};
    const auto keyword = tokens[0];
    if (keyword == "meta") {
      if (tokens.size() != 3) p.fail("meta record needs a key and a value");
      if (tokens[1] != "coord_scale") p.fail(fmt::format("unknown meta key '{}'", tokens[1]));
      draft.coord_scale = p.real(tokens[2], "coord_scale");
    } else if (keyword == "node") {
      if (tokens.size() != 4) p.fail("node record needs <id> <lon> <lat>");
      draft.nodes.push_back({p.id(tokens[1], "node"), p.real(tokens[2], "lon"), p.real(tokens[3], "lat"), line_no});
    } else if (keyword == "edge" || keyword == "road") {
      if (tokens.size() != 4 && tokens.size() != 5) {
        p.fail(fmt::format("{} record needs <from> <to> <traffic> [length_miles]", keyword));
      }
      NetworkDraft::EdgeRecord edge{p.id(tokens[1], "from"), p.id(tokens[2], "to"), p.traffic(tokens[3]),
                                    std::nullopt, line_no};
      if (tokens.size() == 5) edge.length = p.real(tokens[4], "length");
      draft.edges.push_back(edge);
      if (keyword == "road") {
        std::swap(edge.from, edge.to);
        draft.edges.push_back(edge);
      }
    } else {
      p.fail(fmt::format("unknown record type '{}'", keyword));
    }
  }
  return draft;
}

NetworkDraft parse_network_json(std::istream& in, const std::string& source) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(source, 0, e.what());
  }
  if (!doc.is_object()) throw ParseError(source, 0, "top-level value must be an object");

  NetworkDraft draft;
  draft.source = source;
  try {
    if (auto it = doc.find("coord_scale"); it != doc.end()) draft.coord_scale = it->get<double>();
    const auto& nodes = doc.at("nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      draft.nodes.push_back({n.at("id").get<std::int64_t>(), n.at("lon").get<double>(),
                             n.at("lat").get<double>(), i + 1});
    }
    const auto& edges = doc.at("edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto& e = edges[i];
      const auto token = e.at("traffic").get<std::string>();
      auto traffic = parse_traffic(token);
      if (!traffic) throw ParseError(source, 0, fmt::format("edges[{}]: unknown traffic class '{}'", i, token));
      NetworkDraft::EdgeRecord edge{e.at("from").get<std::int64_t>(), e.at("to").get<std::int64_t>(), *traffic,
                                    std::nullopt, i + 1};
      if (auto len = e.find("length_miles"); len != e.end() && !len->is_null()) edge.length = len->get<double>();
      draft.edges.push_back(edge);
      if (e.value("bidirectional", false)) {
        std::swap(edge.from, edge.to);
        draft.edges.push_back(edge);
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(source, 0, e.what());
  }
  return draft;
}

NetworkDraft parse_network(std::istream& in, const std::string& source) {
  while (in && std::isspace(in.peek())) in.get();
  if (in.peek() == '{') return parse_network_json(in, source);
  return parse_network_text(in, source);
}

std::vector<std::string> validate(const NetworkDraft& draft) {
  std::vector<std::string> problems;
  if (!std::isfinite(draft.coord_scale) || draft.coord_scale <= 0.0) {
    problems.push_back(fmt::format("coord_scale {} is not a positive finite number", draft.coord_scale));
  }

  std::map<std::int64_t, std::size_t> index;
  for (std::size_t i = 0; i < draft.nodes.size(); ++i) {
    const auto& n = draft.nodes[i];
    if (n.id < 0) problems.push_back(fmt::format("record {}: negative node id {}", n.line, n.id));
    if (!std::isfinite(n.lon) || !std::isfinite(n.lat)) {
      problems.push_back(fmt::format("record {}: node {} has a non-finite coordinate", n.line, n.id));
    }
    if (!index.emplace(n.id, i).second) {
      problems.push_back(fmt::format("record {}: duplicate node id {}", n.line, n.id));
    }
  }

  for (const auto& e : draft.edges) {
    auto from = index.find(e.from);
    auto to = index.find(e.to);
    bool dangling = false;
    if (from == index.end()) {
      problems.push_back(fmt::format("record {}: dangling edge, unknown node {}", e.line, e.from));
      dangling = true;
    }
    if (to == index.end()) {
      problems.push_back(fmt::format("record {}: dangling edge, unknown node {}", e.line, e.to));
      dangling = true;
    }
    if (e.from == e.to) problems.push_back(fmt::format("record {}: self-loop on node {}", e.line, e.from));
    if (e.length) {
      if (!std::isfinite(*e.length) || *e.length <= 0.0) {
        problems.push_back(fmt::format("record {}: non-positive length {} on edge {}->{}", e.line, *e.length,
                                       e.from, e.to));
      }
    } else if (!dangling && e.from != e.to) {
      const auto& a = draft.nodes[from->second];
      const auto& b = draft.nodes[to->second];
      if (std::isfinite(a.lon) && std::isfinite(a.lat) && std::isfinite(b.lon) && std::isfinite(b.lat) &&
          a.lon == b.lon && a.lat == b.lat) {
        problems.push_back(fmt::format("record {}: zero-length edge {}->{} (coincident coordinates)", e.line,
                                       e.from, e.to));
      }
    }
  }
  return problems;
}

Network build_network(const NetworkDraft& draft) {
  if (auto problems = validate(draft); !problems.empty()) {
    for (auto& p : problems) p = draft.source + ": " + p;
    throw ValidationError(std::move(problems));
  }

  std::map<std::int64_t, NodeId> index;
  std::vector<Node> nodes;
  nodes.reserve(draft.nodes.size());
  for (const auto& n : draft.nodes) {
    const auto id = static_cast<NodeId>(nodes.size());
    index.emplace(n.id, id);
    nodes.push_back({id, n.id, n.lon, n.lat});
  }

  std::vector<Segment> segments;
  segments.reserve(draft.edges.size());
  for (const auto& e : draft.edges) {
    const auto from = index.at(e.from);
    const auto to = index.at(e.to);
    const double length = e.length ? *e.length : segment_length(nodes[from], nodes[to], draft.coord_scale);
    segments.push_back({from, to, e.traffic, length});
  }
  return Network(std::move(nodes), std::move(segments), draft.coord_scale);
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open network file '{}'", path.string()));
  return build_network(parse_network(in, path.string()));
}

void write_network(const Network& net, std::ostream& out, NetworkFormat format) {
  if (format == NetworkFormat::Json) {
    json doc;
    doc["coord_scale"] = net.coord_scale();
    auto& nodes = doc["nodes"] = json::array();
    for (const auto& n : net.nodes()) nodes.push_back({{"id", n.external_id}, {"lon", n.lon}, {"lat", n.lat}});
    auto& edges = doc["edges"] = json::array();
    for (const auto& s : net.segments()) {
      edges.push_back({{"from", net.node(s.from).external_id},
                       {"to", net.node(s.to).external_id},
                       {"traffic", std::string(to_token(s.traffic))},
                       {"length_miles", s.length}});
    }
    out << doc.dump(1) << '\n';
    return;
  }

  // fmt's "{}" for double is the shortest representation that parses back to the same value.
  out << fmt::format("# {} nodes, {} directed segments\n", net.num_nodes(), net.num_segments());
  out << fmt::format("meta coord_scale {}\n", net.coord_scale());
  for (const auto& n : net.nodes()) out << fmt::format("node {} {} {}\n", n.external_id, n.lon, n.lat);
  for (const auto& s : net.segments()) {
    out << fmt::format("edge {} {} {} {}\n", net.node(s.from).external_id, net.node(s.to).external_id,
                       to_token(s.traffic), s.length);
  }
}

void save_network(const Network& net, const std::filesystem::path& path, NetworkFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write network file '{}'", path.string()));
  write_network(net, out, format);
  out.flush();
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

}  // namespace vpcro
