#include "vpcro/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <string>

#include <fmt/format.h>

#include "vpcro/error.hpp"

namespace vpcro {

std::string_view to_token(TrafficClass traffic) noexcept {
  switch (traffic) {
    case TrafficClass::Low: return "low";
    case TrafficClass::Average: return "avg";
    case TrafficClass::Heavy: return "heavy";
  }
  return "low";
}

std::string_view drive_cycle(TrafficClass traffic) noexcept {
  switch (traffic) {
    case TrafficClass::Low: return "HWFET";
    case TrafficClass::Average: return "UDDS";
    case TrafficClass::Heavy: return "NYC";
  }
  return "HWFET";
}

std::optional<TrafficClass> parse_traffic(std::string_view token) noexcept {
  std::string lower(token);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "low" || lower == "hwfet") return TrafficClass::Low;
  if (lower == "avg" || lower == "average" || lower == "udds") return TrafficClass::Average;
  if (lower == "heavy" || lower == "high" || lower == "nyc") return TrafficClass::Heavy;
  return std::nullopt;
}

double segment_length(const Node& a, const Node& b, double coord_scale) {
  if (!std::isfinite(a.lon) || !std::isfinite(a.lat) || !std::isfinite(b.lon) || !std::isfinite(b.lat)) {
    throw InvalidInput("segment_length: non-finite coordinate");
  }
  if (!std::isfinite(coord_scale) || coord_scale <= 0.0) {
    throw InvalidInput("segment_length: coord_scale must be positive and finite");
  }
  return coord_scale * std::hypot(a.lon - b.lon, a.lat - b.lat);
}

Network::Network(std::vector<Node> nodes, std::vector<Segment> segments, double coord_scale)
    : nodes_(std::move(nodes)), segments_(std::move(segments)), coord_scale_(coord_scale) {
  std::vector<std::string> problems;
  if (!std::isfinite(coord_scale_) || coord_scale_ <= 0.0) {
    problems.push_back(fmt::format("coord_scale {} is not a positive finite number", coord_scale_));
  }

  by_external_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    auto& node = nodes_[i];
    node.id = static_cast<NodeId>(i);
    if (!std::isfinite(node.lon) || !std::isfinite(node.lat)) {
      problems.push_back(fmt::format("node {} has a non-finite coordinate", node.external_id));
    }
    by_external_.emplace_back(node.external_id, node.id);
  }
  std::sort(by_external_.begin(), by_external_.end());
  for (std::size_t i = 1; i < by_external_.size(); ++i) {
    if (by_external_[i].first == by_external_[i - 1].first) {
      problems.push_back(fmt::format("duplicate node id {}", by_external_[i].first));
    }
  }

  const auto n = nodes_.size();
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    const auto& seg = segments_[s];
    if (seg.from >= n || seg.to >= n) {
      problems.push_back(fmt::format("segment {} references a missing node", s));
      continue;
    }
    if (seg.from == seg.to) problems.push_back(fmt::format("segment {} is a self-loop", s));
    if (!std::isfinite(seg.length) || seg.length <= 0.0) {
      problems.push_back(fmt::format("segment {} has non-positive length {}", s, seg.length));
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));

  offsets_.assign(n + 1, 0);
  for (const auto& seg : segments_) ++offsets_[seg.from + 1];
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(segments_.size());
  auto cursor = offsets_;
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    adjacency_[cursor[segments_[s].from]++] = static_cast<SegmentId>(s);
  }
}

std::optional<NodeId> Network::find(std::int64_t external_id) const {
  auto it = std::lower_bound(by_external_.begin(), by_external_.end(), std::pair{external_id, NodeId{0}});
  if (it == by_external_.end() || it->first != external_id) return std::nullopt;
  return it->second;
}

namespace {

// Uniform double in [0, 1) from the top 53 bits; keeps generation identical across standard libraries.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

TrafficClass draw_traffic(std::mt19937_64& rng, const TrafficWeights& w) {
  const double total = w.low + w.average + w.heavy;
  const double u = unit_draw(rng) * total;
  if (u < w.low) return TrafficClass::Low;
  if (u < w.low + w.average || w.heavy == 0.0) return TrafficClass::Average;
  return TrafficClass::Heavy;
}

}  // namespace

Network generate_grid(std::size_t rows, std::size_t cols, double spacing, TrafficWeights weights,
                      std::uint64_t seed) {
  if (rows < 2 || cols < 2) throw InvalidInput("generate_grid: rows and cols must both be at least 2");
  if (!std::isfinite(spacing) || spacing <= 0.0) throw InvalidInput("generate_grid: spacing must be positive");
  const std::array<double, 3> w{weights.low, weights.average, weights.heavy};
  if (std::any_of(w.begin(), w.end(), [](double x) { return !std::isfinite(x) || x < 0.0; }) ||
      w[0] + w[1] + w[2] <= 0.0) {
    throw InvalidInput("generate_grid: traffic weights must be non-negative with a positive sum");
  }

  std::vector<Node> nodes;
  nodes.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto id = static_cast<NodeId>(r * cols + c);
      nodes.push_back({id, static_cast<std::int64_t>(id), static_cast<double>(c) * spacing / kDefaultCoordScale,
                       static_cast<double>(r) * spacing / kDefaultCoordScale});
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<Segment> segments;
  segments.reserve(4 * rows * cols);
  auto add_road = [&](NodeId a, NodeId b) {
    const auto traffic = draw_traffic(rng, weights);
    segments.push_back({a, b, traffic, spacing});
    segments.push_back({b, a, traffic, spacing});
  };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto id = static_cast<NodeId>(r * cols + c);
      if (c + 1 < cols) add_road(id, id + 1);
      if (r + 1 < rows) add_road(id, static_cast<NodeId>(id + cols));
    }
  }
  return Network(std::move(nodes), std::move(segments), kDefaultCoordScale);
}

}  // namespace vpcro
