#ifndef VPCRO_NETWORK_HPP
#define VPCRO_NETWORK_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace vpcro {

/// Dense node index, 0..N-1 within one Network.
using NodeId = std::uint32_t;
/// Index into Network::segments().
using SegmentId = std::uint32_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);
inline constexpr SegmentId kNoSegment = static_cast<SegmentId>(-1);

/// Miles per coordinate unit when a network does not say otherwise.
inline constexpr double kDefaultCoordScale = 62.137;

/// Traffic level of a segment. Each class stands in for one standard drive cycle:
/// Low -> HWFET, Average -> UDDS, Heavy -> NYC.
enum class TrafficClass : std::uint8_t { Low = 0, Average = 1, Heavy = 2 };

inline constexpr std::array<TrafficClass, 3> kTrafficClasses{TrafficClass::Low, TrafficClass::Average,
                                                              TrafficClass::Heavy};

constexpr std::size_t index_of(TrafficClass traffic) noexcept { return static_cast<std::size_t>(traffic); }

/// Short token used in files: "low", "avg", "heavy".
std::string_view to_token(TrafficClass traffic) noexcept;
std::string_view drive_cycle(TrafficClass traffic) noexcept;
/// Accepts the file tokens plus "average", "high" and the drive-cycle names (case-insensitive).
std::optional<TrafficClass> parse_traffic(std::string_view token) noexcept;

/// Value indexed by traffic class.
template <typename T>
struct PerTraffic {
  std::array<T, 3> values{};

  constexpr T& operator[](TrafficClass traffic) noexcept { return values[index_of(traffic)]; }
  constexpr const T& operator[](TrafficClass traffic) const noexcept { return values[index_of(traffic)]; }
  friend constexpr bool operator==(const PerTraffic&, const PerTraffic&) = default;
};

struct Node {
  NodeId id = 0;
  /// Identifier used by the source file; printed back on output.
  std::int64_t external_id = 0;
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Segment {
  NodeId from = 0;
  NodeId to = 0;
  TrafficClass traffic = TrafficClass::Low;
  double length = 0.0;  // miles

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Euclidean distance between two nodes in miles.
/// Throws InvalidInput on non-finite coordinates or a non-positive scale.
double segment_length(const Node& a, const Node& b, double coord_scale = kDefaultCoordScale);

/// Immutable directed road network with compressed outgoing adjacency.
class Network {
 public:
  Network() = default;
  /// Node ids are reassigned to their position in `nodes`. Segment endpoints must already be
  /// dense indices. Throws ValidationError when an invariant does not hold.
  Network(std::vector<Node> nodes, std::vector<Segment> segments, double coord_scale = kDefaultCoordScale);

  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t num_segments() const noexcept { return segments_.size(); }

  std::span<const Node> nodes() const noexcept { return nodes_; }
  std::span<const Segment> segments() const noexcept { return segments_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  const Segment& segment(SegmentId id) const { return segments_.at(id); }

  /// Outgoing segment ids of `id`, in insertion order.
  std::span<const SegmentId> out_segments(NodeId id) const noexcept {
    return {adjacency_.data() + offsets_[id], adjacency_.data() + offsets_[id + 1]};
  }

  double coord_scale() const noexcept { return coord_scale_; }

  /// Dense id for a file-level node identifier.
  std::optional<NodeId> find(std::int64_t external_id) const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.coord_scale_ == b.coord_scale_ && a.nodes_ == b.nodes_ && a.segments_ == b.segments_;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Segment> segments_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<SegmentId> adjacency_;
  std::vector<std::pair<std::int64_t, NodeId>> by_external_;  // sorted
  double coord_scale_ = kDefaultCoordScale;
};

/// Probabilities (unnormalized) of drawing each traffic class.
struct TrafficWeights {
  double low = 1.0;
  double average = 0.0;
  double heavy = 0.0;
};

/// rows x cols lattice with two-way roads between 4-neighbours, spaced `spacing` miles apart.
/// Both directions of a road share one sampled traffic class. Pure function of its arguments.
Network generate_grid(std::size_t rows, std::size_t cols, double spacing, TrafficWeights weights,
                      std::uint64_t seed);

}  // namespace vpcro

#endif  // VPCRO_NETWORK_HPP
