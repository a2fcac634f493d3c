#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "mcloc/mobility.hpp"
#include "mcloc/types.hpp"

namespace mcloc {

enum class MessageKind : std::uint8_t {
  Data,
  LocateRequest,
  LocateReply,
  ChainCheck,
  ChainRepairFlood,
  ChainRepairReply,
  ServerUpdate,
  ServerQuery,
  ServerReply,
  AgentMigration,
  RingForward,
  PositionReport,
  ServerAnnounce,
  RlsQuery,
  RlsReply,
};

inline constexpr int kMessageKindCount = 15;

std::string_view to_string(MessageKind kind);

/// One charged transmission. Unicasts are one row carrying their hop count;
/// every flood transmitter is its own row with hops = 1 and dst = broadcast.
struct MessageRecord {
  RequestId request_id;
  MessageKind kind;
  NodeId src;
  NodeId dst;
  int hops;
  SimTime t;
};

/// Append-only charge ledger for one scenario. Units charged at or after
/// `window_start` are the ones the metrics see.
class MessageLedger {
 public:
  explicit MessageLedger(SimTime window_start = 0.0) : window_start_(window_start) {}

  void charge(const MessageRecord& rec);

  const std::vector<MessageRecord>& records() const { return records_; }
  std::int64_t total_units() const { return total_; }
  std::int64_t window_units() const { return window_total_; }
  std::int64_t window_units(MessageKind kind) const {
    return window_by_kind_[static_cast<int>(kind)];
  }
  SimTime window_start() const { return window_start_; }

  /// request_id,kind,src,dst,hops,t
  void write_csv(std::ostream& out) const;

 private:
  SimTime window_start_;
  std::vector<MessageRecord> records_;
  std::int64_t total_ = 0;
  std::int64_t window_total_ = 0;
  std::int64_t window_by_kind_[kMessageKindCount] = {};
};

/// Unit-disk graph at one instant.
struct ConnectivityGraph {
  SimTime snapshot_time = 0.0;
  std::vector<std::vector<NodeId>> adjacency;  // sorted ascending

  int size() const { return static_cast<int>(adjacency.size()); }
  bool linked(NodeId a, NodeId b) const;
  /// Hop distance from `src` to every node; -1 when unreachable.
  std::vector<int> bfs_depths(NodeId src) const;
  /// Shortest hop path src..dst (lowest-id parent on ties), empty when unreachable.
  std::vector<NodeId> shortest_path(NodeId src, NodeId dst) const;
  bool connected() const;
};

struct RadioParams {
  double range = 250.0;
  double per_hop_latency = 0.01;
};

struct UnicastResult {
  bool delivered = false;
  int hops = 0;           // hops actually traversed (and charged)
  SimTime arrival = 0.0;  // delivery time, or time of the failed hop
};

struct FloodResult {
  std::vector<NodeId> reached;  // BFS order, origin first
  std::vector<int> depth;       // per node, -1 when not reached
  std::vector<NodeId> parent;   // per node, -1 for origin / unreached
  int message_units = 0;

  bool reached_node(NodeId n) const { return depth[n] >= 0; }
  std::vector<NodeId> path_to(NodeId n) const;
};

/// Idealised medium: shortest-path unicast with a constant per-hop
/// latency and TTL-bounded flooding, both charged to the ledger.
class Radio {
 public:
  using NodeFilter = std::function<bool(NodeId)>;

  Radio(const Mobility& mobility, RadioParams params, MessageLedger& ledger);

  const RadioParams& params() const { return params_; }
  const Mobility& mobility() const { return mobility_; }
  int size() const { return mobility_.size(); }

  const ConnectivityGraph& graph(SimTime t) const;
  std::vector<NodeId> neighbors(NodeId node, SimTime t) const;
  bool in_range(NodeId a, NodeId b, SimTime t) const;
  std::optional<int> hop_distance(NodeId src, NodeId dst, SimTime t) const;

  /// Sends along a shortest path on the snapshot at t. Each hop k is
  /// re-checked at t + k * latency; a hop that is out of range by then
  /// breaks delivery and only the hops already traversed are charged.
  UnicastResult unicast(NodeId src, NodeId dst, MessageKind kind, RequestId request, SimTime t);

  /// BFS flood from `origin`. Nodes at depth == ttl receive but do not
  /// rebroadcast. Only nodes accepted by `filter` receive or relay.
  FloodResult flood(NodeId origin, MessageKind kind, RequestId request, std::optional<int> ttl,
                    SimTime t, const NodeFilter& filter = {});

  SimTime latency(int hops) const { return hops * params_.per_hop_latency; }

 private:
  const Mobility& mobility_;
  RadioParams params_;
  MessageLedger& ledger_;
  mutable std::optional<ConnectivityGraph> cached_;
};

/// Builds the unit-disk graph of `positions` (inclusive range boundary).
ConnectivityGraph build_graph(const PositionMatrix& positions, double range, SimTime t);

}  // namespace mcloc
