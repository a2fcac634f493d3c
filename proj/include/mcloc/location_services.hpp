#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "mcloc/engine.hpp"
#include "mcloc/geometry.hpp"
#include "mcloc/radio.hpp"

namespace mcloc {

struct RlsResult {
  bool found = false;
  int route_hops = 0;     // hop distance to the target (reply path length)
  int message_units = 0;  // everything charged by this lookup
  SimTime done_at = 0.0;  // reply arrival, or NotFound timeout
};

/// Reactive station lookup: a one-hop neighbour query first, then a
/// network-wide flood. The target answers by unicast.
RlsResult rls_locate(Radio& radio, NodeId requester, NodeId target, RequestId request, SimTime t);

struct PositionRegistryEntry {
  NodeId node = -1;
  Position last_position = Position::Zero();
  SimTime reported_at = 0.0;
  int zone = -1;
};

/// Where each zone's registry currently lives.
struct ZoneDirectory {
  const ZoneLayout* layout = nullptr;
  std::vector<NodeId> servers;  // indexed by zone
};

enum class ReportOutcome { Refreshed, Moved, Dropped };

/// Per-zone position registries held at the zone servers. Entries are
/// written when the report message is delivered.
class PositionRegistry {
 public:
  PositionRegistry(int n_zones, Engine& engine, Radio& radio);

  /// Sends `node`'s current position to its zone server; on a zone change
  /// inserts at the new zone and deletes at the old one.
  ReportOutcome report(NodeId node, SimTime t, const ZoneDirectory& dir);

  std::optional<PositionRegistryEntry> lookup(int zone, NodeId node) const;
  /// Zone currently holding an entry for `node` (the node's own view).
  std::optional<int> registered_zone(NodeId node) const;
  /// Number of zones holding an entry for `node`.
  int holders(NodeId node) const;
  std::size_t zone_size(int zone) const { return entries_.at(zone).size(); }
  int n_zones() const { return static_cast<int>(entries_.size()); }

 private:
  void apply_insert(int zone, const PositionRegistryEntry& e);
  void apply_delete(int zone, NodeId node, SimTime sent_at);

  Engine& engine_;
  Radio& radio_;
  std::vector<std::map<NodeId, PositionRegistryEntry>> entries_;
  std::map<NodeId, int> node_zone_;       // zone the node believes it is registered in
  std::map<NodeId, int> pending_delete_;  // old zone whose delete has not been delivered
};

}  // namespace mcloc
