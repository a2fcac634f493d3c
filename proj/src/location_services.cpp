#include "mcloc/location_services.hpp"

namespace mcloc {

RlsResult rls_locate(Radio& radio, NodeId requester, NodeId target, RequestId request, SimTime t) {
  if (requester == target) throw SimError("rls_locate: requester and target coincide");
  RlsResult r;
  const double hop = radio.params().per_hop_latency;

  // Phase 1: neighbours only.
  const FloodResult local = radio.flood(requester, MessageKind::RlsQuery, request, 1, t);
  r.message_units += local.message_units;
  if (local.reached_node(target)) {
    const UnicastResult reply =
        radio.unicast(target, requester, MessageKind::RlsReply, request, t + hop);
    r.message_units += reply.hops;
    if (reply.delivered) {
      r.found = true;
      r.route_hops = reply.hops;
      r.done_at = reply.arrival;
      return r;
    }
  }

  // Phase 2 after the neighbour round trip has timed out: whole network.
  const SimTime t2 = t + 2.0 * hop;
  const FloodResult wide = radio.flood(requester, MessageKind::RlsQuery, request, std::nullopt, t2);
  r.message_units += wide.message_units;
  if (wide.reached_node(target)) {
    const SimTime heard = t2 + radio.latency(wide.depth[target]);
    const UnicastResult reply =
        radio.unicast(target, requester, MessageKind::RlsReply, request, heard);
    r.message_units += reply.hops;
    if (reply.delivered) {
      r.found = true;
      r.route_hops = reply.hops;
      r.done_at = reply.arrival;
      return r;
    }
  }
  const int diameter_bound = radio.size() - 1;
  r.done_at = t2 + 2.0 * diameter_bound * hop;
  return r;
}

PositionRegistry::PositionRegistry(int n_zones, Engine& engine, Radio& radio)
    : engine_(engine), radio_(radio), entries_(n_zones) {
  if (n_zones < 1) throw ParameterError("registry needs at least one zone");
}

void PositionRegistry::apply_insert(int zone, const PositionRegistryEntry& e) {
  auto& slot = entries_[zone][e.node];
  if (slot.node < 0 || slot.reported_at <= e.reported_at) slot = e;
}

ReportOutcome PositionRegistry::report(NodeId node, SimTime t, const ZoneDirectory& dir) {
  if (!dir.layout || static_cast<int>(dir.servers.size()) != n_zones()) {
    throw SimError("registry report needs a directory covering every zone");
  }
  const Position p = radio_.mobility().position_at(node, t);
  const int zone = zone_of(p, *dir.layout);
  const PositionRegistryEntry entry{node, p, t, zone};

  // Retry an undelivered delete from an earlier crossing first.
  if (auto pd = pending_delete_.find(node); pd != pending_delete_.end() && pd->second == zone) {
    pending_delete_.erase(pd);  // back in the old zone: the entry there is wanted again
  } else if (pd != pending_delete_.end()) {
    const int old = pd->second;
    const UnicastResult del =
        radio_.unicast(node, dir.servers[old], MessageKind::PositionReport, kNoRequest, t);
    if (del.delivered) {
      pending_delete_.erase(pd);
      engine_.schedule(del.arrival, EventKind::MessageDelivery,
                       [this, old, node, t] { apply_delete(old, node, t); });
    }
  }

  const auto known = node_zone_.find(node);
  const UnicastResult ins =
      radio_.unicast(node, dir.servers[zone], MessageKind::PositionReport, kNoRequest, t);
  if (!ins.delivered) return ReportOutcome::Dropped;
  engine_.schedule(ins.arrival, EventKind::MessageDelivery,
                   [this, zone, entry] { apply_insert(zone, entry); });
  if (known == node_zone_.end() || known->second == zone) {
    node_zone_[node] = zone;
    return ReportOutcome::Refreshed;
  }

  const int old = known->second;
  node_zone_[node] = zone;
  const UnicastResult del =
      radio_.unicast(node, dir.servers[old], MessageKind::PositionReport, kNoRequest, t);
  if (del.delivered) {
    engine_.schedule(del.arrival, EventKind::MessageDelivery,
                     [this, old, node, t] { apply_delete(old, node, t); });
  } else {
    pending_delete_[node] = old;
  }
  return ReportOutcome::Moved;
}

void PositionRegistry::apply_delete(int zone, NodeId node, SimTime sent_at) {
  // A delete never removes a report the node made after sending it.
  auto& m = entries_[zone];
  if (auto it = m.find(node); it != m.end() && it->second.reported_at <= sent_at) m.erase(it);
}

std::optional<PositionRegistryEntry> PositionRegistry::lookup(int zone, NodeId node) const {
  const auto& m = entries_.at(zone);
  const auto it = m.find(node);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::optional<int> PositionRegistry::registered_zone(NodeId node) const {
  const auto it = node_zone_.find(node);
  if (it == node_zone_.end()) return std::nullopt;
  return it->second;
}

int PositionRegistry::holders(NodeId node) const {
  int n = 0;
  for (const auto& m : entries_) n += m.count(node) ? 1 : 0;
  return n;
}

}  // namespace mcloc
