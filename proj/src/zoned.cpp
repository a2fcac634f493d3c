#include <algorithm>
#include <cmath>

#include "mcloc/protocols.hpp"

namespace mcloc {

namespace {

int transfer_copies(std::size_t entries, int per_unit) {
  return std::max(1, static_cast<int>((entries + per_unit - 1) / per_unit));
}

}  // namespace

ZonedProtocol::ZonedProtocol(World& world)
    : Protocol(world),
      layout_(world.params.n_zones, Position::Zero()),
      servers_(world.params.n_zones),
      registry_(world.params.n_zones, world.engine, world.radio),
      migrating_(world.params.n_zones, false) {}

ZoneDirectory ZonedProtocol::directory() const {
  ZoneDirectory d;
  d.layout = &layout_;
  for (const auto& s : servers_) d.servers.push_back(s.host_node);
  return d;
}

void ZonedProtocol::recompute_layout(SimTime t) {
  layout_ = ZoneLayout(world_.params.n_zones, centroid(world_.mobility.snapshot(t)));
}

std::vector<NodeId> ZonedProtocol::zone_members(int zone, SimTime t) const {
  std::vector<NodeId> out;
  for (NodeId n = 0; n < world_.mobility.size(); ++n) {
    if (zone_of(world_.mobility.position_at(n, t), layout_) == zone) out.push_back(n);
  }
  return out;
}

void ZonedProtocol::start() {
  recompute_layout(0.0);
  const PositionMatrix pos = world_.mobility.snapshot(0.0);
  const int nz = layout_.n_zones();
  std::vector<bool> taken(world_.mobility.size(), false);
  for (int z = 0; z < nz; ++z) {
    std::vector<NodeId> cands = zone_members(z, 0.0);
    if (cands.empty()) {
      for (NodeId n = 0; n < world_.mobility.size(); ++n) {
        if (!taken[n]) cands.push_back(n);
      }
    }
    ServerState& s = servers_[z];
    s.zone = z;
    s.ring_next = layout_.ring_next(z);
    s.db.scope = z;
    s.host_node = elect_server(std::span<const NodeId>(cands), pos, layout_.centre());
    taken[s.host_node] = true;
  }
  for (const MobileCode& c : world_.codes) {
    const int z = zone_of(pos.col(c.host), layout_);
    servers_[z].db.entries[c.code_id] = LocationDbEntry{c.host, 0.0, c.jumps};
    code_zone_[c.code_id] = z;
  }
  const ZoneDirectory dir = directory();
  for (NodeId n = 0; n < world_.mobility.size(); ++n) registry_.report(n, 0.0, dir);
  if (world_.params.announce_zone_servers) {
    for (int z = 0; z < nz; ++z) server_announce(z, 0.0);
  }

  world_.engine.schedule(world_.params.reelection_period, EventKind::ServerReelectionTick,
                         [this] { server_reelection_tick(world_.engine.now()); });
  world_.engine.schedule(world_.params.report_period, EventKind::TimerExpiry,
                         [this] { report_tick(world_.engine.now()); });
}

int ZonedProtocol::server_announce(int zone, SimTime t) {
  const FloodResult fr =
      world_.radio.flood(servers_[zone].host_node, MessageKind::ServerAnnounce, kNoRequest,
                         std::nullopt, t, [this, zone, t](NodeId n) {
                           return zone_of(world_.mobility.position_at(n, t), layout_) == zone;
                         });
  return fr.message_units;
}

int ZonedProtocol::sdb_holders(CodeId code) const {
  int n = 0;
  for (const auto& s : servers_) n += s.db.entries.count(code) ? 1 : 0;
  return n;
}

void ZonedProtocol::move_code_entry(CodeId code, NodeId host, int zone, SimTime t) {
  const int old = code_zone_.at(code);
  const LocationDbEntry e{host, t, world_.codes.at(code).jumps};
  const UnicastResult ins = world_.radio.unicast(host, servers_[zone].host_node,
                                                 MessageKind::ServerUpdate, kNoRequest, t);
  if (!ins.delivered) return;  // retried from the next report tick
  code_zone_[code] = zone;
  ++in_flight_;
  world_.engine.schedule(ins.arrival, EventKind::MessageDelivery, [this, zone, code, e] {
    --in_flight_;
    // An insert overtaken by a later move is void: its delete may already
    // have landed.
    if (code_zone_.at(code) != zone) return;
    LocationDbEntry landed = e;
    landed.updated_at = world_.engine.now();
    servers_[zone].db.apply(code, landed);
  });
  if (old == zone) return;
  if (!send_delete(code, host, old, e.jump_seq, t)) pending_delete_[code] = old;
}

bool ZonedProtocol::send_delete(CodeId code, NodeId from, int zone, std::uint64_t seq, SimTime t) {
  const UnicastResult del = world_.radio.unicast(from, servers_[zone].host_node,
                                                 MessageKind::ServerUpdate, kNoRequest, t);
  if (!del.delivered) return false;
  ++in_flight_;
  world_.engine.schedule(del.arrival, EventKind::MessageDelivery, [this, zone, code, seq] {
    --in_flight_;
    auto& entries = servers_[zone].db.entries;
    auto it = entries.find(code);
    if (it != entries.end() && it->second.jump_seq <= seq && code_zone_.at(code) != zone) {
      entries.erase(it);
    }
  });
  return true;
}

void ZonedProtocol::on_code_moved(CodeId code, NodeId, NodeId to, SimTime t) {
  const int z = zone_of(world_.mobility.position_at(to, t), layout_);
  if (registry_.registered_zone(to) != z) registry_.report(to, t, directory());
  move_code_entry(code, to, z, t);
}

void ZonedProtocol::report_tick(SimTime t) {
  world_.engine.schedule(t + world_.params.report_period, EventKind::TimerExpiry,
                         [this] { report_tick(world_.engine.now()); });
  const ZoneDirectory dir = directory();
  for (auto it = pending_delete_.begin(); it != pending_delete_.end();) {
    const MobileCode& c = world_.codes.at(it->first);
    if (it->second == code_zone_.at(c.code_id) ||
        send_delete(c.code_id, c.host, it->second, c.jumps, t)) {
      it = pending_delete_.erase(it);
    } else {
      ++it;
    }
  }
  for (NodeId n = 0; n < world_.mobility.size(); ++n) {
    const int z = zone_of(world_.mobility.position_at(n, t), layout_);
    std::vector<CodeId> hosted;
    for (const MobileCode& c : world_.codes) {
      if (c.host == n) hosted.push_back(c.code_id);
    }
    if (!world_.params.report_all_nodes && hosted.empty() && registry_.registered_zone(n) == z) {
      continue;
    }
    registry_.report(n, t, dir);
    for (CodeId c : hosted) {
      if (code_zone_.at(c) != z) move_code_entry(c, n, z, t);
    }
  }
}

void ZonedProtocol::locate(RequestId request, CodeId code, NodeId requester, SimTime t) {
  attempt(Job{request, code, requester, 0}, t);
}

void ZonedProtocol::retry_or_fail(Job job, SimTime t) {
  ++job.attempts;
  if (job.attempts > world_.params.max_retries) {
    world_.requests.fail(job.request, t);
    return;
  }
  attempt(job, t);
}

void ZonedProtocol::attempt(Job job, SimTime t) {
  const int z = zone_of(world_.mobility.position_at(job.requester, t), layout_);
  const UnicastResult q = world_.radio.unicast(job.requester, servers_[z].host_node,
                                               MessageKind::ServerQuery, job.request, t);
  if (!q.delivered) {
    retry_or_fail(job, q.arrival);
    return;
  }
  world_.engine.schedule(q.arrival, EventKind::MessageDelivery,
                         [this, job, z] { at_server(job, z, 0, world_.engine.now()); });
}

void ZonedProtocol::at_server(Job job, int zone, int forwards, SimTime t) {
  const ServerState& s = servers_[zone];
  const auto hit = s.db.entries.find(job.code);
  if (hit == s.db.entries.end()) {
    if (forwards + 1 >= layout_.n_zones()) {
      world_.requests.fail(job.request, t);
      return;
    }
    const int next = s.ring_next;
    const UnicastResult f = world_.radio.unicast(s.host_node, servers_[next].host_node,
                                                 MessageKind::RingForward, job.request, t);
    if (!f.delivered) {
      world_.requests.fail(job.request, f.arrival);
      return;
    }
    world_.engine.schedule(f.arrival, EventKind::MessageDelivery, [this, job, next, forwards] {
      at_server(job, next, forwards + 1, world_.engine.now());
    });
    return;
  }
  const NodeId host = hit->second.host;
  world_.requests.answer(job.request, host, world_.codes.at(job.code).host);
  // Host position comes from the zone registry; routing itself is idealised.
  (void)registry_.lookup(zone, host);
  const UnicastResult reply =
      world_.radio.unicast(s.host_node, job.requester, MessageKind::ServerReply, job.request, t);
  if (!reply.delivered) {
    world_.requests.fail(job.request, reply.arrival);
    return;
  }
  world_.engine.schedule(reply.arrival, EventKind::MessageDelivery, [this, job, host] {
    const SimTime now = world_.engine.now();
    const UnicastResult c =
        world_.radio.unicast(job.requester, host, MessageKind::LocateRequest, job.request, now);
    if (!c.delivered) {
      retry_or_fail(job, c.arrival);
      return;
    }
    world_.engine.schedule(c.arrival, EventKind::MessageDelivery, [this, job, host] {
      const SimTime now2 = world_.engine.now();
      const NodeId truth = world_.codes.at(job.code).host;
      if (truth == host) {
        world_.requests.resolve(job.request, now2);
      } else {
        retry_or_fail(job, now2);
      }
    });
  });
}

void ZonedProtocol::server_reelection_tick(SimTime t) {
  world_.engine.schedule(t + world_.params.reelection_period, EventKind::ServerReelectionTick,
                         [this] { server_reelection_tick(world_.engine.now()); });
  recompute_layout(t);
  const PositionMatrix pos = world_.mobility.snapshot(t);
  std::vector<bool> serving(world_.mobility.size(), false);
  for (const auto& s : servers_) serving[s.host_node] = true;
  for (int z = 0; z < layout_.n_zones(); ++z) {
    if (migrating_[z]) continue;
    std::vector<NodeId> cands;
    for (NodeId n : zone_members(z, t)) {
      if (!serving[n] || n == servers_[z].host_node) cands.push_back(n);
    }
    if (cands.empty()) continue;
    const NodeId best = elect_server(std::span<const NodeId>(cands), pos, layout_.centre());
    const NodeId cur = servers_[z].host_node;
    if (best == cur) continue;
    const bool strayed = zone_of(pos.col(cur), layout_) != z;
    const double gap = dist(pos.col(cur), layout_.centre()) - dist(pos.col(best), layout_.centre());
    if (!strayed && gap <= world_.params.handoff_threshold) continue;
    const int copies = transfer_copies(servers_[z].db.entries.size() + registry_.zone_size(z),
                                       world_.params.db_entries_per_unit);
    SimTime arrival = t;
    bool ok = true;
    for (int i = 0; i < copies && ok; ++i) {
      const UnicastResult u =
          world_.radio.unicast(cur, best, MessageKind::AgentMigration, kNoRequest, t);
      ok = u.delivered;
      arrival = std::max(arrival, u.arrival);
    }
    if (!ok) continue;
    migrating_[z] = true;
    serving[best] = true;
    world_.engine.schedule(arrival, EventKind::MessageDelivery, [this, z, best] {
      servers_[z].host_node = best;
      migrating_[z] = false;
      ++handoffs_;
      if (world_.params.announce_zone_servers) server_announce(z, world_.engine.now());
    });
  }
}

void ZonedProtocol::check_invariants(SimTime t) const {
  // Exclusivity holds once every insert and delete has landed.
  if (in_flight_ > 0 || !pending_delete_.empty()) return;
  for (const MobileCode& c : world_.codes) {
    if (sdb_holders(c.code_id) != 1) {
      throw InvariantViolation("code entry is not held by exactly one zone server");
    }
    if (!servers_[code_zone_.at(c.code_id)].db.entries.count(c.code_id)) {
      throw InvariantViolation("code entry is not where its host registered it");
    }
  }
  (void)t;
}

}  // namespace mcloc
