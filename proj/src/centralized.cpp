#include <cmath>
#include <numeric>

#include "mcloc/protocols.hpp"

namespace mcloc {

namespace {

std::vector<NodeId> all_nodes(int n) {
  std::vector<NodeId> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

int transfer_copies(std::size_t entries, int per_unit) {
  return std::max(1, static_cast<int>((entries + per_unit - 1) / per_unit));
}

}  // namespace

CentralizedProtocol::CentralizedProtocol(World& world)
    : Protocol(world), known_server_(world.mobility.size(), -1) {}

void CentralizedProtocol::start() {
  const PositionMatrix pos = world_.mobility.snapshot(0.0);
  const std::vector<NodeId> nodes = all_nodes(world_.mobility.size());
  server_.zone = 0;
  server_.ring_next = 0;
  server_.db.scope = -1;
  server_.host_node = elect_server(std::span<const NodeId>(nodes), pos, centroid(pos));
  for (const MobileCode& c : world_.codes) {
    server_.db.entries[c.code_id] = LocationDbEntry{c.host, 0.0, c.jumps};
  }
  server_announce(0.0);
  world_.engine.schedule(world_.params.reelection_period, EventKind::ServerReelectionTick,
                         [this] { server_reelection_tick(world_.engine.now()); });
}

std::optional<SimTime> CentralizedProtocol::reach_station(NodeId src, NodeId dst, MessageKind kind,
                                                          RequestId request, SimTime t,
                                                          int copies) {
  if (src == dst) return t;
  if (world_.params.station_lookup == StationLookup::Rls) {
    const RlsResult r = rls_locate(world_.radio, src, dst, request, t);
    if (!r.found) return std::nullopt;
    t = r.done_at;
  }
  SimTime arrival = t;
  for (int i = 0; i < copies; ++i) {
    const UnicastResult u = world_.radio.unicast(src, dst, kind, request, t);
    if (!u.delivered) return std::nullopt;
    arrival = std::max(arrival, u.arrival);
  }
  return arrival;
}

int CentralizedProtocol::server_announce(SimTime t) {
  const NodeId s = server_.host_node;
  const FloodResult fr =
      world_.radio.flood(s, MessageKind::ServerAnnounce, kNoRequest, std::nullopt, t);
  for (NodeId n : fr.reached) known_server_[n] = s;
  return fr.message_units;
}

void CentralizedProtocol::on_code_moved(CodeId code, NodeId, NodeId to, SimTime t) {
  const NodeId s = known_server_[to];
  if (s < 0) return;
  const LocationDbEntry e{to, t, world_.codes.at(code).jumps};
  const auto arrival = reach_station(to, s, MessageKind::ServerUpdate, kNoRequest, t);
  if (!arrival) return;  // lost; lookups will see a stale entry
  world_.engine.schedule(*arrival, EventKind::MessageDelivery, [this, code, e] {
    LocationDbEntry landed = e;
    landed.updated_at = world_.engine.now();
    server_.db.apply(code, landed);
  });
}

void CentralizedProtocol::locate(RequestId request, CodeId code, NodeId requester, SimTime t) {
  attempt(Job{request, code, requester, 0}, t);
}

void CentralizedProtocol::retry_or_fail(Job job, SimTime t) {
  ++job.attempts;
  if (job.attempts > world_.params.max_retries) {
    world_.requests.fail(job.request, t);
    return;
  }
  attempt(job, t);
}

void CentralizedProtocol::attempt(Job job, SimTime t) {
  const NodeId s = known_server_[job.requester];
  if (s < 0) {
    world_.requests.fail(job.request, t);
    return;
  }
  const auto at_server = reach_station(job.requester, s, MessageKind::ServerQuery, job.request, t);
  if (!at_server) {
    world_.requests.fail(job.request, t);
    return;
  }
  world_.engine.schedule(*at_server, EventKind::MessageDelivery, [this, job, s] {
    const SimTime now = world_.engine.now();
    const auto it = server_.db.entries.find(job.code);
    if (it == server_.db.entries.end()) {
      world_.requests.fail(job.request, now);
      return;
    }
    const NodeId host = it->second.host;
    world_.requests.answer(job.request, host, world_.codes.at(job.code).host);
    const UnicastResult reply =
        world_.radio.unicast(s, job.requester, MessageKind::ServerReply, job.request, now);
    if (!reply.delivered) {
      world_.requests.fail(job.request, reply.arrival);
      return;
    }
    world_.engine.schedule(reply.arrival, EventKind::MessageDelivery, [this, job, host] {
      const SimTime now2 = world_.engine.now();
      const auto contact =
          reach_station(job.requester, host, MessageKind::LocateRequest, job.request, now2);
      if (!contact) {
        retry_or_fail(job, now2);
        return;
      }
      world_.engine.schedule(*contact, EventKind::MessageDelivery, [this, job, host] {
        const SimTime now3 = world_.engine.now();
        const NodeId truth = world_.codes.at(job.code).host;
        if (truth == host) {
          world_.requests.resolve(job.request, now3);
        } else {
          retry_or_fail(job, now3);
        }
      });
    });
  });
}

void CentralizedProtocol::server_reelection_tick(SimTime t) {
  world_.engine.schedule(t + world_.params.reelection_period, EventKind::ServerReelectionTick,
                         [this] { server_reelection_tick(world_.engine.now()); });
  if (migrating_) return;
  const PositionMatrix pos = world_.mobility.snapshot(t);
  const Position centre = centroid(pos);
  const std::vector<NodeId> nodes = all_nodes(world_.mobility.size());
  const NodeId best = elect_server(std::span<const NodeId>(nodes), pos, centre);
  const NodeId cur = server_.host_node;
  if (best == cur) return;
  const double gap = dist(pos.col(cur), centre) - dist(pos.col(best), centre);
  if (gap <= world_.params.handoff_threshold) return;
  const int copies = transfer_copies(server_.db.entries.size(), world_.params.db_entries_per_unit);
  const auto arrival = reach_station(cur, best, MessageKind::AgentMigration, kNoRequest, t, copies);
  if (!arrival) return;  // deferred to the next tick
  migrating_ = true;
  world_.engine.schedule(*arrival, EventKind::MessageDelivery, [this, best] {
    server_.host_node = best;
    migrating_ = false;
    ++handoffs_;
    server_announce(world_.engine.now());
  });
}

void CentralizedProtocol::check_invariants(SimTime) const {
  for (const MobileCode& c : world_.codes) {
    if (!server_.db.entries.count(c.code_id)) {
      throw InvariantViolation("server database lost a code entry");
    }
  }
  if (server_.host_node < 0 || server_.host_node >= world_.mobility.size()) {
    throw InvariantViolation("server hosted on an unknown node");
  }
}

}  // namespace mcloc
