#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "mcloc/protocols.hpp"

namespace mcloc {

std::optional<int> ForwarderChain::order_of(NodeId station) const {
  const auto it = std::find(stations_.begin(), stations_.end(), station);
  if (it == stations_.end()) return std::nullopt;
  return static_cast<int>(it - stations_.begin());
}

std::optional<ForwarderEntry> ForwarderChain::entry(CodeId code, NodeId station) const {
  const auto order = order_of(station);
  if (!order || *order + 1 >= static_cast<int>(stations_.size())) return std::nullopt;
  return ForwarderEntry{code, stations_[*order + 1], *order};
}

void ForwarderChain::extend(NodeId to) {
  if (const auto idx = order_of(to)) {
    stations_.resize(*idx + 1);
  } else {
    stations_.push_back(to);
  }
}

void ForwarderChain::splice(int from, const std::vector<NodeId>& via, int to) {
  const int n = static_cast<int>(stations_.size());
  if (from < 0 || to <= from || to >= n) throw SimError("ForwarderChain::splice: bad positions");
  std::vector<NodeId> out(stations_.begin(), stations_.begin() + from + 1);
  out.insert(out.end(), via.begin(), via.end());
  out.insert(out.end(), stations_.begin() + to, stations_.end());
  stations_ = std::move(out);
  erase_loops();
}

void ForwarderChain::assign(std::vector<NodeId> stations) {
  if (stations.empty()) throw SimError("ForwarderChain::assign: empty chain");
  stations_ = std::move(stations);
  erase_loops();
}

void ForwarderChain::erase_loops() {
  std::vector<NodeId> out;
  std::unordered_map<NodeId, std::size_t> seen;
  for (NodeId s : stations_) {
    if (auto it = seen.find(s); it != seen.end()) {
      for (std::size_t k = it->second + 1; k < out.size(); ++k) seen.erase(out[k]);
      out.resize(it->second + 1);
    } else {
      seen.emplace(s, out.size());
      out.push_back(s);
    }
  }
  stations_ = std::move(out);
}

ForwarderProtocol::ForwarderProtocol(World& world, bool proactive)
    : Protocol(world), proactive_(proactive) {}

void ForwarderProtocol::start() {
  for (const MobileCode& c : world_.codes) {
    if (c.host != c.mother) throw SimError("a code must start on its mother station");
    chains_[c.code_id] = ForwarderChain(c.mother);
  }
  if (proactive_) {
    world_.engine.schedule(world_.params.chain_check_period, EventKind::ChainCheckTick,
                           [this] { chain_check_tick(world_.engine.now()); });
  }
}

void ForwarderProtocol::on_code_moved(CodeId code, NodeId from, NodeId to, SimTime) {
  ForwarderChain& ch = chains_.at(code);
  if (ch.host() != from) throw InvariantViolation("forwarder chain does not end at the old host");
  ch.extend(to);
}

SimTime ForwarderProtocol::next_tick_after(SimTime t) const {
  const double p = world_.params.chain_check_period;
  return (std::floor(t / p + 1e-9) + 1.0) * p;
}

void ForwarderProtocol::locate(RequestId request, CodeId code, NodeId requester, SimTime t) {
  if (chains_.at(code).mother() != requester) {
    throw SimError("forwarder lookups are issued by the code's mother station");
  }
  step(Job{request, code, requester, requester}, t);
}

void ForwarderProtocol::step(Job job, SimTime t) {
  const MobileCode& code = world_.codes.at(job.code);
  if (code.host == job.at) {
    finish(job, t);
    return;
  }
  const RequestRecord& rec = world_.requests.get(job.request);
  if (t - rec.issued_at > world_.params.locate_timeout) {
    world_.requests.fail(job.request, rec.issued_at + world_.params.locate_timeout);
    return;
  }
  ForwarderChain& ch = chains_.at(job.code);
  const auto idx = ch.order_of(job.at);
  if (!idx || *idx + 1 >= static_cast<int>(ch.stations().size())) {
    // The station fell off the chain while the request was travelling.
    if (job.restarts >= 3) {
      world_.requests.fail(job.request, t);
      return;
    }
    ++job.restarts;
    job.at = job.requester;
    step(job, t);
    return;
  }
  const NodeId next = ch.stations()[*idx + 1];
  if (world_.radio.in_range(job.at, next, t)) {
    const UnicastResult u =
        world_.radio.unicast(job.at, next, MessageKind::LocateRequest, job.request, t);
    if (u.delivered) {
      job.at = next;
      world_.engine.schedule(u.arrival, EventKind::MessageDelivery,
                             [this, job] { step(job, world_.engine.now()); });
      return;
    }
  }
  if (proactive_) {
    // Wait for the periodic check to repair the link.
    const SimTime resume = next_tick_after(t);
    world_.engine.schedule(resume, EventKind::TimerExpiry,
                           [this, job] { step(job, world_.engine.now()); });
    return;
  }
  const RepairOutcome r = repair(job.code, *idx, job.request, t);
  if (!r.repaired) {
    world_.requests.fail(job.request, r.done_at);
    return;
  }
  world_.engine.schedule(r.done_at, EventKind::MessageDelivery,
                         [this, job] { step(job, world_.engine.now()); });
}

void ForwarderProtocol::finish(const Job& job, SimTime t) {
  world_.requests.answer(job.request, job.at, world_.codes.at(job.code).host);
  const UnicastResult reply =
      world_.radio.unicast(job.at, job.requester, MessageKind::LocateReply, job.request, t);
  const RequestId id = job.request;
  if (reply.delivered) {
    world_.engine.schedule(reply.arrival, EventKind::MessageDelivery,
                           [this, id] { world_.requests.resolve(id, world_.engine.now()); });
  } else {
    world_.engine.schedule(reply.arrival, EventKind::MessageDelivery,
                           [this, id] { world_.requests.fail(id, world_.engine.now()); });
  }
}

RepairOutcome ForwarderProtocol::repair(CodeId code, int index, RequestId request, SimTime t) {
  ForwarderChain& ch = chains_.at(code);
  const std::vector<NodeId> stations = ch.stations();
  const int n = static_cast<int>(stations.size());
  if (index < 0 || index + 1 >= n) throw SimError("repair: no link leaves this position");
  const NodeId from = stations[index];
  const NodeId lost = stations[index + 1];
  const double hop = world_.radio.params().per_hop_latency;

  SimTime stage_at = t;
  const std::optional<int> stages[2] = {world_.params.repair_ttl, std::nullopt};
  for (const auto& ttl : stages) {
    const FloodResult fr =
        world_.radio.flood(from, MessageKind::ChainRepairFlood, request, ttl, stage_at);
    // The lost successor answers, unless a higher-order marked station heard
    // the diffusion at least as close to `from`; the highest such order wins.
    int best = -1;
    const bool lost_heard = fr.reached_node(lost);
    if (lost_heard) best = index + 1;
    for (int k = index + 2; k < n; ++k) {
      const NodeId s = stations[k];
      if (!fr.reached_node(s)) continue;
      if (!lost_heard || fr.depth[s] <= fr.depth[lost]) best = k;
    }
    if (best >= 0) {
      const NodeId target = stations[best];
      const SimTime heard = stage_at + world_.radio.latency(fr.depth[target]);
      const UnicastResult reply =
          world_.radio.unicast(target, from, MessageKind::ChainRepairReply, request, heard);
      if (reply.delivered) {
        const std::vector<NodeId> path = fr.path_to(target);
        const std::vector<NodeId> via(path.begin() + 1, path.end() - 1);
        ch.splice(index, via, best);
        return RepairOutcome{true, best, reply.arrival};
      }
    }
    const int wait_hops = ttl ? *ttl : world_.radio.size() - 1;
    stage_at += 2.0 * wait_hops * hop;
  }
  return RepairOutcome{false, -1, stage_at};
}

void ForwarderProtocol::chain_check_tick(SimTime t) {
  for (auto& [code, ch] : chains_) {
    int idx = 0;
    while (idx + 1 < static_cast<int>(ch.stations().size())) {
      const NodeId a = ch.stations()[idx];
      const NodeId b = ch.stations()[idx + 1];
      if (world_.radio.in_range(a, b, t)) {
        world_.radio.unicast(a, b, MessageKind::ChainCheck, kNoRequest, t);
      } else {
        repair(code, idx, kNoRequest, t);
      }
      ++idx;
    }
  }
  world_.engine.schedule(next_tick_after(t), EventKind::ChainCheckTick,
                         [this] { chain_check_tick(world_.engine.now()); });
}

void ForwarderProtocol::check_invariants(SimTime) const {
  for (const auto& [code, ch] : chains_) {
    const auto& s = ch.stations();
    if (s.empty()) throw InvariantViolation("empty forwarder chain");
    if (s.front() != world_.codes.at(code).mother) {
      throw InvariantViolation("forwarder chain does not start at the mother station");
    }
    if (s.back() != world_.codes.at(code).host) {
      throw InvariantViolation("forwarder chain does not reach the current host");
    }
    std::vector<NodeId> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InvariantViolation("forwarder chain visits a station twice");
    }
  }
}

}  // namespace mcloc
