#include "mcloc/radio.hpp"

#include <algorithm>
#include <deque>
#include <ostream>

namespace mcloc {

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::Data:
      return "Data";
    case MessageKind::LocateRequest:
      return "LocateRequest";
    case MessageKind::LocateReply:
      return "LocateReply";
    case MessageKind::ChainCheck:
      return "ChainCheck";
    case MessageKind::ChainRepairFlood:
      return "ChainRepairFlood";
    case MessageKind::ChainRepairReply:
      return "ChainRepairReply";
    case MessageKind::ServerUpdate:
      return "ServerUpdate";
    case MessageKind::ServerQuery:
      return "ServerQuery";
    case MessageKind::ServerReply:
      return "ServerReply";
    case MessageKind::AgentMigration:
      return "AgentMigration";
    case MessageKind::RingForward:
      return "RingForward";
    case MessageKind::PositionReport:
      return "PositionReport";
    case MessageKind::ServerAnnounce:
      return "ServerAnnounce";
    case MessageKind::RlsQuery:
      return "RlsQuery";
    case MessageKind::RlsReply:
      return "RlsReply";
  }
  return "?";
}

void MessageLedger::charge(const MessageRecord& rec) {
  if (rec.hops < 0) throw InvariantViolation("negative hop count charged");
  records_.push_back(rec);
  total_ += rec.hops;
  if (rec.t >= window_start_) {
    window_total_ += rec.hops;
    window_by_kind_[static_cast<int>(rec.kind)] += rec.hops;
  }
}

void MessageLedger::write_csv(std::ostream& out) const {
  const auto old_precision = out.precision(12);
  out << "request_id,kind,src,dst,hops,t\n";
  for (const auto& r : records_) {
    out << r.request_id << ',' << to_string(r.kind) << ',' << r.src << ',';
    if (r.dst == kBroadcast) {
      out << '*';
    } else {
      out << r.dst;
    }
    out << ',' << r.hops << ',' << r.t << '\n';
  }
  out.precision(old_precision);
}

bool ConnectivityGraph::linked(NodeId a, NodeId b) const {
  const auto& adj = adjacency[a];
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::vector<int> ConnectivityGraph::bfs_depths(NodeId src) const {
  std::vector<int> depth(size(), -1);
  std::deque<NodeId> q{src};
  depth[src] = 0;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop_front();
    for (NodeId v : adjacency[u]) {
      if (depth[v] < 0) {
        depth[v] = depth[u] + 1;
        q.push_back(v);
      }
    }
  }
  return depth;
}

std::vector<NodeId> ConnectivityGraph::shortest_path(NodeId src, NodeId dst) const {
  std::vector<NodeId> parent(size(), -1);
  std::vector<bool> seen(size(), false);
  std::deque<NodeId> q{src};
  seen[src] = true;
  while (!q.empty() && !seen[dst]) {
    const NodeId u = q.front();
    q.pop_front();
    for (NodeId v : adjacency[u]) {
      if (!seen[v]) {
        seen[v] = true;
        parent[v] = u;
        q.push_back(v);
      }
    }
  }
  if (!seen[dst]) return {};
  std::vector<NodeId> path{dst};
  while (path.back() != src) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

bool ConnectivityGraph::connected() const {
  if (size() == 0) return true;
  const auto d = bfs_depths(0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

std::vector<NodeId> FloodResult::path_to(NodeId n) const {
  if (depth[n] < 0) return {};
  std::vector<NodeId> path{n};
  while (parent[path.back()] >= 0) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

ConnectivityGraph build_graph(const PositionMatrix& positions, double range, SimTime t) {
  const int n = static_cast<int>(positions.cols());
  ConnectivityGraph g;
  g.snapshot_time = t;
  g.adjacency.assign(n, {});
  const double r2 = range * range;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((positions.col(i) - positions.col(j)).squaredNorm() <= r2) {
        g.adjacency[i].push_back(j);
        g.adjacency[j].push_back(i);
      }
    }
  }
  for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
  return g;
}

Radio::Radio(const Mobility& mobility, RadioParams params, MessageLedger& ledger)
    : mobility_(mobility), params_(params), ledger_(ledger) {
  if (!(params_.range > 0.0)) throw ParameterError("radio range must be positive");
  if (params_.per_hop_latency < 0.0) throw ParameterError("per-hop latency must be non-negative");
}

const ConnectivityGraph& Radio::graph(SimTime t) const {
  if (!cached_ || cached_->snapshot_time != t) {
    cached_ = build_graph(mobility_.snapshot(t), params_.range, t);
  }
  return *cached_;
}

std::vector<NodeId> Radio::neighbors(NodeId node, SimTime t) const {
  if (node < 0 || node >= size()) throw SimError("unknown node id");
  return graph(t).adjacency[node];
}

bool Radio::in_range(NodeId a, NodeId b, SimTime t) const {
  return (mobility_.position_at(a, t) - mobility_.position_at(b, t)).squaredNorm() <=
         params_.range * params_.range;
}

std::optional<int> Radio::hop_distance(NodeId src, NodeId dst, SimTime t) const {
  const int d = graph(t).bfs_depths(src)[dst];
  if (d < 0) return std::nullopt;
  return d;
}

UnicastResult Radio::unicast(NodeId src, NodeId dst, MessageKind kind, RequestId request,
                             SimTime t) {
  if (src < 0 || src >= size() || dst < 0 || dst >= size()) {
    throw SimError("unicast needs concrete endpoints");
  }
  if (src == dst) return UnicastResult{true, 0, t};
  const std::vector<NodeId> path = graph(t).shortest_path(src, dst);
  if (path.empty()) return UnicastResult{false, 0, t};
  int hops = 0;
  bool ok = true;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const SimTime depart = t + latency(static_cast<int>(k));
    if (k > 0 && !in_range(path[k], path[k + 1], depart)) {
      ok = false;
      break;
    }
    ++hops;
  }
  if (hops > 0) ledger_.charge(MessageRecord{request, kind, src, dst, hops, t});
  return UnicastResult{ok, hops, t + latency(hops)};
}

FloodResult Radio::flood(NodeId origin, MessageKind kind, RequestId request, std::optional<int> ttl,
                         SimTime t, const NodeFilter& filter) {
  if (ttl && *ttl < 1) throw SimError("flood ttl must be at least 1");
  const ConnectivityGraph& g = graph(t);
  FloodResult r;
  r.depth.assign(g.size(), -1);
  r.parent.assign(g.size(), -1);
  std::deque<NodeId> q{origin};
  r.depth[origin] = 0;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop_front();
    r.reached.push_back(u);
    if (ttl && r.depth[u] >= *ttl) continue;  // receives, does not rebroadcast
    ++r.message_units;
    ledger_.charge(MessageRecord{request, kind, u, kBroadcast, 1, t + latency(r.depth[u])});
    for (NodeId v : g.adjacency[u]) {
      if (r.depth[v] >= 0) continue;
      if (filter && !filter(v)) continue;
      r.depth[v] = r.depth[u] + 1;
      r.parent[v] = u;
      q.push_back(v);
    }
  }
  return r;
}

}  // namespace mcloc
