#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "mcloc/engine.hpp"
#include "mcloc/geometry.hpp"
#include "mcloc/location_services.hpp"
#include "mcloc/mobility.hpp"
#include "mcloc/radio.hpp"
#include "mcloc/requests.hpp"
#include "mcloc/rng.hpp"

namespace mcloc {

enum class ProtocolKind { ForwarderProactive, ForwarderReactive, Centralized, Zoned };

std::string_view to_string(ProtocolKind kind);
ProtocolKind parse_protocol(std::string_view text);

/// How the centralized protocol reaches a station whose location it does
/// not know: a reactive RLS lookup first, or straight shortest-path routing.
enum class StationLookup { Rls, Direct };

std::string_view to_string(StationLookup s);
StationLookup parse_station_lookup(std::string_view text);

struct ProtocolParams {
  int repair_ttl = 3;
  SimTime chain_check_period = 1.0;
  SimTime locate_timeout = 5.0;
  SimTime reelection_period = 5.0;
  double handoff_threshold = 50.0;
  int db_entries_per_unit = 10;
  int max_retries = 3;
  SimTime report_period = 2.0;
  int n_zones = 2;
  StationLookup station_lookup = StationLookup::Rls;
  // Zone messages are addressed by zone id, so nodes need not learn their
  // zone server; flooding the identity on every handoff is optional.
  bool announce_zone_servers = false;
  // Periodic registry reports from every node, not only code hosts and
  // zone crossers.
  bool report_all_nodes = false;
};

/// Default jump rates (jumps per second) per code-mobility band.
double default_jump_rate(MobilityBand band);

struct MobileCode {
  CodeId code_id = 0;
  NodeId mother = 0;
  NodeId host = 0;
  double jump_rate = 0.5;
  MobilityBand band = MobilityBand::Medium;
  std::uint64_t jumps = 0;
};

struct ForwarderEntry {
  CodeId code_id;
  NodeId next;
  int order;
};

struct LocationDbEntry {
  NodeId host;
  SimTime updated_at;
  std::uint64_t jump_seq;  // jump count of the code when this entry was produced
};

/// Server-side map code -> host. scope is -1 for the whole network.
struct LocationDb {
  int scope = -1;
  std::map<CodeId, LocationDbEntry> entries;

  /// Applies an update unless a newer one has already landed.
  void apply(CodeId code, const LocationDbEntry& e);
};

struct ServerState {
  int zone = 0;
  NodeId host_node = 0;
  LocationDb db;
  int ring_next = 0;
};

/// Everything a protocol state machine needs from the running scenario.
struct World {
  Engine& engine;
  const Mobility& mobility;
  Radio& radio;
  RngStream& protocol_rng;
  std::vector<MobileCode>& codes;
  RequestTracker& requests;
  ProtocolParams params;
};

class Protocol {
 public:
  explicit Protocol(World& world) : world_(world) {}
  virtual ~Protocol() = default;
  Protocol(const Protocol&) = delete;
  Protocol& operator=(const Protocol&) = delete;

  virtual ProtocolKind kind() const = 0;
  /// Initial state at t = 0; schedules the protocol's periodic ticks.
  virtual void start() = 0;
  /// Protocol side effects of a code jump; the code is already rehosted.
  virtual void on_code_moved(CodeId code, NodeId from, NodeId to, SimTime t) = 0;
  /// Starts a lookup; completion is reported through world.requests.
  virtual void locate(RequestId request, CodeId code, NodeId requester, SimTime t) = 0;
  /// Throws InvariantViolation when protocol state is malformed.
  virtual void check_invariants(SimTime t) const { (void)t; }

 protected:
  World& world_;
};

std::unique_ptr<Protocol> make_protocol(ProtocolKind kind, World& world);

/// Moves `code` to a uniformly drawn neighbour of its host (or leaves it when
/// the host has none) and runs the protocol's migration side effects.
/// Returns the new host.
NodeId code_migrate(World& world, Protocol& protocol, CodeId code, RngStream& migration_rng,
                    SimTime t);

// ---------------------------------------------------------------------------
// Forwarder chains

/// Loop-free path of stations from the mother to the current host.
class ForwarderChain {
 public:
  ForwarderChain() = default;
  explicit ForwarderChain(NodeId mother) : stations_{mother} {}

  const std::vector<NodeId>& stations() const { return stations_; }
  NodeId mother() const { return stations_.front(); }
  NodeId host() const { return stations_.back(); }
  /// Marked stations are all stations but the host.
  int links() const { return static_cast<int>(stations_.size()) - 1; }
  std::optional<int> order_of(NodeId station) const;
  std::optional<ForwarderEntry> entry(CodeId code, NodeId station) const;

  /// The code left the host for `to`: the host becomes a marked station,
  /// or the chain is cut back if `to` was already on it.
  void extend(NodeId to);
  /// Replaces the stations strictly between positions `from` and `to` with
  /// `via`, then erases any loop this creates.
  void splice(int from, const std::vector<NodeId>& via, int to);
  /// Sets the whole chain (used by tests to build scripted topologies).
  void assign(std::vector<NodeId> stations);

 private:
  void erase_loops();
  std::vector<NodeId> stations_;
};

struct RepairOutcome {
  bool repaired = false;
  int target_order = -1;
  SimTime done_at = 0.0;
};

class ForwarderProtocol : public Protocol {
 public:
  ForwarderProtocol(World& world, bool proactive);

  ProtocolKind kind() const override {
    return proactive_ ? ProtocolKind::ForwarderProactive : ProtocolKind::ForwarderReactive;
  }
  void start() override;
  void on_code_moved(CodeId code, NodeId from, NodeId to, SimTime t) override;
  void locate(RequestId request, CodeId code, NodeId requester, SimTime t) override;
  void check_invariants(SimTime t) const override;

  /// One round of ChainCheck messages over every link, repairing breaks.
  void chain_check_tick(SimTime t);
  /// Re-establishes the link leaving position `index` of `code`'s chain.
  RepairOutcome repair(CodeId code, int index, RequestId request, SimTime t);

  const ForwarderChain& chain(CodeId code) const { return chains_.at(code); }
  ForwarderChain& chain(CodeId code) { return chains_.at(code); }

 private:
  struct Job {
    RequestId request;
    CodeId code;
    NodeId requester;
    NodeId at;
    int restarts = 0;
  };
  void step(Job job, SimTime t);
  void finish(const Job& job, SimTime t);
  SimTime next_tick_after(SimTime t) const;

  bool proactive_;
  std::map<CodeId, ForwarderChain> chains_;
};

// ---------------------------------------------------------------------------
// Single mobile server

class CentralizedProtocol : public Protocol {
 public:
  explicit CentralizedProtocol(World& world);

  ProtocolKind kind() const override { return ProtocolKind::Centralized; }
  void start() override;
  void on_code_moved(CodeId code, NodeId from, NodeId to, SimTime t) override;
  void locate(RequestId request, CodeId code, NodeId requester, SimTime t) override;
  void check_invariants(SimTime t) const override;

  void server_reelection_tick(SimTime t);
  /// Floods the server identity over the network; returns the units charged.
  int server_announce(SimTime t);

  const ServerState& server() const { return server_; }
  ServerState& server() { return server_; }
  NodeId known_server(NodeId node) const { return known_server_.at(node); }
  int handoffs() const { return handoffs_; }

  /// Sends `kind` from src to dst, discovering dst with RLS first when the
  /// station-lookup mode asks for it. Returns the arrival time or nullopt.
  std::optional<SimTime> reach_station(NodeId src, NodeId dst, MessageKind kind, RequestId request,
                                       SimTime t, int copies = 1);

 private:
  struct Job {
    RequestId request;
    CodeId code;
    NodeId requester;
    int attempts = 0;
  };
  void attempt(Job job, SimTime t);
  void retry_or_fail(Job job, SimTime t);

  ServerState server_;
  std::vector<NodeId> known_server_;
  bool migrating_ = false;
  int handoffs_ = 0;
};

// ---------------------------------------------------------------------------
// Zone-partitioned servers

class ZonedProtocol : public Protocol {
 public:
  explicit ZonedProtocol(World& world);

  ProtocolKind kind() const override { return ProtocolKind::Zoned; }
  void start() override;
  void on_code_moved(CodeId code, NodeId from, NodeId to, SimTime t) override;
  void locate(RequestId request, CodeId code, NodeId requester, SimTime t) override;
  void check_invariants(SimTime t) const override;

  void server_reelection_tick(SimTime t);
  /// Position reports: nodes hosting a code or whose zone changed.
  void report_tick(SimTime t);
  /// Zone-wide flood announcing `zone`'s server; returns the units charged.
  int server_announce(int zone, SimTime t);

  const ZoneLayout& layout() const { return layout_; }
  const std::vector<ServerState>& servers() const { return servers_; }
  std::vector<ServerState>& servers() { return servers_; }
  const PositionRegistry& registry() const { return registry_; }
  ZoneDirectory directory() const;
  /// Zone whose SDB the host of `code` believes holds the code.
  int code_zone(CodeId code) const { return code_zone_.at(code); }
  /// Number of SDBs that hold an entry for `code`.
  int sdb_holders(CodeId code) const;
  int handoffs() const { return handoffs_; }

 private:
  struct Job {
    RequestId request;
    CodeId code;
    NodeId requester;
    int attempts = 0;
  };
  void attempt(Job job, SimTime t);
  void at_server(Job job, int zone, int forwards, SimTime t);
  void retry_or_fail(Job job, SimTime t);
  /// Moves the SDB entry of `code` into `zone` (insert + delete messages).
  void move_code_entry(CodeId code, NodeId host, int zone, SimTime t);
  bool send_delete(CodeId code, NodeId from, int zone, std::uint64_t seq, SimTime t);
  void recompute_layout(SimTime t);
  std::vector<NodeId> zone_members(int zone, SimTime t) const;

  ZoneLayout layout_;
  std::vector<ServerState> servers_;
  PositionRegistry registry_;
  std::map<CodeId, int> code_zone_;
  std::map<CodeId, int> pending_delete_;  // zone still holding a superseded entry
  std::vector<bool> migrating_;
  int handoffs_ = 0;
  int in_flight_ = 0;  // SDB inserts and deletes not yet delivered
};

}  // namespace mcloc
