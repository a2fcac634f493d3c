#include <string>

#include "mcloc/protocols.hpp"

namespace mcloc {

std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::ForwarderProactive:
      return "forwarder_proactive";
    case ProtocolKind::ForwarderReactive:
      return "forwarder_reactive";
    case ProtocolKind::Centralized:
      return "centralized";
    case ProtocolKind::Zoned:
      return "zoned";
  }
  return "?";
}

ProtocolKind parse_protocol(std::string_view text) {
  if (text == "forwarder_proactive") return ProtocolKind::ForwarderProactive;
  if (text == "forwarder_reactive") return ProtocolKind::ForwarderReactive;
  if (text == "centralized") return ProtocolKind::Centralized;
  if (text == "zoned") return ProtocolKind::Zoned;
  throw ParameterError("unknown protocol '" + std::string(text) + "'");
}

std::string_view to_string(StationLookup s) { return s == StationLookup::Rls ? "rls" : "direct"; }

StationLookup parse_station_lookup(std::string_view text) {
  if (text == "rls") return StationLookup::Rls;
  if (text == "direct") return StationLookup::Direct;
  throw ParameterError("unknown station lookup '" + std::string(text) + "'");
}

double default_jump_rate(MobilityBand band) {
  switch (band) {
    case MobilityBand::Low:
      return 1.0 / 10.0;
    case MobilityBand::Medium:
      return 1.0 / 2.0;
    case MobilityBand::High:
      return 1.0 / 0.5;
  }
  return 0.5;
}

void LocationDb::apply(CodeId code, const LocationDbEntry& e) {
  auto it = entries.find(code);
  if (it == entries.end()) {
    entries.emplace(code, e);
  } else if (e.jump_seq >= it->second.jump_seq) {
    it->second = e;
  }
}

std::unique_ptr<Protocol> make_protocol(ProtocolKind kind, World& world) {
  switch (kind) {
    case ProtocolKind::ForwarderProactive:
      return std::make_unique<ForwarderProtocol>(world, true);
    case ProtocolKind::ForwarderReactive:
      return std::make_unique<ForwarderProtocol>(world, false);
    case ProtocolKind::Centralized:
      return std::make_unique<CentralizedProtocol>(world);
    case ProtocolKind::Zoned:
      return std::make_unique<ZonedProtocol>(world);
  }
  throw SimError("unhandled protocol kind");
}

NodeId code_migrate(World& world, Protocol& protocol, CodeId code, RngStream& migration_rng,
                    SimTime t) {
  MobileCode& c = world.codes.at(code);
  const std::vector<NodeId> nbrs = world.radio.neighbors(c.host, t);
  if (nbrs.empty()) return c.host;
  const NodeId from = c.host;
  const NodeId to = nbrs[migration_rng.below(nbrs.size())];
  c.host = to;
  ++c.jumps;
  world.requests.note_jump(code);
  protocol.on_code_moved(code, from, to, t);
  return to;
}

}  // namespace mcloc
