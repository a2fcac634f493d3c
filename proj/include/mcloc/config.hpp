#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "mcloc/mobility.hpp"
#include "mcloc/protocols.hpp"

namespace mcloc {

/// Speed interval [min, max] in m/s.
using SpeedRange = std::pair<double, double>;

/// Speed intervals whose measured network mobility lands in each band on
/// the default 25-node, 1000 x 500 m setting.
SpeedRange speed_preset(MobilityBand band);

struct ScenarioConfig {
  Area area;
  int n_nodes = 25;
  double range = 250.0;
  ProtocolKind protocol = ProtocolKind::ForwarderReactive;
  int n_zones = 2;
  double lambda = 0.25;
  /// Preset used for node_speed unless node_speed was set explicitly.
  MobilityBand node_mob_target = MobilityBand::Medium;
  std::optional<SpeedRange> node_speed;
  MobilityBand code_band = MobilityBand::Medium;
  double jump_rate = 0.0;  // 0: default for code_band
  int n_codes = 1;
  double duration = 200.0;
  std::uint64_t seed = 1;

  double pause = 0.0;
  double metric_dt = 1.0;
  double per_hop_latency = 0.01;
  double warmup = 10.0;
  double disconnect_grace = 20.0;

  int repair_ttl = 3;
  double chain_check_period = 1.0;
  double locate_timeout = 5.0;
  double reelection_period = 5.0;
  double handoff_threshold = 50.0;
  int db_entries_per_unit = 10;
  int max_retries = 3;
  double report_period = 2.0;
  StationLookup station_lookup = StationLookup::Rls;
  bool announce_zone_servers = false;
  bool report_all_nodes = false;

  SpeedRange effective_speed() const { return node_speed.value_or(speed_preset(node_mob_target)); }
  double effective_jump_rate() const {
    return jump_rate > 0.0 ? jump_rate : default_jump_rate(code_band);
  }
  /// "low" / "medium" / "high", or "custom" when node_speed was given.
  std::string node_mob_label() const;
  ProtocolParams protocol_params() const;

  /// Throws ParameterError describing the first invalid field.
  void validate() const;

  /// Sets one field from its textual form; unknown keys are rejected.
  void set(std::string_view key, std::string_view value);
};

/// Parses flat `key = value` lines; `#` starts a comment.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

/// Writes every field back in the same format (round-trips through parse_config).
void write_config(std::ostream& out, const ScenarioConfig& cfg);

}  // namespace mcloc
