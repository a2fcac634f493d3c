#include "mcloc/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace mcloc {

SpeedRange speed_preset(MobilityBand band) {
  switch (band) {
    case MobilityBand::Low:
      return {2.0, 6.0};
    case MobilityBand::Medium:
      return {8.0, 16.0};
    case MobilityBand::High:
      return {15.0, 30.0};
  }
  return {2.0, 6.0};
}

std::string ScenarioConfig::node_mob_label() const {
  return node_speed ? std::string("custom") : std::string(to_string(node_mob_target));
}

ProtocolParams ScenarioConfig::protocol_params() const {
  ProtocolParams p;
  p.repair_ttl = repair_ttl;
  p.chain_check_period = chain_check_period;
  p.locate_timeout = locate_timeout;
  p.reelection_period = reelection_period;
  p.handoff_threshold = handoff_threshold;
  p.db_entries_per_unit = db_entries_per_unit;
  p.max_retries = max_retries;
  p.report_period = report_period;
  p.n_zones = protocol == ProtocolKind::Zoned ? n_zones : 1;
  p.station_lookup = station_lookup;
  p.announce_zone_servers = announce_zone_servers;
  p.report_all_nodes = report_all_nodes;
  return p;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view why) {
  throw ParameterError("config key '" + std::string(key) + "': cannot use '" + std::string(value) +
                       "' (" + std::string(why) + ")");
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) bad(key, v, "expected a number");
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
  Int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) bad(key, v, "expected an integer");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, v, "expected true or false");
}

std::pair<double, double> to_pair(std::string_view key, std::string_view v, char sep) {
  const auto pos = v.find(sep);
  if (pos == std::string_view::npos)
    bad(key, v, std::string("expected two values separated by '") + sep + "'");
  return {to_double(key, trim(v.substr(0, pos))), to_double(key, trim(v.substr(pos + 1)))};
}

}  // namespace

void ScenarioConfig::set(std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  if (key == "area") {
    const auto [w, h] = to_pair(key, v, 'x');
    area = Area{w, h};
  } else if (key == "n_nodes") {
    n_nodes = to_int<int>(key, v);
  } else if (key == "range") {
    range = to_double(key, v);
  } else if (key == "protocol") {
    protocol = parse_protocol(v);
  } else if (key == "n_zones") {
    n_zones = to_int<int>(key, v);
  } else if (key == "lambda") {
    lambda = to_double(key, v);
  } else if (key == "node_mob_target") {
    node_mob_target = parse_mobility_band(v);
  } else if (key == "node_speed") {
    node_speed = to_pair(key, v, ',');
  } else if (key == "code_band") {
    code_band = parse_mobility_band(v);
  } else if (key == "jump_rate") {
    jump_rate = to_double(key, v);
  } else if (key == "n_codes") {
    n_codes = to_int<int>(key, v);
  } else if (key == "duration") {
    duration = to_double(key, v);
  } else if (key == "seed") {
    seed = to_int<std::uint64_t>(key, v);
  } else if (key == "pause") {
    pause = to_double(key, v);
  } else if (key == "metric_dt") {
    metric_dt = to_double(key, v);
  } else if (key == "per_hop_latency") {
    per_hop_latency = to_double(key, v);
  } else if (key == "warmup") {
    warmup = to_double(key, v);
  } else if (key == "disconnect_grace") {
    disconnect_grace = to_double(key, v);
  } else if (key == "repair_ttl") {
    repair_ttl = to_int<int>(key, v);
  } else if (key == "chain_check_period") {
    chain_check_period = to_double(key, v);
  } else if (key == "locate_timeout") {
    locate_timeout = to_double(key, v);
  } else if (key == "reelection_period") {
    reelection_period = to_double(key, v);
  } else if (key == "handoff_threshold") {
    handoff_threshold = to_double(key, v);
  } else if (key == "db_entries_per_unit") {
    db_entries_per_unit = to_int<int>(key, v);
  } else if (key == "max_retries") {
    max_retries = to_int<int>(key, v);
  } else if (key == "report_period") {
    report_period = to_double(key, v);
  } else if (key == "station_lookup") {
    station_lookup = parse_station_lookup(v);
  } else if (key == "announce_zone_servers") {
    announce_zone_servers = to_bool(key, v);
  } else if (key == "report_all_nodes") {
    report_all_nodes = to_bool(key, v);
  } else {
    throw ParameterError("unknown config key '" + std::string(key) + "'");
  }
}

void ScenarioConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(what);
  };
  need(area.width > 0.0 && area.height > 0.0, "area must be positive in both dimensions");
  need(n_nodes >= 2, "n_nodes must be at least 2");
  need(range > 0.0, "range must be positive");
  need(lambda > 0.0, "lambda must be positive");
  need(protocol != ProtocolKind::Zoned || n_zones >= 2, "zoned protocol needs n_zones >= 2");
  need(n_codes >= 1, "n_codes must be at least 1");
  need(duration >= 0.0, "duration must be non-negative");
  const auto [smin, smax] = effective_speed();
  need(smin > 0.0 && smax >= smin, "node_speed must satisfy 0 < min <= max");
  need(jump_rate >= 0.0, "jump_rate must be non-negative");
  need(pause >= 0.0, "pause must be non-negative");
  need(metric_dt > 0.0, "metric_dt must be positive");
  need(per_hop_latency >= 0.0, "per_hop_latency must be non-negative");
  need(warmup >= 0.0, "warmup must be non-negative");
  need(disconnect_grace >= 0.0, "disconnect_grace must be non-negative");
  need(repair_ttl >= 1, "repair_ttl must be at least 1");
  need(chain_check_period > 0.0, "chain_check_period must be positive");
  need(locate_timeout > 0.0, "locate_timeout must be positive");
  need(reelection_period > 0.0, "reelection_period must be positive");
  need(handoff_threshold >= 0.0, "handoff_threshold must be non-negative");
  need(db_entries_per_unit >= 1, "db_entries_per_unit must be at least 1");
  need(max_retries >= 0, "max_retries must be non-negative");
  need(report_period > 0.0, "report_period must be positive");
}

ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    cfg.set(trim(s.substr(0, eq)), s.substr(eq + 1));
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void write_config(std::ostream& out, const ScenarioConfig& c) {
  out << "area = " << c.area.width << 'x' << c.area.height << '\n'
      << "n_nodes = " << c.n_nodes << '\n'
      << "range = " << c.range << '\n'
      << "protocol = " << to_string(c.protocol) << '\n'
      << "n_zones = " << c.n_zones << '\n'
      << "lambda = " << c.lambda << '\n'
      << "node_mob_target = " << to_string(c.node_mob_target) << '\n';
  if (c.node_speed)
    out << "node_speed = " << c.node_speed->first << ',' << c.node_speed->second << '\n';
  out << "code_band = " << to_string(c.code_band) << '\n'
      << "jump_rate = " << c.jump_rate << '\n'
      << "n_codes = " << c.n_codes << '\n'
      << "duration = " << c.duration << '\n'
      << "seed = " << c.seed << '\n'
      << "pause = " << c.pause << '\n'
      << "metric_dt = " << c.metric_dt << '\n'
      << "per_hop_latency = " << c.per_hop_latency << '\n'
      << "warmup = " << c.warmup << '\n'
      << "disconnect_grace = " << c.disconnect_grace << '\n'
      << "repair_ttl = " << c.repair_ttl << '\n'
      << "chain_check_period = " << c.chain_check_period << '\n'
      << "locate_timeout = " << c.locate_timeout << '\n'
      << "reelection_period = " << c.reelection_period << '\n'
      << "handoff_threshold = " << c.handoff_threshold << '\n'
      << "db_entries_per_unit = " << c.db_entries_per_unit << '\n'
      << "max_retries = " << c.max_retries << '\n'
      << "report_period = " << c.report_period << '\n'
      << "station_lookup = " << to_string(c.station_lookup) << '\n'
      << "announce_zone_servers = " << (c.announce_zone_servers ? "true" : "false") << '\n'
      << "report_all_nodes = " << (c.report_all_nodes ? "true" : "false") << '\n';
}

}  // namespace mcloc
