#include "mcloc/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "mcloc/protocols.hpp"

namespace mcloc {

double compute_nb_msg(std::int64_t total_messages, std::int64_t n_requests) {
  if (n_requests <= 0) throw UndefinedMetric("Nb_msg is undefined without requests");
  return static_cast<double>(total_messages) / static_cast<double>(n_requests);
}

double compute_rtime(const std::vector<RequestRecord>& window_requests) {
  double total = 0.0;
  std::int64_t finished = 0;
  for (const auto& r : window_requests) {
    if (r.status == RequestStatus::InFlight) continue;
    total += r.finished_at - r.issued_at;
    ++finished;
  }
  if (finished == 0) throw UndefinedMetric("Rtime is undefined without finished requests");
  return total / static_cast<double>(finished);
}

namespace {

// Trajectories extend past the end of the run so that in-flight message
// hops can still be checked against positions.
constexpr double kHorizonMargin = 30.0;

void schedule_jump(World& world, Protocol& protocol, RngStream& rng, CodeId code) {
  const MobileCode& c = world.codes.at(code);
  const SimTime at = world.engine.now() + rng.exponential(c.jump_rate);
  world.engine.schedule(at, EventKind::CodeMigration, [&world, &protocol, &rng, code] {
    code_migrate(world, protocol, code, rng, world.engine.now());
    schedule_jump(world, protocol, rng, code);
  });
}

void schedule_request(World& world, Protocol& protocol, RngStream& rng, double lambda) {
  const SimTime at = world.engine.now() + rng.exponential(lambda);
  world.engine.schedule(at, EventKind::RequestArrival, [&world, &protocol, &rng, lambda] {
    const SimTime now = world.engine.now();
    const CodeId code = static_cast<CodeId>(rng.below(world.codes.size()));
    const NodeId requester = world.codes[code].mother;
    const RequestId id = world.requests.issue(code, requester, now);
    protocol.locate(id, code, requester, now);
    schedule_request(world, protocol, rng, lambda);
  });
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  config.validate();
  RunResult out;
  out.config = config;

  RngStream mobility_rng(config.seed, StreamLabel::Mobility);
  RngStream workload_rng(config.seed, StreamLabel::Workload);
  RngStream migration_rng(config.seed, StreamLabel::CodeMigration);
  RngStream protocol_rng(config.seed, StreamLabel::Protocol);

  const auto [smin, smax] = config.effective_speed();
  WaypointParams wp{config.area, smin, smax, config.pause};
  out.mobility = std::make_unique<Mobility>(Mobility::random_waypoint(
      config.n_nodes, wp, config.duration + kHorizonMargin, mobility_rng));
  out.ledger = std::make_unique<MessageLedger>(config.warmup);

  Engine engine;
  engine.enable_trace(options.trace_events);
  Radio radio(*out.mobility, RadioParams{config.range, config.per_hop_latency}, *out.ledger);
  RequestTracker tracker(config.warmup);

  std::vector<MobileCode> codes;
  for (int i = 0; i < config.n_codes; ++i) {
    MobileCode c;
    c.code_id = i;
    c.mother = static_cast<NodeId>(protocol_rng.below(config.n_nodes));
    c.host = c.mother;
    c.jump_rate = config.effective_jump_rate();
    c.band = config.code_band;
    codes.push_back(c);
  }

  World world{engine, *out.mobility, radio, protocol_rng, codes, tracker, config.protocol_params()};
  std::unique_ptr<Protocol> protocol = make_protocol(config.protocol, world);

  MetricsReport& rep = out.report;
  if (config.duration > 0.0) {
    protocol->start();
    for (const MobileCode& c : codes) schedule_jump(world, *protocol, migration_rng, c.code_id);
    schedule_request(world, *protocol, workload_rng, config.lambda);

    // Partition watch: sample connectivity every metric step.
    SimTime split_since = -1.0;
    const int samples = static_cast<int>(std::floor(config.duration / config.metric_dt + 1e-9));
    for (int k = 0; k <= samples && !rep.aborted; ++k) {
      const SimTime t = k * config.metric_dt;
      engine.run_until(t);
      if (radio.graph(t).connected()) {
        split_since = -1.0;
      } else if (split_since < 0.0) {
        split_since = t;
      } else if (t - split_since > config.disconnect_grace) {
        rep.aborted = true;
        rep.abort_reason = "network disconnected since t=" + std::to_string(split_since);
      }
    }
    if (!rep.aborted) {
      engine.run_until(config.duration);
      protocol->check_invariants(config.duration);
    }
  }

  // Per-request message units from the ledger.
  auto& records = tracker.records();
  for (const MessageRecord& m : out.ledger->records()) {
    if (m.request_id != kNoRequest)
      records.at(static_cast<std::size_t>(m.request_id)).message_units += m.hops;
  }

  std::vector<RequestRecord> window;
  for (const auto& r : records) {
    if (!r.warmup) window.push_back(r);
  }
  rep.n_requests = static_cast<std::int64_t>(window.size());
  for (const auto& r : window) {
    switch (r.status) {
      case RequestStatus::Resolved:
        ++rep.n_resolved;
        rep.n_correct += r.answer_correct ? 1 : 0;
        if (!r.concurrent_jump) {
          ++rep.n_clean;
          rep.n_clean_correct += r.answer_correct ? 1 : 0;
        }
        break;
      case RequestStatus::Failed:
        ++rep.n_failed;
        break;
      case RequestStatus::InFlight:
        ++rep.n_inflight;
        break;
    }
  }
  rep.total_messages = out.ledger->window_units();
  for (int k = 0; k < kMessageKindCount; ++k) {
    rep.by_kind[k] = out.ledger->window_units(static_cast<MessageKind>(k));
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.nb_msg = rep.n_requests > 0 ? compute_nb_msg(rep.total_messages, rep.n_requests) : nan;
  rep.rtime = (rep.n_resolved + rep.n_failed) > 0 ? compute_rtime(window) : nan;
  rep.measured_mob = config.duration > config.metric_dt
                         ? out.mobility->network_mobility(config.duration, config.metric_dt)
                         : 0.0;
  if (auto* c = dynamic_cast<CentralizedProtocol*>(protocol.get())) rep.handoffs = c->handoffs();
  if (auto* z = dynamic_cast<ZonedProtocol*>(protocol.get())) rep.handoffs = z->handoffs();

  std::int64_t kinds_sum = 0;
  for (auto v : rep.by_kind) kinds_sum += v;
  if (kinds_sum != rep.total_messages) {
    throw InvariantViolation("per-kind message breakdown does not add up to the total");
  }

  out.requests = std::move(records);
  if (options.trace_events) out.trace = engine.trace();
  return out;
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string format_result_row(const ScenarioConfig& cfg, const MetricsReport& r) {
  return format_result_row(cfg, r, std::to_string(cfg.seed), r.aborted ? "1" : "0");
}

std::string format_result_row(const ScenarioConfig& cfg, const MetricsReport& r,
                              std::string_view seed_field, std::string_view aborted_field) {
  std::string row;
  row += to_string(cfg.protocol);
  row += ',' + fmt(cfg.lambda);
  row += ',' + cfg.node_mob_label();
  row += ',' + fmt(r.measured_mob);
  row += ',' + std::string(to_string(cfg.code_band));
  row += ',' + std::string(seed_field);
  row += ',' + std::to_string(r.n_requests);
  row += ',' + std::to_string(r.n_failed);
  row += ',' + std::to_string(r.total_messages);
  row += ',' + fmt(r.nb_msg);
  row += ',' + fmt(r.rtime);
  row += ',' + std::string(aborted_field);
  return row;
}

void print_report(std::ostream& out, const ScenarioConfig& cfg, const MetricsReport& r) {
  out << "protocol        " << to_string(cfg.protocol) << '\n'
      << "lambda          " << cfg.lambda << " req/s\n"
      << "node mobility   " << cfg.node_mob_label() << " (measured Mob " << fmt(r.measured_mob)
      << ")\n"
      << "code band       " << to_string(cfg.code_band) << '\n'
      << "seed            " << cfg.seed << '\n'
      << "requests        " << r.n_requests << " (resolved " << r.n_resolved << ", failed "
      << r.n_failed << ", in flight " << r.n_inflight << ")\n"
      << "messages        " << r.total_messages << '\n'
      << "Nb_msg          " << fmt(r.nb_msg) << '\n'
      << "Rtime           " << fmt(r.rtime) << " s\n"
      << "server handoffs " << r.handoffs << '\n';
  if (r.aborted) out << "ABORTED         " << r.abort_reason << '\n';
  out << "by kind:\n";
  for (int k = 0; k < kMessageKindCount; ++k) {
    if (r.by_kind[k] == 0) continue;
    out << "  " << to_string(static_cast<MessageKind>(k)) << ' ' << r.by_kind[k] << '\n';
  }
}

}  // namespace mcloc
