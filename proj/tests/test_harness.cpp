#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "mcloc/scenario.hpp"
#include "mcloc/sweep.hpp"

using namespace mcloc;

namespace {

ScenarioConfig small(ProtocolKind p, std::uint64_t seed = 3) {
  ScenarioConfig c;
  c.protocol = p;
  c.duration = 60.0;
  c.lambda = 0.5;
  c.seed = seed;
  c.disconnect_grace = 1e9;
  return c;
}

RequestRecord finished(SimTime issued, SimTime done, RequestStatus st = RequestStatus::Resolved) {
  RequestRecord r;
  r.issued_at = issued;
  r.finished_at = done;
  r.status = st;
  return r;
}

}  // namespace

TEST_CASE("Nb_msg is the plain quotient") {
  CHECK(compute_nb_msg(300, 10) == 30.0);
  CHECK(compute_nb_msg(0, 5) == 0.0);
  CHECK_THROWS_AS(compute_nb_msg(10, 0), UndefinedMetric);
}

TEST_CASE("Rtime averages completed requests") {
  CHECK(compute_rtime({finished(0, 1), finished(5, 8)}) == 2.0);
  CHECK(compute_rtime({finished(4, 4), finished(7, 7)}) == 0.0);
  CHECK(compute_rtime({finished(0, 1), finished(2, 7, RequestStatus::Failed)}) == 3.0);
  RequestRecord open;
  open.status = RequestStatus::InFlight;
  CHECK_THROWS_AS(compute_rtime({open}), UndefinedMetric);
}

TEST_CASE("request tracker rejects double completion") {
  RequestTracker t(10.0);
  const RequestId a = t.issue(0, 1, 5.0);
  const RequestId b = t.issue(0, 1, 12.0);
  CHECK(t.get(a).warmup);
  CHECK_FALSE(t.get(b).warmup);
  t.resolve(b, 13.0);
  CHECK_THROWS_AS(t.fail(b, 14.0), InvariantViolation);
  t.note_jump(0);
  CHECK(t.get(a).concurrent_jump);
  CHECK_FALSE(t.get(b).concurrent_jump);
}

TEST_CASE("config parsing, overrides and round trip") {
  std::istringstream in(
      "# comment\n"
      "protocol = zoned   # trailing comment\n"
      "n_zones = 3\n"
      "area = 800x400\n"
      "node_speed = 2,7\n"
      "lambda = 1\n"
      "seed = 99\n");
  ScenarioConfig c = parse_config(in);
  CHECK(c.protocol == ProtocolKind::Zoned);
  CHECK(c.n_zones == 3);
  CHECK(c.area.width == 800.0);
  CHECK(c.effective_speed() == SpeedRange{2.0, 7.0});
  CHECK(c.node_mob_label() == "custom");
  CHECK(c.seed == 99);

  std::ostringstream out;
  write_config(out, c);
  std::istringstream back(out.str());
  const ScenarioConfig d = parse_config(back);
  std::ostringstream again;
  write_config(again, d);
  CHECK(again.str() == out.str());
}

TEST_CASE("invalid configs are rejected before running") {
  ScenarioConfig c;
  CHECK_THROWS_AS(c.set("colour", "blue"), ParameterError);
  CHECK_THROWS_AS(c.set("lambda", "fast"), ParameterError);
  c.lambda = 0.0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = ScenarioConfig{};
  c.protocol = ProtocolKind::Zoned;
  c.n_zones = 1;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  CHECK_THROWS_AS(run_scenario(c), ParameterError);
  std::istringstream bad("n_nodes 25\n");
  CHECK_THROWS_AS(parse_config(bad), ParameterError);
}

TEST_CASE("calibrated speed presets are ordered") {
  const auto lo = speed_preset(MobilityBand::Low);
  const auto mid = speed_preset(MobilityBand::Medium);
  const auto hi = speed_preset(MobilityBand::High);
  CHECK(lo.second <= mid.second);
  CHECK(mid.second <= hi.second);
  CHECK(lo.first > 0.0);
}

TEST_CASE("zero duration gives no requests and undefined metrics") {
  ScenarioConfig c = small(ProtocolKind::ForwarderReactive);
  c.duration = 0.0;
  const RunResult r = run_scenario(c);
  CHECK(r.report.n_requests == 0);
  CHECK(std::isnan(r.report.nb_msg));
  CHECK(std::isnan(r.report.rtime));
}

TEST_CASE("every protocol: closure, conservation and replay") {
  for (ProtocolKind p : {ProtocolKind::ForwarderReactive, ProtocolKind::ForwarderProactive,
                         ProtocolKind::Centralized, ProtocolKind::Zoned}) {
    CAPTURE(to_string(p));
    const ScenarioConfig c = small(p);
    const RunResult a = run_scenario(c);
    const RunResult b = run_scenario(c);
    const MetricsReport& r = a.report;
    CHECK(format_result_row(c, r) == format_result_row(c, b.report));

    // Recount from the raw log.
    std::int64_t recount = 0;
    std::map<int, std::int64_t> per_kind;
    for (const auto& m : a.ledger->records()) {
      if (m.t >= c.warmup) {
        recount += m.hops;
        per_kind[static_cast<int>(m.kind)] += m.hops;
      }
    }
    CHECK(r.total_messages == recount);
    for (int k = 0; k < kMessageKindCount; ++k) CHECK(r.by_kind[k] == per_kind[k]);

    CHECK(r.n_requests == r.n_resolved + r.n_failed + r.n_inflight);
    CHECK(r.n_requests > 0);
    CHECK(r.nb_msg * static_cast<double>(r.n_requests) ==
          doctest::Approx(static_cast<double>(r.total_messages)));

    // Rtime from the request log.
    double sum = 0.0;
    int n = 0;
    for (const auto& q : a.requests) {
      if (q.warmup || q.status == RequestStatus::InFlight) continue;
      sum += q.finished_at - q.issued_at;
      ++n;
    }
    CHECK(r.rtime == doctest::Approx(sum / n));
    CHECK(r.n_correct <= r.n_resolved);
  }
}

TEST_CASE("node trajectories do not depend on the load") {
  ScenarioConfig a = small(ProtocolKind::Centralized);
  ScenarioConfig b = a;
  b.lambda = 2.0;
  b.protocol = ProtocolKind::Zoned;
  const RunResult ra = run_scenario(a), rb = run_scenario(b);
  for (NodeId n = 0; n < ra.mobility->size(); n += 5) {
    CHECK(ra.mobility->position_at(n, 33.3) == rb.mobility->position_at(n, 33.3));
  }
  CHECK(ra.report.measured_mob == rb.report.measured_mob);
}

TEST_CASE("prolonged disconnection aborts the run") {
  ScenarioConfig c;
  c.n_nodes = 4;
  c.area = Area{2000.0, 2000.0};
  c.duration = 100.0;
  c.disconnect_grace = 5.0;
  const RunResult r = run_scenario(c);
  CHECK(r.report.aborted);
  CHECK_FALSE(r.report.abort_reason.empty());
  CHECK(format_result_row(c, r.report).ends_with(",1"));
}

TEST_CASE("sweep: thread count and axis order leave results unchanged") {
  ScenarioConfig base = small(ProtocolKind::ForwarderReactive);
  SweepAxes axes = SweepAxes::from_base(base);
  axes.protocols = {ProtocolKind::ForwarderReactive, ProtocolKind::Zoned};
  axes.lambdas = {0.25, 1.0};
  axes.seeds = {1, 2};

  std::ostringstream one, four;
  write_sweep_csv(one, run_sweep(base, axes, 1));
  write_sweep_csv(four, run_sweep(base, axes, 4));
  CHECK(one.str() == four.str());

  SweepAxes shuffled = axes;
  shuffled.protocols = {ProtocolKind::Zoned, ProtocolKind::ForwarderReactive};
  shuffled.lambdas = {1.0, 0.25};
  std::map<std::string, double> x, y;
  for (const auto& c : run_sweep(base, axes, 2)) {
    x[std::string(to_string(c.config.protocol)) + std::to_string(c.config.lambda)] = c.mean.nb_msg;
  }
  for (const auto& c : run_sweep(base, shuffled, 2)) {
    y[std::string(to_string(c.config.protocol)) + std::to_string(c.config.lambda)] = c.mean.nb_msg;
  }
  CHECK(x == y);

  std::istringstream rows(one.str());
  std::string line;
  std::getline(rows, line);
  CHECK(line == kResultsHeader);
  int per_seed = 0, means = 0;
  while (std::getline(rows, line)) (line.find(",mean,") != std::string::npos ? means : per_seed)++;
  CHECK(per_seed == 8);
  CHECK(means == 4);
}

TEST_CASE("single-point sweep equals a direct run") {
  const ScenarioConfig base = small(ProtocolKind::Centralized, 4);
  const auto cells = run_sweep(base, SweepAxes::from_base(base), 1);
  REQUIRE(cells.size() == 1);
  CHECK(format_result_row(base, cells[0].per_seed[0]) ==
        format_result_row(base, run_scenario(base).report));
}
