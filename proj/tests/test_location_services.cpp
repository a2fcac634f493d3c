#include <doctest.h>

#include "mcloc/location_services.hpp"
#include "support.hpp"

using namespace mcloc;
using namespace mcloc::testing;

TEST_CASE("rls: neighbour found in the first phase for two units") {
  Bench b(stationary(line(3, 200.0)));
  const RlsResult r = rls_locate(b.radio, 0, 1, kNoRequest, 0.0);
  CHECK(r.found);
  CHECK(r.route_hops == 1);
  CHECK(r.message_units == 2);
  CHECK(b.ledger.total_units() == 2);
}

TEST_CASE("rls: distant target needs the network flood") {
  Bench b(stationary(line(5, 200.0)));
  const RlsResult r = rls_locate(b.radio, 0, 3, kNoRequest, 0.0);
  CHECK(r.found);
  CHECK(r.route_hops == 3);
  // Phase 1: 1 unit. Phase 2: all 5 nodes transmit. Reply: 3 hops.
  CHECK(r.message_units == 1 + 5 + 3);
  CHECK(b.ledger.total_units() == r.message_units);
}

TEST_CASE("rls: disconnected target is not found") {
  Bench b(stationary({Position(0, 0), Position(200, 0), Position(900, 0)}));
  const RlsResult r = rls_locate(b.radio, 0, 2, kNoRequest, 0.0);
  CHECK_FALSE(r.found);
  CHECK(r.done_at > 0.0);
}

TEST_CASE("registry: zone crossing inserts at the new server and deletes at the old") {
  // Zone servers 0 (north) and 1 (south) around centre (0, 0); node 2 moves south.
  std::vector<Trajectory> tr = stationary({Position(0, 100), Position(0, -100)});
  tr.push_back(moving(Position(100, 50), Position(100, -50), 10.0, 11.0));
  Bench b(std::move(tr));
  const ZoneLayout layout(2, Position(0, 0));
  const ZoneDirectory dir{&layout, {0, 1}};
  PositionRegistry reg(2, b.engine, b.radio);

  CHECK(reg.report(2, 0.0, dir) == ReportOutcome::Refreshed);
  b.engine.run_until(1.0);
  REQUIRE(reg.lookup(0, 2));
  CHECK(reg.lookup(0, 2)->reported_at == 0.0);
  CHECK_FALSE(reg.lookup(1, 2));

  b.engine.run_until(12.0);
  CHECK(reg.report(2, 12.0, dir) == ReportOutcome::Moved);
  b.engine.run_until(13.0);
  CHECK_FALSE(reg.lookup(0, 2));
  REQUIRE(reg.lookup(1, 2));
  CHECK(reg.lookup(1, 2)->zone == 1);
  CHECK(reg.holders(2) == 1);
}

TEST_CASE("registry: entries obey the kinematic staleness bound") {
  std::vector<Trajectory> tr = stationary({Position(0, 100)});
  tr.push_back(moving(Position(50, 50), Position(200, 50), 0.0, 30.0));
  Bench b(std::move(tr));
  const ZoneLayout layout(2, Position(0, 0));
  const ZoneDirectory dir{&layout, {0, 0}};
  PositionRegistry reg(2, b.engine, b.radio);
  reg.report(1, 5.0, dir);
  b.engine.run_until(6.0);
  const auto e = reg.lookup(0, 1);
  REQUIRE(e);
  CHECK(e->reported_at == 5.0);
  const double vmax = b.mobility.max_speed();
  for (double t = 6.0; t < 30.0; t += 1.0) {
    CHECK((b.mobility.position_at(1, t) - e->last_position).norm() <=
          vmax * (t - e->reported_at) + 1e-9);
  }
}

TEST_CASE("registry: unreachable server drops the report") {
  Bench b(stationary({Position(0, 100), Position(600, 100)}));
  const ZoneLayout layout(2, Position(0, 0));
  const ZoneDirectory dir{&layout, {0, 0}};
  PositionRegistry reg(2, b.engine, b.radio);
  CHECK(reg.report(1, 0.0, dir) == ReportOutcome::Dropped);
  CHECK_FALSE(reg.registered_zone(1));
}
