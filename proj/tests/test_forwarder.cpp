#include <doctest.h>

#include "support.hpp"

using namespace mcloc;
using namespace mcloc::testing;

TEST_CASE("jump leaves a forwarder on the old host") {
  ForwarderChain ch(0);
  ch.extend(5);
  ch.extend(7);
  CHECK(ch.stations() == std::vector<NodeId>{0, 5, 7});
  ch.extend(9);
  const auto e = ch.entry(0, 7);
  REQUIRE(e);
  CHECK(e->next == 9);
  CHECK(e->order == 2);
  CHECK_FALSE(ch.entry(0, 9));  // the host holds the code, not a forwarder
}

TEST_CASE("returning to a marked station cuts the loop") {
  ForwarderChain ch(0);
  for (NodeId n : {1, 2, 3}) ch.extend(n);
  ch.extend(1);
  CHECK(ch.stations() == std::vector<NodeId>{0, 1});
  ch.extend(0);
  CHECK(ch.stations() == std::vector<NodeId>{0});
}

TEST_CASE("splice inserts relays and removes loops") {
  ForwarderChain ch;
  ch.assign({0, 1, 2, 3});
  ch.splice(0, {4, 5}, 1);
  CHECK(ch.stations() == std::vector<NodeId>{0, 4, 5, 1, 2, 3});
  ch.splice(0, {2}, 5);
  CHECK(ch.stations() == std::vector<NodeId>{0, 2, 3});
  CHECK_THROWS_AS(ch.splice(2, {}, 1), SimError);
}

TEST_CASE("repair without a shortcut inserts intermediate stations") {
  // i=0, m=1, n=2 on a line; j=3 starts next to i and walks beyond n.
  std::vector<Trajectory> tr = stationary({Position(0, 0), Position(200, 0), Position(400, 0)});
  tr.push_back(moving(Position(100, 50), Position(600, 0), 1.0, 2.0));
  Bench b(std::move(tr));
  b.add_code(0);
  ForwarderProtocol p(b.world, false);
  p.start();
  b.jump(p, 0, 3, 0.5);
  CHECK(p.chain(0).stations() == std::vector<NodeId>{0, 3});

  const RepairOutcome r = p.repair(0, 0, kNoRequest, 5.0);
  CHECK(r.repaired);
  CHECK(r.target_order == 1);
  CHECK(p.chain(0).stations() == std::vector<NodeId>{0, 1, 2, 3});
  // ttl-3 flood: 0, 1, 2 transmit; 3 hears at depth 3. Reply: 3 hops.
  CHECK(b.units(MessageKind::ChainRepairFlood) == 3);
  CHECK(b.units(MessageKind::ChainRepairReply) == 3);
}

TEST_CASE("repair shortcuts to a higher-order station within reach") {
  // Chain i=0 -> j=1 -> k=2 (host). j drifts off; k is one hop from i.
  std::vector<Trajectory> tr;
  tr.push_back(Trajectory::stationary(Position(0, 0), 100.0));
  tr.push_back(moving(Position(200, 0), Position(350, 100), 1.0, 2.0));
  tr.push_back(Trajectory::stationary(Position(150, 150), 100.0));
  Bench b(std::move(tr));
  b.add_code(0);
  ForwarderProtocol p(b.world, false);
  p.start();
  b.jump(p, 0, 1, 0.2);
  b.jump(p, 0, 2, 0.4);
  CHECK(p.chain(0).links() == 2);

  const RepairOutcome r = p.repair(0, 0, kNoRequest, 5.0);
  CHECK(r.repaired);
  CHECK(r.target_order == 2);
  CHECK(p.chain(0).stations() == std::vector<NodeId>{0, 2});
}

TEST_CASE("repair fails when nothing downstream is reachable") {
  std::vector<Trajectory> tr = stationary({Position(0, 0)});
  tr.push_back(moving(Position(100, 0), Position(900, 400), 1.0, 2.0));
  Bench b(std::move(tr));
  b.add_code(0);
  ForwarderProtocol p(b.world, false);
  p.start();
  b.jump(p, 0, 1, 0.5);
  const RepairOutcome r = p.repair(0, 0, kNoRequest, 5.0);
  CHECK_FALSE(r.repaired);
  CHECK(p.chain(0).stations() == std::vector<NodeId>{0, 1});
}

TEST_CASE("intact chain costs one check per link per tick") {
  Bench b(stationary(line(5, 200.0)));
  b.add_code(0);
  ForwarderProtocol p(b.world, true);
  p.start();
  for (NodeId n = 1; n < 5; ++n) b.jump(p, 0, n, 0.1 * n);
  b.engine.run_until(3.5);  // ticks at 1, 2, 3
  CHECK(b.units(MessageKind::ChainCheck) == 3 * 4);
  CHECK(b.units(MessageKind::ChainRepairFlood) == 0);
}

TEST_CASE("reactive locate on an intact chain") {
  Bench b(stationary(line(3, 200.0)));
  b.add_code(0);
  ForwarderProtocol p(b.world, false);
  p.start();
  b.jump(p, 0, 1, 0.1);
  b.jump(p, 0, 2, 0.2);
  const RequestId id = b.requests.issue(0, 0, 1.0);
  b.engine.schedule(1.0, EventKind::RequestArrival, [&] { p.locate(id, 0, 0, 1.0); });
  b.engine.run_until(5.0);
  const RequestRecord& r = b.requests.get(id);
  CHECK(r.status == RequestStatus::Resolved);
  CHECK(r.answer_correct);
  CHECK(b.units(MessageKind::LocateRequest) == 2);
  CHECK(b.units(MessageKind::LocateReply) == 2);
  CHECK(*r.resolved_at() == doctest::Approx(1.04));
}

TEST_CASE("code at its mother answers without chain traffic") {
  Bench b(stationary(line(2, 200.0)));
  b.add_code(0);
  ForwarderProtocol p(b.world, false);
  p.start();
  const RequestId id = b.requests.issue(0, 0, 1.0);
  p.locate(id, 0, 0, 1.0);
  b.engine.run_until(2.0);
  CHECK(b.requests.get(id).status == RequestStatus::Resolved);
  CHECK(b.ledger.total_units() == 0);
}

TEST_CASE("reactive locate repairs in band and the next lookup uses the repaired chain") {
  std::vector<Trajectory> tr = stationary({Position(0, 0), Position(200, 0), Position(400, 0)});
  tr.push_back(moving(Position(100, 50), Position(600, 0), 1.0, 2.0));
  Bench b(std::move(tr));
  b.add_code(0);
  ForwarderProtocol p(b.world, false);
  p.start();
  b.jump(p, 0, 3, 0.5);
  const RequestId first = b.requests.issue(0, 0, 5.0);
  p.locate(first, 0, 0, 5.0);
  b.engine.run_until(6.0);
  CHECK(b.requests.get(first).status == RequestStatus::Resolved);
  CHECK(p.chain(0).stations() == std::vector<NodeId>{0, 1, 2, 3});

  const auto floods = b.units(MessageKind::ChainRepairFlood);
  const RequestId second = b.requests.issue(0, 0, 7.0);
  p.locate(second, 0, 0, 7.0);
  b.engine.run_until(8.0);
  CHECK(b.requests.get(second).status == RequestStatus::Resolved);
  CHECK(b.units(MessageKind::ChainRepairFlood) == floods);
}

TEST_CASE("proactive locate waits for the next check tick on a broken link") {
  std::vector<Trajectory> tr = stationary({Position(0, 0), Position(200, 0)});
  tr.push_back(moving(Position(100, 50), Position(400, 0), 2.1, 2.2));
  Bench b(std::move(tr));
  b.add_code(0);
  ForwarderProtocol p(b.world, true);
  p.start();
  b.jump(p, 0, 2, 0.5);
  const RequestId id = b.requests.issue(0, 0, 2.5);
  b.engine.schedule(2.5, EventKind::RequestArrival, [&] { p.locate(id, 0, 0, 2.5); });
  b.engine.run_until(10.0);
  const RequestRecord& r = b.requests.get(id);
  REQUIRE(r.status == RequestStatus::Resolved);
  CHECK(*r.resolved_at() > 3.0);
  CHECK(p.chain(0).stations() == std::vector<NodeId>{0, 1, 2});
  CHECK_NOTHROW(p.check_invariants(10.0));
}

TEST_CASE("migration picks a neighbour or stays when isolated") {
  Bench b(stationary({Position(0, 0), Position(100, 0), Position(900, 400)}));
  b.add_code(0);
  b.add_code(2);
  ForwarderProtocol p(b.world, false);
  p.start();
  RngStream rng(1, StreamLabel::CodeMigration);
  CHECK(code_migrate(b.world, p, 0, rng, 1.0) == 1);
  CHECK(p.chain(0).stations() == std::vector<NodeId>{0, 1});
  CHECK(code_migrate(b.world, p, 1, rng, 1.0) == 2);
  CHECK(p.chain(1).stations() == std::vector<NodeId>{2});
}
