#pragma once

// Scripted scenarios on hand-placed nodes.

#include <memory>
#include <vector>

#include "mcloc/engine.hpp"
#include "mcloc/mobility.hpp"
#include "mcloc/protocols.hpp"
#include "mcloc/radio.hpp"
#include "mcloc/requests.hpp"
#include "mcloc/rng.hpp"

namespace mcloc::testing {

inline std::vector<Trajectory> stationary(const std::vector<Position>& where,
                                          SimTime horizon = 100.0) {
  std::vector<Trajectory> out;
  for (const auto& p : where) out.push_back(Trajectory::stationary(p, horizon));
  return out;
}

/// Straight move from a to b during [t0, t1], stationary otherwise.
inline Trajectory moving(const Position& a, const Position& b, SimTime t0, SimTime t1,
                         SimTime horizon = 100.0) {
  const double speed = (b - a).norm() / (t1 - t0);
  return Trajectory(
      {Leg{0.0, t0, a, a, 0.0}, Leg{t0, t1, a, b, speed}, Leg{t1, horizon, b, b, 0.0}});
}

/// Nodes on the x axis, `spacing` metres apart.
inline std::vector<Position> line(int n, double spacing) {
  std::vector<Position> out;
  for (int i = 0; i < n; ++i) out.emplace_back(i * spacing, 0.0);
  return out;
}

struct Bench {
  explicit Bench(std::vector<Trajectory> traj, ProtocolParams params = {})
      : mobility(std::move(traj)),
        ledger(0.0),
        radio(mobility, RadioParams{}, ledger),
        rng(7, StreamLabel::Protocol),
        world{engine, mobility, radio, rng, codes, requests, params} {}

  void add_code(NodeId mother) {
    MobileCode c;
    c.code_id = static_cast<CodeId>(codes.size());
    c.mother = c.host = mother;
    codes.push_back(c);
  }

  /// Rehosts the code the way code_migrate does, without drawing a neighbour.
  void jump(Protocol& p, CodeId code, NodeId to, SimTime t) {
    const NodeId from = codes[code].host;
    codes[code].host = to;
    ++codes[code].jumps;
    requests.note_jump(code);
    p.on_code_moved(code, from, to, t);
  }

  std::int64_t units(MessageKind k) const {
    std::int64_t n = 0;
    for (const auto& r : ledger.records()) n += r.kind == k ? r.hops : 0;
    return n;
  }

  Engine engine;
  Mobility mobility;
  MessageLedger ledger;
  Radio radio;
  RngStream rng;
  std::vector<MobileCode> codes;
  RequestTracker requests;
  World world;
};

}  // namespace mcloc::testing
