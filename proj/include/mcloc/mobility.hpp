#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "mcloc/geometry.hpp"
#include "mcloc/rng.hpp"
#include "mcloc/types.hpp"

namespace mcloc {

struct Area {
  double width = 1000.0;
  double height = 500.0;

  bool contains(const Position& p) const {
    return p.x() >= 0.0 && p.x() <= width && p.y() >= 0.0 && p.y() <= height;
  }
};

/// One straight segment of motion, or a pause when from == to.
struct Leg {
  SimTime depart_at;
  SimTime arrive_at;
  Position from;
  Position to;
  double speed;  // 0 for pauses
};

/// Piecewise-linear trajectory covering [0, horizon].
class Trajectory {
 public:
  explicit Trajectory(std::vector<Leg> legs);

  static Trajectory stationary(const Position& p, SimTime horizon);

  Position at(SimTime t) const;
  SimTime horizon() const { return legs_.back().arrive_at; }
  const std::vector<Leg>& legs() const { return legs_; }

 private:
  std::vector<Leg> legs_;
};

struct WaypointParams {
  Area area;
  double speed_min = 1.0;
  double speed_max = 5.0;
  double pause = 0.0;
};

enum class MobilityBand { Low, Medium, High };

std::string_view to_string(MobilityBand band);
MobilityBand parse_mobility_band(std::string_view text);

/// Low: (0, 3], Medium: (3, 8], High: (8, inf). Throws ParameterError for mob <= 0.
MobilityBand classify_mobility(double mob);

/// Trajectories of every node plus the relative-motion metrics derived from them.
class Mobility {
 public:
  explicit Mobility(std::vector<Trajectory> trajectories);

  /// Random Waypoint trajectories for n nodes, generated through `horizon`.
  static Mobility random_waypoint(int n_nodes, const WaypointParams& params, SimTime horizon,
                                  RngStream& rng);

  int size() const { return static_cast<int>(trajectories_.size()); }
  SimTime horizon() const { return horizon_; }
  double max_speed() const { return max_speed_; }
  const Trajectory& trajectory(NodeId node) const;

  Position position_at(NodeId node, SimTime t) const;
  PositionMatrix snapshot(SimTime t) const;

  /// Mean distance from `node` to every other node at t.
  double avg_separation(NodeId node, SimTime t) const;
  /// Mean absolute change of avg_separation over steps of dt, normalised by T - dt.
  double node_mobility(NodeId node, SimTime T, SimTime dt) const;
  /// Mean of node_mobility over all nodes.
  double network_mobility(SimTime T, SimTime dt) const;

  /// Writes node_id,t,x,y rows sampled every dt over [0, T].
  void dump_csv(std::ostream& out, SimTime T, SimTime dt) const;

 private:
  std::vector<double> separations(SimTime t) const;
  static int sample_count(SimTime T, SimTime dt);

  std::vector<Trajectory> trajectories_;
  SimTime horizon_ = 0.0;
  double max_speed_ = 0.0;
};

}  // namespace mcloc
