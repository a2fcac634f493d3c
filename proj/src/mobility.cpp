#include "mcloc/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace mcloc {

namespace {
constexpr double kTimeSlack = 1e-9;
}

Trajectory::Trajectory(std::vector<Leg> legs) : legs_(std::move(legs)) {
  if (legs_.empty()) throw ParameterError("trajectory needs at least one leg");
  if (legs_.front().depart_at != 0.0) throw ParameterError("trajectory must start at t = 0");
  for (std::size_t i = 0; i < legs_.size(); ++i) {
    const Leg& l = legs_[i];
    if (l.arrive_at < l.depart_at) throw ParameterError("leg ends before it starts");
    if (i > 0 && legs_[i - 1].arrive_at != l.depart_at) {
      throw ParameterError("trajectory legs must be contiguous in time");
    }
  }
}

Trajectory Trajectory::stationary(const Position& p, SimTime horizon) {
  return Trajectory({Leg{0.0, horizon, p, p, 0.0}});
}

Position Trajectory::at(SimTime t) const {
  if (t < -kTimeSlack || t > horizon() + kTimeSlack) {
    throw SimError("trajectory queried at t=" + std::to_string(t) + " outside [0, " +
                   std::to_string(horizon()) + "]");
  }
  auto it = std::upper_bound(legs_.begin(), legs_.end(), t,
                             [](SimTime v, const Leg& l) { return v < l.arrive_at; });
  if (it == legs_.end()) return legs_.back().to;
  const Leg& l = *it;
  const double span = l.arrive_at - l.depart_at;
  if (span <= 0.0) return l.to;
  const double f = std::clamp((t - l.depart_at) / span, 0.0, 1.0);
  return l.from + f * (l.to - l.from);
}

std::string_view to_string(MobilityBand band) {
  switch (band) {
    case MobilityBand::Low:
      return "low";
    case MobilityBand::Medium:
      return "medium";
    case MobilityBand::High:
      return "high";
  }
  return "?";
}

MobilityBand parse_mobility_band(std::string_view text) {
  if (text == "low") return MobilityBand::Low;
  if (text == "medium") return MobilityBand::Medium;
  if (text == "high") return MobilityBand::High;
  throw ParameterError("unknown mobility band '" + std::string(text) + "'");
}

MobilityBand classify_mobility(double mob) {
  if (!(mob > 0.0)) throw ParameterError("mobility must be positive to classify");
  if (mob <= 3.0) return MobilityBand::Low;
  if (mob <= 8.0) return MobilityBand::Medium;
  return MobilityBand::High;
}

Mobility::Mobility(std::vector<Trajectory> trajectories) : trajectories_(std::move(trajectories)) {
  if (trajectories_.empty()) throw ParameterError("mobility model needs at least one node");
  horizon_ = std::numeric_limits<double>::infinity();
  for (const auto& tr : trajectories_) {
    horizon_ = std::min(horizon_, tr.horizon());
    for (const auto& l : tr.legs()) max_speed_ = std::max(max_speed_, l.speed);
  }
}

Mobility Mobility::random_waypoint(int n_nodes, const WaypointParams& params, SimTime horizon,
                                   RngStream& rng) {
  if (n_nodes < 1) throw ParameterError("need at least one node");
  if (!(params.speed_min > 0.0) || params.speed_max < params.speed_min) {
    throw ParameterError("speed interval must satisfy 0 < speed_min <= speed_max");
  }
  if (params.pause < 0.0) throw ParameterError("pause must be non-negative");
  const Area& a = params.area;
  std::vector<Trajectory> out;
  out.reserve(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    std::vector<Leg> legs;
    Position here(rng.uniform(0.0, a.width), rng.uniform(0.0, a.height));
    SimTime t = 0.0;
    while (t < horizon) {
      Position dest(rng.uniform(0.0, a.width), rng.uniform(0.0, a.height));
      const double speed = rng.uniform(params.speed_min, params.speed_max);
      const double travel = dist(here, dest) / speed;
      legs.push_back(Leg{t, t + travel, here, dest, speed});
      t += travel;
      here = dest;
      if (params.pause > 0.0) {
        legs.push_back(Leg{t, t + params.pause, here, here, 0.0});
        t += params.pause;
      }
    }
    out.emplace_back(std::move(legs));
  }
  return Mobility(std::move(out));
}

const Trajectory& Mobility::trajectory(NodeId node) const {
  if (node < 0 || node >= size()) throw SimError("unknown node id " + std::to_string(node));
  return trajectories_[node];
}

Position Mobility::position_at(NodeId node, SimTime t) const { return trajectory(node).at(t); }

PositionMatrix Mobility::snapshot(SimTime t) const {
  PositionMatrix m(2, size());
  for (int i = 0; i < size(); ++i) m.col(i) = trajectories_[i].at(t);
  return m;
}

double Mobility::avg_separation(NodeId node, SimTime t) const {
  if (size() < 2) throw UndefinedMetric("average separation needs at least two nodes");
  const Position p = position_at(node, t);
  const PositionMatrix all = snapshot(t);
  const double total = (all.colwise() - p).colwise().norm().sum();
  return total / (size() - 1);
}

std::vector<double> Mobility::separations(SimTime t) const {
  const PositionMatrix all = snapshot(t);
  std::vector<double> a(size());
  for (int i = 0; i < size(); ++i) {
    a[i] = (all.colwise() - all.col(i)).colwise().norm().sum() / (size() - 1);
  }
  return a;
}

int Mobility::sample_count(SimTime T, SimTime dt) {
  if (!(dt > 0.0) || !(T > dt)) throw ParameterError("mobility metric needs T > dt > 0");
  return static_cast<int>(std::floor((T - dt) / dt + 1e-9)) + 1;
}

double Mobility::node_mobility(NodeId node, SimTime T, SimTime dt) const {
  const int samples = sample_count(T, dt);
  if (size() < 2) throw UndefinedMetric("node mobility needs at least two nodes");
  double sum = 0.0;
  double prev = avg_separation(node, 0.0);
  for (int k = 0; k < samples; ++k) {
    const double next = avg_separation(node, (k + 1) * dt);
    sum += std::abs(next - prev);
    prev = next;
  }
  return sum / (T - dt);
}

double Mobility::network_mobility(SimTime T, SimTime dt) const {
  const int samples = sample_count(T, dt);
  if (size() < 2) throw UndefinedMetric("network mobility needs at least two nodes");
  std::vector<double> sums(size(), 0.0);
  std::vector<double> prev = separations(0.0);
  for (int k = 0; k < samples; ++k) {
    std::vector<double> next = separations((k + 1) * dt);
    for (int i = 0; i < size(); ++i) sums[i] += std::abs(next[i] - prev[i]);
    prev = std::move(next);
  }
  double total = 0.0;
  for (double s : sums) total += s / (T - dt);
  return total / size();
}

void Mobility::dump_csv(std::ostream& out, SimTime T, SimTime dt) const {
  const auto old_precision = out.precision(12);
  out << "node_id,t,x,y\n";
  const int steps = static_cast<int>(std::floor(T / dt + 1e-9));
  for (int i = 0; i < size(); ++i) {
    for (int k = 0; k <= steps; ++k) {
      const SimTime t = k * dt;
      const Position p = position_at(i, t);
      out << i << ',' << t << ',' << p.x() << ',' << p.y() << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace mcloc
