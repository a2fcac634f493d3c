#pragma once

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "mcloc/types.hpp"

namespace mcloc {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

/// Planar position in meters.
using Position = Point2<double>;

/// Column i holds the position of node i.
template <typename Scalar>
using Positions2 = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;
using PositionMatrix = Positions2<double>;

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dist(const Eigen::MatrixBase<DerivedA>& p,
                               const Eigen::MatrixBase<DerivedB>& q) {
  return (p - q).norm();
}

/// Centre of gravity: component-wise mean of the columns.
template <typename Derived>
Point2<typename Derived::Scalar> centroid(const Eigen::MatrixBase<Derived>& points) {
  static_assert(Derived::RowsAtCompileTime == 2, "centroid expects a 2xN matrix");
  if (points.cols() == 0) throw ParameterError("centroid of an empty set");
  return points.rowwise().mean();
}

inline Position centroid(std::span<const Position> points) {
  if (points.empty()) throw ParameterError("centroid of an empty set");
  Position sum = Position::Zero();
  for (const auto& p : points) sum += p;
  return sum / static_cast<double>(points.size());
}

/// Candidate closest to `reference`; ties go to the lowest node id.
/// `positions` is indexed by node id.
template <typename Derived>
NodeId elect_server(std::span<const NodeId> candidates, const Eigen::MatrixBase<Derived>& positions,
                    const Point2<typename Derived::Scalar>& reference) {
  if (candidates.empty()) throw SimError("elect_server: empty candidate set");
  NodeId best = candidates.front();
  auto best_d = (positions.col(best) - reference).squaredNorm();
  for (NodeId c : candidates.subspan(1)) {
    const auto d = (positions.col(c) - reference).squaredNorm();
    if (d < best_d || (d == best_d && c < best)) {
      best = c;
      best_d = d;
    }
  }
  return best;
}

/// Angular partition of the plane around a centre into equal sectors.
/// Zone k is bounded by the rays at k*alpha and (k+1)*alpha.
class ZoneLayout {
 public:
  /// n_zones == 1 gives the degenerate single-zone layout.
  ZoneLayout(int n_zones, Position centre);

  int n_zones() const { return n_zones_; }
  double alpha() const { return alpha_; }
  const Position& centre() const { return centre_; }
  double beta1(int zone) const { return alpha_ * zone; }
  double beta2(int zone) const { return alpha_ * (zone + 1); }
  int ring_next(int zone) const { return (zone + 1) % n_zones_; }

  /// True when p satisfies both strict sector inequalities of `zone`.
  bool strictly_inside(const Position& p, int zone) const;

 private:
  int n_zones_;
  double alpha_;
  Position centre_;
};

/// Zone containing p. Points on a boundary ray go to the lower-indexed of
/// the two adjacent zones; the centre itself goes to zone 0.
int zone_of(const Position& p, const ZoneLayout& layout);

}  // namespace mcloc
