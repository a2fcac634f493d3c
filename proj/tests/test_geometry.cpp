#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mcloc/geometry.hpp"
#include "mcloc/rng.hpp"

using namespace mcloc;

namespace {

// Independent oracle: sector index from the polar angle, boundaries to the
// lower-indexed adjacent zone.
int polar_zone(const Position& p, const Position& c, int n) {
  const double dx = p.x() - c.x(), dy = p.y() - c.y();
  if (dx == 0.0 && dy == 0.0) return 0;
  double a = std::atan2(dy, dx);
  if (a < 0) a += 2 * std::numbers::pi;
  const double alpha = 2 * std::numbers::pi / n;
  const double k = a / alpha;
  const int idx = static_cast<int>(std::floor(k));
  if (k == std::floor(k)) {
    // On ray idx: adjacent zones idx-1 and idx.
    return idx == 0 ? 0 : idx - 1;
  }
  return idx % n;
}

}  // namespace

TEST_CASE("centroid of a rectangle's corners") {
  PositionMatrix m(2, 4);
  m << 0, 10, 10, 0, 0, 0, 4, 4;
  const Position c = centroid(m);
  CHECK(c.x() == doctest::Approx(5.0));
  CHECK(c.y() == doctest::Approx(2.0));
  CHECK_THROWS_AS(centroid(PositionMatrix(2, 0)), ParameterError);
}

TEST_CASE("dist is Euclidean") {
  CHECK(dist(Position(0, 0), Position(3, 4)) == 5.0);
  CHECK(dist(Point2<float>(1, 1), Point2<float>(1, 1)) == 0.0f);
}

TEST_CASE("election picks the node nearest the reference, lowest id on ties") {
  PositionMatrix pos(2, 4);
  pos << 0, 2, 1, 1, 0, 0, 1, -1;
  const std::vector<NodeId> all{0, 1, 2, 3};
  // Nodes 2 and 3 are both at distance 1 from (1, 0); node 2 has the lower id.
  CHECK(elect_server(std::span<const NodeId>(all), pos, Position(1, 0)) == 0);  // 0,1 also tie at 1
  const std::vector<NodeId> some{3, 2};
  CHECK(elect_server(std::span<const NodeId>(some), pos, Position(1, 0)) == 2);
  CHECK(elect_server(std::span<const NodeId>(all), pos, Position(2.1, 0)) == 1);
}

TEST_CASE("election is scale invariant") {
  RngStream r(3, StreamLabel::Protocol);
  for (int trial = 0; trial < 100; ++trial) {
    PositionMatrix pos(2, 12);
    for (int i = 0; i < 12; ++i) pos.col(i) = Position(r.uniform(0, 1000), r.uniform(0, 500));
    std::vector<NodeId> ids(12);
    for (int i = 0; i < 12; ++i) ids[i] = i;
    const Position ref = centroid(pos);
    const double s = r.uniform(0.1, 10.0);
    const PositionMatrix scaled = s * pos;
    CHECK(elect_server(std::span<const NodeId>(ids), pos, ref) ==
          elect_server(std::span<const NodeId>(ids), scaled, Position(s * ref)));
  }
}

TEST_CASE("two-zone layout splits along the horizontal axis through the centre") {
  const ZoneLayout z(2, Position(500, 250));
  CHECK(z.alpha() == doctest::Approx(std::numbers::pi));
  CHECK(zone_of(Position(600, 300), z) == 0);
  CHECK(zone_of(Position(400, 200), z) == 1);
  // Boundary rays: angle 0 sits between zones 1 and 0, angle pi between 0 and 1.
  CHECK(zone_of(Position(700, 250), z) == 0);
  CHECK(zone_of(Position(300, 250), z) == 0);
  CHECK(zone_of(Position(500, 250), z) == 0);
  CHECK(z.ring_next(0) == 1);
  CHECK(z.ring_next(1) == 0);
}

TEST_CASE("zone_of matches the polar-angle oracle") {
  RngStream r(11, StreamLabel::Protocol);
  for (int n : {2, 3, 4, 8}) {
    const ZoneLayout z(n, Position(480, 260));
    int mismatches = 0;
    for (int i = 0; i < 2000; ++i) {
      const Position p(r.uniform(0, 1000), r.uniform(0, 500));
      mismatches += zone_of(p, z) != polar_zone(p, z.centre(), n);
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("strict sector membership excludes boundaries") {
  const ZoneLayout z(4, Position(0, 0));
  CHECK(z.strictly_inside(Position(1, 1), 0));
  CHECK_FALSE(z.strictly_inside(Position(1, 0), 0));
  CHECK_FALSE(z.strictly_inside(Position(0, 1), 0));
  CHECK(z.strictly_inside(Position(-1, 1), 1));
  CHECK(z.strictly_inside(Position(1, -1), 3));
  CHECK_THROWS_AS(ZoneLayout(0, Position(0, 0)), ParameterError);
}
