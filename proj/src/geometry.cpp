#include "mcloc/geometry.hpp"

#include <algorithm>

namespace mcloc {

ZoneLayout::ZoneLayout(int n_zones, Position centre)
    : n_zones_(n_zones), centre_(std::move(centre)) {
  if (n_zones < 1) throw ParameterError("zone layout needs at least one zone");
  alpha_ = 2.0 * std::numbers::pi / n_zones;
  if (n_zones >= 2 && !(alpha_ > 0.0 && alpha_ <= std::numbers::pi)) {
    throw ParameterError("zone angle must satisfy 0 < alpha <= pi");
  }
}

bool ZoneLayout::strictly_inside(const Position& p, int zone) const {
  const double dx = p.x() - centre_.x();
  const double dy = p.y() - centre_.y();
  const double b1 = beta1(zone);
  const double b2 = beta2(zone);
  // sin/cos of multiples of pi are not exactly 0 or 1 in floating point;
  // the margin keeps points on a ray out of both adjacent sectors.
  const double eps = 1e-12 * (std::abs(dx) + std::abs(dy));
  return dy * std::cos(b1) - dx * std::sin(b1) > eps && dx * std::sin(b2) - dy * std::cos(b2) > eps;
}

int zone_of(const Position& p, const ZoneLayout& layout) {
  const int n = layout.n_zones();
  if (n == 1) return 0;
  if (p == layout.centre()) return 0;
  for (int z = 0; z < n; ++z) {
    if (layout.strictly_inside(p, z)) return z;
  }
  // On a boundary ray: find the nearest ray index and take the lower of its
  // two adjacent zones.
  const Position d = p - layout.centre();
  double theta = std::atan2(d.y(), d.x());
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  const int ray = static_cast<int>(std::lround(theta / layout.alpha())) % n;
  return std::min((ray + n - 1) % n, ray);
}

}  // namespace mcloc
