#include "ivmm/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ivmm {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

Meters geodesic_distance(const GeoPoint &a, const GeoPoint &b) {
  if (a == b) return 0.0;
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlam = (b.lon - a.lon) * kDegToRad;
  const double sp = std::sin(dphi / 2.0);
  const double sl = std::sin(dlam / 2.0);
  const double h = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

Projection project_point_to_segment(const GeoPoint &p, const GeoPoint &a,
                                    const GeoPoint &b) {
  if (a == b) {
    throw DegenerateSegment("segment endpoints coincide");
  }
  // Local planar frame centered at p. One degree of longitude shrinks with
  // cos(lat); one degree of latitude is constant on the sphere.
  const double mlat = kEarthRadiusM * kDegToRad;
  const double mlon = kEarthRadiusM * kDegToRad * std::cos(p.lat * kDegToRad);
  const double ax = (a.lon - p.lon) * mlon;
  const double ay = (a.lat - p.lat) * mlat;
  const double bx = (b.lon - p.lon) * mlon;
  const double by = (b.lat - p.lat) * mlat;
  const double dx = bx - ax;
  const double dy = by - ay;
  const double len2 = dx * dx + dy * dy;

  double t = 0.0;
  if (len2 > 0.0) {
    // p sits at the origin of the frame.
    t = std::clamp(-(ax * dx + ay * dy) / len2, 0.0, 1.0);
  }
  // A clamped foot is the endpoint itself, bit for bit, so feet that land on
  // a node shared between segments compare equal.
  GeoPoint foot;
  if (t == 0.0) {
    foot = a;
  } else if (t == 1.0) {
    foot = b;
  } else {
    foot = GeoPoint{a.lat + t * (b.lat - a.lat), a.lon + t * (b.lon - a.lon)};
  }
  return Projection{foot, geodesic_distance(p, foot), t};
}

GeoPoint offset_by_meters(const GeoPoint &origin, double east_m,
                          double north_m) {
  const double mlat = kEarthRadiusM * kDegToRad;
  const double mlon = kEarthRadiusM * kDegToRad * std::cos(origin.lat * kDegToRad);
  return GeoPoint{origin.lat + north_m / mlat, origin.lon + east_m / mlon};
}

}  // namespace ivmm
