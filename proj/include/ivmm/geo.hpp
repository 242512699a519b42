#pragma once

#include "ivmm/errors.hpp"

namespace ivmm {

/// Distance in meters. Always finite and non-negative; "no path exists" is
/// expressed by an absent value, never by a sentinel magnitude.
using Meters = double;

/// Mean radius of the sphere used for every geodesic computation.
inline constexpr double kEarthRadiusM = 6371008.8;

/// WGS-style coordinate pair in decimal degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint &a, const GeoPoint &b) {
    return a.lat == b.lat && a.lon == b.lon;
  }
};

/**
 * Great-circle distance between two points on the sphere (haversine form,
 * numerically stable for small separations). Zero iff the coordinate pairs
 * are identical.
 */
Meters geodesic_distance(const GeoPoint &a, const GeoPoint &b);

/// Result of dropping a point onto a segment.
struct Projection {
  GeoPoint foot;  ///< closest point on the segment
  Meters dist;    ///< geodesic distance from the query point to the foot
  double frac;    ///< position of the foot along the segment in [0, 1]
};

/**
 * Projects point p onto the segment [a, b]. The segment is treated as a
 * straight line in a local planar frame centered at p (equirectangular,
 * scaled by cos of the query latitude), which is accurate at street scale.
 * The foot is clamped to the segment, so frac is 0 at a, 1 at b.
 *
 * Throws DegenerateSegment when a and b coincide.
 */
Projection project_point_to_segment(const GeoPoint &p, const GeoPoint &a,
                                    const GeoPoint &b);

/// Point displaced by the given meters east and north of origin, in the same
/// local planar frame project_point_to_segment uses. Street-scale accuracy.
GeoPoint offset_by_meters(const GeoPoint &origin, double east_m, double north_m);

}  // namespace ivmm
