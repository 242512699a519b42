#pragma once

#include <unordered_map>
#include <vector>

#include "ivmm/network.hpp"
#include "ivmm/trajectory.hpp"

namespace ivmm {

/**
 * Uniform lat/lon grid over piece bounding boxes. query returns a superset
 * of the pieces within the radius; exact filtering happens in
 * generate_candidates.
 */
class SpatialIndex {
 public:
  SpatialIndex(const RoadNetwork &net, double cell_size_m);

  /// Piece indices whose grid cells intersect the radius box around p.
  std::vector<int> query(const GeoPoint &p, Meters radius) const;

 private:
  std::pair<std::int64_t, std::int64_t> cell_of(const GeoPoint &p) const;

  double cell_lat_deg_;
  double cell_lon_deg_;
  std::unordered_map<std::int64_t, std::vector<int>> cells_;
};

/// Builds the default index for a network (cell size of the query buffer).
SpatialIndex build_index(const RoadNetwork &net, double cell_size_m);

/**
 * Projects a ping onto every piece within alpha meters and keeps the best k.
 * Candidates are ordered by (distance, piece id); projections from pieces of
 * the same way that share an identical foot point collapse to the smallest
 * piece id. Returns an empty list when no piece lies within alpha.
 */
std::vector<Candidate> generate_candidates(const RoadNetwork &net,
                                           const SpatialIndex &index,
                                           const Ping &ping, Meters alpha,
                                           int k);

}  // namespace ivmm
