#pragma once

#include <vector>

#include "ivmm/trellis.hpp"

namespace ivmm {

/// Connection between two consecutive anchors. A leg with no network path
/// is a gap: the route is interrupted and resumes at the next anchor.
struct RouteLeg {
  int from_ping = 0;
  int to_ping = 0;
  bool gap = false;
  NetworkPath path;  ///< meaningful only when !gap
  int node_count = 0;
};

/// The imputed route for one matched trajectory.
struct MatchedRoute {
  std::vector<Candidate> anchors;  ///< selected candidate per slice
  std::vector<RouteLeg> legs;      ///< one per consecutive slice pair
  Meters total_length = 0.0;       ///< sum over connected legs
  int gap_count = 0;
  /// Connected polyline runs; a new run starts after every gap.
  std::vector<std::vector<GeoPoint>> runs;
};

/**
 * Connects the selected candidates with the network paths already computed
 * for the trellis edges. Unreachable selected pairs become gaps, splitting
 * the geometry into runs. With reuse_trellis_paths false every leg is
 * recomputed with a fresh search; results are identical either way.
 */
MatchedRoute impute_route(const RoadNetwork &net, const TrellisGraph &trellis,
                          const std::vector<int> &selection,
                          bool reuse_trellis_paths = true);

}  // namespace ivmm
