#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivmm/geo.hpp"

namespace ivmm {

/// One GPS fix. index is the 0-based position within its trajectory;
/// timestamps are strictly increasing within a trajectory.
struct Ping {
  int index = 0;
  GeoPoint point;
  double timestamp_s = 0.0;
  std::optional<double> speed_mps;
  std::optional<Meters> accuracy_m;
};

/// An ordered sequence of pings from one device.
struct Trajectory {
  std::string device_id;
  std::vector<Ping> pings;
};

/// A projection of one ping onto one road piece, ranked within its ping.
struct Candidate {
  int ping_index = 0;       ///< index of the ping this candidate belongs to
  int candidate_index = 0;  ///< rank within the ping's candidate list
  std::int64_t piece_id = 0;
  int piece_index = 0;  ///< position of the piece in the owning network
  GeoPoint foot;        ///< projection foot point on the piece
  double frac = 0.0;    ///< foot position along the piece in [0, 1]
  Meters dist = 0.0;    ///< geodesic distance ping -> foot
};

}  // namespace ivmm
