#pragma once

#include <string>
#include <vector>

#include "ivmm/trajectory.hpp"

namespace ivmm {

/// A trajectory discarded during loading, with the reason kept for reports.
struct DroppedTrajectory {
  std::string device_id;
  int pings = 0;
  std::string reason;
};

struct LoadResult {
  std::vector<Trajectory> trajectories;
  std::vector<DroppedTrajectory> dropped;
};

/**
 * Parses CSV with header device_id,lat,lon,timestamp_s[,speed_mps[,accuracy_m]].
 * Rows group by device in first-appearance order and sort by timestamp within
 * each device; a repeated timestamp for one device raises
 * NonMonotonicTimestamps. A time gap greater than split_gap_s starts a new
 * trajectory. Pieces shorter than minpings are dropped and reported.
 */
LoadResult parse_trajectories_text(const std::string &text, double split_gap_s,
                                   int minpings);

/// File wrapper around parse_trajectories_text. MalformedInput if unreadable.
LoadResult load_trajectories(const std::string &path, double split_gap_s,
                             int minpings);

/// Serializes trajectories back to the same CSV layout (speed column written
/// when any ping carries one). Used by the synthetic generator.
std::string serialize_trajectories(const std::vector<Trajectory> &trajectories);

/// Atomic file write of serialize_trajectories output.
void write_trajectories(const std::string &path,
                        const std::vector<Trajectory> &trajectories);

}  // namespace ivmm
