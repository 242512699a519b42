#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ivmm/netbuild.hpp"
#include "ivmm/trajectory.hpp"

namespace ivmm {

/// Settings for the synthetic network and trajectory generator. Everything
/// is derived from seed, so equal settings give byte-identical outputs.
struct SynthParams {
  int rows = 5;             ///< grid node rows
  int cols = 5;             ///< grid node columns
  double spacing_m = 100.0; ///< distance between neighboring grid nodes
  GeoPoint origin{33.40, -112.00};
  int n_trajectories = 10;
  int pings_per_trajectory = 50;
  double interval_s = 10.0;  ///< sampling interval
  double noise_sigma_m = 10.0;
  std::uint64_t seed = 42;
  /// When set, walks start in column 0 and sweep east without ever moving
  /// back a column, so a route never lingers near an earlier ping. Used by
  /// the scaling benchmarks to keep bounded voting windows small.
  bool forward_march = false;
  double start_epoch_s = 1700000000.0;
};

/// Two-way grid streets: one piece per lattice edge, horizontal pieces
/// first (row major), then vertical. Piece ids count from 1 in that order.
/// Speed limits cycle through 30/40/50/60 km/h by piece index.
std::vector<RoadPiece> make_grid_pieces(const SynthParams &params);

/// What the generator knows about one trajectory's true route.
struct SynthTruth {
  std::string device_id;
  /// Pieces covered in travel order, first ping through last ping.
  std::vector<std::int64_t> route_piece_ids;
  /// The piece each ping was placed on, before noise.
  std::vector<std::int64_t> ping_piece_ids;
};

struct SynthResult {
  std::vector<RoadPiece> pieces;
  std::vector<Trajectory> trajectories;
  std::vector<SynthTruth> truths;
};

/**
 * Builds the grid, samples one non-backtracking walk per trajectory with
 * per-piece travel speeds equal to the speed limit, and emits pings every
 * interval_s seconds with Gaussian positional noise. Throws ConfigError on
 * degenerate settings (grid smaller than 2x2, non-positive interval).
 */
SynthResult generate_synthetic(const SynthParams &params);

/// One line per trajectory: device_id, a tab, comma-separated route piece ids.
std::string serialize_truth(const std::vector<SynthTruth> &truths);

void write_truth(const std::string &path, const std::vector<SynthTruth> &truths);

}  // namespace ivmm
