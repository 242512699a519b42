#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ivmm/candidates.hpp"
#include "ivmm/config.hpp"
#include "ivmm/imputer.hpp"
#include "ivmm/trajectory_io.hpp"
#include "ivmm/voting.hpp"

namespace ivmm {

/// Everything the matcher produces for one trajectory, kept for callers
/// that want to inspect intermediate stages.
struct MatchOutcome {
  TrellisGraph trellis;
  VoteTally tally;
  VotingStats stats;
  std::vector<int> selection;
  MatchedRoute route;
  double voting_s = 0.0;  ///< wall time of the voting stage alone
  double full_s = 0.0;    ///< wall time candidates through route
};

/// Candidate search through route imputation for a single trajectory.
/// Throws TooFewPings when the trajectory cannot be matched at all.
MatchOutcome match_trajectory(const RoadNetwork &net, const SpatialIndex &index,
                              const Trajectory &traj, const Config &cfg);

/// One row of the per-trajectory report.
struct TrajectoryReport {
  int index = 0;  ///< position within the batch
  std::string device_id;
  bool ok = false;
  std::string error;  ///< set when !ok
  int pings = 0;
  int matched = 0;  ///< trellis slices
  int breaks = 0;
  int gaps = 0;
  double raw_length_m = 0.0;
  double matched_length_m = 0.0;
  double route_length_m = 0.0;
  double length_variation_rel = 0.0;
  double median_candidate_dist_m = 0.0;
  std::uint64_t relaxations = 0;
  double voting_s = 0.0;
  double full_s = 0.0;
  std::string output_path;  ///< written route file, empty when none
};

struct BatchResult {
  std::vector<TrajectoryReport> reports;
  std::vector<DroppedTrajectory> dropped;  ///< discarded while loading
  int failures = 0;
};

/**
 * Loads the asset and trajectory file named by cfg, matches every trajectory
 * (cfg.workers in parallel), and writes one route file per trajectory plus
 * report.tsv and summary.tsv into cfg.out_dir. Output files appear in batch
 * order regardless of worker interleaving. A trajectory that throws is
 * reported and counted, never fatal. With an empty out_dir nothing is
 * written, which is how library callers run in-memory batches.
 */
BatchResult run_batch(const Config &cfg);

/// In-memory variant over an already-built network and trajectory list.
BatchResult run_batch(const RoadNetwork &net,
                      const std::vector<Trajectory> &trajectories,
                      const Config &cfg);

/// Per-trajectory rows as TSV, one line each, stable column order.
std::string report_table(const BatchResult &batch);

/// Aggregate stats table: one row per measured quantity with
/// avg/std/min/q1/median/q3/max columns over the successful trajectories.
std::string summary_table(const BatchResult &batch);

}  // namespace ivmm
