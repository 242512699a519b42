#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ivmm/pipeline.hpp"

namespace ivmm {

/// One maxdist setting to benchmark. An empty radius means unbounded.
struct BenchSetting {
  std::string label;
  std::optional<double> maxdist_m;
};

/// The grid of settings the harness runs by default.
std::vector<BenchSetting> default_bench_settings();

/// Measurements for one setting across the whole batch.
struct BenchRun {
  std::string label;
  std::optional<double> maxdist_m;
  std::vector<int> pings;  ///< per successful trajectory, batch order
  std::vector<double> voting_s;
  std::vector<double> full_s;
  std::vector<double> relaxations;
  double slope_voting_time = 0.0;  ///< log(voting_s) vs log(pings)
  double slope_relaxations = 0.0;  ///< log(relaxations) vs log(pings)
};

struct BenchResult {
  std::vector<BenchRun> runs;
};

/// Least-squares slope of y over x. Throws EmptyInput with fewer than two
/// points and Error when every x is identical.
double ols_slope(const std::vector<double> &x, const std::vector<double> &y);

/**
 * Matches the batch once per setting and keeps per-trajectory wall times and
 * relaxation counts. Runs serially (one worker) so timings are comparable
 * across settings. The batch should span a wide range of trajectory sizes;
 * when every trajectory is the same length a slope cannot be fitted and
 * both slopes stay zero.
 */
BenchResult run_bench(const RoadNetwork &net,
                      const std::vector<Trajectory> &trajectories,
                      const Config &base,
                      const std::vector<BenchSetting> &settings);

/// Per-setting stats over both measured phases, TSV.
std::string bench_table(const BenchResult &result);

/// Per-setting fitted slopes, TSV.
std::string slope_table(const BenchResult &result);

}  // namespace ivmm
