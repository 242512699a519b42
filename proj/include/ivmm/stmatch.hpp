#pragma once

#include <optional>
#include <vector>

#include "ivmm/network.hpp"

namespace ivmm {

/// Knobs of the spatial/temporal scoring model.
struct StParams {
  double mu_m = 0.0;             ///< observation error mean
  double sigma_m = 20.0;         ///< observation error deviation
  double speed_floor_kmh = 1.0;  ///< replaces non-positive average speeds
};

/**
 * Gaussian likelihood of observing a ping x meters from its true position:
 * exp(-(x - mu)^2 / (2 sigma^2)) / (sigma sqrt(2 pi)). Maximal at x == mu.
 */
double observation_probability(Meters x, const StParams &params);

/**
 * Ratio min(d, w) / max(d, w) between the straight-line ping distance d and
 * the network path length w. 1 when both are zero, 0 when exactly one is
 * zero or when no path exists.
 */
double transition_probability(Meters d, const std::optional<Meters> &w);

/// Path length over elapsed time, in km/h. Throws NonPositiveInterval.
double average_path_speed_kmh(const NetworkPath &path, double dt_s);

/**
 * Cosine similarity between the typical speeds of the pieces along a path
 * and a constant vector of the path's average travel speed. 1.0 for a
 * single-piece path. Non-positive vbar is replaced by the configured floor.
 * Throws EmptyPath when the speed vector is empty.
 */
double temporal_weight(const std::vector<double> &piece_speeds_kmh,
                       double vbar_kmh, const StParams &params);

/// Typical speeds along a path's traversed pieces (zero-length entry and
/// exit touches are skipped; a fully zero-length path keeps its one piece).
std::vector<double> path_piece_speeds(const NetworkPath &path,
                                      const RoadNetwork &net);

/**
 * Weight of one trellis edge: observation probability of the target
 * candidate times transition probability times temporal weight. Returns
 * -infinity when no path exists (the edge is removed from the trellis).
 */
double edge_weight(const std::optional<NetworkPath> &path, Meters x_next,
                   Meters d, double dt_s, const StParams &params,
                   const RoadNetwork &net);

}  // namespace ivmm
