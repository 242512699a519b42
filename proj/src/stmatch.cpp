#include "ivmm/stmatch.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace ivmm {

double observation_probability(Meters x, const StParams &params) {
  const double z = (x - params.mu_m) / params.sigma_m;
  return std::exp(-0.5 * z * z) /
         (params.sigma_m * std::sqrt(2.0 * std::numbers::pi));
}

double transition_probability(Meters d, const std::optional<Meters> &w) {
  if (!w.has_value()) return 0.0;
  if (d == 0.0 && *w == 0.0) return 1.0;
  if (d == 0.0 || *w == 0.0) return 0.0;
  return std::min(d, *w) / std::max(d, *w);
}

double average_path_speed_kmh(const NetworkPath &path, double dt_s) {
  if (dt_s <= 0.0) {
    throw NonPositiveInterval("path speed needs a positive time interval");
  }
  return path.total_length / dt_s * 3.6;
}

double temporal_weight(const std::vector<double> &piece_speeds_kmh,
                       double vbar_kmh, const StParams &params) {
  if (piece_speeds_kmh.empty()) {
    throw EmptyPath("temporal weight needs at least one piece speed");
  }
  const double vbar =
      vbar_kmh > 0.0 ? vbar_kmh : params.speed_floor_kmh;
  double dot = 0.0;
  double norm_speeds = 0.0;
  for (double s : piece_speeds_kmh) {
    dot += s * vbar;
    norm_speeds += s * s;
  }
  const double norm_vbar =
      std::sqrt(static_cast<double>(piece_speeds_kmh.size()) * vbar * vbar);
  return dot / (std::sqrt(norm_speeds) * norm_vbar);
}

std::vector<double> path_piece_speeds(const NetworkPath &path,
                                      const RoadNetwork &net) {
  if (path.steps.empty()) {
    throw EmptyPath("path has no pieces");
  }
  std::vector<double> speeds;
  speeds.reserve(path.steps.size());
  for (const auto &step : path.steps) {
    if (step.traversed <= 0.0) continue;
    speeds.push_back(
        net.pieces[net.piece_index_by_id.at(step.piece_id)].maxspeed_kmh);
  }
  if (speeds.empty()) {
    // Zero-length hop: the anchor piece still characterizes the spot.
    speeds.push_back(
        net.pieces[net.piece_index_by_id.at(path.steps.front().piece_id)]
            .maxspeed_kmh);
  }
  return speeds;
}

double edge_weight(const std::optional<NetworkPath> &path, Meters x_next,
                   Meters d, double dt_s, const StParams &params,
                   const RoadNetwork &net) {
  if (!path.has_value()) {
    return -std::numeric_limits<double>::infinity();
  }
  const double obs = observation_probability(x_next, params);
  const double trans = transition_probability(d, path->total_length);
  const double vbar = average_path_speed_kmh(*path, dt_s);
  const double temporal =
      temporal_weight(path_piece_speeds(*path, net), vbar, params);
  return obs * trans * temporal;
}

}  // namespace ivmm
