#include "ivmm/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ivmm {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::int64_t pack_cell(std::int64_t cx, std::int64_t cy) {
  return (cx << 32) ^ (cy & 0xffffffffLL);
}

}  // namespace

SpatialIndex::SpatialIndex(const RoadNetwork &net, double cell_size_m) {
  if (cell_size_m <= 0.0) {
    throw std::invalid_argument("cell size must be positive");
  }
  // Scale longitude cells at the network's central latitude; for street
  // scale extents the distortion across the network is negligible.
  double lat_sum = 0.0;
  for (const auto &node : net.nodes) lat_sum += node.lat;
  const double center_lat =
      net.nodes.empty() ? 0.0 : lat_sum / static_cast<double>(net.nodes.size());
  const double meters_per_deg_lat = kEarthRadiusM * kDegToRad;
  const double meters_per_deg_lon =
      std::max(1.0, meters_per_deg_lat * std::cos(center_lat * kDegToRad));
  cell_lat_deg_ = cell_size_m / meters_per_deg_lat;
  cell_lon_deg_ = cell_size_m / meters_per_deg_lon;

  for (size_t i = 0; i < net.pieces.size(); ++i) {
    const RoadPiece &piece = net.pieces[i];
    const auto [alo, alo2] = cell_of(
        {std::min(piece.start.lat, piece.end.lat), std::min(piece.start.lon, piece.end.lon)});
    const auto [ahi, ahi2] = cell_of(
        {std::max(piece.start.lat, piece.end.lat), std::max(piece.start.lon, piece.end.lon)});
    for (std::int64_t cx = alo; cx <= ahi; ++cx) {
      for (std::int64_t cy = alo2; cy <= ahi2; ++cy) {
        cells_[pack_cell(cx, cy)].push_back(static_cast<int>(i));
      }
    }
  }
}

std::pair<std::int64_t, std::int64_t> SpatialIndex::cell_of(
    const GeoPoint &p) const {
  return {static_cast<std::int64_t>(std::floor(p.lat / cell_lat_deg_)),
          static_cast<std::int64_t>(std::floor(p.lon / cell_lon_deg_))};
}

std::vector<int> SpatialIndex::query(const GeoPoint &p, Meters radius) const {
  const double rlat = radius / (kEarthRadiusM * kDegToRad);
  const double rlon =
      radius / std::max(1.0, kEarthRadiusM * kDegToRad *
                                 std::cos(p.lat * kDegToRad));
  const auto [clo_x, clo_y] = cell_of({p.lat - rlat, p.lon - rlon});
  const auto [chi_x, chi_y] = cell_of({p.lat + rlat, p.lon + rlon});

  std::vector<int> out;
  for (std::int64_t cx = clo_x; cx <= chi_x; ++cx) {
    for (std::int64_t cy = clo_y; cy <= chi_y; ++cy) {
      auto it = cells_.find(pack_cell(cx, cy));
      if (it == cells_.end()) continue;
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
  }
  // A piece spanning several cells appears once per cell; sort and collapse
  // so callers see each index once. No mutable scratch, so concurrent
  // queries against one index are safe.
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SpatialIndex build_index(const RoadNetwork &net, double cell_size_m) {
  return SpatialIndex(net, cell_size_m);
}

std::vector<Candidate> generate_candidates(const RoadNetwork &net,
                                           const SpatialIndex &index,
                                           const Ping &ping, Meters alpha,
                                           int k) {
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  if (k < 1) throw std::invalid_argument("k must be at least 1");

  std::vector<Candidate> found;
  for (int piece_index : index.query(ping.point, alpha)) {
    const RoadPiece &piece = net.pieces[piece_index];
    const Projection proj =
        project_point_to_segment(ping.point, piece.start, piece.end);
    if (proj.dist > alpha) continue;
    Candidate c;
    c.ping_index = ping.index;
    c.piece_id = piece.piece_id;
    c.piece_index = piece_index;
    c.foot = proj.foot;
    c.frac = proj.frac;
    c.dist = proj.dist;
    found.push_back(c);
  }

  std::sort(found.begin(), found.end(), [](const Candidate &a, const Candidate &b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return a.piece_id < b.piece_id;
  });

  // Consecutive pieces of one way share their junction node; a ping that
  // projects onto that node yields the same foot twice. Keep the earlier
  // (smaller piece id) copy.
  std::vector<Candidate> out;
  for (const auto &c : found) {
    const auto duplicate = [&](const Candidate &kept) {
      return net.pieces[kept.piece_index].way_id ==
                 net.pieces[c.piece_index].way_id &&
             kept.foot == c.foot;
    };
    if (std::any_of(out.begin(), out.end(), duplicate)) continue;
    out.push_back(c);
    if (static_cast<int>(out.size()) == k) break;
  }
  for (size_t j = 0; j < out.size(); ++j) {
    out[j].candidate_index = static_cast<int>(j);
  }
  return out;
}

}  // namespace ivmm
