#include "ivmm/synth.hpp"

#include <cmath>
#include <random>

#include "ivmm/errors.hpp"
#include "ivmm/fileio.hpp"

namespace ivmm {

namespace {

constexpr double kSpeedCycleKmh[] = {30.0, 40.0, 50.0, 60.0};

std::string speed_tag(double kmh) {
  return std::to_string(static_cast<int>(kmh));
}

enum class Dir { East, West, North, South };

Dir reverse(Dir d) {
  switch (d) {
    case Dir::East: return Dir::West;
    case Dir::West: return Dir::East;
    case Dir::North: return Dir::South;
    case Dir::South: return Dir::North;
  }
  return Dir::East;
}

/// One lattice step of a walk: which piece it covers and in which direction.
struct Move {
  std::size_t piece = 0;  ///< index into the pieces vector
  bool forward = true;    ///< true when traveling start -> end
  double length_m = 0.0;
  double speed_mps = 0.0;
};

struct GridShape {
  int rows = 0;
  int cols = 0;

  // Horizontal pieces come first, row major, then vertical ones.
  std::size_t horizontal(int r, int c) const {
    return static_cast<std::size_t>(r) * (cols - 1) + c;
  }
  std::size_t vertical(int r, int c) const {
    return static_cast<std::size_t>(rows) * (cols - 1) +
           static_cast<std::size_t>(r) * cols + c;
  }
};

}  // namespace

std::vector<RoadPiece> make_grid_pieces(const SynthParams &params) {
  if (params.rows < 2 || params.cols < 2) {
    throw ConfigError("grid needs at least 2 rows and 2 columns");
  }
  if (params.spacing_m <= 0.0) {
    throw ConfigError("grid spacing must be positive");
  }

  std::vector<GeoPoint> node(static_cast<std::size_t>(params.rows) * params.cols);
  for (int r = 0; r < params.rows; ++r) {
    for (int c = 0; c < params.cols; ++c) {
      node[static_cast<std::size_t>(r) * params.cols + c] = offset_by_meters(
          params.origin, c * params.spacing_m, r * params.spacing_m);
    }
  }
  auto at = [&](int r, int c) -> const GeoPoint & {
    return node[static_cast<std::size_t>(r) * params.cols + c];
  };

  std::vector<RoadPiece> pieces;
  pieces.reserve(static_cast<std::size_t>(params.rows) * (params.cols - 1) +
                 static_cast<std::size_t>(params.rows - 1) * params.cols);
  auto add_piece = [&](const GeoPoint &a, const GeoPoint &b) {
    RoadPiece p;
    p.piece_id = static_cast<std::int64_t>(pieces.size()) + 1;
    p.way_id = p.piece_id;
    p.start = a;
    p.end = b;
    p.length = geodesic_distance(a, b);
    p.highway = "residential";
    p.maxspeed_kmh = kSpeedCycleKmh[pieces.size() % 4];
    p.maxspeed_imputed = false;
    p.oneway = false;
    p.tags = {{"highway", "residential"},
              {"maxspeed", speed_tag(p.maxspeed_kmh)}};
    pieces.push_back(std::move(p));
  };

  for (int r = 0; r < params.rows; ++r) {
    for (int c = 0; c + 1 < params.cols; ++c) add_piece(at(r, c), at(r, c + 1));
  }
  for (int r = 0; r + 1 < params.rows; ++r) {
    for (int c = 0; c < params.cols; ++c) add_piece(at(r, c), at(r + 1, c));
  }
  return pieces;
}

SynthResult generate_synthetic(const SynthParams &params) {
  if (params.interval_s <= 0.0) {
    throw ConfigError("sampling interval must be positive");
  }
  if (params.pings_per_trajectory < 2) {
    throw ConfigError("need at least 2 pings per trajectory");
  }
  if (params.n_trajectories < 1) {
    throw ConfigError("need at least 1 trajectory");
  }
  if (params.noise_sigma_m < 0.0) {
    throw ConfigError("noise sigma must not be negative");
  }

  SynthResult result;
  result.pieces = make_grid_pieces(params);
  const GridShape grid{params.rows, params.cols};

  std::mt19937_64 rng(params.seed);

  int id_width = 1;
  for (int v = params.n_trajectories - 1; v >= 10; v /= 10) ++id_width;

  for (int traj_index = 0; traj_index < params.n_trajectories; ++traj_index) {
    std::string device_id = std::to_string(traj_index);
    while (static_cast<int>(device_id.size()) < id_width) {
      device_id.insert(device_id.begin(), '0');
    }
    device_id = "synth-" + device_id;

    int r = std::uniform_int_distribution<int>(0, params.rows - 1)(rng);
    int c = params.forward_march
                ? 0
                : std::uniform_int_distribution<int>(0, params.cols - 1)(rng);

    const double needed_s =
        (params.pings_per_trajectory - 1) * params.interval_s;
    std::vector<Move> moves;
    std::vector<double> move_end_s;  // cumulative travel time after each move
    double elapsed = 0.0;
    bool have_prev = false;
    Dir prev = Dir::East;

    while (elapsed <= needed_s) {
      std::vector<Dir> options;
      auto offer = [&](Dir d, bool ok, int copies) {
        if (!ok) return;
        if (have_prev && d == reverse(prev)) return;
        for (int i = 0; i < copies; ++i) options.push_back(d);
      };
      if (params.forward_march) {
        // Heavy east bias with occasional jogs; never a westward move.
        offer(Dir::East, c + 1 < params.cols, 6);
        offer(Dir::North, r + 1 < params.rows, 1);
        offer(Dir::South, r > 0, 1);
      } else {
        offer(Dir::East, c + 1 < params.cols, 1);
        offer(Dir::West, c > 0, 1);
        offer(Dir::North, r + 1 < params.rows, 1);
        offer(Dir::South, r > 0, 1);
      }
      if (options.empty()) {
        throw ConfigError("walk is stuck; grid too small for the route length");
      }
      const Dir dir = options[std::uniform_int_distribution<std::size_t>(
          0, options.size() - 1)(rng)];

      Move move;
      switch (dir) {
        case Dir::East:
          move.piece = grid.horizontal(r, c);
          move.forward = true;
          ++c;
          break;
        case Dir::West:
          move.piece = grid.horizontal(r, c - 1);
          move.forward = false;
          --c;
          break;
        case Dir::North:
          move.piece = grid.vertical(r, c);
          move.forward = true;
          ++r;
          break;
        case Dir::South:
          move.piece = grid.vertical(r - 1, c);
          move.forward = false;
          --r;
          break;
      }
      const RoadPiece &piece = result.pieces[move.piece];
      move.length_m = piece.length;
      move.speed_mps = piece.maxspeed_kmh / 3.6;
      elapsed += move.length_m / move.speed_mps;
      moves.push_back(move);
      move_end_s.push_back(elapsed);
      prev = dir;
      have_prev = true;
    }

    std::normal_distribution<double> noise(0.0, params.noise_sigma_m);

    Trajectory traj;
    traj.device_id = device_id;
    SynthTruth truth;
    truth.device_id = device_id;

    std::size_t cursor = 0;
    std::size_t first_move = 0;
    std::size_t last_move = 0;
    for (int j = 0; j < params.pings_per_trajectory; ++j) {
      const double t = j * params.interval_s;
      while (move_end_s[cursor] <= t) ++cursor;
      const Move &move = moves[cursor];
      const double move_start_s = move_end_s[cursor] - move.length_m / move.speed_mps;
      const double into_m = (t - move_start_s) * move.speed_mps;
      const double along = into_m / move.length_m;
      const double frac = move.forward ? along : 1.0 - along;

      const RoadPiece &piece = result.pieces[move.piece];
      GeoPoint clean{piece.start.lat + frac * (piece.end.lat - piece.start.lat),
                     piece.start.lon + frac * (piece.end.lon - piece.start.lon)};
      GeoPoint observed = clean;
      if (params.noise_sigma_m > 0.0) {
        const double east = noise(rng);
        const double north = noise(rng);
        observed = offset_by_meters(clean, east, north);
      }

      Ping ping;
      ping.index = j;
      ping.point = observed;
      ping.timestamp_s = params.start_epoch_s + t;
      ping.speed_mps = move.speed_mps;
      traj.pings.push_back(ping);
      truth.ping_piece_ids.push_back(piece.piece_id);

      if (j == 0) first_move = cursor;
      last_move = cursor;
    }

    for (std::size_t m = first_move; m <= last_move; ++m) {
      truth.route_piece_ids.push_back(result.pieces[moves[m].piece].piece_id);
    }

    result.trajectories.push_back(std::move(traj));
    result.truths.push_back(std::move(truth));
  }
  return result;
}

std::string serialize_truth(const std::vector<SynthTruth> &truths) {
  std::string out;
  for (const auto &t : truths) {
    out += t.device_id;
    out += '\t';
    for (std::size_t i = 0; i < t.route_piece_ids.size(); ++i) {
      if (i > 0) out += ',';
      out += std::to_string(t.route_piece_ids[i]);
    }
    out += '\n';
  }
  return out;
}

void write_truth(const std::string &path, const std::vector<SynthTruth> &truths) {
  write_file_atomic(path, serialize_truth(truths));
}

}  // namespace ivmm
