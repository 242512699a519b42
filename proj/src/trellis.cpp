#include "ivmm/trellis.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

namespace ivmm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

TrellisGraph build_trellis(
    const Trajectory &traj,
    const std::vector<std::vector<Candidate>> &candidates_per_ping,
    const RoadNetwork &net, const StParams &params, int minpings) {
  assert(candidates_per_ping.size() == traj.pings.size());

  TrellisGraph trellis;
  for (size_t i = 0; i < traj.pings.size(); ++i) {
    if (candidates_per_ping[i].empty()) {
      trellis.dropped_pings.push_back(static_cast<int>(i));
      continue;
    }
    TrellisSlice slice;
    slice.ping_index = static_cast<int>(i);
    slice.position = traj.pings[i].point;
    slice.timestamp_s = traj.pings[i].timestamp_s;
    slice.candidates = candidates_per_ping[i];
    slice.emission.reserve(slice.candidates.size());
    for (const auto &c : slice.candidates) {
      slice.emission.push_back(observation_probability(c.dist, params));
    }
    trellis.slices.push_back(std::move(slice));
  }

  if (trellis.size() < minpings) {
    throw TooFewPings("only " + std::to_string(trellis.size()) +
                      " pings have candidates, need " +
                      std::to_string(minpings));
  }

  trellis.edges.reserve(trellis.slices.size() - 1);
  for (int i = 0; i + 1 < trellis.size(); ++i) {
    const TrellisSlice &a = trellis.slices[i];
    const TrellisSlice &b = trellis.slices[i + 1];
    TrellisEdges edges;
    edges.rows = a.size();
    edges.cols = b.size();
    edges.d_m = geodesic_distance(a.position, b.position);
    edges.dt_s = b.timestamp_s - a.timestamp_s;
    edges.weight.resize(edges.rows * edges.cols, kNegInf);
    edges.path.resize(edges.rows * edges.cols);
    edges.reachable.assign(edges.rows * edges.cols, 0);

    auto paths = many_to_many_shortest(net, a.candidates, b.candidates);
    edges.is_break = true;
    for (int t = 0; t < edges.rows; ++t) {
      for (int s = 0; s < edges.cols; ++s) {
        auto &path = paths[t][s];
        const int cell = t * edges.cols + s;
        if (!path.has_value()) continue;
        edges.weight[cell] = edge_weight(path, b.candidates[s].dist,
                                         edges.d_m, edges.dt_s, params, net);
        edges.path[cell] = std::move(*path);
        edges.reachable[cell] = 1;
        edges.is_break = false;
      }
    }
    trellis.edges.push_back(std::move(edges));
  }
  return trellis;
}

FscoreTable fscore_forward(const TrellisGraph &trellis,
                           const std::vector<double> &gamma) {
  assert(gamma.size() == static_cast<size_t>(trellis.size()));
  FscoreTable table(trellis.size());
  if (trellis.size() == 0) return table;

  table[0].resize(trellis.slices[0].size());
  for (int s = 0; s < trellis.slices[0].size(); ++s) {
    table[0][s] = {gamma[0] * trellis.slices[0].emission[s], -1, 0};
  }

  int next_segment = 1;
  for (int i = 1; i < trellis.size(); ++i) {
    const TrellisEdges &edges = trellis.edges[i - 1];
    const TrellisSlice &slice = trellis.slices[i];
    table[i].resize(slice.size());
    int slice_restart_segment = -1;
    for (int s = 0; s < slice.size(); ++s) {
      double best = kNegInf;
      int best_t = -1;
      bool column_connected = false;
      for (int t = 0; t < edges.rows; ++t) {
        const double w = edges.at(t, s);
        if (w == kNegInf) continue;
        column_connected = true;
        const double value = table[i - 1][t].f + gamma[i] * w;
        if (value > best) {
          best = value;
          best_t = t;
        }
      }
      if (!column_connected) {
        // No way into this candidate: its chain restarts here. Candidates
        // restarting on the same slice share one fresh segment id.
        if (slice_restart_segment == -1) {
          slice_restart_segment = next_segment++;
        }
        table[i][s] = {gamma[i] * slice.emission[s], -1, slice_restart_segment};
      } else {
        table[i][s] = {best, best_t, table[i - 1][best_t].segment_id};
      }
    }
  }
  return table;
}

namespace {

// One pass of the total-score dynamic program described in the header.
// Window positions with no usable incoming edge restart their chain with
// the best total so far carried over, so totals accumulate across chains.
struct DpState {
  std::vector<std::vector<double>> total;  // per window position, candidate
  std::vector<std::vector<int>> pred;      // >= 0 chain edge, -1 chain jump
  std::vector<int> jump_pred;              // best index of previous position
};

}  // namespace

SequenceResult best_sequence_in_window(const TrellisGraph &trellis,
                                       std::span<const int> window,
                                       const std::vector<double> &gamma,
                                       int ref_pos, int forced_candidate,
                                       std::uint64_t *relaxations) {
  assert(!window.empty());
  assert(gamma.size() == window.size());
  const int m = static_cast<int>(window.size());

  DpState dp;
  dp.total.resize(m);
  dp.pred.resize(m);
  dp.jump_pred.assign(m, -1);

  double prev_best = 0.0;  // best total over the previous position
  int prev_best_index = -1;

  for (int q = 0; q < m; ++q) {
    const TrellisSlice &slice = trellis.slices[window[q]];
    const int cols = slice.size();
    dp.total[q].assign(cols, kNegInf);
    dp.pred[q].assign(cols, -1);
    dp.jump_pred[q] = prev_best_index;

    const bool adjacent = q > 0 && window[q] == window[q - 1] + 1;
    const TrellisEdges *edges = adjacent ? &trellis.edges[window[q - 1]] : nullptr;

    auto restart_value = [&](int s) {
      return (q == 0 ? 0.0 : prev_best) + gamma[q] * slice.emission[s];
    };

    if (q == 0 || !adjacent || edges->is_break) {
      // Every candidate starts a fresh chain at a window boundary or break.
      for (int s = 0; s < cols; ++s) dp.total[q][s] = restart_value(s);
    } else {
      const auto &prev_total = dp.total[q - 1];
      for (int s = 0; s < cols; ++s) {
        double best = kNegInf;
        int best_t = -1;
        bool column_connected = false;
        for (int t = 0; t < edges->rows; ++t) {
          const double w = edges->at(t, s);
          if (relaxations) ++*relaxations;
          if (w == kNegInf) continue;
          column_connected = true;
          if (prev_total[t] == kNegInf) continue;
          const double value = prev_total[t] + gamma[q] * w;
          if (value > best) {
            best = value;
            best_t = t;
          }
        }
        if (!column_connected) {
          dp.total[q][s] = restart_value(s);
        } else {
          dp.total[q][s] = best;
          dp.pred[q][s] = best_t;
        }
      }
    }

    if (q == ref_pos) {
      for (int s = 0; s < cols; ++s) {
        if (s != forced_candidate) dp.total[q][s] = kNegInf;
      }
    }

    double best = kNegInf;
    int best_index = -1;
    for (int s = 0; s < cols; ++s) {
      if (dp.total[q][s] > best) {
        best = dp.total[q][s];
        best_index = s;
      }
    }
    if (best == kNegInf) {
      // The constraint cut off every continuation; degrade the transition
      // to a break so the pass stays total (see header).
      for (int s = 0; s < cols; ++s) {
        dp.total[q][s] = restart_value(s);
        dp.pred[q][s] = -1;
      }
      if (q == ref_pos) {
        for (int s = 0; s < cols; ++s) {
          if (s != forced_candidate) dp.total[q][s] = kNegInf;
        }
      }
      best = kNegInf;
      best_index = -1;
      for (int s = 0; s < cols; ++s) {
        if (dp.total[q][s] > best) {
          best = dp.total[q][s];
          best_index = s;
        }
      }
    }
    prev_best = best;
    prev_best_index = best_index;
  }

  SequenceResult result;
  result.fscore = prev_best;
  result.choice.assign(m, -1);
  int cursor = prev_best_index;
  for (int q = m - 1; q >= 0; --q) {
    result.choice[q] = cursor;
    cursor = dp.pred[q][cursor] >= 0 ? dp.pred[q][cursor] : dp.jump_pred[q];
  }
  return result;
}

SequenceResult best_sequence(const TrellisGraph &trellis,
                             const std::vector<double> &gamma,
                             std::uint64_t *relaxations) {
  std::vector<int> window(trellis.size());
  std::iota(window.begin(), window.end(), 0);
  return best_sequence_in_window(trellis, window, gamma, -1, -1, relaxations);
}

SequenceResult constrained_best_sequence(const TrellisGraph &trellis,
                                         const std::vector<double> &gamma,
                                         int ref_slice, int forced_candidate,
                                         std::uint64_t *relaxations) {
  std::vector<int> window(trellis.size());
  std::iota(window.begin(), window.end(), 0);
  return best_sequence_in_window(trellis, window, gamma, ref_slice,
                                 forced_candidate, relaxations);
}

}  // namespace ivmm
