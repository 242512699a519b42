#pragma once

// Independent reference implementations used only by tests. Everything here
// favors obviousness over speed: exhaustive enumeration, recursion, direct
// formula transcription. Production code must agree with these.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ivmm/network.hpp"
#include "ivmm/trellis.hpp"
#include "ivmm/voting.hpp"

namespace oracle {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Outcome {
  std::vector<int> choice;
  double total = kNegInf;
};

// Later positions compare first, mirroring the production backtrack, which
// fixes the last slice and walks toward the front.
inline bool colex_less(const std::vector<int> &a, const std::vector<int> &b) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

/**
 * Exhaustive mirror of best_sequence_in_window. The chain-restart structure
 * (window boundaries, full breaks, structurally disconnected columns, dead
 * slices degraded to breaks) is derived first by simulating which candidates
 * stay reachable; it depends only on the -infinity pattern, never on finite
 * values. Every assignment is then scored as a left fold in window order:
 * restart positions contribute gamma * emission, chained positions
 * gamma * weight(prev, cur), and a -infinity crossing invalidates the
 * assignment. Ties resolve to the colexicographically smallest choice.
 */
inline Outcome best_window_assignment(const ivmm::TrellisGraph &trellis,
                                      std::span<const int> window,
                                      const std::vector<double> &gamma,
                                      int ref_pos, int forced_candidate) {
  const int m = static_cast<int>(window.size());

  // Restart structure. restart_all[q] covers window boundaries, breaks, and
  // dead-slice fallbacks; column_restart[q][s] covers disconnected columns.
  std::vector<char> restart_all(m, 0);
  std::vector<std::vector<char>> column_restart(m);
  {
    std::vector<char> alive;  // per candidate of the previous position
    for (int q = 0; q < m; ++q) {
      const ivmm::TrellisSlice &slice = trellis.slices[window[q]];
      const int cols = slice.size();
      column_restart[q].assign(cols, 0);

      const bool adjacent = q > 0 && window[q] == window[q - 1] + 1;
      const ivmm::TrellisEdges *edges =
          adjacent ? &trellis.edges[window[q - 1]] : nullptr;

      std::vector<char> next_alive(cols, 0);
      if (q == 0 || !adjacent || edges->is_break) {
        restart_all[q] = 1;
        std::fill(next_alive.begin(), next_alive.end(), 1);
      } else {
        for (int s = 0; s < cols; ++s) {
          bool connected = false;
          bool reachable = false;
          for (int t = 0; t < edges->rows; ++t) {
            if (edges->at(t, s) == kNegInf) continue;
            connected = true;
            if (alive[t]) reachable = true;
          }
          if (!connected) {
            column_restart[q][s] = 1;
            next_alive[s] = 1;
          } else {
            next_alive[s] = reachable ? 1 : 0;
          }
        }
      }

      if (q == ref_pos) {
        for (int s = 0; s < cols; ++s) {
          if (s != forced_candidate) next_alive[s] = 0;
        }
      }
      if (std::none_of(next_alive.begin(), next_alive.end(),
                       [](char c) { return c != 0; })) {
        restart_all[q] = 1;
        std::fill(column_restart[q].begin(), column_restart[q].end(), 0);
        std::fill(next_alive.begin(), next_alive.end(), 1);
        if (q == ref_pos) {
          for (int s = 0; s < cols; ++s) {
            if (s != forced_candidate) next_alive[s] = 0;
          }
        }
      }
      alive = std::move(next_alive);
    }
  }

  Outcome best;
  std::vector<int> choice(m, 0);
  while (true) {
    bool valid = ref_pos < 0 || choice[ref_pos] == forced_candidate;
    if (valid) {
      double total = 0.0;
      for (int q = 0; q < m && valid; ++q) {
        const ivmm::TrellisSlice &slice = trellis.slices[window[q]];
        if (restart_all[q] || column_restart[q][choice[q]]) {
          total += gamma[q] * slice.emission[choice[q]];
          continue;
        }
        const double w =
            trellis.edges[window[q - 1]].at(choice[q - 1], choice[q]);
        if (w == kNegInf) {
          valid = false;
          break;
        }
        total += gamma[q] * w;
      }
      if (valid && (total > best.total ||
                    (total == best.total &&
                     (best.choice.empty() || colex_less(choice, best.choice))))) {
        best.total = total;
        best.choice = choice;
      }
    }

    int q = m - 1;
    while (q >= 0) {
      if (++choice[q] < trellis.slices[window[q]].size()) break;
      choice[q] = 0;
      --q;
    }
    if (q < 0) break;
  }
  return best;
}

/// Distance weight recomputed from its definition, kept textually identical
/// to the engine's expression so comparisons hold bitwise.
inline double distance_weight(double x, const ivmm::VotingParams &params) {
  if (params.maxdist_m && x >= *params.maxdist_m) return 0.0;
  return std::exp(-(x * x) / (params.beta_m * params.beta_m));
}

/// Mirror of run_voting built on the exhaustive assignment oracle.
inline ivmm::VoteTally run_voting(const ivmm::TrellisGraph &trellis,
                                  const ivmm::VotingParams &params) {
  ivmm::VoteTally tally = ivmm::make_tally(trellis);
  for (int ref = 0; ref < trellis.size(); ++ref) {
    std::vector<int> window;
    std::vector<double> gamma;
    int ref_pos = -1;
    for (int i = 0; i < trellis.size(); ++i) {
      const double x = ivmm::geodesic_distance(trellis.slices[ref].position,
                                               trellis.slices[i].position);
      if (params.maxdist_m && x >= *params.maxdist_m) continue;
      if (i == ref) ref_pos = static_cast<int>(window.size());
      window.push_back(i);
      gamma.push_back(oracle::distance_weight(x, params));
    }
    for (int j = 0; j < trellis.slices[ref].size(); ++j) {
      const Outcome out =
          best_window_assignment(trellis, window, gamma, ref_pos, j);
      for (std::size_t q = 0; q < window.size(); ++q) {
        ++tally.votes[window[q]][out.choice[q]];
        tally.score[window[q]][out.choice[q]] += out.total;
      }
    }
  }
  return tally;
}

/// Mirror of select_final.
inline std::vector<int> select_final(const ivmm::TrellisGraph &trellis,
                                     const ivmm::VoteTally &tally) {
  std::vector<int> selection(trellis.size(), 0);
  for (int i = 0; i < trellis.size(); ++i) {
    int best = 0;
    for (int s = 1; s < trellis.slices[i].size(); ++s) {
      if (tally.votes[i][s] > tally.votes[i][best] ||
          (tally.votes[i][s] == tally.votes[i][best] &&
           tally.score[i][s] > tally.score[i][best])) {
        best = s;
      }
    }
    selection[i] = best;
  }
  return selection;
}

/**
 * Random trellis with synthetic weights, no network behind it. Each matrix
 * cell goes -infinity with probability p_unreachable, and a whole matrix
 * becomes a break with probability p_break. Slice positions scatter around
 * an anchor so distance weights vary between rounds.
 */
inline ivmm::TrellisGraph make_random_trellis(std::mt19937_64 &rng,
                                              int max_slices, int max_k,
                                              double p_unreachable,
                                              double p_break) {
  std::uniform_int_distribution<int> slice_count(2, max_slices);
  std::uniform_int_distribution<int> cand_count(1, max_k);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> spread(-0.01, 0.01);

  ivmm::TrellisGraph trellis;
  const int n = slice_count(rng);
  const ivmm::GeoPoint anchor{33.4, -112.0};
  for (int i = 0; i < n; ++i) {
    ivmm::TrellisSlice slice;
    slice.ping_index = i;
    slice.position =
        ivmm::GeoPoint{anchor.lat + spread(rng), anchor.lon + spread(rng)};
    slice.timestamp_s = 10.0 * i;
    const int k = cand_count(rng);
    for (int s = 0; s < k; ++s) {
      ivmm::Candidate c;
      c.ping_index = i;
      c.candidate_index = s;
      c.piece_id = i * 100 + s + 1;
      c.foot = slice.position;
      c.dist = 0.0;
      slice.candidates.push_back(c);
      slice.emission.push_back(0.05 + 0.95 * unit(rng));
    }
    trellis.slices.push_back(std::move(slice));
  }

  for (int i = 0; i + 1 < n; ++i) {
    ivmm::TrellisEdges edges;
    edges.rows = trellis.slices[i].size();
    edges.cols = trellis.slices[i + 1].size();
    edges.d_m = ivmm::geodesic_distance(trellis.slices[i].position,
                                        trellis.slices[i + 1].position);
    edges.dt_s = 10.0;
    edges.weight.assign(edges.rows * edges.cols, kNegInf);
    edges.path.resize(edges.rows * edges.cols);
    edges.reachable.assign(edges.rows * edges.cols, 0);
    const bool full_break = unit(rng) < p_break;
    edges.is_break = true;
    if (!full_break) {
      for (int cell = 0; cell < edges.rows * edges.cols; ++cell) {
        if (unit(rng) < p_unreachable) continue;
        edges.weight[cell] = 0.05 + 0.95 * unit(rng);
        edges.reachable[cell] = 1;
        edges.is_break = false;
      }
    }
    trellis.edges.push_back(std::move(edges));
  }
  return trellis;
}

/// Minimal total length over all simple node paths between two candidates,
/// found by depth-first enumeration. Handles the same entry/exit options as
/// the routing engine: leave the source piece at either reachable end, enter
/// the target piece at either reachable end, or stay on a shared piece.
inline std::optional<double> simple_paths_shortest(const ivmm::RoadNetwork &net,
                                                   const ivmm::Candidate &from,
                                                   const ivmm::Candidate &to) {
  const ivmm::RoadPiece &fp = net.pieces[from.piece_index];
  const ivmm::RoadPiece &tp = net.pieces[to.piece_index];
  std::optional<double> best;
  auto consider = [&best](double v) {
    if (!best || v < *best) best = v;
  };

  if (from.piece_index == to.piece_index) {
    if (to.frac >= from.frac) {
      consider((to.frac - from.frac) * fp.length);
    } else if (!fp.oneway) {
      consider((from.frac - to.frac) * fp.length);
    }
  }

  // (node, initial cost) pairs where a path may leave the source piece.
  std::vector<std::pair<int, double>> sources;
  sources.emplace_back(net.piece_head[from.piece_index],
                       (1.0 - from.frac) * fp.length);
  if (!fp.oneway) {
    sources.emplace_back(net.piece_tail[from.piece_index],
                         from.frac * fp.length);
  }
  // (node, final cost) pairs where a path may enter the target piece.
  std::vector<std::pair<int, double>> targets;
  targets.emplace_back(net.piece_tail[to.piece_index], to.frac * tp.length);
  if (!tp.oneway) {
    targets.emplace_back(net.piece_head[to.piece_index],
                         (1.0 - to.frac) * tp.length);
  }

  std::vector<char> visited(net.nodes.size(), 0);
  // Plain recursion over simple paths; fine for the tiny test networks.
  auto dfs = [&](auto &&self, int node, double cost,
                 const std::pair<int, double> &target) -> void {
    if (node == target.first) {
      consider(cost + target.second);
      // A simple path cannot revisit the target, so exploring further from
      // here never yields another arrival.
      return;
    }
    visited[node] = 1;
    for (int a = net.arc_offset[node]; a < net.arc_offset[node + 1]; ++a) {
      const ivmm::Arc &arc = net.arcs[a];
      if (visited[arc.to]) continue;
      self(self, arc.to, cost + arc.length, target);
    }
    visited[node] = 0;
  };

  for (const auto &source : sources) {
    for (const auto &target : targets) {
      dfs(dfs, source.first, source.second, target);
    }
  }
  return best;
}

}  // namespace oracle
