#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ivmm/network.hpp"
#include "ivmm/stmatch.hpp"
#include "ivmm/trajectory.hpp"

namespace ivmm {

/// One trellis column: a retained ping with its candidates and their
/// observation probabilities.
struct TrellisSlice {
  int ping_index = 0;
  GeoPoint position;
  double timestamp_s = 0.0;
  std::vector<Candidate> candidates;
  std::vector<double> emission;  ///< observation probability per candidate

  int size() const { return static_cast<int>(candidates.size()); }
};

/// Weighted edges between two consecutive slices, stored row-major with one
/// row per predecessor candidate. -infinity marks a removed (unreachable)
/// edge; a matrix of nothing but -infinity is a break.
struct TrellisEdges {
  int rows = 0;
  int cols = 0;
  std::vector<double> weight;       ///< rows * cols, weight[t * cols + s]
  std::vector<NetworkPath> path;    ///< same layout; empty steps if unreachable
  std::vector<std::uint8_t> reachable;  ///< same layout
  bool is_break = false;
  Meters d_m = 0.0;   ///< straight-line distance between the two pings
  double dt_s = 0.0;  ///< elapsed time between the two pings

  double at(int t, int s) const { return weight[t * cols + s]; }
};

struct TrellisGraph {
  std::vector<TrellisSlice> slices;
  std::vector<TrellisEdges> edges;  ///< edges[i] sits between slice i and i+1
  std::vector<int> dropped_pings;   ///< ping indices with no candidate

  int size() const { return static_cast<int>(slices.size()); }
  int break_count() const {
    int n = 0;
    for (const auto &e : edges) n += e.is_break;
    return n;
  }
};

/**
 * Builds the trellis for one trajectory: one slice per ping that has
 * candidates (candidate-less pings are dropped and recorded), and one weight
 * matrix per consecutive retained pair via a many-to-many path search.
 * Throws TooFewPings when fewer than minpings slices remain.
 */
TrellisGraph build_trellis(const Trajectory &traj,
                           const std::vector<std::vector<Candidate>> &candidates_per_ping,
                           const RoadNetwork &net, const StParams &params,
                           int minpings);

/*
 * Sequence semantics shared by every operation below. A slice-complete
 * assignment picks one candidate per slice; its score is the sum of one term
 * per slice:
 *
 *   - a candidate whose incoming weight column holds no finite entry (and
 *     every candidate of slice 0, of a slice following a break, and of a
 *     window position following removed slices) restarts its chain: the term
 *     is gamma_i * emission, regardless of the predecessor;
 *   - every other candidate continues the chain: the term is gamma_i *
 *     weight(prev, cur), and assignments that would cross a -infinity edge
 *     are invalid.
 *
 * Restart columns are a property of the stored matrices, never of the values
 * reached during a particular pass, so a constrained pass agrees with the
 * unconstrained one about where chains may begin. If constraining makes an
 * entire slice unreachable, the pass degrades that one transition to a
 * break (every candidate of the slice restarts) and continues; this keeps
 * every pass total without changing trap-free results.
 */

/// Per-candidate forward value of the classic pass: f holds the best score
/// of the chain ending at the candidate (not the accumulated total across
/// earlier chains), backpointer is -1 where the chain restarts, and
/// segment_id labels the run of slices the chain belongs to.
struct FscoreEntry {
  double f = 0.0;
  int backpointer = -1;
  int segment_id = 0;
};

using FscoreTable = std::vector<std::vector<FscoreEntry>>;

/// Forward pass over the full trellis with per-slice distance weights gamma.
FscoreTable fscore_forward(const TrellisGraph &trellis,
                           const std::vector<double> &gamma);

/// A decoded assignment: one candidate index per covered slice, plus the
/// total score summed across all of its chains.
struct SequenceResult {
  std::vector<int> choice;
  double fscore = 0.0;
};

/**
 * Best assignment over the slices listed in window (strictly increasing;
 * non-adjacent neighbors act as breaks). gamma is indexed by window
 * position. With ref_pos >= 0 the assignment is constrained to
 * choice[ref_pos] == forced_candidate. Ties resolve to the lowest
 * predecessor index, then the lowest final index. relaxations, when given,
 * grows by one per weight entry examined.
 */
SequenceResult best_sequence_in_window(const TrellisGraph &trellis,
                                       std::span<const int> window,
                                       const std::vector<double> &gamma,
                                       int ref_pos, int forced_candidate,
                                       std::uint64_t *relaxations = nullptr);

/// best_sequence_in_window over all slices without a constraint.
SequenceResult best_sequence(const TrellisGraph &trellis,
                             const std::vector<double> &gamma,
                             std::uint64_t *relaxations = nullptr);

/// best_sequence_in_window over all slices, forcing one candidate.
SequenceResult constrained_best_sequence(const TrellisGraph &trellis,
                                         const std::vector<double> &gamma,
                                         int ref_slice, int forced_candidate,
                                         std::uint64_t *relaxations = nullptr);

}  // namespace ivmm
