#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ivmm/trellis.hpp"

namespace ivmm {

/// Knobs of the voting procedure.
struct VotingParams {
  double beta_m = 2000.0;          ///< distance weight scale
  std::optional<double> maxdist_m; ///< bounded regime; empty means unbounded
};

/**
 * Influence of a slice x meters away from the reference ping:
 * exp(-x^2 / beta^2). In the bounded regime the weight is 0 at and beyond
 * maxdist; such slices are removed from the round entirely.
 */
double distance_weight(Meters x, const VotingParams &params);

/// Accumulated votes and scores, shaped like the trellis.
struct VoteTally {
  std::vector<std::vector<std::uint32_t>> votes;
  std::vector<std::vector<double>> score;
};

/// A tally of zeros shaped for the trellis.
VoteTally make_tally(const TrellisGraph &trellis);

/// Instrumentation accumulated across rounds.
struct VotingStats {
  std::uint64_t relaxations = 0;  ///< weight entries examined by the DP
  std::uint64_t rounds = 0;
};

/**
 * One round for a reference slice: every candidate of the slice forces one
 * constrained pass (bounded passes run on the slices closer than maxdist to
 * the reference ping), and every candidate on the resulting assignment
 * receives one vote plus the assignment's score.
 */
void voting_round(const TrellisGraph &trellis, int ref_slice,
                  const VotingParams &params, VoteTally *tally,
                  VotingStats *stats = nullptr);

/// Runs one round per slice in slice order.
VoteTally run_voting(const TrellisGraph &trellis, const VotingParams &params,
                     VotingStats *stats = nullptr);

/**
 * Final candidate per slice: most votes, then highest score, then lowest
 * candidate index.
 */
std::vector<int> select_final(const TrellisGraph &trellis,
                              const VoteTally &tally);

}  // namespace ivmm
