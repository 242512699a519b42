#include "ivmm/voting.hpp"

#include <cmath>

namespace ivmm {

double distance_weight(Meters x, const VotingParams &params) {
  if (params.maxdist_m && x >= *params.maxdist_m) return 0.0;
  return std::exp(-(x * x) / (params.beta_m * params.beta_m));
}

VoteTally make_tally(const TrellisGraph &trellis) {
  VoteTally tally;
  tally.votes.resize(trellis.size());
  tally.score.resize(trellis.size());
  for (int i = 0; i < trellis.size(); ++i) {
    tally.votes[i].assign(trellis.slices[i].size(), 0);
    tally.score[i].assign(trellis.slices[i].size(), 0.0);
  }
  return tally;
}

void voting_round(const TrellisGraph &trellis, int ref_slice,
                  const VotingParams &params, VoteTally *tally,
                  VotingStats *stats) {
  const GeoPoint ref_point = trellis.slices[ref_slice].position;

  std::vector<int> window;
  std::vector<double> gamma;
  int ref_pos = -1;
  window.reserve(trellis.size());
  gamma.reserve(trellis.size());
  for (int i = 0; i < trellis.size(); ++i) {
    const Meters x = geodesic_distance(ref_point, trellis.slices[i].position);
    if (params.maxdist_m && x >= *params.maxdist_m) continue;
    if (i == ref_slice) ref_pos = static_cast<int>(window.size());
    window.push_back(i);
    gamma.push_back(distance_weight(x, params));
  }

  std::uint64_t *relax = stats ? &stats->relaxations : nullptr;
  for (int j = 0; j < trellis.slices[ref_slice].size(); ++j) {
    const SequenceResult result =
        best_sequence_in_window(trellis, window, gamma, ref_pos, j, relax);
    for (size_t q = 0; q < window.size(); ++q) {
      const int slice = window[q];
      const int candidate = result.choice[q];
      ++tally->votes[slice][candidate];
      tally->score[slice][candidate] += result.fscore;
    }
  }
  if (stats) ++stats->rounds;
}

VoteTally run_voting(const TrellisGraph &trellis, const VotingParams &params,
                     VotingStats *stats) {
  VoteTally tally = make_tally(trellis);
  for (int ref = 0; ref < trellis.size(); ++ref) {
    voting_round(trellis, ref, params, &tally, stats);
  }
  return tally;
}

std::vector<int> select_final(const TrellisGraph &trellis,
                              const VoteTally &tally) {
  std::vector<int> selection(trellis.size(), 0);
  for (int i = 0; i < trellis.size(); ++i) {
    int best = 0;
    for (int s = 1; s < trellis.slices[i].size(); ++s) {
      const bool more_votes = tally.votes[i][s] > tally.votes[i][best];
      const bool tie_votes = tally.votes[i][s] == tally.votes[i][best];
      const bool more_score = tally.score[i][s] > tally.score[i][best];
      if (more_votes || (tie_votes && more_score)) best = s;
    }
    selection[i] = best;
  }
  return selection;
}

}  // namespace ivmm
