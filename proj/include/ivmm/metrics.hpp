#pragma once

#include <vector>

#include "ivmm/trellis.hpp"

namespace ivmm {

/// Descriptive statistics over a sample. std_dev is the population standard
/// deviation; quartiles interpolate linearly between order statistics.
struct SummaryStats {
  int n = 0;
  double mean = 0.0;
  double std_dev = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Throws EmptyInput when values is empty.
SummaryStats summarize(std::vector<double> values);

/// Quantile of a sorted sample at fraction q in [0, 1], interpolating
/// linearly between neighbors. Throws EmptyInput when empty.
double quantile(const std::vector<double> &sorted_values, double q);

/// Distance from each ping to its selected candidate's foot point, in slice
/// order.
std::vector<double> selected_candidate_distances(const TrellisGraph &trellis,
                                                 const std::vector<int> &selection);

/// Comparison of the raw polyline length against the matched one.
struct LengthVariation {
  Meters raw = 0.0;      ///< sum of consecutive ping-to-ping distances
  Meters matched = 0.0;  ///< sum of consecutive foot-to-foot distances
  Meters abs_diff = 0.0;
  double rel_diff = 0.0;  ///< abs_diff / raw
};

/**
 * Measures how much matching stretched or shrank the trajectory. The raw
 * length covers every retained slice's ping; the matched length covers the
 * selected foot points in the same order. Throws ZeroLengthRaw when the raw
 * polyline has zero length, since the relative figure is undefined there.
 */
LengthVariation path_length_variation(const TrellisGraph &trellis,
                                      const std::vector<int> &selection);

}  // namespace ivmm
