#include "ivmm/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ivmm/errors.hpp"

namespace ivmm {

double quantile(const std::vector<double> &sorted_values, double q) {
  if (sorted_values.empty()) throw EmptyInput("quantile of empty sample");
  const auto n = sorted_values.size();
  if (n == 1) return sorted_values[0];
  const double h = static_cast<double>(n - 1) * q;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted_values[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

SummaryStats summarize(std::vector<double> values) {
  if (values.empty()) throw EmptyInput("summary of empty sample");
  std::sort(values.begin(), values.end());

  SummaryStats out;
  out.n = static_cast<int>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / out.n;

  double sq = 0.0;
  for (double v : values) {
    const double d = v - out.mean;
    sq += d * d;
  }
  out.std_dev = std::sqrt(sq / out.n);

  out.min = values.front();
  out.max = values.back();
  out.q1 = quantile(values, 0.25);
  out.median = quantile(values, 0.5);
  out.q3 = quantile(values, 0.75);
  return out;
}

std::vector<double> selected_candidate_distances(const TrellisGraph &trellis,
                                                 const std::vector<int> &selection) {
  if (static_cast<int>(selection.size()) != trellis.size()) {
    throw MalformedInput("selection size does not match trellis size");
  }
  std::vector<double> out;
  out.reserve(selection.size());
  for (int i = 0; i < trellis.size(); ++i) {
    out.push_back(trellis.slices[i].candidates[selection[i]].dist);
  }
  return out;
}

LengthVariation path_length_variation(const TrellisGraph &trellis,
                                      const std::vector<int> &selection) {
  if (static_cast<int>(selection.size()) != trellis.size()) {
    throw MalformedInput("selection size does not match trellis size");
  }

  LengthVariation out;
  for (int i = 0; i + 1 < trellis.size(); ++i) {
    out.raw += geodesic_distance(trellis.slices[i].position,
                                 trellis.slices[i + 1].position);
    out.matched += geodesic_distance(
        trellis.slices[i].candidates[selection[i]].foot,
        trellis.slices[i + 1].candidates[selection[i + 1]].foot);
  }
  if (out.raw <= 0.0) {
    throw ZeroLengthRaw("raw polyline has zero length");
  }
  out.abs_diff = std::abs(out.raw - out.matched);
  out.rel_diff = out.abs_diff / out.raw;
  return out;
}

}  // namespace ivmm
