#pragma once

#include <string>
#include <vector>

#include "ivmm/imputer.hpp"
#include "ivmm/trajectory.hpp"

namespace ivmm {

/**
 * One feature collection for a matched trajectory: the raw pings, the
 * selected candidate points, one line feature per connected route run, and
 * one annotation feature per gap. Key order is fixed so identical inputs
 * serialize to identical bytes.
 */
std::string route_geojson(const Trajectory &traj, const TrellisGraph &trellis,
                          const MatchedRoute &route);

}  // namespace ivmm
