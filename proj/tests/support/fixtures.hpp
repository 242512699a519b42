#pragma once

// Shared test scaffolding: small OSM documents, piece and candidate
// factories, and hand-built trellises small enough to verify on paper.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ivmm/candidates.hpp"
#include "ivmm/geo.hpp"
#include "ivmm/netbuild.hpp"
#include "ivmm/network.hpp"
#include "ivmm/trajectory.hpp"
#include "ivmm/trellis.hpp"

namespace fixture {

// Two crossing streets sharing node 2, plus a building outline that the
// road filter must ignore.
inline const char *kCrossXml = R"(<?xml version="1.0" encoding="UTF-8"?>
<osm version="0.6" generator="test">
  <node id="1" lat="33.4000" lon="-112.0000"/>
  <node id="2" lat="33.4000" lon="-111.9990"/>
  <node id="3" lat="33.4000" lon="-111.9980"/>
  <node id="4" lat="33.4010" lon="-111.9990"/>
  <node id="5" lat="33.3990" lon="-111.9990"/>
  <way id="10">
    <nd ref="1"/>
    <nd ref="2"/>
    <nd ref="3"/>
    <tag k="highway" v="residential"/>
    <tag k="name" v="Main &amp; First"/>
  </way>
  <way id="11">
    <nd ref="4"/>
    <nd ref="2"/>
    <nd ref="5"/>
    <tag k="highway" v="tertiary"/>
    <tag k="maxspeed" v="30 mph"/>
  </way>
  <way id="12">
    <nd ref="1"/>
    <nd ref="4"/>
    <nd ref="2"/>
    <nd ref="1"/>
    <tag k="building" v="yes"/>
  </way>
</osm>
)";

// One clean way plus one way pointing at a node the extract does not carry.
inline const char *kMissingRefXml = R"(<?xml version="1.0"?>
<osm>
  <node id="1" lat="33.40" lon="-112.00"/>
  <node id="2" lat="33.41" lon="-112.00"/>
  <node id="3" lat="33.42" lon="-112.00"/>
  <way id="20">
    <nd ref="1"/>
    <nd ref="2"/>
    <tag k="highway" v="service"/>
    <tag k="service" v="alley"/>
  </way>
  <way id="21">
    <nd ref="2"/>
    <nd ref="99"/>
    <nd ref="3"/>
    <tag k="highway" v="residential"/>
  </way>
</osm>
)";

// Three disjoint highway ways with 4, 2, and 5 nodes.
inline const char *kThreeWaysXml = R"(<?xml version="1.0"?>
<osm>
  <node id="1" lat="33.400" lon="-112.000"/>
  <node id="2" lat="33.401" lon="-112.000"/>
  <node id="3" lat="33.402" lon="-112.000"/>
  <node id="4" lat="33.403" lon="-112.000"/>
  <node id="5" lat="33.500" lon="-112.000"/>
  <node id="6" lat="33.501" lon="-112.000"/>
  <node id="7" lat="33.600" lon="-112.000"/>
  <node id="8" lat="33.601" lon="-112.000"/>
  <node id="9" lat="33.602" lon="-112.000"/>
  <node id="10" lat="33.603" lon="-112.000"/>
  <node id="11" lat="33.604" lon="-112.000"/>
  <way id="31">
    <nd ref="1"/>
    <nd ref="2"/>
    <nd ref="3"/>
    <nd ref="4"/>
    <tag k="highway" v="primary"/>
  </way>
  <way id="32">
    <nd ref="5"/>
    <nd ref="6"/>
    <tag k="highway" v="secondary"/>
  </way>
  <way id="33">
    <nd ref="7"/>
    <nd ref="8"/>
    <nd ref="9"/>
    <nd ref="10"/>
    <nd ref="11"/>
    <tag k="highway" v="tertiary"/>
  </way>
</osm>
)";

// A pedestrian square mapped as a closed highway area; must be skipped.
inline const char *kAreaXml = R"(<?xml version="1.0"?>
<osm>
  <node id="1" lat="33.40" lon="-112.00"/>
  <node id="2" lat="33.41" lon="-112.00"/>
  <node id="3" lat="33.41" lon="-111.99"/>
  <way id="40">
    <nd ref="1"/>
    <nd ref="2"/>
    <nd ref="3"/>
    <nd ref="1"/>
    <tag k="highway" v="pedestrian"/>
    <tag k="area" v="yes"/>
  </way>
  <way id="41">
    <nd ref="1"/>
    <nd ref="2"/>
    <tag k="highway" v="residential"/>
  </way>
</osm>
)";

inline double lerp(double a, double b, double t) { return a + t * (b - a); }

/// Straight two-way piece with the length derived from its geometry.
inline ivmm::RoadPiece piece_between(std::int64_t piece_id, std::int64_t way_id,
                                     const ivmm::GeoPoint &a,
                                     const ivmm::GeoPoint &b,
                                     double maxspeed_kmh = 50.0,
                                     bool oneway = false,
                                     const std::string &highway = "residential") {
  ivmm::RoadPiece p;
  p.piece_id = piece_id;
  p.way_id = way_id;
  p.start = a;
  p.end = b;
  p.length = ivmm::geodesic_distance(a, b);
  p.highway = highway;
  p.maxspeed_kmh = maxspeed_kmh;
  p.oneway = oneway;
  return p;
}

/// East-west chain of count pieces: piece i runs from column i to i+1,
/// span_deg of longitude each, ids counting from 1 on way 1.
inline std::vector<ivmm::RoadPiece> chain_pieces(
    int count, double span_deg = 0.001,
    const ivmm::GeoPoint &origin = {33.4, -112.0}) {
  std::vector<ivmm::RoadPiece> out;
  for (int i = 0; i < count; ++i) {
    const ivmm::GeoPoint a{origin.lat, origin.lon + i * span_deg};
    const ivmm::GeoPoint b{origin.lat, origin.lon + (i + 1) * span_deg};
    out.push_back(piece_between(i + 1, 1, a, b));
  }
  return out;
}

/// Candidate sitting exactly on a piece at the given fraction.
inline ivmm::Candidate candidate_on(const ivmm::RoadNetwork &net,
                                    int piece_index, double frac,
                                    int ping_index = 0,
                                    int candidate_index = 0) {
  const ivmm::RoadPiece &p = net.pieces[piece_index];
  ivmm::Candidate c;
  c.ping_index = ping_index;
  c.candidate_index = candidate_index;
  c.piece_id = p.piece_id;
  c.piece_index = piece_index;
  c.foot = ivmm::GeoPoint{lerp(p.start.lat, p.end.lat, frac),
                          lerp(p.start.lon, p.end.lon, frac)};
  c.frac = frac;
  c.dist = 0.0;
  return c;
}

inline ivmm::Ping ping_at(const ivmm::GeoPoint &pt, double ts, int index = 0) {
  ivmm::Ping ping;
  ping.index = index;
  ping.point = pt;
  ping.timestamp_s = ts;
  return ping;
}

/// Trajectory visiting the given points at a fixed interval.
inline ivmm::Trajectory pings_along(const std::vector<ivmm::GeoPoint> &points,
                                    double interval_s = 10.0) {
  ivmm::Trajectory traj;
  traj.device_id = "test";
  for (std::size_t i = 0; i < points.size(); ++i) {
    traj.pings.push_back(
        ping_at(points[i], 100.0 + interval_s * i, static_cast<int>(i)));
  }
  return traj;
}

/// Candidate lists for every ping of a trajectory, as the pipeline builds
/// them.
inline std::vector<std::vector<ivmm::Candidate>> candidates_for(
    const ivmm::RoadNetwork &net, const ivmm::Trajectory &traj, double alpha,
    int k) {
  const ivmm::SpatialIndex index = ivmm::build_index(net, alpha);
  std::vector<std::vector<ivmm::Candidate>> out;
  for (const auto &ping : traj.pings) {
    out.push_back(ivmm::generate_candidates(net, index, ping, alpha, k));
  }
  return out;
}

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/**
 * Trellis assembled from literal emission vectors and row-major weight
 * matrices (weights[i] connects slice i to i+1; kNegInf cells are
 * unreachable, an all-kNegInf matrix is a break). Slices sit spacing_m
 * apart on an east-west line so distance weights vary between rounds, and
 * timestamps advance 10 s per slice.
 */
inline ivmm::TrellisGraph hand_trellis(
    const std::vector<std::vector<double>> &emissions,
    const std::vector<std::vector<std::vector<double>>> &weights,
    double spacing_m = 100.0) {
  ivmm::TrellisGraph trellis;
  const ivmm::GeoPoint anchor{33.4, -112.0};
  for (std::size_t i = 0; i < emissions.size(); ++i) {
    ivmm::TrellisSlice slice;
    slice.ping_index = static_cast<int>(i);
    slice.position = ivmm::offset_by_meters(anchor, spacing_m * i, 0.0);
    slice.timestamp_s = 10.0 * i;
    for (std::size_t s = 0; s < emissions[i].size(); ++s) {
      ivmm::Candidate c;
      c.ping_index = static_cast<int>(i);
      c.candidate_index = static_cast<int>(s);
      c.piece_id = static_cast<std::int64_t>(i * 100 + s + 1);
      c.foot = slice.position;
      c.dist = 0.0;
      slice.candidates.push_back(c);
      slice.emission.push_back(emissions[i][s]);
    }
    trellis.slices.push_back(std::move(slice));
  }
  for (std::size_t i = 0; i + 1 < emissions.size(); ++i) {
    ivmm::TrellisEdges edges;
    edges.rows = static_cast<int>(emissions[i].size());
    edges.cols = static_cast<int>(emissions[i + 1].size());
    edges.d_m = ivmm::geodesic_distance(trellis.slices[i].position,
                                        trellis.slices[i + 1].position);
    edges.dt_s = 10.0;
    edges.is_break = true;
    for (int t = 0; t < edges.rows; ++t) {
      for (int s = 0; s < edges.cols; ++s) {
        const double w = weights[i][t][s];
        edges.weight.push_back(w);
        edges.reachable.push_back(w != kNegInf);
        if (w != kNegInf) edges.is_break = false;
      }
    }
    edges.path.resize(edges.weight.size());
    trellis.edges.push_back(std::move(edges));
  }
  return trellis;
}

}  // namespace fixture
