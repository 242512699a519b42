#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ivmm/geo.hpp"
#include "ivmm/netbuild.hpp"
#include "ivmm/trajectory.hpp"

namespace ivmm {

/// One directed traversal of a piece in the routing graph.
struct Arc {
  int to = 0;           ///< head node
  int piece_index = 0;  ///< index into RoadNetwork::pieces
  bool forward = true;  ///< true when traversing start -> end
  Meters length = 0.0;
};

/**
 * Routing graph over road pieces. Nodes are piece endpoints deduplicated by
 * rounding coordinates to 1e-6 degrees; every piece contributes one arc in
 * its drawn direction and, unless oneway, a second opposed arc.
 */
struct RoadNetwork {
  std::vector<RoadPiece> pieces;
  std::vector<GeoPoint> nodes;
  std::vector<int> piece_tail;  ///< node at piece.start, per piece
  std::vector<int> piece_head;  ///< node at piece.end, per piece

  // Arc adjacency in compressed sparse rows: arcs of node n live in
  // arcs[arc_offset[n] .. arc_offset[n+1]).
  std::vector<int> arc_offset;
  std::vector<Arc> arcs;

  std::vector<int> component;  ///< weakly connected component id per node
  int component_count = 0;

  std::unordered_map<std::int64_t, int> piece_index_by_id;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int arc_count() const { return static_cast<int>(arcs.size()); }
};

/// Builds the routing graph. Throws EmptyNetwork for an empty piece list and
/// CorruptAsset when a piece violates its invariants.
RoadNetwork build_graph(std::vector<RoadPiece> pieces);

/// One traversed stretch of a piece inside a path.
struct PathStep {
  std::int64_t piece_id = 0;
  bool forward = true;   ///< direction relative to the piece's drawn geometry
  Meters traversed = 0;  ///< length actually covered on this piece
};

/**
 * A network path between two candidate foot points. steps covers the partial
 * entry piece, every full piece, and the partial exit piece in order;
 * total_length is the exact sum of the step lengths. nodes lists the graph
 * nodes visited between the partial ends (empty for a same-piece path).
 */
struct NetworkPath {
  std::vector<PathStep> steps;
  Meters total_length = 0.0;
  double entry_frac = 0.0;
  double exit_frac = 0.0;
  std::vector<int> nodes;
};

inline constexpr double kUnlimitedRadius = std::numeric_limits<double>::infinity();

/**
 * Length-minimal path between two candidates, or nothing when the target is
 * unreachable. Searches stop early once every target is settled and never
 * expand labels beyond max_radius meters.
 */
std::optional<NetworkPath> shortest_path(const RoadNetwork &net,
                                         const Candidate &from,
                                         const Candidate &to,
                                         double max_radius = kUnlimitedRadius);

/**
 * All-pairs candidate paths computed as one single-source search per from
 * candidate. result[i][j] is the path from from_set[i] to to_set[j].
 */
std::vector<std::vector<std::optional<NetworkPath>>> many_to_many_shortest(
    const RoadNetwork &net, const std::vector<Candidate> &from_set,
    const std::vector<Candidate> &to_set,
    double max_radius = kUnlimitedRadius);

/// Node-to-node arc route (arc indices), used by synthetic route generation.
std::optional<std::vector<int>> shortest_arc_route(const RoadNetwork &net,
                                                   int from_node, int to_node);

}  // namespace ivmm
