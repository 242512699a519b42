#include "ivmm/imputer.hpp"

#include <utility>

#include "ivmm/errors.hpp"

namespace ivmm {

namespace {

void append_point(std::vector<GeoPoint> &run, const GeoPoint &p) {
  if (!run.empty() && run.back() == p) return;
  run.push_back(p);
}

// Foot point, then every intermediate graph node, then the far foot point.
// Consecutive duplicates collapse so zero-length partial ends do not leave
// repeated vertices in the polyline.
void append_leg_geometry(std::vector<GeoPoint> &run, const RoadNetwork &net,
                         const NetworkPath &path, const GeoPoint &from_foot,
                         const GeoPoint &to_foot) {
  append_point(run, from_foot);
  for (int node : path.nodes) append_point(run, net.nodes[node]);
  append_point(run, to_foot);
}

}  // namespace

MatchedRoute impute_route(const RoadNetwork &net, const TrellisGraph &trellis,
                          const std::vector<int> &selection,
                          bool reuse_trellis_paths) {
  const int n = trellis.size();
  if (static_cast<int>(selection.size()) != n) {
    throw MalformedInput("selection size does not match trellis size");
  }

  MatchedRoute route;
  route.anchors.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto &slice = trellis.slices[i];
    if (selection[i] < 0 || selection[i] >= slice.size()) {
      throw MalformedInput("selection index out of range at slice " +
                           std::to_string(i));
    }
    route.anchors.push_back(slice.candidates[selection[i]]);
  }

  std::vector<GeoPoint> run;
  append_point(run, route.anchors.front().foot);

  for (int i = 0; i + 1 < n; ++i) {
    const auto &edges = trellis.edges[i];
    const int t = selection[i];
    const int s = selection[i + 1];

    RouteLeg leg;
    leg.from_ping = trellis.slices[i].ping_index;
    leg.to_ping = trellis.slices[i + 1].ping_index;

    std::optional<NetworkPath> path;
    if (reuse_trellis_paths) {
      if (edges.reachable[t * edges.cols + s]) {
        path = edges.path[t * edges.cols + s];
      }
    } else {
      path = shortest_path(net, route.anchors[i], route.anchors[i + 1]);
    }

    if (path) {
      leg.path = std::move(*path);
      leg.node_count = static_cast<int>(leg.path.nodes.size());
      route.total_length += leg.path.total_length;
      append_leg_geometry(run, net, leg.path, route.anchors[i].foot,
                          route.anchors[i + 1].foot);
    } else {
      leg.gap = true;
      ++route.gap_count;
      route.runs.push_back(std::move(run));
      run.clear();
      append_point(run, route.anchors[i + 1].foot);
    }
    route.legs.push_back(std::move(leg));
  }

  route.runs.push_back(std::move(run));
  return route;
}

}  // namespace ivmm
