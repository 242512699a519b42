#include "ivmm/geojson.hpp"

#include "json.hpp"

namespace ivmm {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json position(const GeoPoint &p) {
  return ordered_json::array({p.lon, p.lat});
}

ordered_json feature(const char *role, ordered_json properties,
                     ordered_json geometry) {
  ordered_json f;
  f["type"] = "Feature";
  properties["role"] = role;
  f["properties"] = std::move(properties);
  f["geometry"] = std::move(geometry);
  return f;
}

ordered_json multipoint(const std::vector<GeoPoint> &points) {
  ordered_json g;
  g["type"] = "MultiPoint";
  auto &coords = g["coordinates"] = ordered_json::array();
  for (const auto &p : points) coords.push_back(position(p));
  return g;
}

// A run that consists of a single anchor cannot be a line.
ordered_json run_geometry(const std::vector<GeoPoint> &run) {
  ordered_json g;
  if (run.size() == 1) {
    g["type"] = "Point";
    g["coordinates"] = position(run[0]);
    return g;
  }
  g["type"] = "LineString";
  auto &coords = g["coordinates"] = ordered_json::array();
  for (const auto &p : run) coords.push_back(position(p));
  return g;
}

}  // namespace

std::string route_geojson(const Trajectory &traj, const TrellisGraph &trellis,
                          const MatchedRoute &route) {
  ordered_json doc;
  doc["type"] = "FeatureCollection";
  {
    ordered_json props;
    props["device_id"] = traj.device_id;
    props["ping_count"] = traj.pings.size();
    props["matched_count"] = trellis.size();
    props["gap_count"] = route.gap_count;
    props["route_length_m"] = route.total_length;
    doc["properties"] = std::move(props);
  }
  auto &features = doc["features"] = ordered_json::array();

  {
    std::vector<GeoPoint> raw;
    raw.reserve(traj.pings.size());
    for (const auto &p : traj.pings) raw.push_back(p.point);
    ordered_json props;
    props["count"] = raw.size();
    features.push_back(feature("raw", std::move(props), multipoint(raw)));
  }

  {
    std::vector<GeoPoint> feet;
    ordered_json piece_ids = ordered_json::array();
    feet.reserve(route.anchors.size());
    for (const auto &anchor : route.anchors) {
      feet.push_back(anchor.foot);
      piece_ids.push_back(anchor.piece_id);
    }
    ordered_json props;
    props["piece_ids"] = std::move(piece_ids);
    features.push_back(feature("matched", std::move(props), multipoint(feet)));
  }

  for (std::size_t i = 0; i < route.runs.size(); ++i) {
    ordered_json props;
    props["run"] = i;
    features.push_back(
        feature("route", std::move(props), run_geometry(route.runs[i])));
  }

  // Leg i sits between slices i and i+1, so the anchors around a gap are
  // found by the leg's own index.
  for (std::size_t i = 0; i < route.legs.size(); ++i) {
    const RouteLeg &leg = route.legs[i];
    if (!leg.gap) continue;
    ordered_json props;
    props["from_ping"] = leg.from_ping;
    props["to_ping"] = leg.to_ping;
    ordered_json g;
    g["type"] = "LineString";
    g["coordinates"] = ordered_json::array(
        {position(route.anchors[i].foot), position(route.anchors[i + 1].foot)});
    features.push_back(feature("gap", std::move(props), std::move(g)));
  }

  std::string out = doc.dump(2);
  out += '\n';
  return out;
}

}  // namespace ivmm
