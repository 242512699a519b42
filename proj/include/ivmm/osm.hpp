#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ivmm/geo.hpp"

namespace ivmm {

/// One road way as extracted: ordered node references plus the raw tag map.
struct OsmWay {
  std::int64_t way_id = 0;
  std::vector<std::int64_t> node_refs;
  std::map<std::string, std::string> tags;
};

/// Axis-aligned lat/lon box used to clip an extract at parse time.
struct BoundingBox {
  GeoPoint min_corner;
  GeoPoint max_corner;

  bool contains(const GeoPoint &p) const {
    return p.lat >= min_corner.lat && p.lat <= max_corner.lat &&
           p.lon >= min_corner.lon && p.lon <= max_corner.lon;
  }
};

/// Parsed extract: kept ways, coordinates for every referenced node, and the
/// count of ways dropped for unresolvable or too-few node references.
struct OsmExtract {
  std::vector<OsmWay> ways;
  std::unordered_map<std::int64_t, GeoPoint> nodes;
  int dropped_ways = 0;
};

/**
 * Parses OSM XML text. Keeps ways that carry a highway tag and are not
 * closed areas (area=yes). Ways referencing a node that is absent from the
 * extract, or with fewer than two resolvable nodes, are dropped and counted.
 * With a bounding box, a way is kept only if at least one of its nodes lies
 * inside the box.
 *
 * Throws MalformedInput (with a line number) on broken XML and EmptyExtract
 * when no way survives filtering.
 */
OsmExtract parse_extract_text(std::string_view xml,
                              const std::optional<BoundingBox> &bbox = {});

/// File variant of parse_extract_text.
OsmExtract parse_extract(const std::string &path,
                         const std::optional<BoundingBox> &bbox = {});

}  // namespace ivmm
