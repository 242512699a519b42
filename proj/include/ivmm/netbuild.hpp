#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ivmm/geo.hpp"
#include "ivmm/osm.hpp"

namespace ivmm {

/// One directed-capable straight road segment between two consecutive way
/// nodes. The atomic geometry unit of the whole engine.
struct RoadPiece {
  std::int64_t piece_id = 0;
  std::int64_t way_id = 0;
  GeoPoint start;
  GeoPoint end;
  Meters length = 0.0;
  std::string highway;            ///< road class from the way's highway tag
  double maxspeed_kmh = 0.0;      ///< typical speed; > 0 after imputation
  bool maxspeed_imputed = false;  ///< true when the speed was not tagged
  bool oneway = false;
  std::string service;  ///< service tag value, empty when absent
  std::map<std::string, std::string> tags;  ///< full inherited tag map
};

/// Counters accumulated while turning ways into pieces.
struct SplitStats {
  int degenerate_pieces = 0;  ///< zero-length node pairs dropped
};

/**
 * Splits one way into pieces, one per consecutive node pair, inheriting the
 * way's tags. Pairs with identical snapped coordinates are dropped and
 * counted. piece ids are assigned sequentially from *next_piece_id, which is
 * advanced past the ids consumed.
 */
std::vector<RoadPiece> split_into_pieces(const OsmWay &way,
                                         const std::unordered_map<std::int64_t, GeoPoint> &nodes,
                                         std::int64_t *next_piece_id,
                                         SplitStats *stats = nullptr);

/// Runs split_into_pieces over a whole extract in document order.
std::vector<RoadPiece> build_pieces(const OsmExtract &extract,
                                    SplitStats *stats = nullptr);

/**
 * Normalizes a raw maxspeed tag value to km/h. Understands bare numbers
 * (km/h), an explicit km/h or kph suffix, and "NN mph" (converted with
 * 1.609344). Returns nothing for unparseable or non-positive values.
 */
std::optional<double> parse_maxspeed_kmh(const std::string &raw);

/// Counters from the speed imputation pass.
struct ImputeStats {
  int tagged = 0;         ///< pieces with a usable maxspeed tag
  int unparseable = 0;    ///< tagged but not understandable, treated as missing
  int from_region = 0;    ///< filled from the (class, region) mean
  int from_class = 0;     ///< filled from the class-wide mean
  int from_default = 0;   ///< filled from the built-in class table
};

/**
 * Fills maxspeed_kmh for every piece. Pieces with a parseable tag keep it.
 * Missing values take the mean of tagged pieces sharing (highway class,
 * region); failing that the class-wide mean; failing that a built-in
 * per-class default. region_of maps a piece to its region key; pieces from
 * the same partition must map to equal strings. Idempotent.
 */
void impute_maxspeed(std::vector<RoadPiece> &pieces,
                     const std::function<std::string(const RoadPiece &)> &region_of,
                     ImputeStats *stats = nullptr);

/// impute_maxspeed with every piece in one global region.
void impute_maxspeed(std::vector<RoadPiece> &pieces, ImputeStats *stats = nullptr);

/**
 * Resolves the oneway flag for every piece from its tags: yes/true/1 mean
 * oneway, no/false/0 mean two-way, -1 means oneway against the drawn
 * direction (endpoints are swapped and the tag rewritten so a second
 * application is a no-op). Untagged motorway and motorway_link pieces
 * default to oneway; everything else untagged defaults to two-way.
 */
void apply_oneway_defaults(std::vector<RoadPiece> &pieces);

/// Serializes pieces in piece_id order to the asset text format.
std::string serialize_asset(const std::vector<RoadPiece> &pieces);

/// Writes serialize_asset output to a file (atomically via a temp file).
void write_asset(const std::string &path, const std::vector<RoadPiece> &pieces);

/// Parses asset text produced by serialize_asset. Round-trips exactly.
std::vector<RoadPiece> parse_asset_text(const std::string &text);

/// Reads an asset file. Throws VersionMismatch for a foreign header and
/// CorruptAsset for structural or range violations.
std::vector<RoadPiece> read_asset(const std::string &path);

/// Reads a way_id -> region key mapping (two delimited columns per line)
/// used to regionalize speed imputation.
std::unordered_map<std::int64_t, std::string> read_region_map(const std::string &path);

}  // namespace ivmm
