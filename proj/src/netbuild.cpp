#include "ivmm/netbuild.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ivmm/fileio.hpp"
#include "json.hpp"

namespace ivmm {

namespace {

constexpr char kAssetHeader[] = "ivmm-asset-v1";
constexpr double kMphToKmh = 1.609344;

// Built-in typical speeds (km/h) per road class, the imputation floor when
// no tagged piece shares the class. Link roads inherit their parent class.
double builtin_class_speed(std::string_view highway) {
  std::string_view base = highway;
  if (base.size() > 5 && base.substr(base.size() - 5) == "_link") {
    base = base.substr(0, base.size() - 5);
  }
  if (base == "motorway") return 110.0;
  if (base == "trunk") return 90.0;
  if (base == "primary") return 70.0;
  if (base == "secondary") return 60.0;
  if (base == "tertiary") return 50.0;
  if (base == "residential" || base == "unclassified") return 40.0;
  if (base == "service") return 20.0;
  if (base == "living_street") return 15.0;
  if (base == "footway" || base == "path" || base == "track" ||
      base == "cycleway") {
    return 10.0;
  }
  return 40.0;
}

std::string trim_copy(const std::string &s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_asset_double(const std::string &field, int line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || p != field.data() + field.size() ||
      !std::isfinite(v)) {
    throw CorruptAsset("line " + std::to_string(line) + ": bad number '" +
                       field + "'");
  }
  return v;
}

std::int64_t parse_asset_id(const std::string &field, int line) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || p != field.data() + field.size()) {
    throw CorruptAsset("line " + std::to_string(line) + ": bad id '" + field +
                       "'");
  }
  return v;
}

bool parse_asset_flag(const std::string &field, int line) {
  if (field == "0") return false;
  if (field == "1") return true;
  throw CorruptAsset("line " + std::to_string(line) + ": bad flag '" + field +
                     "'");
}

std::vector<std::string> split_tabs(const std::string &line) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

std::vector<RoadPiece> split_into_pieces(
    const OsmWay &way, const std::unordered_map<std::int64_t, GeoPoint> &nodes,
    std::int64_t *next_piece_id, SplitStats *stats) {
  std::vector<RoadPiece> out;
  for (size_t i = 0; i + 1 < way.node_refs.size(); ++i) {
    const GeoPoint a = nodes.at(way.node_refs[i]);
    const GeoPoint b = nodes.at(way.node_refs[i + 1]);
    if (a == b) {
      if (stats) ++stats->degenerate_pieces;
      continue;
    }
    RoadPiece piece;
    piece.piece_id = (*next_piece_id)++;
    piece.way_id = way.way_id;
    piece.start = a;
    piece.end = b;
    piece.length = geodesic_distance(a, b);
    auto hw = way.tags.find("highway");
    piece.highway = hw == way.tags.end() ? std::string() : hw->second;
    auto sv = way.tags.find("service");
    piece.service = sv == way.tags.end() ? std::string() : sv->second;
    piece.tags = way.tags;
    out.push_back(std::move(piece));
  }
  return out;
}

std::vector<RoadPiece> build_pieces(const OsmExtract &extract,
                                    SplitStats *stats) {
  std::vector<RoadPiece> out;
  std::int64_t next_id = 1;
  for (const auto &way : extract.ways) {
    auto pieces = split_into_pieces(way, extract.nodes, &next_id, stats);
    out.insert(out.end(), std::make_move_iterator(pieces.begin()),
               std::make_move_iterator(pieces.end()));
  }
  return out;
}

std::optional<double> parse_maxspeed_kmh(const std::string &raw) {
  const std::string text = trim_copy(raw);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc()) return std::nullopt;
  std::string unit = trim_copy(std::string(p, text.data() + text.size()));
  std::transform(unit.begin(), unit.end(), unit.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (unit == "mph") {
    value *= kMphToKmh;
  } else if (!unit.empty() && unit != "km/h" && unit != "kmh" && unit != "kph") {
    return std::nullopt;
  }
  if (!std::isfinite(value) || value <= 0.0) return std::nullopt;
  return value;
}

void impute_maxspeed(std::vector<RoadPiece> &pieces,
                     const std::function<std::string(const RoadPiece &)> &region_of,
                     ImputeStats *stats) {
  struct Mean {
    double sum = 0.0;
    int n = 0;
  };
  std::map<std::pair<std::string, std::string>, Mean> by_class_region;
  std::map<std::string, Mean> by_class;

  // First pass: settle tagged pieces and collect the means.
  std::vector<bool> tagged(pieces.size(), false);
  for (size_t i = 0; i < pieces.size(); ++i) {
    auto &piece = pieces[i];
    auto tag = piece.tags.find("maxspeed");
    if (tag == piece.tags.end()) continue;
    auto parsed = parse_maxspeed_kmh(tag->second);
    if (!parsed) {
      if (stats) ++stats->unparseable;
      continue;
    }
    piece.maxspeed_kmh = *parsed;
    piece.maxspeed_imputed = false;
    tagged[i] = true;
    if (stats) ++stats->tagged;
    auto &cr = by_class_region[{piece.highway, region_of(piece)}];
    cr.sum += *parsed;
    ++cr.n;
    auto &c = by_class[piece.highway];
    c.sum += *parsed;
    ++c.n;
  }

  // Second pass: fill the rest from the most specific mean available.
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (tagged[i]) continue;
    auto &piece = pieces[i];
    piece.maxspeed_imputed = true;
    auto cr = by_class_region.find({piece.highway, region_of(piece)});
    if (cr != by_class_region.end() && cr->second.n > 0) {
      piece.maxspeed_kmh = cr->second.sum / cr->second.n;
      if (stats) ++stats->from_region;
      continue;
    }
    auto c = by_class.find(piece.highway);
    if (c != by_class.end() && c->second.n > 0) {
      piece.maxspeed_kmh = c->second.sum / c->second.n;
      if (stats) ++stats->from_class;
      continue;
    }
    piece.maxspeed_kmh = builtin_class_speed(piece.highway);
    if (stats) ++stats->from_default;
  }
}

void impute_maxspeed(std::vector<RoadPiece> &pieces, ImputeStats *stats) {
  impute_maxspeed(
      pieces, [](const RoadPiece &) { return std::string(); }, stats);
}

void apply_oneway_defaults(std::vector<RoadPiece> &pieces) {
  for (auto &piece : pieces) {
    auto tag = piece.tags.find("oneway");
    if (tag != piece.tags.end()) {
      const std::string &v = tag->second;
      if (v == "yes" || v == "true" || v == "1") {
        piece.oneway = true;
        continue;
      }
      if (v == "no" || v == "false" || v == "0") {
        piece.oneway = false;
        continue;
      }
      if (v == "-1") {
        // Oneway against the drawn direction: flip the geometry and
        // normalize the tag so reapplying the defaults changes nothing.
        std::swap(piece.start, piece.end);
        piece.tags["oneway"] = "yes";
        piece.oneway = true;
        continue;
      }
      // Unrecognized value: fall through to the class defaults.
    }
    piece.oneway =
        piece.highway == "motorway" || piece.highway == "motorway_link";
  }
}

std::string serialize_asset(const std::vector<RoadPiece> &pieces) {
  std::vector<const RoadPiece *> ordered;
  ordered.reserve(pieces.size());
  for (const auto &p : pieces) ordered.push_back(&p);
  std::sort(ordered.begin(), ordered.end(),
            [](const RoadPiece *a, const RoadPiece *b) {
              return a->piece_id < b->piece_id;
            });

  std::string out = kAssetHeader;
  out += '\n';
  for (const auto *p : ordered) {
    nlohmann::json tags = nlohmann::json::object();
    for (const auto &[k, v] : p->tags) tags[k] = v;
    out += std::to_string(p->piece_id);
    out += '\t';
    out += std::to_string(p->way_id);
    out += '\t';
    out += format_double(p->start.lat);
    out += '\t';
    out += format_double(p->start.lon);
    out += '\t';
    out += format_double(p->end.lat);
    out += '\t';
    out += format_double(p->end.lon);
    out += '\t';
    out += format_double(p->length);
    out += '\t';
    out += p->highway;
    out += '\t';
    out += format_double(p->maxspeed_kmh);
    out += '\t';
    out += p->maxspeed_imputed ? '1' : '0';
    out += '\t';
    out += p->oneway ? '1' : '0';
    out += '\t';
    out += p->service;
    out += '\t';
    out += tags.dump();
    out += '\n';
  }
  return out;
}

void write_asset(const std::string &path, const std::vector<RoadPiece> &pieces) {
  write_file_atomic(path, serialize_asset(pieces));
}

std::vector<RoadPiece> parse_asset_text(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw VersionMismatch("asset file is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kAssetHeader) {
    throw VersionMismatch("unsupported asset header '" + line + "'");
  }

  std::vector<RoadPiece> pieces;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 13) {
      throw CorruptAsset("line " + std::to_string(lineno) + ": expected 13 columns, got " +
                         std::to_string(cols.size()));
    }
    RoadPiece p;
    p.piece_id = parse_asset_id(cols[0], lineno);
    p.way_id = parse_asset_id(cols[1], lineno);
    p.start.lat = parse_asset_double(cols[2], lineno);
    p.start.lon = parse_asset_double(cols[3], lineno);
    p.end.lat = parse_asset_double(cols[4], lineno);
    p.end.lon = parse_asset_double(cols[5], lineno);
    p.length = parse_asset_double(cols[6], lineno);
    p.highway = cols[7];
    p.maxspeed_kmh = parse_asset_double(cols[8], lineno);
    p.maxspeed_imputed = parse_asset_flag(cols[9], lineno);
    p.oneway = parse_asset_flag(cols[10], lineno);
    p.service = cols[11];
    nlohmann::json tags;
    try {
      tags = nlohmann::json::parse(cols[12]);
    } catch (const nlohmann::json::exception &e) {
      throw CorruptAsset("line " + std::to_string(lineno) + ": bad tag column: " + e.what());
    }
    if (!tags.is_object()) {
      throw CorruptAsset("line " + std::to_string(lineno) + ": tag column is not an object");
    }
    for (auto it = tags.begin(); it != tags.end(); ++it) {
      if (!it.value().is_string()) {
        throw CorruptAsset("line " + std::to_string(lineno) + ": tag value is not a string");
      }
      p.tags[it.key()] = it.value().get<std::string>();
    }
    if (p.length <= 0.0 || p.maxspeed_kmh <= 0.0 || p.start == p.end) {
      throw CorruptAsset("line " + std::to_string(lineno) + ": piece violates range invariants");
    }
    pieces.push_back(std::move(p));
  }
  return pieces;
}

std::vector<RoadPiece> read_asset(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptAsset("cannot open asset file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_asset_text(buf.str());
}

std::unordered_map<std::int64_t, std::string> read_region_map(
    const std::string &path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open region map: " + path);
  std::unordered_map<std::int64_t, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string trimmed = trim_copy(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    // Accept tab or comma separation.
    size_t sep = trimmed.find_first_of("\t,");
    if (sep == std::string::npos) {
      throw MalformedInput("line " + std::to_string(lineno) +
                           ": expected two columns in region map");
    }
    const std::string id_text = trim_copy(trimmed.substr(0, sep));
    const std::string region = trim_copy(trimmed.substr(sep + 1));
    std::int64_t id = 0;
    auto [p, ec] =
        std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (ec != std::errc() || p != id_text.data() + id_text.size()) {
      throw MalformedInput("line " + std::to_string(lineno) +
                           ": bad way id in region map");
    }
    out[id] = region;
  }
  return out;
}

}  // namespace ivmm
