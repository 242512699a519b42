#include "ivmm/osm.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

namespace ivmm {

namespace {

// Event-level scanner over the XML subset OSM extracts use: a prolog,
// comments, and nested elements with double- or single-quoted attributes.
// Text content is ignored. Tracks the current line for error messages.
class XmlScanner {
 public:
  explicit XmlScanner(std::string_view src) : src_(src) {}

  struct Element {
    std::string_view name;
    std::vector<std::pair<std::string_view, std::string>> attrs;
    bool self_closing = false;
  };

  enum class EventKind { kStart, kEnd, kEof };

  struct Event {
    EventKind kind;
    Element element;        // kStart only
    std::string_view name;  // kEnd only
  };

  Event next() {
    for (;;) {
      skip_until_markup();
      if (at_end()) return Event{EventKind::kEof, {}, {}};
      if (try_skip("<!--")) {
        skip_comment();
        continue;
      }
      if (try_skip("<?")) {
        skip_processing_instruction();
        continue;
      }
      if (try_skip("<![CDATA[")) {
        skip_cdata();
        continue;
      }
      if (try_skip("<!")) {
        skip_declaration();
        continue;
      }
      if (try_skip("</")) {
        Event ev{EventKind::kEnd, {}, read_name()};
        skip_space();
        expect('>');
        return ev;
      }
      expect('<');
      Event ev{EventKind::kStart, {}, {}};
      ev.element.name = read_name();
      for (;;) {
        skip_space();
        if (try_skip("/>")) {
          ev.element.self_closing = true;
          return ev;
        }
        if (try_skip(">")) return ev;
        auto key = read_name();
        skip_space();
        expect('=');
        skip_space();
        ev.element.attrs.emplace_back(key, read_quoted());
      }
    }
  }

  [[noreturn]] void fail(const std::string &what) const {
    throw MalformedInput("line " + std::to_string(line_) + ": " + what);
  }

  int line() const { return line_; }

 private:
  bool at_end() const { return pos_ >= src_.size(); }

  char peek() const { return src_[pos_]; }

  void advance() {
    if (src_[pos_] == '\n') ++line_;
    ++pos_;
  }

  void skip_until_markup() {
    while (!at_end() && peek() != '<') advance();
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
      advance();
    }
  }

  bool try_skip(std::string_view lit) {
    if (src_.substr(pos_, lit.size()) != lit) return false;
    for (size_t i = 0; i < lit.size(); ++i) advance();
    return true;
  }

  void expect(char c) {
    if (at_end() || peek() != c) {
      fail(std::string("expected '") + c + "'");
    }
    advance();
  }

  void skip_comment() {
    while (!at_end()) {
      if (try_skip("-->")) return;
      advance();
    }
    fail("unterminated comment");
  }

  void skip_processing_instruction() {
    while (!at_end()) {
      if (try_skip("?>")) return;
      advance();
    }
    fail("unterminated processing instruction");
  }

  void skip_cdata() {
    while (!at_end()) {
      if (try_skip("]]>")) return;
      advance();
    }
    fail("unterminated CDATA section");
  }

  void skip_declaration() {
    // DOCTYPE and friends; no nested markup support needed for extracts.
    while (!at_end() && peek() != '>') advance();
    if (at_end()) fail("unterminated declaration");
    advance();
  }

  std::string_view read_name() {
    const size_t start = pos_;
    while (!at_end()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
          c == ':' || c == '-' || c == '.') {
        advance();
      } else {
        break;
      }
    }
    if (pos_ == start) fail("expected a name");
    return src_.substr(start, pos_ - start);
  }

  std::string read_quoted() {
    if (at_end() || (peek() != '"' && peek() != '\'')) {
      fail("expected a quoted attribute value");
    }
    const char quote = peek();
    advance();
    std::string out;
    while (!at_end() && peek() != quote) {
      if (peek() == '&') {
        out += read_entity();
      } else {
        out += peek();
        advance();
      }
    }
    if (at_end()) fail("unterminated attribute value");
    advance();
    return out;
  }

  std::string read_entity() {
    advance();  // consume '&'
    std::string ent;
    while (!at_end() && peek() != ';') {
      ent += peek();
      advance();
    }
    if (at_end()) fail("unterminated entity reference");
    advance();  // consume ';'
    if (ent == "amp") return "&";
    if (ent == "lt") return "<";
    if (ent == "gt") return ">";
    if (ent == "quot") return "\"";
    if (ent == "apos") return "'";
    if (!ent.empty() && ent[0] == '#') {
      int base = 10;
      std::string_view digits(ent);
      digits.remove_prefix(1);
      if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
        base = 16;
        digits.remove_prefix(1);
      }
      unsigned code = 0;
      auto [p, ec] =
          std::from_chars(digits.data(), digits.data() + digits.size(), code, base);
      if (ec != std::errc() || p != digits.data() + digits.size()) {
        fail("bad numeric entity");
      }
      // Extract attribute values are ASCII in practice; encode minimally.
      if (code < 0x80) return std::string(1, static_cast<char>(code));
      std::string utf8;
      if (code < 0x800) {
        utf8 += static_cast<char>(0xC0 | (code >> 6));
        utf8 += static_cast<char>(0x80 | (code & 0x3F));
      } else {
        utf8 += static_cast<char>(0xE0 | (code >> 12));
        utf8 += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
        utf8 += static_cast<char>(0x80 | (code & 0x3F));
      }
      return utf8;
    }
    fail("unknown entity '&" + ent + ";'");
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
};

double parse_double_attr(XmlScanner &sc, std::string_view text,
                         std::string_view what) {
  double value = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || p != text.data() + text.size()) {
    sc.fail("bad " + std::string(what) + " value '" + std::string(text) + "'");
  }
  return value;
}

std::int64_t parse_id_attr(XmlScanner &sc, std::string_view text,
                           std::string_view what) {
  std::int64_t value = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || p != text.data() + text.size()) {
    sc.fail("bad " + std::string(what) + " value '" + std::string(text) + "'");
  }
  return value;
}

const std::string *find_attr(
    const std::vector<std::pair<std::string_view, std::string>> &attrs,
    std::string_view key) {
  for (const auto &[k, v] : attrs) {
    if (k == key) return &v;
  }
  return nullptr;
}

}  // namespace

OsmExtract parse_extract_text(std::string_view xml,
                              const std::optional<BoundingBox> &bbox) {
  XmlScanner sc(xml);
  std::unordered_map<std::int64_t, GeoPoint> all_nodes;
  std::vector<OsmWay> raw_ways;

  std::vector<std::string> stack;
  bool in_way = false;
  OsmWay current;

  for (;;) {
    auto ev = sc.next();
    if (ev.kind == XmlScanner::EventKind::kEof) break;

    if (ev.kind == XmlScanner::EventKind::kEnd) {
      if (stack.empty() || stack.back() != ev.name) {
        sc.fail("mismatched closing tag </" + std::string(ev.name) + ">");
      }
      stack.pop_back();
      if (ev.name == "way" && in_way) {
        raw_ways.push_back(std::move(current));
        current = OsmWay{};
        in_way = false;
      }
      continue;
    }

    const auto &el = ev.element;
    if (el.name == "node") {
      const auto *id = find_attr(el.attrs, "id");
      const auto *lat = find_attr(el.attrs, "lat");
      const auto *lon = find_attr(el.attrs, "lon");
      if (!id || !lat || !lon) sc.fail("node missing id/lat/lon");
      all_nodes[parse_id_attr(sc, *id, "node id")] =
          GeoPoint{parse_double_attr(sc, *lat, "lat"),
                   parse_double_attr(sc, *lon, "lon")};
    } else if (el.name == "way") {
      const auto *id = find_attr(el.attrs, "id");
      if (!id) sc.fail("way missing id");
      current = OsmWay{};
      current.way_id = parse_id_attr(sc, *id, "way id");
      if (el.self_closing) {
        // An empty way carries nothing useful; it is dropped by the
        // node-count filter below.
        raw_ways.push_back(std::move(current));
        current = OsmWay{};
      } else {
        in_way = true;
      }
    } else if (el.name == "nd" && in_way) {
      const auto *ref = find_attr(el.attrs, "ref");
      if (!ref) sc.fail("nd missing ref");
      current.node_refs.push_back(parse_id_attr(sc, *ref, "nd ref"));
    } else if (el.name == "tag" && in_way) {
      const auto *k = find_attr(el.attrs, "k");
      const auto *v = find_attr(el.attrs, "v");
      if (!k || !v) sc.fail("tag missing k/v");
      current.tags[*k] = *v;
    }
    // Tags on nodes, relations, bounds etc. are irrelevant here; their
    // elements still participate in nesting checks.

    if (!el.self_closing) stack.emplace_back(el.name);
  }
  if (!stack.empty()) {
    sc.fail("unclosed element <" + stack.back() + ">");
  }

  OsmExtract out;
  for (auto &way : raw_ways) {
    auto highway = way.tags.find("highway");
    if (highway == way.tags.end()) continue;
    auto area = way.tags.find("area");
    if (area != way.tags.end() && area->second == "yes") continue;

    bool resolvable = way.node_refs.size() >= 2;
    bool inside = !bbox.has_value();
    if (resolvable) {
      for (auto ref : way.node_refs) {
        auto it = all_nodes.find(ref);
        if (it == all_nodes.end()) {
          resolvable = false;
          break;
        }
        if (bbox && bbox->contains(it->second)) inside = true;
      }
    }
    if (!resolvable) {
      ++out.dropped_ways;
      continue;
    }
    if (!inside) continue;
    for (auto ref : way.node_refs) out.nodes[ref] = all_nodes[ref];
    out.ways.push_back(std::move(way));
  }

  if (out.ways.empty()) {
    throw EmptyExtract("no road way survived extract filtering");
  }
  return out;
}

OsmExtract parse_extract(const std::string &path,
                         const std::optional<BoundingBox> &bbox) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot open extract file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return parse_extract_text(text, bbox);
}

}  // namespace ivmm
