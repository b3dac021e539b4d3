#pragma once

// Reader and writer for the constrained SVG map profile.
//
// The root <svg> carries data-scale-m-per-mm and data-title. Map elements are
// <path> (street: open; building/water: closed with Z) or <circle> (poi) with
// data-id, data-kind, data-name and optional data-level-N attributes. User
// units are millimeters. Anything without data-kind is decoration.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "tactilemap/map_model.hpp"

namespace tactilemap {

namespace svg_detail {

using boost::property_tree::ptree;

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

/// Parses a leading number from `s`, advancing it. Returns false if none.
inline bool take_number(std::string_view& s, double& out) {
  std::string_view rest = s;
  if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), out);
  if (ec != std::errc{} || !std::isfinite(out)) return false;
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  return true;
}

/// Whole-string number, optionally followed by one of `suffixes`.
inline std::optional<double> parse_number(std::string_view s, std::initializer_list<std::string_view> suffixes = {}) {
  s = trim(s);
  for (auto suffix : suffixes)
    if (s.size() > suffix.size() && s.ends_with(suffix)) {
      s.remove_suffix(suffix.size());
      s = trim(s);
      break;
    }
  double v = 0.0;
  if (!take_number(s, v) || !s.empty()) return std::nullopt;
  return v;
}

inline void skip_separators(std::string_view& s) {
  while (!s.empty() && (is_space(s.front()) || s.front() == ',')) s.remove_prefix(1);
}

/// 2D affine transform: x' = a x + c y + e, y' = b x + d y + f.
struct Affine {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

  Point apply(Point p) const { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }
  /// Composition: (*this ∘ rhs), rhs applied first.
  Affine then_inner(const Affine& r) const {
    return {a * r.a + c * r.b, b * r.a + d * r.b, a * r.c + c * r.d, b * r.c + d * r.d,
            a * r.e + c * r.f + e, b * r.e + d * r.f + f};
  }
  double linear_scale() const { return std::sqrt(std::abs(a * d - b * c)); }
};

inline Affine parse_transform(std::string_view s) {
  Affine result;
  s = trim(s);
  while (!s.empty()) {
    skip_separators(s);
    if (s.empty()) break;
    const auto open = s.find('(');
    const auto close = s.find(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
      throw MapError(MapErrc::malformed_document, "bad transform attribute");
    const std::string_view name = trim(s.substr(0, open));
    std::string_view args = s.substr(open + 1, close - open - 1);
    s.remove_prefix(close + 1);

    std::vector<double> v;
    for (;;) {
      skip_separators(args);
      if (args.empty()) break;
      double x = 0.0;
      if (!take_number(args, x)) throw MapError(MapErrc::malformed_document, "bad transform argument");
      v.push_back(x);
    }

    Affine t;
    if (name == "matrix" && v.size() == 6) {
      t = {v[0], v[1], v[2], v[3], v[4], v[5]};
    } else if (name == "translate" && (v.size() == 1 || v.size() == 2)) {
      t.e = v[0];
      t.f = v.size() == 2 ? v[1] : 0.0;
    } else if (name == "scale" && (v.size() == 1 || v.size() == 2)) {
      t.a = v[0];
      t.d = v.size() == 2 ? v[1] : v[0];
    } else if (name == "rotate" && (v.size() == 1 || v.size() == 3)) {
      const double rad = v[0] * std::numbers::pi / 180.0;
      const double cs = std::cos(rad);
      const double sn = std::sin(rad);
      Affine r{cs, sn, -sn, cs, 0, 0};
      if (v.size() == 3) {
        const Affine to{1, 0, 0, 1, v[1], v[2]};
        const Affine from{1, 0, 0, 1, -v[1], -v[2]};
        r = to.then_inner(r).then_inner(from);
      }
      t = r;
    } else {
      throw MapError(MapErrc::malformed_document, "unsupported transform '" + std::string(name) + "'");
    }
    result = result.then_inner(t);
  }
  return result;
}

struct PathData {
  std::vector<Point> points;
  bool closed = false;
};

/// Straight-segment path data (M, L, H, V, Z in either case). A path holds
/// exactly one subpath; curve commands are rejected.
inline PathData parse_path_data(std::string_view d) {
  PathData out;
  Point cur;
  char cmd = 0;
  bool started = false;
  for (;;) {
    skip_separators(d);
    if (d.empty()) break;
    if (out.closed) throw MapError(MapErrc::malformed_document, "path continues after Z; one subpath per element");
    const char c = d.front();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      d.remove_prefix(1);
      switch (c) {
        case 'M': case 'm': case 'L': case 'l': case 'H': case 'h': case 'V': case 'v':
          cmd = c;
          break;
        case 'Z': case 'z':
          if (!started) throw MapError(MapErrc::malformed_document, "Z before any point");
          out.closed = true;
          continue;
        default:
          throw MapError(MapErrc::malformed_document,
                         std::string("unsupported path command '") + c + "'; only straight segments are allowed");
      }
      if ((cmd == 'M' || cmd == 'm') && started)
        throw MapError(MapErrc::malformed_document, "multiple subpaths in one element");
      continue;
    }
    if (cmd == 0) throw MapError(MapErrc::malformed_document, "path data must start with M");
    if (!started && cmd != 'M' && cmd != 'm') throw MapError(MapErrc::malformed_document, "path data must start with M");

    double x = 0.0;
    double y = 0.0;
    auto need = [&](double& v) {
      skip_separators(d);
      if (!take_number(d, v)) throw MapError(MapErrc::malformed_document, "bad number in path data");
    };
    switch (cmd) {
      case 'M': case 'L':
        need(x); need(y);
        cur = {x, y};
        break;
      case 'm': case 'l':
        need(x); need(y);
        cur = started ? Point{cur.x + x, cur.y + y} : Point{x, y};
        break;
      case 'H': need(x); cur.x = x; break;
      case 'h': need(x); cur.x += x; break;
      case 'V': need(y); cur.y = y; break;
      case 'v': need(y); cur.y += y; break;
      default: break;
    }
    out.points.push_back(cur);
    started = true;
    // Extra coordinate pairs after a moveto are implicit linetos.
    if (cmd == 'M') cmd = 'L';
    if (cmd == 'm') cmd = 'l';
  }
  if (out.closed && out.points.size() > 1 && out.points.back() == out.points.front()) out.points.pop_back();
  return out;
}

inline const ptree* attributes(const ptree& node) {
  auto it = node.find("<xmlattr>");
  return it == node.not_found() ? nullptr : &it->second;
}

inline std::optional<std::string> attr(const ptree* attrs, const std::string& name) {
  if (!attrs) return std::nullopt;
  auto it = attrs->find(name);
  if (it == attrs->not_found()) return std::nullopt;
  return it->second.data();
}

inline std::string_view local_name(std::string_view tag) {
  if (tag.starts_with("svg:")) tag.remove_prefix(4);
  return tag;
}

inline std::optional<double> style_property(const std::string& style, std::string_view key) {
  std::string_view s = style;
  while (!s.empty()) {
    const auto semi = s.find(';');
    std::string_view decl = s.substr(0, semi);
    s = semi == std::string_view::npos ? std::string_view{} : s.substr(semi + 1);
    const auto colon = decl.find(':');
    if (colon == std::string_view::npos) continue;
    if (trim(decl.substr(0, colon)) == key) return parse_number(decl.substr(colon + 1), {"mm", "px"});
  }
  return std::nullopt;
}

struct Reader {
  MapDocument doc;
  std::set<std::string, std::less<>> ids;

  MapElement read_element(std::string_view tag, const ptree* attrs, const Affine& xf) {
    MapElement e;
    e.id = attr(attrs, "data-id").value_or("");
    if (e.id.empty()) throw MapError(MapErrc::invalid_element, "map element without data-id");
    const std::string kind_text = attr(attrs, "data-kind").value_or("");
    const auto kind = parse_element_kind(kind_text);
    if (!kind) throw MapError(MapErrc::unknown_kind, "unknown data-kind '" + kind_text + "'", e.id);
    e.kind = *kind;
    if (!ids.insert(e.id).second) throw MapError(MapErrc::duplicate_id, "duplicate id '" + e.id + "'", e.id);
    e.name = attr(attrs, "data-name").value_or("");

    std::map<int, std::string> levels;
    for (const auto& [key, value] : *attrs) {
      std::string_view k = key;
      if (!k.starts_with("data-level-")) continue;
      k.remove_prefix(11);
      int n = 0;
      const auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), n);
      if (ec != std::errc{} || ptr != k.data() + k.size() || n < 1)
        throw MapError(MapErrc::invalid_element, "bad info level attribute '" + key + "'", e.id);
      levels[n] = value.data();
    }
    for (auto& [n, text] : levels) e.levels.push_back({n, std::move(text)});

    if (e.kind == ElementKind::poi) {
      if (tag != "circle") throw MapError(MapErrc::invalid_geometry, "poi '" + e.id + "' must be a <circle>", e.id);
      const auto cx = parse_number(attr(attrs, "cx").value_or("0"), {"mm"});
      const auto cy = parse_number(attr(attrs, "cy").value_or("0"), {"mm"});
      if (!cx || !cy) throw MapError(MapErrc::malformed_document, "bad circle center on '" + e.id + "'", e.id);
      e.geometry.push_back(xf.apply({*cx, *cy}));
    } else {
      if (tag != "path")
        throw MapError(MapErrc::invalid_geometry, std::string(to_string(e.kind)) + " '" + e.id + "' must be a <path>", e.id);
      const auto d = attr(attrs, "d");
      if (!d) throw MapError(MapErrc::malformed_document, "path '" + e.id + "' has no d attribute", e.id);
      PathData path = [&] {
        try {
          return parse_path_data(*d);
        } catch (const MapError& err) {
          throw MapError(err.code(), std::string(err.what()) + " (element '" + e.id + "')", e.id);
        }
      }();
      if (is_area_kind(e.kind) && !path.closed)
        throw MapError(MapErrc::open_polygon, "'" + e.id + "' must be a closed path ending in Z", e.id);
      if (e.kind == ElementKind::street && path.closed)
        throw MapError(MapErrc::invalid_geometry, "street '" + e.id + "' must be an open path", e.id);
      for (Point& p : path.points) p = xf.apply(p);
      e.geometry = std::move(path.points);
      if (e.kind == ElementKind::street) {
        std::optional<double> w;
        if (auto sw = attr(attrs, "stroke-width")) w = parse_number(*sw, {"mm", "px"});
        if (!w) {
          if (auto style = attr(attrs, "style")) w = style_property(*style, "stroke-width");
        }
        if (w) e.line_width_mm = *w * xf.linear_scale();
      }
    }
    if (auto err = check_element(e, doc.canvas_width_mm, doc.canvas_height_mm)) throw *err;
    return e;
  }

  void walk(const ptree& node, const Affine& parent) {
    for (const auto& [tag_raw, child] : node) {
      if (tag_raw.empty() || tag_raw.front() == '<') continue;
      const std::string_view tag = local_name(tag_raw);
      if (tag == "defs" || tag == "symbol" || tag == "clipPath" || tag == "mask" || tag == "pattern" ||
          tag == "marker" || tag == "metadata")
        continue;
      const ptree* attrs = attributes(child);
      Affine xf = parent;
      if (auto t = attr(attrs, "transform")) xf = parent.then_inner(parse_transform(*t));
      if (attr(attrs, "data-kind")) {
        doc.elements.push_back(read_element(tag, attrs, xf));
        continue;
      }
      walk(child, xf);
    }
  }
};

inline void escape_attr(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out += c;
    }
  }
}

inline void append_number(std::string& out, double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), ptr);
}

}  // namespace svg_detail

/// Parses profile text into a document that satisfies every structural
/// invariant, or throws the first MapError encountered in document order.
inline MapDocument parse_map(std::string_view text) {
  using namespace svg_detail;
  ptree tree;
  try {
    std::istringstream in{std::string(text)};
    boost::property_tree::read_xml(in, tree, boost::property_tree::xml_parser::no_comments);
  } catch (const boost::property_tree::ptree_error& e) {
    throw MapError(MapErrc::malformed_document, e.what());
  }

  const ptree* root = nullptr;
  for (const auto& [tag, child] : tree) {
    if (tag.empty() || tag.front() == '<') continue;
    if (local_name(tag) != "svg") throw MapError(MapErrc::malformed_document, "root element is <" + tag + ">, expected <svg>");
    root = &child;
    break;
  }
  if (!root) throw MapError(MapErrc::malformed_document, "no root element");

  Reader r;
  const ptree* attrs = attributes(*root);
  const auto scale_text = attr(attrs, "data-scale-m-per-mm");
  if (!scale_text) throw MapError(MapErrc::missing_scale, "root <svg> lacks data-scale-m-per-mm");
  const auto scale = parse_number(*scale_text);
  if (!scale || !(*scale > 0.0)) throw MapError(MapErrc::missing_scale, "data-scale-m-per-mm must be a positive number");
  r.doc.scale_m_per_mm = *scale;
  r.doc.title = attr(attrs, "data-title").value_or("");

  if (auto vb = attr(attrs, "viewBox")) {
    std::string_view s = *vb;
    std::array<double, 4> v{};
    for (double& x : v) {
      skip_separators(s);
      if (!take_number(s, x)) throw MapError(MapErrc::malformed_document, "bad viewBox");
    }
    skip_separators(s);
    if (!s.empty() || v[0] != 0.0 || v[1] != 0.0 || !(v[2] > 0.0) || !(v[3] > 0.0))
      throw MapError(MapErrc::malformed_document, "viewBox must be '0 0 <width> <height>' in millimeters");
    r.doc.canvas_width_mm = v[2];
    r.doc.canvas_height_mm = v[3];
  } else if (auto w = attr(attrs, "width"), h = attr(attrs, "height"); w && h) {
    const auto wv = parse_number(*w, {"mm"});
    const auto hv = parse_number(*h, {"mm"});
    if (!wv || !hv || !(*wv > 0.0) || !(*hv > 0.0)) throw MapError(MapErrc::malformed_document, "bad width/height");
    r.doc.canvas_width_mm = *wv;
    r.doc.canvas_height_mm = *hv;
  }

  Affine identity;
  if (auto t = attr(attrs, "transform")) identity = parse_transform(*t);
  r.walk(*root, identity);
  return std::move(r.doc);
}

/// Writes the document back in the profile. parse_map(serialize_map(d)) == d.
inline std::string serialize_map(const MapDocument& doc) {
  using namespace svg_detail;
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
  append_number(out, doc.canvas_width_mm);
  out += "mm\" height=\"";
  append_number(out, doc.canvas_height_mm);
  out += "mm\" viewBox=\"0 0 ";
  append_number(out, doc.canvas_width_mm);
  out += ' ';
  append_number(out, doc.canvas_height_mm);
  out += "\" data-scale-m-per-mm=\"";
  append_number(out, doc.scale_m_per_mm);
  out += "\" data-title=\"";
  escape_attr(out, doc.title);
  out += "\">\n";

  for (const auto& e : doc.elements) {
    out += e.kind == ElementKind::poi ? "  <circle" : "  <path";
    out += " data-id=\"";
    escape_attr(out, e.id);
    out += "\" data-kind=\"";
    out += to_string(e.kind);
    out += "\" data-name=\"";
    escape_attr(out, e.name);
    out += '"';
    for (const auto& layer : e.levels) {
      out += " data-level-" + std::to_string(layer.level) + "=\"";
      escape_attr(out, layer.text);
      out += '"';
    }
    if (e.kind == ElementKind::poi) {
      const Point p = e.geometry.empty() ? Point{} : e.geometry.front();
      out += " cx=\"";
      append_number(out, p.x);
      out += "\" cy=\"";
      append_number(out, p.y);
      out += "\" r=\"3\" fill=\"#000\"/>\n";
      continue;
    }
    out += " d=\"";
    for (std::size_t i = 0; i < e.geometry.size(); ++i) {
      out += i == 0 ? "M " : " L ";
      append_number(out, e.geometry[i].x);
      out += ' ';
      append_number(out, e.geometry[i].y);
    }
    if (is_area_kind(e.kind)) out += " Z";
    out += '"';
    switch (e.kind) {
      case ElementKind::street:
        out += " fill=\"none\" stroke=\"#000\"";
        if (e.line_width_mm) {
          out += " stroke-width=\"";
          append_number(out, *e.line_width_mm);
          out += '"';
        }
        break;
      case ElementKind::building: out += " fill=\"#bbb\" stroke=\"#000\""; break;
      case ElementKind::water: out += " fill=\"#9cf\" stroke=\"#036\""; break;
      case ElementKind::poi: break;
    }
    out += "/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace tactilemap
