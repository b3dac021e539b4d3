#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "tactilemap/fixture_map.hpp"
#include "tactilemap/svg_profile.hpp"

using namespace tactilemap;

namespace {

std::string wrap(const std::string& body, const std::string& root_attrs = "data-scale-m-per-mm=\"2\"") {
  return "<?xml version=\"1.0\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 420 297\" " + root_attrs +
         ">\n" + body + "</svg>\n";
}

MapErrc error_of(const std::string& text) {
  try {
    parse_map(text);
  } catch (const MapError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return MapErrc::unknown_element;
}

}  // namespace

TEST(ParseMap, FixtureHasNineteenElements) {
  const MapDocument doc = parse_map(serialize_map(fixture_city_map()));
  EXPECT_EQ(doc.elements.size(), 19u);
  EXPECT_TRUE(equivalent(doc, fixture_city_map()));
}

TEST(ParseMap, EmptyDocument) {
  const MapDocument doc = parse_map(wrap(""));
  EXPECT_TRUE(doc.elements.empty());
  EXPECT_EQ(doc.scale_m_per_mm, 2.0);
  EXPECT_EQ(doc.canvas_width_mm, 420.0);
}

TEST(ParseMap, EmptyMapSerializesToRootOnly) {
  MapDocument doc;
  doc.scale_m_per_mm = 1.5;
  const std::string text = serialize_map(doc);
  EXPECT_EQ(text.find("<path"), std::string::npos);
  EXPECT_EQ(text.find("<circle"), std::string::npos);
  EXPECT_NE(text.find("data-scale-m-per-mm=\"1.5\""), std::string::npos);
  EXPECT_TRUE(equivalent(parse_map(text), doc));
}

TEST(ParseMap, DuplicateHotel) {
  MapDocument doc = fixture_city_map();
  MapElement twin = *doc.find("hotel");
  twin.geometry = {{100, 100}};
  doc.elements.push_back(twin);
  EXPECT_EQ(error_of(serialize_map(doc)), MapErrc::duplicate_id);
}

TEST(ParseMap, Errors) {
  EXPECT_EQ(error_of("<svg><path"), MapErrc::malformed_document);
  EXPECT_EQ(error_of("not xml"), MapErrc::malformed_document);
  EXPECT_EQ(error_of(wrap("<path data-id=\"a\" data-kind=\"forest\" data-name=\"a\" d=\"M 0 0 L 1 1\"/>")),
            MapErrc::unknown_kind);
  EXPECT_EQ(error_of(wrap("<path data-id=\"b\" data-kind=\"building\" data-name=\"b\" d=\"M 0 0 L 10 0 L 10 10\"/>")),
            MapErrc::open_polygon);
  EXPECT_EQ(error_of(wrap("<path data-id=\"w\" data-kind=\"water\" data-name=\"w\" d=\"M 0 0 L 10 0 L 10 10\"/>")),
            MapErrc::open_polygon);
  EXPECT_EQ(error_of(wrap("", "data-title=\"x\"")), MapErrc::missing_scale);
  EXPECT_EQ(error_of(wrap("", "data-scale-m-per-mm=\"-1\"")), MapErrc::missing_scale);
  EXPECT_EQ(error_of(wrap("<circle data-id=\"p\" data-kind=\"poi\" data-name=\"p\" cx=\"500\" cy=\"10\" r=\"3\"/>")),
            MapErrc::out_of_canvas);
  EXPECT_EQ(error_of(wrap("<path data-id=\"s\" data-kind=\"street\" data-name=\"s\" d=\"M 0 0 L 10 0 L 10 400\"/>")),
            MapErrc::out_of_canvas);
}

TEST(ParseMap, GeometryMustMatchKind) {
  EXPECT_EQ(error_of(wrap("<path data-id=\"b\" data-kind=\"building\" data-name=\"b\" d=\"M 0 0 L 10 10 L 10 0 L 0 10 Z\"/>")),
            MapErrc::invalid_geometry);  // self-intersecting
  EXPECT_EQ(error_of(wrap("<path data-id=\"b\" data-kind=\"building\" data-name=\"b\" d=\"M 0 0 L 10 0 Z\"/>")),
            MapErrc::invalid_geometry);
  EXPECT_EQ(error_of(wrap("<path data-id=\"s\" data-kind=\"street\" data-name=\"s\" d=\"M 0 0\"/>")),
            MapErrc::invalid_geometry);
  EXPECT_EQ(error_of(wrap("<path data-id=\"s\" data-kind=\"street\" data-name=\"s\" d=\"M 0 0 L 5 0 L 5 5 Z\"/>")),
            MapErrc::invalid_geometry);
  EXPECT_EQ(error_of(wrap("<path data-id=\"p\" data-kind=\"poi\" data-name=\"p\" d=\"M 0 0 L 1 1\"/>")),
            MapErrc::invalid_geometry);
  EXPECT_EQ(error_of(wrap("<circle data-id=\"b\" data-kind=\"building\" data-name=\"b\" cx=\"1\" cy=\"1\"/>")),
            MapErrc::invalid_geometry);
  EXPECT_EQ(error_of(wrap("<path data-id=\"s\" data-kind=\"street\" d=\"M 0 0 L 5 0\"/>")), MapErrc::invalid_element);
  EXPECT_EQ(error_of(wrap("<path data-kind=\"street\" data-name=\"s\" d=\"M 0 0 L 5 0\"/>")), MapErrc::invalid_element);
  EXPECT_EQ(error_of(wrap("<path data-id=\"s\" data-kind=\"street\" data-name=\"s\" d=\"M 0 0 C 1 1 2 2 3 3\"/>")),
            MapErrc::malformed_document);
}

TEST(ParseMap, DecorationIsIgnored) {
  const std::string body =
      "<defs><pattern id=\"hatch\"><path d=\"M 0 0 L 4 4\"/></pattern></defs>\n"
      "<metadata>authored by hand</metadata>\n"
      "<!-- a comment -->\n"
      "<rect x=\"0\" y=\"0\" width=\"420\" height=\"297\" fill=\"#fff\"/>\n"
      "<path d=\"M 1 1 L 2 2 C 3 3 4 4 5 5\" style=\"stroke:red\"/>\n"
      "<text x=\"5\" y=\"5\">label</text>\n"
      "<g id=\"layer1\" style=\"opacity:0.5\"><circle data-id=\"p\" data-kind=\"poi\" data-name=\"p\" cx=\"3\" cy=\"4\" "
      "r=\"3\" fill=\"url(#hatch)\"/></g>\n";
  const MapDocument doc = parse_map(wrap(body));
  ASSERT_EQ(doc.elements.size(), 1u);
  EXPECT_EQ(doc.elements[0].geometry[0], (Point{3, 4}));
}

TEST(ParseMap, TransformsAndRelativeCommands) {
  const std::string body =
      "<g transform=\"translate(10,20)\">"
      "<path data-id=\"s\" data-kind=\"street\" data-name=\"s\" d=\"m 0 0 h 30 v 10\" style=\"fill:none;stroke-width:2\"/>"
      "<g transform=\"scale(2)\"><circle data-id=\"p\" data-kind=\"poi\" data-name=\"p\" cx=\"5\" cy=\"5\"/></g>"
      "</g>";
  const MapDocument doc = parse_map(wrap(body));
  ASSERT_EQ(doc.elements.size(), 2u);
  EXPECT_EQ(doc.elements[0].geometry, (std::vector<Point>{{10, 20}, {40, 20}, {40, 30}}));
  EXPECT_EQ(doc.elements[0].line_width_mm, 2.0);
  EXPECT_EQ(doc.elements[1].geometry[0], (Point{20, 30}));
}

TEST(ParseMap, ClosingVertexIsNotDuplicated) {
  const MapDocument doc = parse_map(
      wrap("<path data-id=\"b\" data-kind=\"building\" data-name=\"b\" d=\"M 0 0 L 10 0 L 10 10 L 0 10 L 0 0 Z\"/>"));
  EXPECT_EQ(doc.elements[0].geometry.size(), 4u);
}

TEST(ParseMap, InfoLevelsInOrder) {
  const MapDocument doc = parse_map(wrap(
      "<circle data-id=\"h\" data-kind=\"poi\" data-name=\"hotel\" data-level-3=\"three\" data-level-1=\"one\" "
      "data-level-2=\"two\" cx=\"1\" cy=\"1\"/>"));
  const auto& levels = doc.elements[0].levels;
  ASSERT_EQ(levels.size(), 3u);
  EXPECT_EQ(levels[0], (InfoLayer{1, "one"}));
  EXPECT_EQ(levels[1], (InfoLayer{2, "two"}));
  EXPECT_EQ(levels[2], (InfoLayer{3, "three"}));
  EXPECT_EQ(error_of(wrap("<circle data-id=\"h\" data-kind=\"poi\" data-name=\"h\" data-level-2=\"x\" cx=\"1\" cy=\"1\"/>")),
            MapErrc::invalid_element);
}

TEST(ParseMap, LevelsBeyondNineAreKept) {
  MapDocument doc;
  MapElement p{"p", ElementKind::poi, {{1, 1}}, "p", {}, std::nullopt};
  for (int k = 1; k <= 12; ++k) p.levels.push_back({k, "level " + std::to_string(k)});
  doc.elements.push_back(p);
  EXPECT_TRUE(equivalent(parse_map(serialize_map(doc)), doc));
}

TEST(ParseMap, PoiWithThreeLevelsRoundTrips) {
  MapDocument doc;
  doc.elements.push_back({"h", ElementKind::poi, {{10, 10}}, "hotel", {{1, "a"}, {2, "b & c"}, {3, "<d>"}}, std::nullopt});
  const MapDocument back = parse_map(serialize_map(doc));
  ASSERT_EQ(back.elements.size(), 1u);
  EXPECT_EQ(back.elements[0].levels, doc.elements[0].levels);
}

TEST(ParseMap, RoundTripGeneratedDocuments) {
  gen::Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const MapDocument doc = gen::random_document(rng);
    const std::string text = serialize_map(doc);
    const MapDocument back = parse_map(text);
    ASSERT_TRUE(equivalent(back, doc)) << text;
    EXPECT_EQ(serialize_map(back), text);  // and the text is a fixed point
  }
}

// Totality: mangled inputs either parse into a document that satisfies every
// invariant, or fail with a single MapError. No other exception escapes.
TEST(ParseMap, TotalityUnderMutation) {
  gen::Rng rng(99);
  const char junk[] = "<>\"&=/ Z M L 0 9 - . e data-kind poi";
  int parsed = 0, rejected = 0;
  for (int i = 0; i < 400; ++i) {
    std::string text = serialize_map(gen::random_document(rng, 6));
    const auto edits = gen::uniform_int(rng, 1, 4);
    for (std::int64_t k = 0; k < edits && !text.empty(); ++k) {
      const auto pos = static_cast<std::size_t>(gen::uniform_int(rng, 0, text.size() - 1));
      switch (gen::uniform_int(rng, 0, 2)) {
        case 0: text.erase(pos, gen::uniform_int(rng, 1, 8)); break;
        case 1: text.insert(pos, 1, junk[gen::uniform_int(rng, 0, sizeof junk - 2)]); break;
        default: text[pos] = junk[gen::uniform_int(rng, 0, sizeof junk - 2)]; break;
      }
    }
    try {
      const MapDocument doc = parse_map(text);
      ++parsed;
      EXPECT_FALSE(has_errors(validate_map(doc))) << text;
    } catch (const MapError&) {
      ++rejected;
    } catch (const std::exception& e) {
      ADD_FAILURE() << "unexpected exception " << e.what() << " for\n" << text;
    }
  }
  EXPECT_GT(rejected, 0);
  EXPECT_GT(parsed, 0);
}

TEST(ParseMap, KindGeometryAgreementOnGeneratedDocuments) {
  gen::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const MapDocument doc = parse_map(serialize_map(gen::random_document(rng)));
    for (const auto& e : doc.elements) {
      switch (e.kind) {
        case ElementKind::poi: EXPECT_EQ(e.geometry.size(), 1u); break;
        case ElementKind::street: EXPECT_GE(e.geometry.size(), 2u); break;
        default:
          EXPECT_GE(e.geometry.size(), 3u);
          EXPECT_TRUE(ring_is_simple(e.geometry));
      }
    }
  }
}

TEST(SerializeMap, NumbersRoundTripExactly) {
  MapDocument doc;
  doc.scale_m_per_mm = 0.1 + 0.2;
  doc.elements.push_back({"p", ElementKind::poi, {{1.0 / 3.0, 123.456789012345678}}, "p", {}, std::nullopt});
  const MapDocument back = parse_map(serialize_map(doc));
  EXPECT_EQ(back.scale_m_per_mm, doc.scale_m_per_mm);
  EXPECT_EQ(back.elements[0].geometry[0], doc.elements[0].geometry[0]);
}
