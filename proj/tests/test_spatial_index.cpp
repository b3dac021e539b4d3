#include <gtest/gtest.h>

#include <numbers>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "tactilemap/fixture_map.hpp"
#include "tactilemap/spatial_index.hpp"

using namespace tactilemap;

namespace {

std::shared_ptr<const MapDocument> fixture() { return std::make_shared<const MapDocument>(fixture_city_map()); }

std::vector<Point> circle(Point c, double r, int n = 48) {
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) {
    const double a = 2 * std::numbers::pi * i / n;
    out.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return out;
}

}  // namespace

TEST(SpatialIndex, IsolatedBuildingCentroid) {
  MapDocument doc;
  doc.elements.push_back({"b", ElementKind::building, {{100, 100}, {140, 100}, {140, 130}, {100, 130}}, "b", {}, {}});
  const SpatialIndex index(std::make_shared<const MapDocument>(doc), 10);
  const auto hit = index.resolve_point({120, 115}, 5);
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->element_id, "b");
  EXPECT_EQ(hit->kind, ElementKind::building);
  EXPECT_EQ(hit->distance_mm, 0.0);
}

TEST(SpatialIndex, PoiBeatsEquidistantStreet) {
  MapDocument doc;
  doc.elements.push_back({"s", ElementKind::street, {{0, 50}, {200, 50}}, "s", {}, {}});
  doc.elements.push_back({"p", ElementKind::poi, {{100, 46}}, "p", {}, {}});
  const SpatialIndex index(std::make_shared<const MapDocument>(doc), 10);
  const auto hit = index.resolve_point({100, 48}, 5);
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->element_id, "p");
  EXPECT_DOUBLE_EQ(hit->distance_mm, 2.0);
}

TEST(SpatialIndex, PoiInsideBuildingWins) {
  const SpatialIndex index(fixture(), 10);
  EXPECT_EQ(index.resolve_point({265, 200})->element_id, "restaurant");
  EXPECT_EQ(index.resolve_point({240, 190})->element_id, "market-hall");
  EXPECT_EQ(index.resolve_point({265, 120})->element_id, "hotel");
  EXPECT_EQ(index.resolve_point({150, 82})->element_id, "rue-alsace");
  EXPECT_FALSE(index.resolve_point({150, 60}));
  EXPECT_EQ(index.resolve_point({150, 25})->element_id, "river");
}

TEST(SpatialIndex, EmptyMapMissesEverywhere) {
  const SpatialIndex index(std::make_shared<const MapDocument>(), 10);
  gen::Rng rng(3);
  for (int i = 0; i < 1000; ++i)
    EXPECT_FALSE(index.resolve_point({gen::uniform(rng, -10, 430), gen::uniform(rng, -10, 310)}, 50));
}

TEST(SpatialIndex, MatchesBruteForceOnFixture) {
  const auto doc = fixture();
  const SpatialIndex index(doc, 10);
  gen::Rng rng(42);
  for (double tol : {0.0, 2.0, 5.0, 10.0}) {
    for (int i = 0; i < 10000; ++i) {
      const Point p{gen::uniform(rng, 0, 420), gen::uniform(rng, 0, 297)};
      const auto got = index.resolve_point(p, tol);
      const auto want = oracle::brute_force_resolve(*doc, {p.x, p.y}, tol);
      ASSERT_EQ(got.has_value(), want.has_value()) << p.x << "," << p.y << " tol " << tol;
      if (!got) continue;
      ASSERT_EQ(got->element_id, want->id) << p.x << "," << p.y << " tol " << tol;
      ASSERT_NEAR(got->distance_mm, want->distance, 1e-9);
      ASSERT_LE(got->distance_mm, tol);
    }
  }
}

TEST(SpatialIndex, MatchesBruteForceOnRandomDocuments) {
  gen::Rng rng(8);
  for (int d = 0; d < 40; ++d) {
    const auto doc = std::make_shared<const MapDocument>(gen::random_document(rng, 30));
    const SpatialIndex index(doc, gen::uniform(rng, 0.5, 60));
    for (int i = 0; i < 500; ++i) {
      const Point p{gen::uniform(rng, -5, doc->canvas_width_mm + 5), gen::uniform(rng, -5, doc->canvas_height_mm + 5)};
      const double tol = gen::uniform(rng, 0, 15);
      const auto got = index.resolve_point(p, tol);
      const auto want = oracle::brute_force_resolve(*doc, {p.x, p.y}, tol);
      ASSERT_EQ(got.has_value(), want.has_value());
      if (got) { ASSERT_EQ(got->element_id, want->id); }
    }
  }
}

TEST(SpatialIndex, CellSizeDoesNotChangeResults) {
  const auto doc = fixture();
  const SpatialIndex fine(doc, 1), coarse(doc, 50), huge(doc, 1000);
  gen::Rng rng(4);
  for (int i = 0; i < 5000; ++i) {
    const Point p{gen::uniform(rng, 0, 420), gen::uniform(rng, 0, 297)};
    const auto a = fine.resolve_point(p), b = coarse.resolve_point(p), c = huge.resolve_point(p);
    ASSERT_EQ(a.has_value(), b.has_value());
    ASSERT_EQ(a.has_value(), c.has_value());
    if (a) {
      EXPECT_EQ(a->element_id, b->element_id);
      EXPECT_EQ(a->element_id, c->element_id);
    }
  }
}

TEST(SpatialIndex, ToleranceMonotonicity) {
  const SpatialIndex index(fixture(), 10);
  gen::Rng rng(6);
  for (int i = 0; i < 3000; ++i) {
    const Point p{gen::uniform(rng, 0, 420), gen::uniform(rng, 0, 297)};
    const double t1 = gen::uniform(rng, 0, 10);
    const double t2 = t1 + gen::uniform(rng, 0, 10);
    if (index.resolve_point(p, t1)) { EXPECT_TRUE(index.resolve_point(p, t2)); }
  }
}

TEST(SpatialIndex, NegativeToleranceRejected) {
  const SpatialIndex index(fixture(), 10);
  EXPECT_THROW(index.resolve_point({1, 1}, -1), std::invalid_argument);
}

TEST(DistanceBetween, ThreeFourFive) {
  MapDocument doc;
  doc.scale_m_per_mm = 2;
  doc.elements.push_back({"a", ElementKind::poi, {{100, 50}}, "A", {}, {}});
  doc.elements.push_back({"b", ElementKind::poi, {{140, 80}}, "B", {}, {}});
  EXPECT_DOUBLE_EQ(distance_between(doc, "a", "b"), 100.0);
  EXPECT_DOUBLE_EQ(distance_between(doc, "b", "a"), 100.0);
  EXPECT_EQ(distance_between(doc, "a", "a"), 0.0);
}

TEST(DistanceBetween, SquareCentroidToPoi) {
  MapDocument doc;
  doc.scale_m_per_mm = 1;
  doc.elements.push_back({"sq", ElementKind::building, {{0, 0}, {10, 0}, {10, 10}, {0, 10}}, "square", {}, {}});
  doc.elements.push_back({"p", ElementKind::poi, {{20, 5}}, "p", {}, {}});
  const auto c = oracle::fan_centroid(doc.elements[0].geometry);
  EXPECT_DOUBLE_EQ(c.x, 5.0);
  EXPECT_DOUBLE_EQ(c.y, 5.0);
  EXPECT_DOUBLE_EQ(distance_between(doc, "sq", "p"), 15.0);
}

TEST(DistanceBetween, StreetMidpointAndLShape) {
  const MapDocument doc = fixture_city_map();
  for (const auto& a : doc.elements)
    for (const auto& b : doc.elements)
      EXPECT_NEAR(distance_between(doc, a.id, b.id), oracle::distance_m(doc, a.id, b.id), 1e-9) << a.id << " " << b.id;
}

TEST(DistanceBetween, UnknownElement) {
  try {
    distance_between(fixture_city_map(), "hotel", "ghost");
    FAIL();
  } catch (const MapError& e) {
    EXPECT_EQ(e.code(), MapErrc::unknown_element);
  }
}

TEST(DistanceBetween, MetricOnRandomTriples) {
  gen::Rng rng(10);
  for (int d = 0; d < 30; ++d) {
    const MapDocument doc = gen::random_document(rng, 20);
    if (doc.elements.size() < 3) continue;
    for (int i = 0; i < 50; ++i) {
      const auto& a = doc.elements[gen::uniform_int(rng, 0, doc.elements.size() - 1)].id;
      const auto& b = doc.elements[gen::uniform_int(rng, 0, doc.elements.size() - 1)].id;
      const auto& c = doc.elements[gen::uniform_int(rng, 0, doc.elements.size() - 1)].id;
      const double ab = distance_between(doc, a, b), bc = distance_between(doc, b, c), ac = distance_between(doc, a, c);
      EXPECT_EQ(ab, distance_between(doc, b, a));
      EXPECT_LE(ac, ab + bc + 1e-9 * (1 + ab + bc));
      EXPECT_EQ(distance_between(doc, a, a), 0.0);
    }
  }
}

TEST(EnclosedElement, CircleAroundHotel) {
  const SpatialIndex index(fixture(), 10);
  EXPECT_EQ(index.enclosed_element(circle({265, 120}, 20)), "hotel");
}

TEST(EnclosedElement, NothingEnclosed) {
  const SpatialIndex index(fixture(), 10);
  EXPECT_FALSE(index.enclosed_element(circle({150, 120}, 20)));  // town hall only, no POI
}

TEST(EnclosedElement, TwoPoisNearestCentroidWins) {
  const auto doc = fixture();
  const SpatialIndex index(doc, 10);
  // Hotel (265,120) and restaurant (265,200); centre nearer the restaurant.
  const auto ring = circle({265, 175}, 60);
  EXPECT_EQ(index.enclosed_element(ring), "restaurant");
  EXPECT_EQ(index.enclosed_element(ring), oracle::brute_force_enclosed(*doc, ring));
}

TEST(EnclosedElement, RandomLassosMatchRayCastOracle) {
  const auto doc = fixture();
  const SpatialIndex index(doc, 10);
  gen::Rng rng(12);
  int hits = 0;
  for (int i = 0; i < 3000; ++i) {
    const auto ring = gen::random_ring(rng, {gen::uniform(rng, 0, 420), gen::uniform(rng, 0, 297)}, gen::uniform(rng, 5, 150));
    const auto got = index.enclosed_element(ring);
    EXPECT_EQ(got, oracle::brute_force_enclosed(*doc, ring));
    if (got) {
      ++hits;
      EXPECT_EQ(doc->find(*got)->kind, ElementKind::poi);
    }
  }
  EXPECT_GT(hits, 100);
}
