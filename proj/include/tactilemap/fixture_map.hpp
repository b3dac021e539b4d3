#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tactilemap/map_model.hpp"

namespace tactilemap {

/// Built-in fictional city centre on an A3 landscape canvas: six streets in a
/// grid, six buildings, six points of interest with the hotel in the middle,
/// and a river along the top edge. Scale 1:2000 (2 m per map millimeter).
inline MapDocument fixture_city_map() {
  MapDocument doc;
  doc.title = "fictional city centre";
  doc.scale_m_per_mm = 2.0;

  auto street = [&](std::string id, std::string name, Point a, Point b) {
    MapElement e;
    e.id = std::move(id);
    e.kind = ElementKind::street;
    e.name = std::move(name);
    e.geometry = {a, b};
    e.line_width_mm = 2.0;
    doc.elements.push_back(std::move(e));
  };
  auto area = [&](std::string id, ElementKind kind, std::string name, std::vector<Point> ring,
                  std::vector<InfoLayer> levels) {
    MapElement e;
    e.id = std::move(id);
    e.kind = kind;
    e.name = std::move(name);
    e.geometry = std::move(ring);
    e.levels = std::move(levels);
    doc.elements.push_back(std::move(e));
  };
  auto poi = [&](std::string id, std::string name, Point p, std::vector<InfoLayer> levels) {
    MapElement e;
    e.id = std::move(id);
    e.kind = ElementKind::poi;
    e.name = std::move(name);
    e.geometry = {p};
    e.levels = std::move(levels);
    doc.elements.push_back(std::move(e));
  };

  area("river", ElementKind::water, "river Garonne", {{10, 12}, {410, 22}, {410, 40}, {10, 30}},
       {{1, "The river flows from west to east along the north edge of the centre."}});

  street("rue-alsace", "rue d'Alsace", {20, 80}, {400, 80});
  street("rue-bretagne", "rue de Bretagne", {20, 160}, {400, 160});
  street("rue-corse", "rue de Corse", {20, 240}, {400, 240});
  street("av-dauphine", "avenue Dauphine", {100, 50}, {100, 280});
  street("av-esterel", "avenue de l'Esterel", {210, 50}, {210, 280});
  street("bd-flandre", "boulevard de Flandre", {320, 50}, {320, 280});

  using K = ElementKind;
  area("town-hall", K::building, "town hall", {{110, 90}, {200, 90}, {200, 150}, {110, 150}},
       {{1, "Town hall, built in 1750."}});
  area("library", K::building, "library", {{330, 90}, {390, 90}, {390, 150}, {360, 150}, {360, 120}, {330, 120}},
       {{1, "Public library with an audio book section."}});
  area("school", K::building, "school", {{110, 170}, {200, 170}, {200, 230}, {110, 230}},
       {{1, "Primary school."}});
  area("market-hall", K::building, "market hall", {{220, 170}, {310, 170}, {310, 230}, {220, 230}},
       {{1, "Covered market with about forty stalls."}});
  area("train-station", K::building, "train station", {{30, 170}, {90, 170}, {90, 230}, {30, 230}},
       {{1, "Regional trains to the coast."}});
  area("cathedral", K::building, "cathedral", {{330, 170}, {390, 170}, {390, 230}, {330, 230}},
       {{1, "Gothic cathedral."}});

  poi("hotel", "hotel", {265, 120},
      {{1, "Hotel du Parc, three stars, forty rooms."},
       {2, "Reception open day and night; rooms from 80 euros."},
       {3, "Breakfast served from 7 to 10 in the garden room."}});
  poi("museum", "museum", {60, 120},
      {{1, "Museum of fine arts."}, {2, "Open 10 to 18, closed on Mondays; entry 6 euros."}});
  poi("restaurant", "restaurant", {265, 200},
      {{1, "Restaurant inside the market hall, regional cuisine."}, {2, "Open 12 to 14 and 19 to 22."}});
  poi("metro", "metro station", {160, 265},
      {{1, "Metro line A, direction airport."}, {2, "Trains every 4 minutes from 5 to midnight."}});
  poi("pharmacy", "pharmacy", {360, 265},
      {{1, "Pharmacy with a ramp at the entrance."}, {2, "Open 8 to 20, Sundays by rota."}});
  poi("bakery", "bakery", {360, 60},
      {{1, "Bakery known for its walnut bread."}, {2, "Open 7 to 19; closed on Wednesdays."}});

  return doc;
}

}  // namespace tactilemap
