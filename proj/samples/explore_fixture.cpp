// Drives one in-process session over the built-in city map and prints what a
// listener would hear: a double-tap, a lasso, a level change and a hold pair.

#include <cmath>
#include <iostream>
#include <memory>
#include <numbers>

#include "tactilemap/tactilemap.hpp"

using namespace tactilemap;

namespace {

void show(const std::vector<ServerMessage>& out) {
  for (const auto& m : out) std::cout << "  <- " << to_frame(m) << '\n';
}

void touch(Session& s, TouchPhase phase, int id, Point p, std::int64_t t) {
  show(s.handle(Touch{{phase, id, p.x, p.y, t}}));
}

}  // namespace

int main() {
  auto catalog = std::make_shared<const MapCatalog>(MapCatalog::with_fixture());
  Session session(EngineConfig{}, catalog);

  std::cout << "load fixture\n";
  show(session.handle(LoadMap{"fixture", std::nullopt, 0}));

  std::cout << "double-tap on the hotel\n";
  const Point hotel{265, 120};
  touch(session, TouchPhase::down, 1, hotel, 1000);
  touch(session, TouchPhase::up, 1, hotel, 1080);
  touch(session, TouchPhase::down, 2, hotel, 1250);
  touch(session, TouchPhase::up, 2, hotel, 1320);

  std::cout << "select level 2, then circle the hotel\n";
  show(session.handle(SelectLevel{2, 2000}));
  std::int64_t t = 3000;
  touch(session, TouchPhase::down, 3, {hotel.x + 15, hotel.y}, t);
  for (int i = 1; i <= 40; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 40.0;
    touch(session, i == 40 ? TouchPhase::up : TouchPhase::move, 3,
          {hotel.x + 15 * std::cos(a), hotel.y + 15 * std::sin(a)}, t += 20);
  }

  std::cout << "hold the museum, then the hotel\n";
  const Point museum{60, 120};
  touch(session, TouchPhase::down, 4, museum, 5000);
  show(session.handle(SelectLevel{2, 6000}));
  touch(session, TouchPhase::up, 4, museum, 6100);
  touch(session, TouchPhase::down, 5, hotel, 7000);
  touch(session, TouchPhase::up, 5, hotel, 8100);

  show(session.handle(EndSession{9000}));
  std::cout << "log has " << session.log().records().size() << " records\n";
}
