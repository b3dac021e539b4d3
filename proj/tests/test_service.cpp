#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "support/generators.hpp"
#include "support/ws_client.hpp"
#include "tactilemap/service.hpp"

using namespace tactilemap;

namespace {

std::shared_ptr<const MapCatalog> catalog() {
  auto c = std::make_shared<MapCatalog>(MapCatalog::with_fixture());
  MapDocument small;
  small.scale_m_per_mm = 2;
  small.elements.push_back({"a", ElementKind::poi, {{100, 50}}, "fountain", {}, {}});
  small.elements.push_back({"b", ElementKind::poi, {{140, 80}}, "kiosk", {}, {}});
  c->add("small", small);
  return c;
}

// Drives a client through frames, reading as many replies as an in-process
// session produces, and returns the replies received over the wire.
std::vector<std::string> drive(testing_ws::Client& client, const std::vector<std::string>& frames,
                               std::vector<std::string>* expected = nullptr) {
  Session reference({}, catalog());
  std::vector<std::string> got;
  for (const auto& f : frames) {
    const auto want = reference.handle_frame(f);
    for (const auto& r : client.exchange(f, want.size())) got.push_back(r);
    if (expected)
      for (const auto& w : want) expected->push_back(to_frame(w));
  }
  return got;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Service, StartsOnEphemeralPortAndStops) {
  SessionService service({}, catalog());
  service.start();
  EXPECT_NE(service.port(), 0);
  service.stop();
  service.stop();
}

TEST(Service, RejectsBadAddress) {
  ServiceConfig cfg;
  cfg.address = "not-an-address";
  SessionService service(cfg, catalog());
  EXPECT_THROW(service.start(), ServiceError);
}

TEST(Service, RepliesMatchInProcessSession) {
  SessionService service({}, catalog());
  service.start();
  testing_ws::Client client("127.0.0.1", service.port());
  gen::Rng rng(11);
  const auto frames = gen::fuzz_session(rng, gen::fixture_targets());
  std::vector<std::string> expected;
  EXPECT_EQ(drive(client, frames, &expected), expected);
}

TEST(Service, ConcurrentSessionsOnDifferentMaps) {
  SessionService service({}, catalog());
  service.start();
  std::vector<std::string> fixture_replies, small_replies;
  std::thread ta([&] {
    testing_ws::Client c("127.0.0.1", service.port());
    fixture_replies = drive(c, {R"({"type":"load_map","map_id":"fixture"})", gen::touch_frame({TouchPhase::down, 1, 265, 120, 0}),
                                gen::touch_frame({TouchPhase::up, 1, 265, 120, 100}),
                                gen::touch_frame({TouchPhase::down, 2, 265, 120, 250}),
                                gen::touch_frame({TouchPhase::up, 2, 265, 120, 330})});
  });
  std::thread tb([&] {
    testing_ws::Client c("127.0.0.1", service.port());
    small_replies = drive(c, {R"({"type":"load_map","map_id":"small"})", gen::touch_frame({TouchPhase::down, 1, 100, 50, 0}),
                              R"({"type":"select_level","level":0,"t_ms":1000})",
                              gen::touch_frame({TouchPhase::up, 1, 100, 50, 1100}),
                              gen::touch_frame({TouchPhase::down, 2, 140, 80, 2000}),
                              R"({"type":"select_level","level":0,"t_ms":3000})"});
  });
  ta.join();
  tb.join();
  EXPECT_EQ(fixture_replies, (std::vector<std::string>{
                                 R"({"type":"map_loaded","elements":19})",
                                 R"({"type":"gesture","kind":"double_tap","element_id":"hotel"})",
                                 R"({"type":"speak","text":"hotel","priority":"info","interrupt":true})",
                             }));
  ASSERT_EQ(small_replies.size(), 9u);
  EXPECT_EQ(small_replies[0], R"({"type":"map_loaded","elements":2})");
  EXPECT_EQ(small_replies[7], R"({"type":"speak","text":"distance from fountain to kiosk: 100 meters","priority":"info","interrupt":true})");
  EXPECT_EQ(service.sessions_started(), 2u);
}

TEST(Service, SurvivesBadFramesAndBinary) {
  SessionService service({}, catalog());
  service.start();
  testing_ws::Client client("127.0.0.1", service.port());
  EXPECT_EQ(client.exchange("{{{", 1)[0].find(R"({"type":"error","code":"bad-frame")"), 0u);
  client.send_binary(std::string("\x00\x01\x02", 3));
  EXPECT_EQ(client.receive().find(R"({"type":"error","code":"bad-frame")"), 0u);
  EXPECT_EQ(client.exchange(R"({"type":"load_map","map_id":"fixture"})", 1)[0], R"({"type":"map_loaded","elements":19})");
}

TEST(Service, RecordsEachSessionAndReplaysIt) {
  const auto dir = std::filesystem::temp_directory_path() / ("tactilemap-rec-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  ServiceConfig cfg;
  cfg.record_dir = dir;
  SessionService service(cfg, catalog());
  service.start();
  gen::Rng rng(12);
  const auto frames = gen::fuzz_session(rng, gen::fixture_targets());
  {
    testing_ws::Client client("127.0.0.1", service.port());
    drive(client, frames);
  }
  service.stop();
  const auto file = dir / "session-0001.jsonl";
  ASSERT_TRUE(std::filesystem::exists(file));
  Session reference({}, catalog());
  for (const auto& f : frames) reference.handle_frame(f);
  const std::string text = slurp(file);
  EXPECT_EQ(text, reference.log().to_jsonl());
  const auto log = SessionLog::from_jsonl(text);
  EXPECT_EQ(replay_log(log, {}, catalog()), recorded_transcript(log));
  std::filesystem::remove_all(dir);
}

TEST(Service, StopClosesLiveConnections) {
  SessionService service({}, catalog());
  service.start();
  testing_ws::Client client("127.0.0.1", service.port());
  client.exchange(R"({"type":"load_map","map_id":"fixture"})", 1);
  service.stop();
  EXPECT_ANY_THROW(client.receive());
}
