// Command-line front end: serve, replay, validate, fixture.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tactilemap/service.hpp"
#include "tactilemap/tactilemap.hpp"

namespace fs = std::filesystem;
using namespace tactilemap;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// The fixture plus every --map file, registered under its file stem.
/// The first file is also available as "default".
std::shared_ptr<const MapCatalog> build_catalog(const std::vector<fs::path>& maps, const EngineConfig& config) {
  auto catalog = std::make_shared<MapCatalog>(MapCatalog::with_fixture(config.index_cell_mm));
  for (std::size_t i = 0; i < maps.size(); ++i) {
    MapDocument doc = parse_map(read_file(maps[i]));
    if (i == 0) catalog->add("default", doc, config.index_cell_mm);
    catalog->add(maps[i].stem().string(), std::move(doc), config.index_cell_mm);
  }
  return catalog;
}

int run_serve(const fs::path& map, unsigned short port, const fs::path& config_path, const std::string& address,
              const std::string& record_dir) {
  ServiceConfig config;
  config.engine = load_engine_config(config_path);
  config.address = address;
  config.port = port;
  if (!record_dir.empty()) config.record_dir = record_dir;
  auto catalog = build_catalog({map}, config.engine);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  SessionService service(config, catalog);
  service.start();
  std::cout << "listening on ws://" << address << ':' << service.port() << "/ (maps:";
  for (const auto& id : catalog->ids()) std::cout << ' ' << id;
  std::cout << ")" << std::endl;

  int received = 0;
  sigwait(&signals, &received);
  std::cout << "stopping after " << service.sessions_started() << " session(s)" << std::endl;
  service.stop();
  return 0;
}

int run_replay(const fs::path& log_path, const fs::path& out_path, const std::string& config_path,
               const std::vector<fs::path>& maps) {
  const EngineConfig config = config_path.empty() ? EngineConfig{} : load_engine_config(config_path);
  const SessionLog log = SessionLog::from_jsonl(read_file(log_path));
  const std::string transcript = replay_log(log, config, build_catalog(maps, config));
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + out_path.string() + "'");
  out << transcript;
  const std::string recorded = recorded_transcript(log);
  if (transcript != recorded) {
    std::cerr << "replay diverges from the recorded outputs\n";
    return 2;
  }
  std::cout << "replayed " << log.records().size() << " records; transcript matches the recording\n";
  return 0;
}

int run_validate(const fs::path& map_path, const std::string& config_path) {
  const EngineConfig config = config_path.empty() ? EngineConfig{} : load_engine_config(config_path);
  MapDocument doc;
  try {
    doc = parse_map(read_file(map_path));
  } catch (const MapError& e) {
    std::cout << "error\t" << to_string(e.code()) << '\t' << e.element_id().value_or("-") << '\t' << e.what() << '\n';
    return 1;
  }
  const auto issues = validate_map(doc, config.validation);
  for (const auto& i : issues)
    std::cout << (i.severity == Severity::error ? "error" : "warning") << '\t' << i.code << '\t'
              << i.element_id.value_or("-") << '\t' << i.message << '\n';
  std::cout << doc.elements.size() << " elements, " << issues.size() << " issue(s)\n";
  return has_errors(issues) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audio-tactile map exploration engine"};
  app.require_subcommand(1);

  fs::path serve_map;
  unsigned short serve_port = 0;
  fs::path serve_config;
  std::string serve_address = "127.0.0.1";
  std::string serve_record;
  auto* serve = app.add_subcommand("serve", "Run the WebSocket session service");
  serve->add_option("--map", serve_map, "SVG map served as map_id 'default' and under its file stem")
      ->required()
      ->check(CLI::ExistingFile);
  serve->add_option("--port", serve_port, "TCP port (0 picks a free one)")->required();
  serve->add_option("--config", serve_config, "Engine config JSON")->required()->check(CLI::ExistingFile);
  serve->add_option("--record", serve_record, "Directory for per-session JSON Lines logs");
  serve->add_option("--address", serve_address, "Listen address")->capture_default_str();

  fs::path replay_log_path;
  fs::path replay_out;
  std::string replay_config;
  std::vector<fs::path> replay_maps;
  auto* replay = app.add_subcommand("replay", "Replay a session log into a transcript");
  replay->add_option("--log", replay_log_path, "Session log (JSON Lines)")->required()->check(CLI::ExistingFile);
  replay->add_option("--out", replay_out, "Transcript output file")->required();
  replay->add_option("--config", replay_config, "Engine config used when recording")->check(CLI::ExistingFile);
  replay->add_option("--map", replay_maps, "Map files referenced by map_id in the log")->check(CLI::ExistingFile);

  fs::path validate_map_path;
  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Parse and check a map file");
  validate->add_option("--map", validate_map_path, "SVG map")->required()->check(CLI::ExistingFile);
  validate->add_option("--config", validate_config, "Config JSON with validation thresholds")
      ->check(CLI::ExistingFile);

  fs::path fixture_out;
  auto* fixture = app.add_subcommand("fixture", "Write the built-in city map as SVG");
  fixture->add_option("--out", fixture_out, "Output SVG file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) return run_serve(serve_map, serve_port, serve_config, serve_address, serve_record);
    if (*replay) return run_replay(replay_log_path, replay_out, replay_config, replay_maps);
    if (*validate) return run_validate(validate_map_path, validate_config);
    if (*fixture) {
      std::ofstream out(fixture_out, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write '" + fixture_out.string() + "'");
      out << serialize_map(fixture_city_map());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
