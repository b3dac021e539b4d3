#pragma once

#include "tactilemap/engine_config.hpp"
#include "tactilemap/fixture_map.hpp"
#include "tactilemap/geometry.hpp"
#include "tactilemap/gesture_recognizer.hpp"
#include "tactilemap/interaction_controller.hpp"
#include "tactilemap/map_model.hpp"
#include "tactilemap/protocol.hpp"
#include "tactilemap/session.hpp"
#include "tactilemap/spatial_index.hpp"
#include "tactilemap/speech_queue.hpp"
#include "tactilemap/study_harness.hpp"
#include "tactilemap/svg_profile.hpp"
