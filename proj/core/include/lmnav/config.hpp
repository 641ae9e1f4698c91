#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lmnav/runner.hpp"
#include "lmnav/scene_gen.hpp"

namespace lmnav {

// Full run configuration: runner parameters plus harness knobs. Serialized
// as JSON so every effective parameter of a run is auditable.
struct RunConfig {
  RunnerConfig runner;
  int workers = 1;
  std::uint64_t seed = 0;
  std::string fold_label = "default";
  // "wide" = 640x480 @ 120 deg (n_th 50), "narrow" = 128x128 @ 90 deg
  // (n_th 20). Changing the profile resets intrinsics and n_th together.
  std::string camera_profile = "wide";
};

void apply_camera_profile(RunConfig& cfg, const std::string& profile);

std::string run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const std::string& text,
                               const std::string& where = "config");

std::string gen_config_to_json(const GenConfig& cfg);
GenConfig gen_config_from_json(const std::string& text,
                               const std::string& where = "config");

// Applies "dotted.path=value" onto a JSON config document; the value parses
// as JSON when possible and falls back to a string. Throws
// std::invalid_argument for malformed overrides or unknown paths.
std::string apply_override(const std::string& config_json,
                           const std::string& override_spec);

RunConfig default_run_config();
GenConfig default_gen_config();

}  // namespace lmnav
