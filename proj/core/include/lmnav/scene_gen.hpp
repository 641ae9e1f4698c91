#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmnav/geometry.hpp"
#include "lmnav/scene.hpp"

namespace lmnav {

// Thrown when a requested episode bucket cannot be filled; the message
// names the bucket.
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenConfig {
  std::uint64_t seed = 7;
  int n_scenes = 10;
  int rooms_x_min = 2;
  int rooms_x_max = 3;
  int rooms_y_min = 2;
  int rooms_y_max = 2;
  double room_size_min = 2.8;  // meters per room side
  double room_size_max = 4.4;
  double door_width = 1.0;
  double door_margin = 0.35;       // keep doorways off room corners
  double landmark_density = 4.0;   // expected landmarks per meter of wall
  double landmark_height_min = 0.3;
  double landmark_height_max = 2.2;
  double camera_height = 1.25;
  int episodes_per_difficulty = 30;  // per scene
  double pose_clearance = 0.35;      // sampled start/goal clearance, meters
  int min_goal_visible = 60;         // landmarks visible from the goal view
  int max_attempts = 6000;           // per episode bucket
  std::string scene_prefix = "scene";

  void validate() const;
};

struct GeneratedWorld {
  std::vector<Scene> scenes;
  std::vector<Episode> episodes;
};

std::vector<Scene> generate_scenes(const GenConfig& cfg);

// Rejection-samples start/goal pairs until each difficulty bucket is full
// for every scene. Goal views must clear the visibility bar so episodes are
// solvable in principle. Deterministic per seed.
GeneratedWorld generate_scenes_and_episodes(const GenConfig& cfg,
                                            const CameraIntrinsics& intr,
                                            double matcher_max_range);

}  // namespace lmnav
