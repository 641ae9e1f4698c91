#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lmnav/explorers.hpp"
#include "lmnav/local_policy.hpp"
#include "lmnav/matcher.hpp"
#include "lmnav/pnp.hpp"
#include "lmnav/scene.hpp"
#include "lmnav/simulator.hpp"
#include "lmnav/switching.hpp"

namespace lmnav {

enum class ExplorerKind { Straight, Oracle };

const char* to_string(ExplorerKind k);

struct RunnerConfig {
  ExplorerKind explorer = ExplorerKind::Straight;
  bool sling_enabled = true;
  int stop_budget = 0;  // erroneous stops forgiven before an episode fails

  CameraIntrinsics intrinsics = CameraIntrinsics::from_fov(640, 480, 120.0 * M_PI / 180.0);
  SwitchConfig switch_cfg;
  MatcherConfig matcher;
  RansacConfig ransac;
  NoiseModel noise;
  GridParams grid;
  PolicyParams policy;
  ScanParams scan;
  KinematicsConfig kinematics;
  OracleConfig oracle;

  // Fallback stopper for non-geometric runs: Stop once the match count
  // reaches this (a stop-when-close heuristic standing in for a learned
  // goal detector). Ignored when sling_enabled.
  int naive_stop_matches = 90;

  double success_radius = 1.0;  // meters, geodesic
};

struct StopEvent {
  int step = 0;
  double distance_to_goal = 0.0;  // geodesic at the stop
  double path_length = 0.0;       // travel up to the stop
};

struct EpisodeResult {
  std::string scene_id;
  int episode_index = 0;
  Difficulty difficulty = Difficulty::Easy;
  bool success = false;
  double path_length = 0.0;
  double shortest_path = 0.0;
  double final_distance = 0.0;
  int steps = 0;
  bool stop_issued = false;  // the episode ended with a Stop
  std::vector<std::uint8_t> phase_trace;  // 0 explore, 1 exploit
  // (predicted, ground-truth) heading per exploit step, radians.
  std::vector<std::pair<double, double>> heading_log;
  std::vector<StopEvent> stop_events;  // includes budget-consumed stops
};

EpisodeResult run_episode(const Scene& scene, const Episode& episode,
                          const RunnerConfig& cfg, std::uint64_t episode_seed,
                          int episode_index = 0);

// Rolls out every episode; worker threads pick episodes off a shared index,
// and results land at their episode's slot, so output is independent of the
// worker count. Per-episode seeds derive from run_seed and the index.
std::vector<EpisodeResult> run_episodes(const std::vector<Scene>& scenes,
                                        const std::vector<Episode>& episodes,
                                        const RunnerConfig& cfg,
                                        std::uint64_t run_seed, int workers);

}  // namespace lmnav
