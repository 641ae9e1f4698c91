#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lmnav/metrics.hpp"
#include "lmnav/runner.hpp"
#include "lmnav/scene.hpp"
#include "lmnav/switching.hpp"

namespace lmnav {

// Malformed input files; the message names the offending file, line, and
// field where known.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kSceneFormatVersion = 1;

void save_scene(const Scene& scene, const std::string& path);
Scene load_scene(const std::string& path);

// One episode per line:
// {"scene_id", "start": {x,y,heading}, "goal": {...}, "difficulty",
//  "geodesic_length"}
void save_episodes(const std::vector<Episode>& episodes,
                   const std::string& path);
std::vector<Episode> load_episodes(const std::string& path);

void save_results(const std::vector<EpisodeResult>& results,
                  const std::string& path);
std::vector<EpisodeResult> load_results(const std::string& path);

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& fold, const std::string& path);

void write_stop_budget_csv(const std::vector<StopBudgetRow>& rows,
                           const std::string& path);

struct SwitchAccuracyRow {
  std::string scene_id;  // "pooled" for the aggregate
  SwitchAccuracy accuracy;
};

void write_switch_accuracy_csv(const std::vector<SwitchAccuracyRow>& rows,
                               const std::string& path);

void write_heading_bias_csv(const HeadingBiasReport& report,
                            const std::string& path);

struct NoiseSweepRow {
  std::string label;
  double pose_trans_sigma = 0.0;
  double pose_rot_sigma = 0.0;
  double depth_rel_sigma = 0.0;
  double success = 0.0;
  double spl = 0.0;
};

void write_noise_sweep_csv(const std::vector<NoiseSweepRow>& rows,
                           const std::string& path);

}  // namespace lmnav
