#pragma once

#include <optional>
#include <vector>

#include "lmnav/goal_estimate.hpp"
#include "lmnav/matcher.hpp"
#include "lmnav/pnp.hpp"
#include "lmnav/scene.hpp"

namespace lmnav {

struct SwitchConfig {
  int n_th = 50;     // minimum match count (strict: switch needs n > n_th)
  double d_th = 4.0; // maximum plausible predicted distance, meters

  void validate() const;
};

enum class Phase { Explore, Exploit };

// Exploit always carries the estimate that admitted it (distance <= d_th).
struct NavPhase {
  Phase phase = Phase::Explore;
  std::optional<GoalEstimate> estimate;

  bool exploiting() const { return phase == Phase::Exploit; }
};

// One transition per timestep:
//   Explore -> Exploit  iff n > n_th, PnP succeeded, and distance <= d_th.
//   Exploit -> Explore  iff PnP failed or the predicted distance > d_th;
//                       otherwise Exploit continues with the fresh estimate.
NavPhase step_phase(const NavPhase& phase, const CorrespondenceSet& corr,
                    const std::optional<PnPResult>& pnp,
                    const std::optional<GoalEstimate>& est,
                    const SwitchConfig& cfg);

// Ground-truth labeling of a view pair: positive for last-mile navigation
// iff the poses are < 3 m apart, their headings differ by < 22.5 degrees,
// and the geodesic/euclidean ratio is < 1.2 (coincident poses pass the
// ratio by convention; unreachable pairs are negative).
struct PairLabel {
  double euclidean = 0.0;
  double angular = 0.0;
  double geodesic = 0.0;
  bool positive = false;
};

PairLabel label_pair(const AgentPose& agent_pose, const AgentPose& goal_pose,
                     const Scene& scene);

struct ViewPair {
  AgentPose agent;
  AgentPose goal;
  PairLabel label;
};

struct SwitchAccuracy {
  int entry_correct = 0;  // (n > n_th) agreed with the label
  int entry_total = 0;
  int exit_correct = 0;   // failure/d_th predicate agreed, over entry pairs
  int exit_total = 0;

  double explore_to_exploit() const {
    return entry_total > 0 ? static_cast<double>(entry_correct) / entry_total
                           : 0.0;
  }
  double exploit_to_explore() const {
    return exit_total > 0 ? static_cast<double>(exit_correct) / exit_total
                          : 0.0;
  }
  SwitchAccuracy& operator+=(const SwitchAccuracy& o);
};

// Runs the matcher (and, past the n_th gate, the solver) on each labeled
// pair and scores both switch directions. Throws std::domain_error on an
// empty pair list. Per-pair RANSAC seeds derive from ransac_cfg.rng_seed.
SwitchAccuracy evaluate_switch_accuracy(const Scene& scene,
                                        const std::vector<ViewPair>& pairs,
                                        const CameraIntrinsics& intr,
                                        const MatcherConfig& matcher_cfg,
                                        const RansacConfig& ransac_cfg,
                                        const SwitchConfig& switch_cfg,
                                        const NoiseModel& noise = {});

}  // namespace lmnav
