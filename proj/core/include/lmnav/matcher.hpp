#pragma once

#include <cstdint>
#include <vector>

#include "lmnav/geometry.hpp"
#include "lmnav/scene.hpp"

namespace lmnav {

// Synthetic stand-in for a feature extractor + matcher: emits pixel
// correspondences for landmarks visible in both views, with detection
// dropout, agent-side pixel noise, and uniform outlier injection.
struct MatcherConfig {
  double pixel_noise_sigma = 0.5;  // pixels, agent side
  double detection_rate = 0.9;     // per visible landmark
  double outlier_fraction = 0.1;   // of emitted matches
  double max_range = 10.0;         // meters
  std::uint64_t rng_seed = 0;

  void validate() const;
};

// Indices of landmarks that project inside the image, lie within max_range
// of the camera center, and have a wall-free sight line from the pose.
std::vector<std::size_t> visible_landmarks(const Scene& scene,
                                           const AgentPose& pose,
                                           const CameraIntrinsics& intr,
                                           double max_range);

// A landmark yields a true match iff it is visible from both poses. Each
// true match survives with detection_rate; survivors get agent-side pixel
// noise and the true camera-frame depth (perturbed when the noise model says
// so); floor(outlier_fraction * n) matches then have their goal pixel
// replaced by a uniform in-bounds one and are tagged kOutlierId.
// Deterministic for a fixed cfg.rng_seed.
CorrespondenceSet match_views(const Scene& scene, const AgentPose& agent_pose,
                              const AgentPose& goal_pose,
                              const CameraIntrinsics& intr,
                              const MatcherConfig& cfg,
                              const NoiseModel& noise = {});

}  // namespace lmnav
