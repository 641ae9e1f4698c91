#pragma once

#include <optional>
#include <vector>

#include "lmnav/rng.hpp"
#include "lmnav/scene.hpp"

namespace lmnav {

enum class DiscreteAction { Forward, TurnLeft, TurnRight, Stop };

const char* to_string(DiscreteAction a);

struct KinematicsConfig {
  double forward_step = 0.25;                 // meters
  double turn_step = 15.0 * M_PI / 180.0;     // radians
};

// Horizontal depth fan. Bearings are relative to the optical axis, positive
// toward the agent's right; ranges are planar distances, nullopt when the
// ray leaves max_range without a wall hit.
struct DepthScan {
  std::vector<double> bearings;
  std::vector<std::optional<double>> ranges;
  double max_range = 5.0;
};

struct ScanParams {
  int rays = 181;
  double max_range = 5.0;
};

// Advances the true pose: Forward walks up to forward_step along the heading
// and halts at wall contact (minus the agent radius), turns rotate by
// turn_step, Stop leaves the pose unchanged. Actuation noise from the model
// perturbs the commanded motion; the result always keeps agent_radius
// clearance.
AgentPose apply_action(const AgentPose& pose, DiscreteAction action,
                       const Scene& scene, const NoiseModel& noise,
                       const KinematicsConfig& kin, Rng& rng);

// Pose-sensor reading: the true pose plus independent read noise.
AgentPose report_pose(const AgentPose& true_pose, const NoiseModel& noise,
                      Rng& rng);

// Exact segment-intersection raycast fan over the camera's horizontal FoV,
// with multiplicative range noise.
DepthScan render_depth_scan(const AgentPose& pose, const CameraIntrinsics& intr,
                            const Scene& scene, const ScanParams& params,
                            const NoiseModel& noise, Rng& rng);

// Camera-frame depth (z, not range) of a landmark as seen from the pose.
double landmark_camera_depth(const AgentPose& pose, double camera_height,
                             const Landmark& lm);

}  // namespace lmnav
