#include "lmnav/simulator.hpp"

#include <cmath>

#include "lmnav/goal_estimate.hpp"

namespace lmnav {

const char* to_string(DiscreteAction a) {
  switch (a) {
    case DiscreteAction::Forward: return "forward";
    case DiscreteAction::TurnLeft: return "turn_left";
    case DiscreteAction::TurnRight: return "turn_right";
    case DiscreteAction::Stop: return "stop";
  }
  return "stop";
}

namespace {

// Walks from `from` toward `from + move` in 5 mm steps and returns the last
// position with full clearance. Blocked first steps leave the pose in place.
Eigen::Vector2d walk_with_collision(const Scene& scene,
                                    const Eigen::Vector2d& from,
                                    const Eigen::Vector2d& move) {
  const double len = move.norm();
  if (len < 1e-12) return from;
  const int steps = std::max(1, static_cast<int>(std::ceil(len / 0.005)));
  Eigen::Vector2d ok = from;
  for (int i = 1; i <= steps; ++i) {
    const Eigen::Vector2d p = from + (static_cast<double>(i) / steps) * move;
    if (!scene.in_free_space(p)) break;
    ok = p;
  }
  return ok;
}

}  // namespace

AgentPose apply_action(const AgentPose& pose, DiscreteAction action,
                       const Scene& scene, const NoiseModel& noise,
                       const KinematicsConfig& kin, Rng& rng) {
  if (action == DiscreteAction::Stop) return pose;

  std::normal_distribution<double> trans_noise(0.0, noise.pose_trans_sigma);
  std::normal_distribution<double> rot_noise(0.0, noise.pose_rot_sigma);

  Eigen::Vector2d move = Eigen::Vector2d::Zero();
  double dheading = 0.0;
  switch (action) {
    case DiscreteAction::Forward:
      move = kin.forward_step * pose.forward();
      break;
    case DiscreteAction::TurnLeft:
      dheading = kin.turn_step;
      break;
    case DiscreteAction::TurnRight:
      dheading = -kin.turn_step;
      break;
    case DiscreteAction::Stop:
      break;
  }
  if (noise.pose_trans_sigma > 0.0) {
    move.x() += trans_noise(rng);
    move.y() += trans_noise(rng);
  }
  if (noise.pose_rot_sigma > 0.0) {
    dheading += rot_noise(rng);
  }

  AgentPose out = pose;
  const Eigen::Vector2d landed =
      walk_with_collision(scene, pose.position(), move);
  out.x = landed.x();
  out.y = landed.y();
  out.heading = wrap_angle(pose.heading + dheading);
  return out;
}

AgentPose report_pose(const AgentPose& true_pose, const NoiseModel& noise,
                      Rng& rng) {
  AgentPose out = true_pose;
  if (noise.pose_trans_sigma > 0.0) {
    std::normal_distribution<double> trans_noise(0.0, noise.pose_trans_sigma);
    out.x += trans_noise(rng);
    out.y += trans_noise(rng);
  }
  if (noise.pose_rot_sigma > 0.0) {
    std::normal_distribution<double> rot_noise(0.0, noise.pose_rot_sigma);
    out.heading = wrap_angle(out.heading + rot_noise(rng));
  }
  return out;
}

DepthScan render_depth_scan(const AgentPose& pose, const CameraIntrinsics& intr,
                            const Scene& scene, const ScanParams& params,
                            const NoiseModel& noise, Rng& rng) {
  DepthScan scan;
  scan.max_range = params.max_range;
  scan.bearings.reserve(params.rays);
  scan.ranges.reserve(params.rays);

  const double half = 0.5 * intr.hfov();
  std::normal_distribution<double> depth_noise(0.0, noise.depth_rel_sigma);
  const Eigen::Vector2d origin = pose.position();
  for (int i = 0; i < params.rays; ++i) {
    const double bearing =
        params.rays == 1
            ? 0.0
            : -half + 2.0 * half * static_cast<double>(i) / (params.rays - 1);
    const double world = pose.heading - bearing;
    const Eigen::Vector2d dir(std::cos(world), std::sin(world));
    auto range = scene.raycast(origin, dir, params.max_range);
    if (range && noise.depth_rel_sigma > 0.0) {
      *range = *range * std::max(0.05, 1.0 + depth_noise(rng));
    }
    scan.bearings.push_back(bearing);
    scan.ranges.push_back(range);
  }
  return scan;
}

double landmark_camera_depth(const AgentPose& pose, double camera_height,
                             const Landmark& lm) {
  const RigidPose cam = world_to_camera(pose, camera_height);
  return cam.apply(lm.position).z();
}

}  // namespace lmnav
