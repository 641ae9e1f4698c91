#include "lmnav/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lmnav/rng.hpp"

namespace lmnav {

void MatcherConfig::validate() const {
  if (pixel_noise_sigma < 0.0) {
    throw std::invalid_argument("MatcherConfig: pixel_noise_sigma must be >= 0");
  }
  if (detection_rate < 0.0 || detection_rate > 1.0) {
    throw std::invalid_argument("MatcherConfig: detection_rate must be in [0,1]");
  }
  if (outlier_fraction < 0.0 || outlier_fraction >= 1.0) {
    throw std::invalid_argument(
        "MatcherConfig: outlier_fraction must be in [0,1)");
  }
  if (!(max_range > 0.0)) {
    throw std::invalid_argument("MatcherConfig: max_range must be > 0");
  }
}

namespace {

struct Projection {
  bool visible = false;
  Pixel2D pixel;
  double depth = 0.0;  // camera-frame z
};

Projection project_landmark(const Scene& scene, const AgentPose& pose,
                            const CameraIntrinsics& intr, double max_range,
                            const Landmark& lm) {
  Projection out;
  const RigidPose cam = world_to_camera(pose, scene.camera_height);
  const Point3 in_cam = cam.apply(lm.position);
  if (!(in_cam.z() > 0.0)) return out;
  if (in_cam.norm() > max_range) return out;
  const Pixel2D pix = project(in_cam, intr);
  if (!intr.in_bounds(pix)) return out;
  if (scene.segment_blocked(pose.position(), lm.position.head<2>())) return out;
  out.visible = true;
  out.pixel = pix;
  out.depth = in_cam.z();
  return out;
}

}  // namespace

std::vector<std::size_t> visible_landmarks(const Scene& scene,
                                           const AgentPose& pose,
                                           const CameraIntrinsics& intr,
                                           double max_range) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < scene.landmarks.size(); ++i) {
    if (project_landmark(scene, pose, intr, max_range, scene.landmarks[i])
            .visible) {
      out.push_back(i);
    }
  }
  return out;
}

CorrespondenceSet match_views(const Scene& scene, const AgentPose& agent_pose,
                              const AgentPose& goal_pose,
                              const CameraIntrinsics& intr,
                              const MatcherConfig& cfg,
                              const NoiseModel& noise) {
  cfg.validate();
  Rng rng(cfg.rng_seed);
  std::uniform_real_distribution<double> uniform01(0.0, 1.0);
  std::normal_distribution<double> pixel_noise(0.0, cfg.pixel_noise_sigma);
  std::normal_distribution<double> depth_noise(0.0, noise.depth_rel_sigma);

  CorrespondenceSet corr;
  for (const auto& lm : scene.landmarks) {
    const Projection in_agent =
        project_landmark(scene, agent_pose, intr, cfg.max_range, lm);
    if (!in_agent.visible) continue;
    const Projection in_goal =
        project_landmark(scene, goal_pose, intr, cfg.max_range, lm);
    if (!in_goal.visible) continue;
    if (cfg.detection_rate < 1.0 && uniform01(rng) >= cfg.detection_rate) {
      continue;
    }

    Pixel2D agent_px = in_agent.pixel;
    if (cfg.pixel_noise_sigma > 0.0) {
      agent_px.u += pixel_noise(rng);
      agent_px.v += pixel_noise(rng);
    }
    double depth = in_agent.depth;
    if (noise.depth_rel_sigma > 0.0) {
      depth *= std::max(0.05, 1.0 + depth_noise(rng));
    }
    corr.push_back(agent_px, in_goal.pixel, depth, lm.id);
  }

  // Outliers replace goal pixels; n is unchanged.
  const auto n_outliers = static_cast<std::size_t>(
      std::floor(cfg.outlier_fraction * static_cast<double>(corr.size())));
  if (n_outliers > 0) {
    std::vector<std::size_t> order(corr.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_real_distribution<double> un_u(0.0, intr.width);
    std::uniform_real_distribution<double> un_v(0.0, intr.height);
    for (std::size_t k = 0; k < n_outliers; ++k) {
      const std::size_t i = order[k];
      corr.goal_points[i] = {un_u(rng), un_v(rng)};
      corr.landmark_ids[i] = CorrespondenceSet::kOutlierId;
    }
  }
  return corr;
}

}  // namespace lmnav
