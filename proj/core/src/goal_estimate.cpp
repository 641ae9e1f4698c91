#include "lmnav/goal_estimate.hpp"

#include <cmath>

namespace lmnav {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a > M_PI) a -= 2.0 * M_PI;
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

GoalEstimate estimate_goal(const RigidPose& pose) {
  GoalEstimate est;
  est.source_pose = pose;
  const Eigen::Vector3d& t = pose.translation;
  const double norm = t.norm();
  if (norm < 1e-9) {
    est.at_goal = true;
    return est;
  }
  est.distance = norm;
  const double cos_heading = std::clamp(t.z() / norm, -1.0, 1.0);
  const double magnitude = std::acos(cos_heading);
  if (t.x() > 0.0) {
    est.heading = magnitude;
  } else if (t.x() < 0.0) {
    est.heading = -magnitude;
  } else {
    // Zero lateral component: straight ahead or straight behind. pi is its
    // own mirror image in (-pi, pi], so symmetry is preserved exactly.
    est.heading = t.z() >= 0.0 ? 0.0 : M_PI;
  }
  return est;
}

}  // namespace lmnav
