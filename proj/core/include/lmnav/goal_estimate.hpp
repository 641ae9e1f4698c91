#pragma once

#include "lmnav/geometry.hpp"

namespace lmnav {

// Distance and heading that drive the local policy and the exploit->explore
// switch. Heading is measured from the agent's optical axis, in (-pi, pi],
// positive when the goal lies to the agent's right.
struct GoalEstimate {
  double distance = 0.0;  // meters
  double heading = 0.0;   // radians
  RigidPose source_pose;
  bool at_goal = false;  // translation was below the zero threshold
};

// Converts a relative pose whose translation carries the goal camera center
// in the agent's camera frame. When PnP recovers the agent->goal-frame
// transform of the reprojection objective, pass its inverse.
//
// distance = |t|; heading magnitude = arccos(t_z / |t|) against the optical
// axis (0,0,1); sign from the lateral (x, ground-parallel) component. A
// translation below 1e-9 yields the flagged at-goal estimate (0, 0).
GoalEstimate estimate_goal(const RigidPose& pose);

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace lmnav
