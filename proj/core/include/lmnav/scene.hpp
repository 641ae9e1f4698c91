#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lmnav/geometry.hpp"

namespace lmnav {

struct WallSegment {
  Eigen::Vector2d a;
  Eigen::Vector2d b;
};

struct Landmark {
  std::int32_t id = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // z is height
};

// Planar agent pose. heading is the world-frame angle of the optical axis,
// counterclockwise from +x.
struct AgentPose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Eigen::Vector2d position() const { return {x, y}; }
  Eigen::Vector2d forward() const {
    return {std::cos(heading), std::sin(heading)};
  }
};

// Free-space occupancy of a scene at fixed resolution, used for geodesic
// queries. A cell is free when its center keeps agent_radius clearance from
// every wall.
struct NavGrid {
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  double resolution = 0.1;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> free;

  int index(int ix, int iy) const { return iy * nx + ix; }
  bool in_grid(int ix, int iy) const {
    return ix >= 0 && ix < nx && iy >= 0 && iy < ny;
  }
  bool is_free(int ix, int iy) const {
    return in_grid(ix, iy) && free[index(ix, iy)] != 0;
  }
  std::pair<int, int> cell_of(const Eigen::Vector2d& p) const;
  Eigen::Vector2d center_of(int ix, int iy) const;
};

struct Scene {
  std::string id;
  std::vector<WallSegment> walls;
  std::vector<Landmark> landmarks;
  Eigen::Vector2d bounds_min = Eigen::Vector2d::Zero();
  Eigen::Vector2d bounds_max = Eigen::Vector2d::Zero();
  double camera_height = 1.25;
  double agent_radius = 0.18;
  double navmesh_resolution = 0.1;

  NavGrid navmesh;

  // Computes bounds and the navmesh; call once after filling walls.
  void finalize();

  double clearance(const Eigen::Vector2d& p) const;
  bool in_free_space(const Eigen::Vector2d& p) const {
    return clearance(p) >= agent_radius;
  }
  bool in_free_space(const AgentPose& pose) const {
    return in_free_space(pose.position());
  }

  // True when the open segment between the endpoints crosses a wall.
  // Endpoint grazing within eps of either end is ignored so that sight
  // lines to landmarks sitting on walls do not self-occlude.
  bool segment_blocked(const Eigen::Vector2d& from, const Eigen::Vector2d& to,
                       double eps = 1e-6) const;

  // Distance along the ray to the nearest wall, or nullopt within max_range.
  std::optional<double> raycast(const Eigen::Vector2d& origin,
                                const Eigen::Vector2d& dir,
                                double max_range) const;
};

constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Shortest-path arrival distances (meters) over the navmesh from `from`,
// 8-connected with Euclidean edge weights; diagonal steps may not cut
// corners. Unreachable cells hold kUnreachable.
std::vector<double> geodesic_field(const Scene& scene, const AgentPose& from);

// Navigable shortest-path length between two poses: grid search plus
// line-of-sight shortcutting, with endpoints ordered canonically so the
// result is exactly symmetric. Returns kUnreachable when disconnected.
double geodesic_distance(const AgentPose& a, const AgentPose& b,
                         const Scene& scene);

// Field value at a position (nearest free cell within a small ring);
// kUnreachable when no free cell is nearby.
double geodesic_field_at(const Scene& scene, const std::vector<double>& field,
                         const Eigen::Vector2d& p);

// World -> camera-frame transform for a pose at the scene camera height.
// Camera frame: x right, y down, z along the heading.
RigidPose world_to_camera(const AgentPose& pose, double camera_height);

// Agent-camera -> goal-camera transform (the reprojection-objective sense).
RigidPose relative_camera_pose(const AgentPose& agent, const AgentPose& goal,
                               double camera_height);

// Signed heading from the agent's optical axis to the goal position,
// positive to the agent's right.
double true_goal_heading(const AgentPose& agent, const AgentPose& goal);

enum class Difficulty { Easy, Medium, Hard };

const char* to_string(Difficulty d);
std::optional<Difficulty> difficulty_from_string(const std::string& s);

// Difficulty bands over start->goal geodesic length: easy [1.5, 3),
// medium [3, 5), hard [5, 10].
std::optional<Difficulty> difficulty_of_geodesic(double geodesic);

struct Episode {
  std::string scene_id;
  AgentPose start;
  AgentPose goal;
  Difficulty difficulty = Difficulty::Easy;
  double geodesic_length = 0.0;
  int max_steps = 500;
};

// Per-action pose noise and multiplicative depth noise. Zero sigmas mean
// exact kinematics and exact reported poses.
struct NoiseModel {
  double pose_trans_sigma = 0.0;  // meters, per action
  double pose_rot_sigma = 0.0;    // radians, per action
  double depth_rel_sigma = 0.0;   // relative, per depth sample
};

}  // namespace lmnav
