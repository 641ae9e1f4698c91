#pragma once

#include <vector>

#include "lmnav/local_policy.hpp"
#include "lmnav/scene.hpp"
#include "lmnav/simulator.hpp"

namespace lmnav {

// Drive forward; when a Forward action moved the agent less than 0.1 m,
// assume a collision and turn right once.
struct StraightState {
  bool has_history = false;
  DiscreteAction last_commanded = DiscreteAction::Forward;
  AgentPose pre_action_pose;
};

DiscreteAction straight_step(StraightState& state, const AgentPose& current);

struct TopoNode {
  AgentPose pose;
  double geodesic_to_goal = kUnreachable;  // privileged, explorer-internal
  bool frontier = false;
};

struct TopoMap {
  std::vector<TopoNode> nodes;
  std::vector<std::pair<int, int>> edges;  // traversal adjacency

  int nearest_within(const Eigen::Vector2d& p, double radius) const;
};

struct OracleConfig {
  double dedup_radius = 0.5;       // no two nodes closer than this
  double waypoint_spacing = 1.5;   // frontier proposals along free rays
  double node_reached_radius = 0.5;
  int max_steps_per_target = 150;  // liveness guard; target then abandoned
};

struct OracleState {
  TopoMap map;
  int target = -1;
  int steps_on_target = 0;
  int last_visited = -1;
  std::vector<double> goal_field;  // filled on first step
};

// Privileged goal-discovery explorer: tracks a deduplicated topological map,
// proposes frontier nodes from the depth scan, and always heads for the
// frontier node with the smallest geodesic-to-goal (agent-to-node distance
// deliberately ignored). The geodesic values never leave the state.
DiscreteAction oracle_step(OracleState& state, const AgentPose& current,
                           const Scene& scene, const AgentPose& goal,
                           const DepthScan& scan, const GridParams& grid_params,
                           const OracleConfig& cfg);

}  // namespace lmnav
