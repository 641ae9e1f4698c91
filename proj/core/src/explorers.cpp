#include "lmnav/explorers.hpp"

#include <algorithm>
#include <cmath>

#include "lmnav/goal_estimate.hpp"

namespace lmnav {

DiscreteAction straight_step(StraightState& state, const AgentPose& current) {
  DiscreteAction action = DiscreteAction::Forward;
  if (state.has_history && state.last_commanded == DiscreteAction::Forward) {
    const double moved =
        (current.position() - state.pre_action_pose.position()).norm();
    if (moved < 0.1) action = DiscreteAction::TurnRight;
  }
  state.has_history = true;
  state.last_commanded = action;
  state.pre_action_pose = current;
  return action;
}

int TopoMap::nearest_within(const Eigen::Vector2d& p, double radius) const {
  int best = -1;
  double best_d = radius;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double d = (nodes[i].pose.position() - p).norm();
    if (d <= best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

namespace {

int pick_target(const TopoMap& map) {
  int best = -1;
  double best_g = kUnreachable;
  for (std::size_t i = 0; i < map.nodes.size(); ++i) {
    if (!map.nodes[i].frontier) continue;
    if (map.nodes[i].geodesic_to_goal < best_g) {
      best_g = map.nodes[i].geodesic_to_goal;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

DiscreteAction oracle_step(OracleState& state, const AgentPose& current,
                           const Scene& scene, const AgentPose& goal,
                           const DepthScan& scan, const GridParams& grid_params,
                           const OracleConfig& cfg) {
  if (state.goal_field.empty()) {
    state.goal_field = geodesic_field(scene, goal);
  }
  auto g2g = [&](const Eigen::Vector2d& p) {
    return geodesic_field_at(scene, state.goal_field, p);
  };

  // Record the current position, skipping duplicates.
  const Eigen::Vector2d here = current.position();
  int here_node = state.map.nearest_within(here, cfg.dedup_radius);
  if (here_node < 0) {
    state.map.nodes.push_back({current, g2g(here), false});
    here_node = static_cast<int>(state.map.nodes.size()) - 1;
    if (state.last_visited >= 0) {
      state.map.edges.emplace_back(state.last_visited, here_node);
    }
  } else {
    state.map.nodes[here_node].frontier = false;
  }
  if (here_node != state.last_visited && state.last_visited >= 0 &&
      here_node != static_cast<int>(state.map.nodes.size()) - 1) {
    state.map.edges.emplace_back(state.last_visited, here_node);
  }
  state.last_visited = here_node;

  // Frontier proposals along free rays, spaced every waypoint_spacing.
  const std::size_t stride = std::max<std::size_t>(1, scan.bearings.size() / 45);
  for (std::size_t i = 0; i < scan.bearings.size(); i += stride) {
    const double margin = scene.agent_radius + 0.1;
    const double free_len =
        (scan.ranges[i] ? *scan.ranges[i] : scan.max_range) - margin;
    const double world = current.heading - scan.bearings[i];
    const Eigen::Vector2d dir(std::cos(world), std::sin(world));
    for (double s = cfg.waypoint_spacing; s <= free_len;
         s += cfg.waypoint_spacing) {
      const Eigen::Vector2d p = here + s * dir;
      if (!scene.in_free_space(p)) continue;
      if (state.map.nearest_within(p, cfg.dedup_radius) >= 0) continue;
      const double g = g2g(p);
      if (g == kUnreachable) continue;
      AgentPose node_pose;
      node_pose.x = p.x();
      node_pose.y = p.y();
      node_pose.heading = world;
      state.map.nodes.push_back({node_pose, g, true});
    }
  }

  // Select / refresh the target frontier node.
  auto target_valid = [&] {
    return state.target >= 0 &&
           state.target < static_cast<int>(state.map.nodes.size()) &&
           state.map.nodes[state.target].frontier;
  };
  if (target_valid() && state.steps_on_target > cfg.max_steps_per_target) {
    state.map.nodes[state.target].frontier = false;  // abandon stuck target
  }
  if (!target_valid()) {
    state.target = pick_target(state.map);
    state.steps_on_target = 0;
  }
  if (state.target < 0) {
    return DiscreteAction::TurnRight;  // rotate to generate frontiers
  }

  const Eigen::Vector2d to_target =
      state.map.nodes[state.target].pose.position() - here;
  if (to_target.norm() < cfg.node_reached_radius) {
    state.map.nodes[state.target].frontier = false;
    state.target = pick_target(state.map);
    state.steps_on_target = 0;
    if (state.target < 0) return DiscreteAction::TurnRight;
  }
  ++state.steps_on_target;

  const Eigen::Vector2d v =
      state.map.nodes[state.target].pose.position() - here;
  GoalEstimate est;
  est.distance = v.norm();
  est.heading = wrap_angle(current.heading - std::atan2(v.y(), v.x()));

  const OccupancyGrid grid = build_local_map(scan, current.heading, grid_params);
  const auto waypoint = waypoint_cell_for(est, current.heading, grid);
  const DistanceField field = fast_marching(grid, waypoint);
  PolicyParams params;
  params.stop_radius = cfg.node_reached_radius;
  const DiscreteAction action =
      select_action(est, grid, field, current.heading, params);
  if (action == DiscreteAction::Stop) {
    // Reached the node between checks; mark it and keep moving next step.
    state.map.nodes[state.target].frontier = false;
    state.target = -1;
    return DiscreteAction::TurnRight;
  }
  return action;
}

}  // namespace lmnav
