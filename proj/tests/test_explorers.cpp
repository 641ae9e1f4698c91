#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lmnav/explorers.hpp"
#include "lmnav/simulator.hpp"
#include "support/synthetic.hpp"

using namespace lmnav;

TEST_CASE("straight explorer: collision rule") {
  StraightState state;
  const AgentPose origin{0, 0, 0};

  // First step: no history, go forward.
  CHECK(straight_step(state, origin) == DiscreteAction::Forward);

  // Moved a full step: keep going.
  const AgentPose moved{0.25, 0, 0};
  CHECK(straight_step(state, moved) == DiscreteAction::Forward);

  // Stuck (same pose): turn right once.
  CHECK(straight_step(state, moved) == DiscreteAction::TurnRight);

  // Last action was a turn, so forward again regardless of displacement.
  CHECK(straight_step(state, moved) == DiscreteAction::Forward);

  // Sub-threshold displacement also counts as a collision.
  const AgentPose barely{0.25 + 0.09, 0, 0};
  CHECK(straight_step(state, barely) == DiscreteAction::TurnRight);
}

TEST_CASE("straight explorer traces are deterministic") {
  const Scene scene = test::make_box_scene(3.0);
  const NoiseModel no_noise;
  const KinematicsConfig kin;
  auto rollout = [&] {
    std::vector<DiscreteAction> actions;
    StraightState state;
    AgentPose pose{0.5, -0.4, 0.3};
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
      const DiscreteAction a = straight_step(state, pose);
      actions.push_back(a);
      pose = apply_action(pose, a, scene, no_noise, kin, rng);
    }
    return actions;
  };
  CHECK(rollout() == rollout());
}

TEST_CASE("oracle targets the frontier with the smallest goal geodesic") {
  const Scene scene = test::make_box_scene(4.0, 40);
  const CameraIntrinsics intr = test::test_intrinsics();
  const NoiseModel no_noise;
  Rng rng(2);
  ScanParams sp;
  sp.rays = 121;
  sp.max_range = 5.0;

  const AgentPose agent{-2.5, 0, 0};
  const AgentPose goal{3.0, 2.5, 0};
  OracleState state;
  const DepthScan scan =
      render_depth_scan(agent, intr, scene, sp, no_noise, rng);
  oracle_step(state, agent, scene, goal, scan, GridParams{}, OracleConfig{});

  REQUIRE(state.target >= 0);
  const double chosen = state.map.nodes[state.target].geodesic_to_goal;
  for (const auto& node : state.map.nodes) {
    if (node.frontier) CHECK(chosen <= node.geodesic_to_goal);
  }
  // Privileged distances stay inside the map state.
  CHECK(!state.goal_field.empty());
}

TEST_CASE("oracle deduplicates nodes on revisits") {
  const Scene scene = test::make_box_scene(4.0, 40);
  const CameraIntrinsics intr = test::test_intrinsics();
  const NoiseModel no_noise;
  ScanParams sp;
  sp.rays = 121;
  sp.max_range = 5.0;
  const AgentPose agent{0, 0, 0};
  const AgentPose goal{3.0, 2.5, 0};

  OracleState state;
  Rng rng(3);
  const DepthScan scan =
      render_depth_scan(agent, intr, scene, sp, no_noise, rng);
  oracle_step(state, agent, scene, goal, scan, GridParams{}, OracleConfig{});
  const std::size_t after_first = state.map.nodes.size();

  // Same pose, same scan: nothing new within the dedup radius.
  oracle_step(state, agent, scene, goal, scan, GridParams{}, OracleConfig{});
  CHECK(state.map.nodes.size() == after_first);
}

TEST_CASE("oracle explorer closes in on the goal") {
  GenConfig gcfg;
  gcfg.seed = 21;
  gcfg.n_scenes = 1;
  gcfg.rooms_x_min = gcfg.rooms_x_max = 2;
  gcfg.rooms_y_min = gcfg.rooms_y_max = 1;
  const Scene scene = generate_scenes(gcfg).front();
  const CameraIntrinsics intr = test::test_intrinsics();
  const NoiseModel no_noise;
  ScanParams sp;
  sp.rays = 121;
  sp.max_range = 5.0;
  const KinematicsConfig kin;

  AgentPose pose{1.0, 1.0, 0};
  REQUIRE(scene.in_free_space(pose));
  AgentPose goal{scene.bounds_max.x() - 1.0, scene.bounds_max.y() - 1.0, 0};
  REQUIRE(scene.in_free_space(goal));

  OracleState state;
  Rng rng(9);
  double best = geodesic_distance(pose, goal, scene);
  for (int step = 0; step < 600; ++step) {
    const DepthScan scan =
        render_depth_scan(pose, intr, scene, sp, no_noise, rng);
    const DiscreteAction a =
        oracle_step(state, pose, scene, goal, scan, GridParams{}, OracleConfig{});
    pose = apply_action(pose, a, scene, no_noise, kin, rng);
    best = std::min(best, geodesic_distance(pose, goal, scene));
    if (best < 1.0) break;
  }
  CHECK(best < 1.0);
}

TEST_CASE("successive oracle targets improve the goal geodesic") {
  const Scene scene = test::make_box_scene(5.0, 60);
  const CameraIntrinsics intr = test::test_intrinsics();
  const NoiseModel no_noise;
  ScanParams sp;
  sp.rays = 121;
  sp.max_range = 5.0;
  const KinematicsConfig kin;

  AgentPose pose{-4.0, -4.0, 0.7};
  const AgentPose goal{4.0, 4.0, 0};
  OracleState state;
  Rng rng(4);
  int last_target = -1;
  double last_g = std::numeric_limits<double>::infinity();
  std::vector<double> target_geodesics;
  for (int step = 0; step < 300; ++step) {
    const DepthScan scan =
        render_depth_scan(pose, intr, scene, sp, no_noise, rng);
    const DiscreteAction a =
        oracle_step(state, pose, scene, goal, scan, GridParams{}, OracleConfig{});
    if (state.target >= 0 && state.target != last_target) {
      last_target = state.target;
      target_geodesics.push_back(
          state.map.nodes[state.target].geodesic_to_goal);
    }
    pose = apply_action(pose, a, scene, no_noise, kin, rng);
    (void)last_g;
  }
  REQUIRE(target_geodesics.size() >= 2);
  // In an open room with a fixed goal, retargets move strictly closer.
  for (std::size_t i = 1; i < target_geodesics.size(); ++i) {
    CHECK(target_geodesics[i] <= target_geodesics[i - 1] + 1e-9);
  }
}
