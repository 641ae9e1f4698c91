#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "lmnav/matcher.hpp"
#include "support/synthetic.hpp"

using namespace lmnav;

namespace {

MatcherConfig clean_matcher(std::uint64_t seed = 1) {
  MatcherConfig cfg;
  cfg.pixel_noise_sigma = 0.0;
  cfg.detection_rate = 1.0;
  cfg.outlier_fraction = 0.0;
  cfg.max_range = 10.0;
  cfg.rng_seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("identical views match every visible landmark exactly") {
  const Scene scene = test::make_box_scene(4.0);
  const CameraIntrinsics intr = test::test_intrinsics();
  const AgentPose pose{0, 0, 0.5};
  const auto corr = match_views(scene, pose, pose, intr, clean_matcher());
  const auto visible = visible_landmarks(scene, pose, intr, 10.0);
  CHECK(count_matches(corr) == visible.size());
  REQUIRE(corr.size() > 0);
  for (std::size_t i = 0; i < corr.size(); ++i) {
    CHECK(corr.agent_points[i].u == corr.goal_points[i].u);
    CHECK(corr.agent_points[i].v == corr.goal_points[i].v);
    CHECK(corr.agent_depths[i] > 0.0);
  }
}

TEST_CASE("opposite headings in a convex room share no view") {
  const Scene scene = test::make_box_scene(4.0);
  const CameraIntrinsics intr = CameraIntrinsics::from_fov(640, 480, M_PI / 2);
  const AgentPose agent{0, 0, 0};
  const AgentPose goal{0, 0, M_PI};
  const auto corr = match_views(scene, agent, goal, intr, clean_matcher());
  CHECK(corr.size() == 0);
}

TEST_CASE("outlier injection replaces exactly the floor fraction") {
  const Scene scene = test::make_box_scene(4.0, 60);
  const CameraIntrinsics intr = test::test_intrinsics();
  const AgentPose agent{0, 0, 0.2};
  const AgentPose goal{0.4, 0.2, 0.25};
  MatcherConfig cfg = clean_matcher(9);
  cfg.outlier_fraction = 0.4;
  const auto corr = match_views(scene, agent, goal, intr, cfg);
  REQUIRE(corr.size() > 10);

  std::size_t tagged = 0;
  for (const auto id : corr.landmark_ids) {
    if (id == CorrespondenceSet::kOutlierId) ++tagged;
  }
  CHECK(tagged == static_cast<std::size_t>(0.4 * corr.size()));

  // Cross-check provenance: non-outlier entries carry a landmark id whose
  // recomputed visibility and goal projection match what was emitted.
  const RigidPose goal_cam = world_to_camera(goal, scene.camera_height);
  for (std::size_t i = 0; i < corr.size(); ++i) {
    if (corr.landmark_ids[i] == CorrespondenceSet::kOutlierId) continue;
    const auto& lm = scene.landmarks[corr.landmark_ids[i]];
    const Pixel2D reproj = project(goal_cam.apply(lm.position), intr);
    CHECK(std::abs(reproj.u - corr.goal_points[i].u) < 1e-9);
    CHECK(std::abs(reproj.v - corr.goal_points[i].v) < 1e-9);
  }
}

TEST_CASE("count_matches basics") {
  CHECK(count_matches({}) == 0);
  const Scene scene = test::make_box_scene(4.0);
  const CameraIntrinsics intr = test::test_intrinsics();
  const AgentPose pose{0.3, -0.2, 1.0};
  const auto baseline = match_views(scene, pose, pose, intr, clean_matcher(4));
  MatcherConfig with_outliers = clean_matcher(4);
  with_outliers.outlier_fraction = 0.5;
  const auto corrupted =
      match_views(scene, pose, pose, intr, with_outliers);
  CHECK(count_matches(corrupted) == count_matches(baseline));
}

TEST_CASE("visibility eligibility is symmetric in the two poses") {
  const Scene scene = test::make_box_scene(4.0);
  const CameraIntrinsics intr = test::test_intrinsics();
  Rng rng(8);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> h(-M_PI, M_PI);
  for (int trial = 0; trial < 20; ++trial) {
    const AgentPose a{u(rng), u(rng), h(rng)};
    const AgentPose b{u(rng), u(rng), h(rng)};
    if (!scene.in_free_space(a) || !scene.in_free_space(b)) continue;
    const auto ab = match_views(scene, a, b, intr, clean_matcher(1));
    const auto ba = match_views(scene, b, a, intr, clean_matcher(1));
    std::set<std::int32_t> ids_ab(ab.landmark_ids.begin(),
                                  ab.landmark_ids.end());
    std::set<std::int32_t> ids_ba(ba.landmark_ids.begin(),
                                  ba.landmark_ids.end());
    CHECK(ids_ab == ids_ba);
  }
}

TEST_CASE("matching is deterministic given the seed") {
  const Scene scene = test::make_box_scene(4.0);
  const CameraIntrinsics intr = test::test_intrinsics();
  const AgentPose agent{0.4, -0.6, 0.3};
  const AgentPose goal{1.0, 0.2, 0.1};
  MatcherConfig cfg = clean_matcher(77);
  cfg.pixel_noise_sigma = 0.7;
  cfg.detection_rate = 0.8;
  cfg.outlier_fraction = 0.25;
  NoiseModel noise;
  noise.depth_rel_sigma = 0.02;

  const auto a = match_views(scene, agent, goal, intr, cfg, noise);
  const auto b = match_views(scene, agent, goal, intr, cfg, noise);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.agent_points[i].u == b.agent_points[i].u);
    CHECK(a.goal_points[i].v == b.goal_points[i].v);
    CHECK(a.agent_depths[i] == b.agent_depths[i]);
    CHECK(a.landmark_ids[i] == b.landmark_ids[i]);
  }
}

TEST_CASE("enlarging max_range never loses true matches") {
  const Scene scene = test::make_box_scene(4.0);
  const CameraIntrinsics intr = test::test_intrinsics();
  const AgentPose agent{-2.0, 0, 0};
  const AgentPose goal{-1.5, 0.3, 0.05};
  MatcherConfig near = clean_matcher(3);
  near.max_range = 4.0;
  MatcherConfig far = clean_matcher(3);
  far.max_range = 9.0;
  const auto small_set = match_views(scene, agent, goal, intr, near);
  const auto large_set = match_views(scene, agent, goal, intr, far);
  CHECK(large_set.size() >= small_set.size());
  std::set<std::int32_t> large_ids(large_set.landmark_ids.begin(),
                                   large_set.landmark_ids.end());
  for (const auto id : small_set.landmark_ids) {
    CHECK(large_ids.count(id) == 1);
  }
}

TEST_CASE("occlusion: a wall between the camera and landmark blocks it") {
  Scene scene;
  scene.walls.push_back({{-4, -4}, {4, -4}});
  scene.walls.push_back({{4, -4}, {4, 4}});
  scene.walls.push_back({{4, 4}, {-4, 4}});
  scene.walls.push_back({{-4, 4}, {-4, -4}});
  // Short blocking wall in front of the +x wall's midpoint.
  scene.walls.push_back({{2.0, -0.8}, {2.0, 0.8}});
  scene.landmarks.push_back({0, {3.999, 0.0, 1.2}});   // hidden behind it
  scene.landmarks.push_back({1, {3.999, 2.5, 1.2}});   // visible past its end
  scene.finalize();
  const CameraIntrinsics intr = test::test_intrinsics();
  const AgentPose pose{0, 0, 0};
  const auto visible = visible_landmarks(scene, pose, intr, 10.0);
  CHECK(visible == std::vector<std::size_t>{1});
}

TEST_CASE("matcher config invariants") {
  MatcherConfig cfg = clean_matcher();
  cfg.detection_rate = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = clean_matcher();
  cfg.outlier_fraction = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = clean_matcher();
  cfg.pixel_noise_sigma = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = clean_matcher();
  cfg.max_range = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
