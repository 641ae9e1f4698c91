#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lmnav/pnp.hpp"
#include "support/synthetic.hpp"

using namespace lmnav;

namespace {

RansacConfig test_ransac(std::uint64_t seed) {
  RansacConfig cfg;
  cfg.max_iterations = 500;
  cfg.inlier_threshold = 2.0;
  cfg.min_inliers = 10;
  cfg.confidence = 0.999;
  cfg.rng_seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("epnp recovers the exact pose on noise-free data") {
  const CameraIntrinsics intr = test::test_intrinsics();
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto instance = test::make_pnp_instance(seed, 6);
    const RigidPose pose = epnp_solve(instance.corr, intr);
    CHECK(test::rotation_angle_between(pose.rotation,
                                       instance.gt_pose.rotation) < 1e-6);
    CHECK((pose.translation - instance.gt_pose.translation).norm() < 1e-6);
    CHECK(pose.is_valid(1e-9));
  }
}

TEST_CASE("epnp on identity-pose data returns the identity") {
  const CameraIntrinsics intr = test::test_intrinsics();
  const auto instance = test::make_pnp_instance(3, 12, 0.0, 0.0, 0.0, 0.0);
  const RigidPose pose = epnp_solve(instance.corr, intr);
  CHECK(test::rotation_angle_between(pose.rotation,
                                     Eigen::Matrix3d::Identity()) < 1e-6);
  CHECK(pose.translation.norm() < 1e-6);
}

TEST_CASE("epnp errors: too few points, collinear points") {
  const CameraIntrinsics intr = test::test_intrinsics();
  auto instance = test::make_pnp_instance(4, 3);
  CHECK_THROWS_AS(epnp_solve(instance.corr, intr), InsufficientPointsError);

  // Collinear: all points along the optical axis.
  CorrespondenceSet collinear;
  for (int i = 0; i < 6; ++i) {
    collinear.push_back({intr.px, intr.py}, {intr.px, intr.py}, 1.0 + i);
  }
  CHECK_THROWS_AS(epnp_solve(collinear, intr), DegenerateConfigurationError);
}

TEST_CASE("epnp handles coplanar landmark sets") {
  // Landmarks on a single fronto-diagonal plane, as a wall view produces.
  const CameraIntrinsics intr = test::test_intrinsics();
  Rng rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  RigidPose gt;
  gt.rotation = test::random_rotation(rng, 0.3);
  gt.translation = {0.4, 0.1, 0.6};

  CorrespondenceSet corr;
  while (corr.size() < 12) {
    // Plane z = 4 + 0.5 x in the agent frame.
    const double x = u(rng);
    const double y = u(rng);
    const Point3 in_agent(x, y, 4.0 + 0.5 * x);
    const Point3 in_goal = gt.apply(in_agent);
    if (!(in_goal.z() > 0.3)) continue;
    const Pixel2D a = project(in_agent, intr);
    const Pixel2D g = project(in_goal, intr);
    if (!intr.in_bounds(a) || !intr.in_bounds(g)) continue;
    corr.push_back(a, g, in_agent.z());
  }
  const RigidPose pose = epnp_solve(corr, intr);
  CHECK(test::rotation_angle_between(pose.rotation, gt.rotation) < 1e-4);
  CHECK((pose.translation - gt.translation).norm() < 1e-4);
}

TEST_CASE("refine_pose keeps a ground-truth initialization") {
  const CameraIntrinsics intr = test::test_intrinsics();
  const auto instance = test::make_pnp_instance(9, 20);
  const std::vector<bool> all(instance.corr.size(), true);
  const RefineResult refined =
      refine_pose(instance.corr, intr, instance.gt_pose, all);
  CHECK(!refined.degraded);
  CHECK(test::rotation_angle_between(refined.pose.rotation,
                                     instance.gt_pose.rotation) < 1e-9);
  CHECK((refined.pose.translation - instance.gt_pose.translation).norm() <
        1e-9);
}

TEST_CASE("refine_pose pulls a perturbed pose back to the truth") {
  const CameraIntrinsics intr = test::test_intrinsics();
  for (std::uint64_t seed = 21; seed <= 30; ++seed) {
    const auto instance = test::make_pnp_instance(seed, 30);
    Rng rng(seed);
    RigidPose start = instance.gt_pose;
    start.rotation =
        test::random_rotation(rng, 2.0 * M_PI / 180.0) * start.rotation;
    start.translation += Eigen::Vector3d(0.03, -0.02, 0.03);

    const std::vector<bool> all(instance.corr.size(), true);
    const RefineResult refined = refine_pose(instance.corr, intr, start, all);
    CHECK(test::rotation_angle_between(refined.pose.rotation,
                                       instance.gt_pose.rotation) < 1e-6);
    CHECK((refined.pose.translation - instance.gt_pose.translation).norm() <
          1e-6);
  }
}

TEST_CASE("refine_pose never increases the objective") {
  const CameraIntrinsics intr = test::test_intrinsics();
  for (std::uint64_t seed = 41; seed <= 60; ++seed) {
    const auto instance = test::make_pnp_instance(seed, 25, 1.0);
    Rng rng(seed);
    RigidPose start = instance.gt_pose;
    start.rotation =
        test::random_rotation(rng, 5.0 * M_PI / 180.0) * start.rotation;
    start.translation += Eigen::Vector3d(0.1, 0.05, -0.08);

    const std::vector<bool> all(instance.corr.size(), true);
    const double before =
        reprojection_error(instance.corr, start, intr).mean;
    const RefineResult refined = refine_pose(instance.corr, intr, start, all);
    const double after =
        reprojection_error(instance.corr, refined.pose, intr).mean;
    CHECK(after <= before + 1e-12);
    CHECK(after == doctest::Approx(refined.mean_error));
  }
}

TEST_CASE("ransac_pnp rejects 40 percent outliers") {
  const CameraIntrinsics intr = test::test_intrinsics();
  int recovered = 0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto instance = test::make_pnp_instance(seed, 50, 0.5, 0.4);
    const auto result = ransac_pnp(instance.corr, intr, test_ransac(seed));
    REQUIRE(result.has_value());
    const double rot_err = test::rotation_angle_between(
        result->pose.rotation, instance.gt_pose.rotation);
    const double trans_err =
        (result->pose.translation - instance.gt_pose.translation).norm();
    if (rot_err < M_PI / 180.0 && trans_err < 0.05) ++recovered;

    // At least 90% of the true inliers must be recovered.
    int true_inliers = 0, found = 0;
    for (std::size_t i = 0; i < instance.gt_inliers.size(); ++i) {
      if (!instance.gt_inliers[i]) continue;
      ++true_inliers;
      if (result->inlier_mask[i]) ++found;
    }
    CHECK(found >= static_cast<int>(0.9 * true_inliers));
  }
  CHECK(recovered == 20);
}

TEST_CASE("ransac_pnp fails cleanly on all-outlier input") {
  const CameraIntrinsics intr = test::test_intrinsics();
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> du(0.0, intr.width);
    std::uniform_real_distribution<double> dv(0.0, intr.height);
    std::uniform_real_distribution<double> dd(0.5, 8.0);
    CorrespondenceSet corr;
    for (int i = 0; i < 50; ++i) {
      corr.push_back({du(rng), dv(rng)}, {du(rng), dv(rng)}, dd(rng));
    }
    if (!ransac_pnp(corr, intr, test_ransac(seed)).has_value()) ++failures;
  }
  CHECK(failures == 100);
}

TEST_CASE("ransac_pnp without noise matches the direct solve") {
  const CameraIntrinsics intr = test::test_intrinsics();
  const auto instance = test::make_pnp_instance(7, 40);
  const auto result = ransac_pnp(instance.corr, intr, test_ransac(7));
  REQUIRE(result.has_value());
  for (const bool b : result->inlier_mask) CHECK(b);

  const RigidPose direct = epnp_solve(instance.corr, intr);
  const std::vector<bool> all(instance.corr.size(), true);
  const RigidPose polished = refine_pose(instance.corr, intr, direct, all).pose;
  CHECK((result->pose.translation - polished.translation).norm() < 1e-9);
  CHECK((result->pose.rotation - polished.rotation).norm() < 1e-9);
}

TEST_CASE("ransac_pnp is deterministic for a fixed seed") {
  const CameraIntrinsics intr = test::test_intrinsics();
  const auto instance = test::make_pnp_instance(13, 60, 0.5, 0.3);
  const auto a = ransac_pnp(instance.corr, intr, test_ransac(99));
  const auto b = ransac_pnp(instance.corr, intr, test_ransac(99));
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(a->pose.rotation == b->pose.rotation);
  CHECK(a->pose.translation == b->pose.translation);
  CHECK(a->inlier_mask == b->inlier_mask);
  CHECK(a->mean_inlier_error == b->mean_inlier_error);
  CHECK(a->iterations_used == b->iterations_used);
}

TEST_CASE("success is monotone as the outlier ratio falls") {
  const CameraIntrinsics intr = test::test_intrinsics();
  const double ratios[] = {0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.0};
  for (std::uint64_t scene_seed = 200; scene_seed < 220; ++scene_seed) {
    bool succeeded_at_higher_ratio = false;
    for (const double ratio : ratios) {
      const auto instance =
          test::make_pnp_instance(scene_seed, 50, 0.5, ratio);
      RansacConfig cfg = test_ransac(scene_seed);
      cfg.max_iterations = 1000;
      const bool ok = ransac_pnp(instance.corr, intr, cfg).has_value();
      if (succeeded_at_higher_ratio) {
        CHECK(ok);  // lowering the ratio must never break a success
      }
      succeeded_at_higher_ratio = succeeded_at_higher_ratio || ok;
    }
  }
}

TEST_CASE("translation error grows at most linearly with pixel noise") {
  const CameraIntrinsics intr = test::test_intrinsics();
  const double sigmas[] = {0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<double> mean_errors;
  for (const double sigma : sigmas) {
    double total = 0.0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
      const auto instance =
          test::make_pnp_instance(300 + t, 40, sigma, 0.0);
      const auto result =
          ransac_pnp(instance.corr, intr, test_ransac(300 + t));
      REQUIRE(result.has_value());
      total +=
          (result->pose.translation - instance.gt_pose.translation).norm();
    }
    mean_errors.push_back(total / trials);
  }
  // Least-squares slope against sigma, with a pinned bound.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = 5;
  for (int i = 0; i < n; ++i) {
    sx += sigmas[i];
    sy += mean_errors[i];
    sxx += sigmas[i] * sigmas[i];
    sxy += sigmas[i] * mean_errors[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope < 0.05);  // meters of error per pixel of noise
  for (int i = 0; i < n; ++i) {
    CHECK(mean_errors[i] < 0.03 + 0.05 * sigmas[i]);
  }
}

TEST_CASE("ransac_pnp handles tiny inputs via failure values") {
  const CameraIntrinsics intr = test::test_intrinsics();
  CorrespondenceSet corr;
  CHECK(!ransac_pnp(corr, intr, test_ransac(1)).has_value());
  corr.push_back({10, 10}, {12, 10}, 1.0);
  CHECK(!ransac_pnp(corr, intr, test_ransac(1)).has_value());
}

TEST_CASE("ransac config invariants are enforced") {
  RansacConfig cfg = test_ransac(0);
  cfg.min_inliers = 3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = test_ransac(0);
  cfg.confidence = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = test_ransac(0);
  cfg.inlier_threshold = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = test_ransac(0);
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
