#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lmnav/geometry.hpp"
#include "support/synthetic.hpp"

using namespace lmnav;

TEST_CASE("lift_to_3d analytic cases") {
  const CameraIntrinsics intr(100, 100, 50, 50, 100, 100);

  const Point3 axis = lift_to_3d({50, 50}, 2.0, intr);
  CHECK(axis.x() == doctest::Approx(0.0));
  CHECK(axis.y() == doctest::Approx(0.0));
  CHECK(axis.z() == doctest::Approx(2.0));

  const Point3 lateral = lift_to_3d({150, 50}, 1.0, intr);
  CHECK(lateral.x() == doctest::Approx(1.0));
  CHECK(lateral.y() == doctest::Approx(0.0));
  CHECK(lateral.z() == doctest::Approx(1.0));

  CHECK_THROWS_AS(lift_to_3d({10, 10}, 0.0, intr), std::domain_error);
  CHECK_THROWS_AS(lift_to_3d({10, 10}, -1.0, intr), std::domain_error);
}

TEST_CASE("project analytic cases and errors") {
  const CameraIntrinsics intr(100, 100, 50, 50, 100, 100);

  const Pixel2D center = project({0, 0, 5}, intr);
  CHECK(center.u == doctest::Approx(50.0));
  CHECK(center.v == doctest::Approx(50.0));

  const Pixel2D lateral = project({1, 0, 1}, intr);
  CHECK(lateral.u == doctest::Approx(150.0));
  CHECK(lateral.v == doctest::Approx(50.0));

  CHECK_THROWS_AS(project({0, 0, -1}, intr), std::domain_error);
  CHECK_THROWS_AS(project({0, 0, 0}, intr), std::domain_error);
}

TEST_CASE("lift/project round trip over the depth range") {
  const CameraIntrinsics intr = test::test_intrinsics();
  Rng rng(11);
  std::uniform_real_distribution<double> du(0.0, intr.width);
  std::uniform_real_distribution<double> dv(0.0, intr.height);
  std::uniform_real_distribution<double> dd(0.1, 100.0);
  for (int i = 0; i < 5000; ++i) {
    const Pixel2D pix{du(rng), dv(rng)};
    const double depth = dd(rng);
    const Pixel2D back = project(lift_to_3d(pix, depth, intr), intr);
    CHECK(std::abs(back.u - pix.u) < 1e-9);
    CHECK(std::abs(back.v - pix.v) < 1e-9);
  }
}

TEST_CASE("transform_point basics") {
  CHECK((transform_point(RigidPose::identity(), {1, 2, 3}) - Point3(1, 2, 3))
            .norm() == doctest::Approx(0.0));

  RigidPose lift_z;
  lift_z.translation = {0, 0, 1};
  CHECK((transform_point(lift_z, {0, 0, 0}) - Point3(0, 0, 1)).norm() ==
        doctest::Approx(0.0));
}

TEST_CASE("transform inverse composition and rigidity") {
  Rng rng(77);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    RigidPose pose;
    pose.rotation = test::random_rotation(rng, 3.0);
    pose.translation = {u(rng), u(rng), u(rng)};
    REQUIRE(pose.is_valid(1e-9));

    const Point3 a(u(rng), u(rng), u(rng));
    const Point3 b(u(rng), u(rng), u(rng));
    const Point3 restored = pose.inverse().apply(pose.apply(a));
    CHECK((restored - a).norm() < 1e-9);
    CHECK(std::abs((pose.apply(a) - pose.apply(b)).norm() - (a - b).norm()) <
          1e-9);
  }
}

TEST_CASE("reprojection error vanishes only at the generating pose") {
  const CameraIntrinsics intr = test::test_intrinsics();
  const auto instance = test::make_pnp_instance(5, 24);

  const auto at_truth = reprojection_error(instance.corr, instance.gt_pose, intr);
  CHECK(at_truth.mean < 1e-12);
  for (const double e : at_truth.per_point) CHECK(e < 1e-12);

  const auto at_identity =
      reprojection_error(instance.corr, RigidPose::identity(), intr);
  CHECK(at_identity.mean > 0.0);
}

TEST_CASE("reprojection error is infinite behind the goal camera") {
  const CameraIntrinsics intr = test::test_intrinsics();
  CorrespondenceSet corr;
  corr.push_back({320, 240}, {320, 240}, 2.0);
  RigidPose behind;
  behind.translation = {0, 0, -5.0};
  const auto errs = reprojection_error(corr, behind, intr);
  CHECK(std::isinf(errs.per_point[0]));
  CHECK(std::isinf(errs.mean));
}

TEST_CASE("reprojection error rejects an empty set") {
  const CameraIntrinsics intr = test::test_intrinsics();
  CHECK_THROWS_AS(reprojection_error({}, RigidPose::identity(), intr),
                  std::domain_error);
}

TEST_CASE("intrinsics invariants") {
  CHECK_THROWS_AS(CameraIntrinsics(0, 100, 50, 50, 100, 100),
                  std::invalid_argument);
  CHECK_THROWS_AS(CameraIntrinsics(100, 100, 500, 50, 100, 100),
                  std::invalid_argument);
  const CameraIntrinsics intr = CameraIntrinsics::from_fov(640, 480, M_PI / 2);
  CHECK(intr.hfov() == doctest::Approx(M_PI / 2));
}
