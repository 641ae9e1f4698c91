#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace lmnav {

using Point3 = Eigen::Vector3d;

// Continuous pixel position: u along columns, v along rows.
struct Pixel2D {
  double u = 0.0;
  double v = 0.0;
};

// Pinhole camera. Camera frame: x right, y down, z along the optical axis.
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double px = 0.0;
  double py = 0.0;
  double width = 0.0;
  double height = 0.0;

  CameraIntrinsics() = default;
  CameraIntrinsics(double fx_, double fy_, double px_, double py_,
                   double width_, double height_);

  // Square-pixel intrinsics from image size and horizontal field of view.
  static CameraIntrinsics from_fov(double width, double height,
                                   double hfov_rad);

  double hfov() const;
  bool in_bounds(const Pixel2D& p) const {
    return p.u >= 0.0 && p.u <= width && p.v >= 0.0 && p.v <= height;
  }
};

// Rigid transform x -> rotation * x + translation.
struct RigidPose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static RigidPose identity() { return {}; }

  Point3 apply(const Point3& p) const { return rotation * p + translation; }

  RigidPose inverse() const {
    RigidPose inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(rotation.transpose() * translation);
    return inv;
  }

  RigidPose compose(const RigidPose& rhs) const {
    RigidPose out;
    out.rotation = rotation * rhs.rotation;
    out.translation = rotation * rhs.translation + translation;
    return out;
  }

  // Orthonormal within tol and det = +1 within tol.
  bool is_valid(double tol = 1e-9) const;
};

// Matched pixel pairs between the agent view and the goal view, with the
// agent-side depths used for lifting. Columnar; all lists share length n.
struct CorrespondenceSet {
  std::vector<Pixel2D> agent_points;
  std::vector<Pixel2D> goal_points;
  std::vector<double> agent_depths;
  // Provenance tags from the synthetic matcher: landmark id for true
  // matches, kOutlierId for injected outliers, kNoId when unknown.
  std::vector<std::int32_t> landmark_ids;

  static constexpr std::int32_t kNoId = -1;
  static constexpr std::int32_t kOutlierId = -2;

  std::size_t size() const { return agent_points.size(); }
  bool empty() const { return agent_points.empty(); }
  void push_back(const Pixel2D& agent, const Pixel2D& goal, double depth,
                 std::int32_t id = kNoId);
};

std::size_t count_matches(const CorrespondenceSet& corr);

// Pixel + depth -> camera-frame 3D point. Throws std::domain_error on
// non-positive depth.
Point3 lift_to_3d(const Pixel2D& pix, double depth,
                  const CameraIntrinsics& intr);

// Camera-frame 3D point -> pixel. Throws std::domain_error when the point
// is not in front of the camera (z <= 0).
Pixel2D project(const Point3& pt, const CameraIntrinsics& intr);

Point3 transform_point(const RigidPose& pose, const Point3& pt);

struct ReprojectionErrors {
  std::vector<double> per_point;  // squared pixel errors; +inf behind camera
  double mean = 0.0;
};

// Squared pixel error of each lifted-and-transformed agent point against its
// goal-view match. Points landing behind the goal camera get infinite error.
// Throws std::domain_error on an empty set.
ReprojectionErrors reprojection_error(const CorrespondenceSet& corr,
                                      const RigidPose& pose,
                                      const CameraIntrinsics& intr);

}  // namespace lmnav
