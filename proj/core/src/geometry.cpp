#include "lmnav/geometry.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lmnav {

CameraIntrinsics::CameraIntrinsics(double fx_, double fy_, double px_,
                                   double py_, double width_, double height_)
    : fx(fx_), fy(fy_), px(px_), py(py_), width(width_), height(height_) {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw std::invalid_argument("CameraIntrinsics: focal lengths must be > 0");
  }
  if (px < 0.0 || px > width || py < 0.0 || py > height) {
    throw std::invalid_argument(
        "CameraIntrinsics: principal point outside image bounds");
  }
}

CameraIntrinsics CameraIntrinsics::from_fov(double width, double height,
                                            double hfov_rad) {
  if (!(hfov_rad > 0.0) || hfov_rad >= M_PI) {
    throw std::invalid_argument("CameraIntrinsics: hfov must be in (0, pi)");
  }
  const double f = 0.5 * width / std::tan(0.5 * hfov_rad);
  return CameraIntrinsics(f, f, 0.5 * width, 0.5 * height, width, height);
}

double CameraIntrinsics::hfov() const { return 2.0 * std::atan2(0.5 * width, fx); }

bool RigidPose::is_valid(double tol) const {
  const Eigen::Matrix3d should_be_identity =
      rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  if (should_be_identity.cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(rotation.determinant() - 1.0) <= tol;
}

void CorrespondenceSet::push_back(const Pixel2D& agent, const Pixel2D& goal,
                                  double depth, std::int32_t id) {
  agent_points.push_back(agent);
  goal_points.push_back(goal);
  agent_depths.push_back(depth);
  landmark_ids.push_back(id);
}

std::size_t count_matches(const CorrespondenceSet& corr) { return corr.size(); }

Point3 lift_to_3d(const Pixel2D& pix, double depth,
                  const CameraIntrinsics& intr) {
  if (!(depth > 0.0)) {
    throw std::domain_error("lift_to_3d: depth must be > 0");
  }
  return {(pix.u - intr.px) / intr.fx * depth,
          (pix.v - intr.py) / intr.fy * depth, depth};
}

Pixel2D project(const Point3& pt, const CameraIntrinsics& intr) {
  if (!(pt.z() > 0.0)) {
    throw std::domain_error("project: point behind camera");
  }
  return {intr.fx * pt.x() / pt.z() + intr.px,
          intr.fy * pt.y() / pt.z() + intr.py};
}

Point3 transform_point(const RigidPose& pose, const Point3& pt) {
  return pose.apply(pt);
}

ReprojectionErrors reprojection_error(const CorrespondenceSet& corr,
                                      const RigidPose& pose,
                                      const CameraIntrinsics& intr) {
  if (corr.empty()) {
    throw std::domain_error("reprojection_error: empty correspondence set");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  ReprojectionErrors out;
  out.per_point.reserve(corr.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < corr.size(); ++i) {
    const Point3 in_goal =
        pose.apply(lift_to_3d(corr.agent_points[i], corr.agent_depths[i], intr));
    if (!(in_goal.z() > 0.0)) {
      out.per_point.push_back(kInf);
      sum = kInf;
      continue;
    }
    const Pixel2D reproj = project(in_goal, intr);
    const double du = reproj.u - corr.goal_points[i].u;
    const double dv = reproj.v - corr.goal_points[i].v;
    const double err = du * du + dv * dv;
    out.per_point.push_back(err);
    sum += err;
  }
  out.mean = sum / static_cast<double>(corr.size());
  return out;
}

}  // namespace lmnav
