#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lmnav/geometry.hpp"

namespace lmnav {

struct InsufficientPointsError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Rank-deficient control points (collinear lifted points and similar).
struct DegenerateConfigurationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RansacConfig {
  int max_iterations = 1000;
  double inlier_threshold = 2.0;  // pixels
  int min_inliers = 10;
  double confidence = 0.999;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct PnPResult {
  RigidPose pose;
  std::vector<bool> inlier_mask;
  double mean_inlier_error = 0.0;  // squared pixels, inliers only
  int iterations_used = 0;

  int inlier_count() const;
};

// Closed-form ePnP: barycentric coordinates of four control points (three
// when the lifted points are coplanar), null-space of the 2n x 12 system,
// beta cases refined by Gauss-Newton on the control-point distances, and
// Procrustes alignment. The beta case with the lowest reprojection error
// wins. Throws InsufficientPointsError (n < 4) or
// DegenerateConfigurationError (collinear points).
RigidPose epnp_solve(const CorrespondenceSet& corr,
                     const CameraIntrinsics& intr);

struct RefineResult {
  RigidPose pose;
  bool degraded = false;  // normal equations were singular; pose unchanged
  double mean_error = 0.0;
};

// Gauss-Newton on the reprojection objective over the masked inliers,
// rotation updated by a left axis-angle increment. The returned pose never
// has a higher mean inlier error than the initial one.
RefineResult refine_pose(const CorrespondenceSet& corr,
                         const CameraIntrinsics& intr, const RigidPose& initial,
                         const std::vector<bool>& inlier_mask,
                         int max_iterations = 20);

// ePnP inside RANSAC with adaptive iteration count, followed by a refit on
// the best inlier set and Gauss-Newton refinement. Returns std::nullopt when
// fewer than cfg.min_inliers support the best hypothesis or every hypothesis
// was degenerate; the phase switch treats that as a pose-recovery failure.
std::optional<PnPResult> ransac_pnp(const CorrespondenceSet& corr,
                                    const CameraIntrinsics& intr,
                                    const RansacConfig& cfg);

}  // namespace lmnav
