#include "lmnav/pnp.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lmnav/rng.hpp"

namespace lmnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

Eigen::Matrix3d axis_angle_to_rotation(const Eigen::Vector3d& w) {
  const double theta = w.norm();
  if (theta < 1e-12) {
    return Eigen::Matrix3d::Identity() + skew(w);
  }
  const Eigen::Vector3d axis = w / theta;
  const Eigen::Matrix3d k = skew(axis);
  return Eigen::Matrix3d::Identity() + std::sin(theta) * k +
         (1.0 - std::cos(theta)) * k * k;
}

// Horn alignment: rotation/translation mapping reference points onto
// camera-frame points, reflection-corrected.
RigidPose solve_procrustes(const std::vector<Point3>& ref,
                           const std::vector<Point3>& cam) {
  Point3 ref_mean = Point3::Zero();
  Point3 cam_mean = Point3::Zero();
  for (std::size_t i = 0; i < ref.size(); ++i) {
    ref_mean += ref[i];
    cam_mean += cam[i];
  }
  ref_mean /= static_cast<double>(ref.size());
  cam_mean /= static_cast<double>(ref.size());

  Eigen::Matrix3d cross = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < ref.size(); ++i) {
    cross += (cam[i] - cam_mean) * (ref[i] - ref_mean).transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  RigidPose pose;
  pose.rotation = r;
  pose.translation = cam_mean - r * ref_mean;
  return pose;
}

double mean_squared_reprojection(const std::vector<Point3>& pts,
                                 const std::vector<Pixel2D>& obs,
                                 const CameraIntrinsics& intr,
                                 const RigidPose& pose) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point3 p = pose.apply(pts[i]);
    if (!(p.z() > 0.0)) return kInf;
    const double du = intr.fx * p.x() / p.z() + intr.px - obs[i].u;
    const double dv = intr.fy * p.y() / p.z() + intr.py - obs[i].v;
    sum += du * du + dv * dv;
  }
  return sum / static_cast<double>(pts.size());
}

// ---------------------------------------------------------------------------
// ePnP internals. `dim` is the number of control points: 4 in the general
// case, 3 when the lifted points are coplanar.

struct EpnpProblem {
  int dim = 4;
  std::vector<Point3> control_ref;             // control points, agent frame
  Eigen::MatrixXd alphas;                      // n x dim barycentric coords
  Eigen::MatrixXd kernel;                      // 3*dim x 4 null-space vectors
  std::vector<std::pair<int, int>> cp_pairs;   // control-point index pairs
  Eigen::VectorXd rho;                         // squared reference distances
};

std::vector<Point3> choose_control_points(const std::vector<Point3>& pts,
                                          int* dim_out) {
  const auto n = static_cast<double>(pts.size());
  Point3 centroid = Point3::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= n;

  Eigen::MatrixXd centered(pts.size(), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    centered.row(i) = (pts[i] - centroid).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered.transpose() * centered,
                                        Eigen::ComputeFullU);
  const Eigen::Vector3d sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(1) / sv(0) < 1e-12) {
    throw DegenerateConfigurationError("epnp_solve: collinear lifted points");
  }
  const bool planar = sv(2) / sv(0) < 1e-10;
  *dim_out = planar ? 3 : 4;

  std::vector<Point3> control;
  control.push_back(centroid);
  for (int k = 0; k < *dim_out - 1; ++k) {
    control.push_back(centroid +
                      std::sqrt(sv(k) / n) * svd.matrixU().col(k));
  }
  return control;
}

Eigen::MatrixXd compute_barycentric(const std::vector<Point3>& pts,
                                    const std::vector<Point3>& control) {
  const int dim = static_cast<int>(control.size());
  Eigen::MatrixXd basis(3, dim - 1);
  for (int k = 1; k < dim; ++k) {
    basis.col(k - 1) = control[k] - control[0];
  }
  // Basis columns are orthogonal PCA directions, so the least-squares
  // solve is exact for in-span points.
  const Eigen::MatrixXd pinv =
      (basis.transpose() * basis).ldlt().solve(basis.transpose()).eval();

  Eigen::MatrixXd alphas(pts.size(), dim);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Eigen::VectorXd tail = pinv * (pts[i] - control[0]);
    alphas(i, 0) = 1.0 - tail.sum();
    alphas.row(i).tail(dim - 1) = tail.transpose();
  }
  return alphas;
}

EpnpProblem build_epnp_problem(const std::vector<Point3>& pts,
                               const std::vector<Pixel2D>& obs,
                               const CameraIntrinsics& intr) {
  EpnpProblem prob;
  prob.control_ref = choose_control_points(pts, &prob.dim);
  prob.alphas = compute_barycentric(pts, prob.control_ref);

  const int cols = 3 * prob.dim;
  Eigen::MatrixXd m(2 * pts.size(), cols);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int j = 0; j < prob.dim; ++j) {
      const double a = prob.alphas(i, j);
      m(2 * i, 3 * j) = a * intr.fx;
      m(2 * i, 3 * j + 1) = 0.0;
      m(2 * i, 3 * j + 2) = a * (intr.px - obs[i].u);
      m(2 * i + 1, 3 * j) = 0.0;
      m(2 * i + 1, 3 * j + 1) = a * intr.fy;
      m(2 * i + 1, 3 * j + 2) = a * (intr.py - obs[i].v);
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.transpose() * m,
                                        Eigen::ComputeFullU);
  prob.kernel.resize(cols, 4);
  for (int k = 0; k < 4; ++k) {
    prob.kernel.col(k) = svd.matrixU().col(cols - 1 - k);
  }

  for (int a = 0; a < prob.dim; ++a) {
    for (int b = a + 1; b < prob.dim; ++b) {
      prob.cp_pairs.emplace_back(a, b);
    }
  }
  prob.rho.resize(prob.cp_pairs.size());
  for (std::size_t p = 0; p < prob.cp_pairs.size(); ++p) {
    prob.rho(p) = (prob.control_ref[prob.cp_pairs[p].first] -
                   prob.control_ref[prob.cp_pairs[p].second])
                      .squaredNorm();
  }
  return prob;
}

Eigen::Vector3d kernel_diff(const EpnpProblem& prob, int vec, int a, int b) {
  return prob.kernel.col(vec).segment<3>(3 * a) -
         prob.kernel.col(vec).segment<3>(3 * b);
}

// L(i, col(j,k)) terms for the quadratic system L * betas2 = rho, where
// betas2 holds the upper-triangular products B_jk.
Eigen::MatrixXd compute_l_full(const EpnpProblem& prob, int nvec) {
  const int ncols = nvec * (nvec + 1) / 2;
  Eigen::MatrixXd l(prob.cp_pairs.size(), ncols);
  for (std::size_t row = 0; row < prob.cp_pairs.size(); ++row) {
    const auto [a, b] = prob.cp_pairs[row];
    int col = 0;
    for (int j = 0; j < nvec; ++j) {
      const Eigen::Vector3d dj = kernel_diff(prob, j, a, b);
      for (int k = j; k < nvec; ++k) {
        const Eigen::Vector3d dk = kernel_diff(prob, k, a, b);
        l(row, col++) = (j == k ? 1.0 : 2.0) * dj.dot(dk);
      }
    }
  }
  return l;
}

// Index of B_jk in the packed upper-triangular layout for `nvec` vectors.
int packed_index(int nvec, int j, int k) {
  int idx = 0;
  for (int a = 0; a < j; ++a) idx += nvec - a;
  return idx + (k - j);
}

Eigen::Vector4d betas_case_1(const EpnpProblem& prob) {
  // Single kernel vector: fit beta^2 by least squares on the distances.
  double num = 0.0, den = 0.0;
  for (std::size_t row = 0; row < prob.cp_pairs.size(); ++row) {
    const auto [a, b] = prob.cp_pairs[row];
    const double l = kernel_diff(prob, 0, a, b).squaredNorm();
    num += l * prob.rho(row);
    den += l * l;
  }
  Eigen::Vector4d betas = Eigen::Vector4d::Zero();
  betas(0) = den > 0.0 ? std::sqrt(std::max(0.0, num / den)) : 0.0;
  return betas;
}

Eigen::Vector4d betas_case_2(const EpnpProblem& prob,
                             const Eigen::MatrixXd& l_full) {
  // Unknowns [B11 B12 B22].
  Eigen::MatrixXd l(prob.cp_pairs.size(), 3);
  l.col(0) = l_full.col(packed_index(4, 0, 0));
  l.col(1) = l_full.col(packed_index(4, 0, 1));
  l.col(2) = l_full.col(packed_index(4, 1, 1));
  const Eigen::VectorXd b =
      l.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(prob.rho);

  Eigen::Vector4d betas = Eigen::Vector4d::Zero();
  if (b(0) < 0) {
    betas(0) = std::sqrt(-b(0));
    betas(1) = b(2) < 0 ? std::sqrt(-b(2)) : 0.0;
  } else {
    betas(0) = std::sqrt(b(0));
    betas(1) = b(2) > 0 ? std::sqrt(b(2)) : 0.0;
  }
  if (b(1) < 0) betas(0) = -betas(0);
  return betas;
}

Eigen::Vector4d betas_case_3(const EpnpProblem& prob,
                             const Eigen::MatrixXd& l_full) {
  // Unknowns [B11 B12 B22 B13 B23].
  Eigen::MatrixXd l(prob.cp_pairs.size(), 5);
  l.col(0) = l_full.col(packed_index(4, 0, 0));
  l.col(1) = l_full.col(packed_index(4, 0, 1));
  l.col(2) = l_full.col(packed_index(4, 1, 1));
  l.col(3) = l_full.col(packed_index(4, 0, 2));
  l.col(4) = l_full.col(packed_index(4, 1, 2));
  const Eigen::VectorXd b =
      l.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(prob.rho);

  Eigen::Vector4d betas = Eigen::Vector4d::Zero();
  if (b(0) < 0) {
    betas(0) = std::sqrt(-b(0));
    betas(1) = b(2) < 0 ? std::sqrt(-b(2)) : 0.0;
  } else {
    betas(0) = std::sqrt(b(0));
    betas(1) = b(2) > 0 ? std::sqrt(b(2)) : 0.0;
  }
  if (b(1) < 0) betas(0) = -betas(0);
  if (betas(0) != 0.0) betas(2) = b(3) / betas(0);
  return betas;
}

Eigen::Vector4d betas_case_4(const EpnpProblem& prob,
                             const Eigen::MatrixXd& l_full) {
  // Relinearization with unknowns [B11 B12 B13 B14].
  Eigen::MatrixXd l(prob.cp_pairs.size(), 4);
  l.col(0) = l_full.col(packed_index(4, 0, 0));
  l.col(1) = l_full.col(packed_index(4, 0, 1));
  l.col(2) = l_full.col(packed_index(4, 0, 2));
  l.col(3) = l_full.col(packed_index(4, 0, 3));
  const Eigen::VectorXd b =
      l.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(prob.rho);

  Eigen::Vector4d betas = Eigen::Vector4d::Zero();
  if (b(0) < 0) {
    betas(0) = std::sqrt(-b(0));
    betas(1) = -b(1) / betas(0);
    betas(2) = -b(2) / betas(0);
    betas(3) = -b(3) / betas(0);
  } else {
    betas(0) = std::sqrt(b(0));
    betas(1) = b(1) / betas(0);
    betas(2) = b(2) / betas(0);
    betas(3) = b(3) / betas(0);
  }
  return betas;
}

// Planar variant of case 2: three control points give three distance
// constraints for unknowns [B11 B12 B22], solved exactly.
Eigen::Vector4d betas_planar_2(const EpnpProblem& prob,
                               const Eigen::MatrixXd& l_full) {
  Eigen::MatrixXd l(prob.cp_pairs.size(), 3);
  l.col(0) = l_full.col(packed_index(4, 0, 0));
  l.col(1) = l_full.col(packed_index(4, 0, 1));
  l.col(2) = l_full.col(packed_index(4, 1, 1));
  const Eigen::VectorXd b =
      l.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(prob.rho);

  Eigen::Vector4d betas = Eigen::Vector4d::Zero();
  if (b(0) < 0) {
    betas(0) = std::sqrt(-b(0));
    betas(1) = b(2) < 0 ? std::sqrt(-b(2)) : 0.0;
  } else {
    betas(0) = std::sqrt(b(0));
    betas(1) = b(2) > 0 ? std::sqrt(b(2)) : 0.0;
  }
  if (b(1) < 0) betas(0) = -betas(0);
  return betas;
}

// Gauss-Newton on the control-point distance residuals over the active
// beta coefficients.
Eigen::Vector4d refine_betas(const EpnpProblem& prob,
                             const Eigen::MatrixXd& l_full,
                             Eigen::Vector4d betas, int nactive) {
  const int rows = static_cast<int>(prob.cp_pairs.size());
  for (int iter = 0; iter < 5; ++iter) {
    Eigen::MatrixXd jac(rows, nactive);
    Eigen::VectorXd residual(rows);
    for (int row = 0; row < rows; ++row) {
      double value = 0.0;
      int col = 0;
      for (int j = 0; j < 4; ++j) {
        for (int k = j; k < 4; ++k) {
          value += l_full(row, col++) * betas(j) * betas(k);
        }
      }
      residual(row) = prob.rho(row) - value;
      // d/dB_a of sum_jk L_jk B_j B_k; off-diagonal L entries already carry
      // the factor 2, the diagonal picks it up from the square.
      for (int a = 0; a < nactive; ++a) {
        double deriv = 0.0;
        for (int j = 0; j < 4; ++j) {
          const int lo = std::min(a, j), hi = std::max(a, j);
          double coef = l_full(row, packed_index(4, lo, hi));
          if (j == a) coef *= 2.0;
          deriv += coef * betas(j);
        }
        jac(row, a) = deriv;
      }
    }
    const Eigen::VectorXd step =
        jac.colPivHouseholderQr().solve(residual).eval();
    if (!step.allFinite()) break;
    betas.head(nactive) += step;
  }
  return betas;
}

RigidPose pose_from_betas(const EpnpProblem& prob,
                          const std::vector<Point3>& pts,
                          const Eigen::Vector4d& betas) {
  std::vector<Point3> control_cam(prob.dim, Point3::Zero());
  for (int j = 0; j < prob.dim; ++j) {
    for (int k = 0; k < 4; ++k) {
      control_cam[j] += betas(k) * prob.kernel.col(k).segment<3>(3 * j);
    }
  }
  std::vector<Point3> cam_pts(pts.size());
  double depth_sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Point3 p = Point3::Zero();
    for (int j = 0; j < prob.dim; ++j) {
      p += prob.alphas(i, j) * control_cam[j];
    }
    cam_pts[i] = p;
    depth_sum += p.z();
  }
  if (depth_sum < 0.0) {
    for (auto& p : cam_pts) p = -p;
  }
  return solve_procrustes(pts, cam_pts);
}

std::vector<Point3> lift_all(const CorrespondenceSet& corr,
                             const CameraIntrinsics& intr) {
  std::vector<Point3> pts;
  pts.reserve(corr.size());
  for (std::size_t i = 0; i < corr.size(); ++i) {
    pts.push_back(lift_to_3d(corr.agent_points[i], corr.agent_depths[i], intr));
  }
  return pts;
}

RigidPose epnp_solve_points(const std::vector<Point3>& pts,
                            const std::vector<Pixel2D>& obs,
                            const CameraIntrinsics& intr) {
  EpnpProblem prob = build_epnp_problem(pts, obs, intr);
  const Eigen::MatrixXd l_full = compute_l_full(prob, 4);

  std::vector<Eigen::Vector4d> candidates;
  candidates.push_back(betas_case_1(prob));
  if (prob.dim == 4) {
    candidates.push_back(betas_case_2(prob, l_full));
    candidates.push_back(betas_case_3(prob, l_full));
    candidates.push_back(betas_case_4(prob, l_full));
  } else {
    candidates.push_back(betas_planar_2(prob, l_full));
  }

  RigidPose best;
  double best_err = kInf;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const int nactive = c == 0 ? 1 : (prob.dim == 4 ? static_cast<int>(c) + 1 : 2);
    const Eigen::Vector4d betas =
        refine_betas(prob, l_full, candidates[c], nactive);
    const RigidPose pose = pose_from_betas(prob, pts, betas);
    const double err = mean_squared_reprojection(pts, obs, intr, pose);
    if (err < best_err) {
      best_err = err;
      best = pose;
    }
  }
  if (!(best_err < kInf)) {
    throw DegenerateConfigurationError(
        "epnp_solve: no beta case produced a pose with points in front of "
        "the camera");
  }
  return best;
}

}  // namespace

void RansacConfig::validate() const {
  if (max_iterations < 1) {
    throw std::invalid_argument("RansacConfig: max_iterations must be >= 1");
  }
  if (!(inlier_threshold > 0.0)) {
    throw std::invalid_argument("RansacConfig: inlier_threshold must be > 0");
  }
  if (min_inliers < 4) {
    throw std::invalid_argument("RansacConfig: min_inliers must be >= 4");
  }
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw std::invalid_argument("RansacConfig: confidence must be in (0,1)");
  }
}

int PnPResult::inlier_count() const {
  return static_cast<int>(
      std::count(inlier_mask.begin(), inlier_mask.end(), true));
}

RigidPose epnp_solve(const CorrespondenceSet& corr,
                     const CameraIntrinsics& intr) {
  if (corr.size() < 4) {
    throw InsufficientPointsError("epnp_solve: need at least 4 correspondences");
  }
  return epnp_solve_points(lift_all(corr, intr), corr.goal_points, intr);
}

RefineResult refine_pose(const CorrespondenceSet& corr,
                         const CameraIntrinsics& intr, const RigidPose& initial,
                         const std::vector<bool>& inlier_mask,
                         int max_iterations) {
  if (inlier_mask.size() != corr.size()) {
    throw std::invalid_argument("refine_pose: mask size mismatch");
  }
  std::vector<Point3> pts;
  std::vector<Pixel2D> obs;
  for (std::size_t i = 0; i < corr.size(); ++i) {
    if (!inlier_mask[i]) continue;
    pts.push_back(lift_to_3d(corr.agent_points[i], corr.agent_depths[i], intr));
    obs.push_back(corr.goal_points[i]);
  }
  if (pts.size() < 4) {
    throw InsufficientPointsError("refine_pose: need at least 4 inliers");
  }

  RefineResult result;
  result.pose = initial;
  result.mean_error = mean_squared_reprojection(pts, obs, intr, initial);

  for (int iter = 0; iter < max_iterations; ++iter) {
    Eigen::Matrix<double, 6, 6> h = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> g = Eigen::Matrix<double, 6, 1>::Zero();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point3 y = result.pose.apply(pts[i]);
      if (!(y.z() > 0.0)) continue;
      const double iz = 1.0 / y.z();
      Eigen::Matrix<double, 2, 3> jproj;
      jproj << intr.fx * iz, 0.0, -intr.fx * y.x() * iz * iz, 0.0,
          intr.fy * iz, -intr.fy * y.y() * iz * iz;
      Eigen::Matrix<double, 3, 6> jpose;
      jpose.leftCols<3>() = -skew(y);
      jpose.rightCols<3>() = Eigen::Matrix3d::Identity();
      const Eigen::Matrix<double, 2, 6> jac = jproj * jpose;
      Eigen::Vector2d residual(intr.fx * y.x() * iz + intr.px - obs[i].u,
                               intr.fy * y.y() * iz + intr.py - obs[i].v);
      h += jac.transpose() * jac;
      g += jac.transpose() * residual;
    }

    const Eigen::LDLT<Eigen::Matrix<double, 6, 6>> ldlt(h);
    Eigen::Matrix<double, 6, 1> delta = ldlt.solve(-g);
    if (ldlt.info() != Eigen::Success || !delta.allFinite()) {
      if (iter == 0) result.degraded = true;
      break;
    }

    // Backtracking keeps the objective non-increasing.
    bool accepted = false;
    for (int halving = 0; halving < 8; ++halving) {
      RigidPose candidate;
      candidate.rotation =
          axis_angle_to_rotation(delta.head<3>()) * result.pose.rotation;
      candidate.translation = result.pose.translation + delta.tail<3>();
      const double err = mean_squared_reprojection(pts, obs, intr, candidate);
      if (err <= result.mean_error) {
        const double improvement = result.mean_error - err;
        result.pose = candidate;
        result.mean_error = err;
        accepted = true;
        if (result.mean_error > 0.0 &&
            improvement < 1e-10 * std::max(result.mean_error, 1.0)) {
          return result;
        }
        break;
      }
      delta *= 0.5;
    }
    if (!accepted) break;
  }
  return result;
}

std::optional<PnPResult> ransac_pnp(const CorrespondenceSet& corr,
                                    const CameraIntrinsics& intr,
                                    const RansacConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(corr.size());
  if (n < 4 || n < cfg.min_inliers) return std::nullopt;

  const std::vector<Point3> pts = lift_all(corr, intr);
  const double thresh_sq = cfg.inlier_threshold * cfg.inlier_threshold;

  auto score = [&](const RigidPose& pose, std::vector<bool>* mask) {
    int count = 0;
    double err_sum = 0.0;
    mask->assign(n, false);
    for (int i = 0; i < n; ++i) {
      const Point3 p = pose.apply(pts[i]);
      if (!(p.z() > 0.0)) continue;
      const double du = intr.fx * p.x() / p.z() + intr.px - corr.goal_points[i].u;
      const double dv = intr.fy * p.y() / p.z() + intr.py - corr.goal_points[i].v;
      const double err = du * du + dv * dv;
      if (err < thresh_sq) {
        (*mask)[i] = true;
        ++count;
        err_sum += err;
      }
    }
    return std::make_pair(count, count > 0 ? err_sum / count : kInf);
  };

  Rng rng(cfg.rng_seed);
  std::vector<int> indices(n);
  std::iota(indices.begin(), indices.end(), 0);

  RigidPose best_pose;
  std::vector<bool> best_mask;
  int best_count = 0;
  double best_err = kInf;
  int iterations = 0;
  int bound = cfg.max_iterations;

  std::vector<bool> mask;
  CorrespondenceSet sample;
  for (int iter = 0; iter < bound; ++iter) {
    ++iterations;
    // Partial Fisher-Yates draw of 4 distinct indices.
    for (int k = 0; k < 4; ++k) {
      std::uniform_int_distribution<int> pick(k, n - 1);
      std::swap(indices[k], indices[pick(rng)]);
    }
    sample.agent_points.clear();
    sample.goal_points.clear();
    sample.agent_depths.clear();
    sample.landmark_ids.clear();
    for (int k = 0; k < 4; ++k) {
      const int i = indices[k];
      sample.push_back(corr.agent_points[i], corr.goal_points[i],
                       corr.agent_depths[i]);
    }

    RigidPose hypothesis;
    try {
      hypothesis = epnp_solve(sample, intr);
    } catch (const DegenerateConfigurationError&) {
      continue;
    }

    const auto [count, mean_err] = score(hypothesis, &mask);
    if (count > best_count ||
        (count == best_count && count > 0 && mean_err < best_err)) {
      best_count = count;
      best_err = mean_err;
      best_pose = hypothesis;
      best_mask = mask;

      const double w = static_cast<double>(count) / n;
      const double p_good = w * w * w * w;
      if (p_good >= 1.0) {
        bound = iterations;
      } else if (p_good > 0.0) {
        const double needed =
            std::log(1.0 - cfg.confidence) / std::log(1.0 - p_good);
        bound = std::min(bound, static_cast<int>(std::ceil(needed)));
      }
    }
  }

  if (best_count < cfg.min_inliers) return std::nullopt;

  // Refit on all supporting inliers, then polish with Gauss-Newton.
  CorrespondenceSet inliers;
  for (int i = 0; i < n; ++i) {
    if (best_mask[i]) {
      inliers.push_back(corr.agent_points[i], corr.goal_points[i],
                        corr.agent_depths[i]);
    }
  }
  RigidPose refit = best_pose;
  try {
    refit = epnp_solve(inliers, intr);
  } catch (const DegenerateConfigurationError&) {
    // Keep the RANSAC hypothesis.
  }
  const RefineResult refined =
      refine_pose(corr, intr, refit, best_mask);

  PnPResult result;
  result.pose = refined.pose;
  result.iterations_used = iterations;
  const auto [final_count, final_err] = score(refined.pose, &result.inlier_mask);
  if (final_count < cfg.min_inliers) return std::nullopt;
  result.mean_inlier_error = final_err;
  return result;
}

}  // namespace lmnav
