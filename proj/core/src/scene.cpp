#include "lmnav/scene.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "lmnav/goal_estimate.hpp"

namespace lmnav {

namespace {

double point_segment_distance(const Eigen::Vector2d& p,
                              const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len_sq = ab.squaredNorm();
  if (len_sq <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len_sq, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

// Intersection parameter of p + t*r with segment [a, b], if any.
std::optional<double> ray_segment_intersection(const Eigen::Vector2d& p,
                                               const Eigen::Vector2d& r,
                                               const Eigen::Vector2d& a,
                                               const Eigen::Vector2d& b) {
  const Eigen::Vector2d s = b - a;
  const double denom = r.x() * s.y() - r.y() * s.x();
  if (std::abs(denom) < 1e-14) return std::nullopt;  // parallel
  const Eigen::Vector2d ap = a - p;
  const double t = (ap.x() * s.y() - ap.y() * s.x()) / denom;
  const double u = (ap.x() * r.y() - ap.y() * r.x()) / denom;
  if (u < 0.0 || u > 1.0 || t < 0.0) return std::nullopt;
  return t;
}

}  // namespace

std::pair<int, int> NavGrid::cell_of(const Eigen::Vector2d& p) const {
  const int ix = static_cast<int>(std::floor((p.x() - origin.x()) / resolution));
  const int iy = static_cast<int>(std::floor((p.y() - origin.y()) / resolution));
  return {ix, iy};
}

Eigen::Vector2d NavGrid::center_of(int ix, int iy) const {
  return origin + Eigen::Vector2d((ix + 0.5) * resolution, (iy + 0.5) * resolution);
}

void Scene::finalize() {
  if (walls.empty()) {
    throw std::invalid_argument("Scene: no walls");
  }
  bounds_min = walls.front().a;
  bounds_max = walls.front().a;
  for (const auto& w : walls) {
    bounds_min = bounds_min.cwiseMin(w.a).cwiseMin(w.b);
    bounds_max = bounds_max.cwiseMax(w.a).cwiseMax(w.b);
  }

  navmesh.origin = bounds_min;
  navmesh.resolution = navmesh_resolution;
  navmesh.nx = std::max(
      1, static_cast<int>(std::ceil((bounds_max.x() - bounds_min.x()) /
                                    navmesh_resolution)));
  navmesh.ny = std::max(
      1, static_cast<int>(std::ceil((bounds_max.y() - bounds_min.y()) /
                                    navmesh_resolution)));
  navmesh.free.assign(static_cast<std::size_t>(navmesh.nx) * navmesh.ny, 0);
  for (int iy = 0; iy < navmesh.ny; ++iy) {
    for (int ix = 0; ix < navmesh.nx; ++ix) {
      const Eigen::Vector2d c = navmesh.center_of(ix, iy);
      navmesh.free[navmesh.index(ix, iy)] =
          clearance(c) >= agent_radius ? 1 : 0;
    }
  }
}

double Scene::clearance(const Eigen::Vector2d& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : walls) {
    best = std::min(best, point_segment_distance(p, w.a, w.b));
  }
  return best;
}

bool Scene::segment_blocked(const Eigen::Vector2d& from,
                            const Eigen::Vector2d& to, double eps) const {
  const Eigen::Vector2d r = to - from;
  const double len = r.norm();
  if (len < eps) return false;
  for (const auto& w : walls) {
    const auto t = ray_segment_intersection(from, r, w.a, w.b);
    if (t && *t > eps && *t < 1.0 - eps) return true;
  }
  return false;
}

std::optional<double> Scene::raycast(const Eigen::Vector2d& origin,
                                     const Eigen::Vector2d& dir,
                                     double max_range) const {
  double best = max_range;
  bool hit = false;
  for (const auto& w : walls) {
    const auto t = ray_segment_intersection(origin, dir, w.a, w.b);
    if (t && *t <= best) {
      best = *t;
      hit = true;
    }
  }
  if (!hit) return std::nullopt;
  return best;
}

namespace {

struct QueueEntry {
  double dist;
  int cell;
  bool operator>(const QueueEntry& o) const {
    if (dist != o.dist) return dist > o.dist;
    return cell > o.cell;
  }
};

// 8-connected Dijkstra; diagonal moves require both orthogonal neighbors
// free (no corner cutting). Optionally records parents for path recovery.
std::vector<double> dijkstra_field(const NavGrid& grid, int start_cell,
                                   std::vector<int>* parents) {
  std::vector<double> dist(grid.free.size(), kUnreachable);
  if (parents) parents->assign(grid.free.size(), -1);
  if (start_cell < 0 || grid.free[start_cell] == 0) return dist;

  const double res = grid.resolution;
  const double diag = res * std::sqrt(2.0);
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> pq;
  dist[start_cell] = 0.0;
  pq.push({0.0, start_cell});
  while (!pq.empty()) {
    const auto [d, cell] = pq.top();
    pq.pop();
    if (d > dist[cell]) continue;
    const int cx = cell % grid.nx;
    const int cy = cell / grid.nx;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int nx = cx + dx;
        const int ny = cy + dy;
        if (!grid.is_free(nx, ny)) continue;
        if (dx != 0 && dy != 0 &&
            (!grid.is_free(cx + dx, cy) || !grid.is_free(cx, cy + dy))) {
          continue;
        }
        const double step = (dx != 0 && dy != 0) ? diag : res;
        const double nd = d + step;
        const int ni = grid.index(nx, ny);
        if (nd < dist[ni]) {
          dist[ni] = nd;
          if (parents) (*parents)[ni] = cell;
          pq.push({nd, ni});
        }
      }
    }
  }
  return dist;
}

int snap_cell(const NavGrid& grid, const Eigen::Vector2d& p) {
  auto [ix, iy] = grid.cell_of(p);
  ix = std::clamp(ix, 0, grid.nx - 1);
  iy = std::clamp(iy, 0, grid.ny - 1);
  if (grid.is_free(ix, iy)) return grid.index(ix, iy);
  // The pose is in free space but its cell center may not be; take the
  // nearest free cell within a small ring.
  for (int ring = 1; ring <= 3; ++ring) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int dy = -ring; dy <= ring; ++dy) {
      for (int dx = -ring; dx <= ring; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
        if (!grid.is_free(ix + dx, iy + dy)) continue;
        const double d =
            (grid.center_of(ix + dx, iy + dy) - p).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = grid.index(ix + dx, iy + dy);
        }
      }
    }
    if (best >= 0) return best;
  }
  return -1;
}

// Clearance sampled along the segment every 5 cm.
bool line_of_sight(const Scene& scene, const Eigen::Vector2d& from,
                   const Eigen::Vector2d& to) {
  const double len = (to - from).norm();
  const int steps = std::max(1, static_cast<int>(std::ceil(len / 0.05)));
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    if (scene.clearance(from + t * (to - from)) < scene.agent_radius) {
      return false;
    }
  }
  return true;
}

double smoothed_path_length(const Scene& scene, const Eigen::Vector2d& from,
                            const Eigen::Vector2d& to) {
  if (line_of_sight(scene, from, to)) return (to - from).norm();

  const NavGrid& grid = scene.navmesh;
  const int start = snap_cell(grid, from);
  const int target = snap_cell(grid, to);
  if (start < 0 || target < 0) return kUnreachable;

  std::vector<int> parents;
  const std::vector<double> dist = dijkstra_field(grid, start, &parents);
  if (dist[target] == kUnreachable) return kUnreachable;

  std::vector<Eigen::Vector2d> poly;
  poly.push_back(to);
  for (int cell = target; cell >= 0; cell = parents[cell]) {
    poly.push_back(grid.center_of(cell % grid.nx, cell / grid.nx));
    if (cell == start) break;
  }
  poly.push_back(from);
  std::reverse(poly.begin(), poly.end());

  // Subdivide, then greedily shortcut; a second pass tightens corners the
  // first anchor placement left behind.
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<Eigen::Vector2d> dense;
    dense.push_back(poly.front());
    for (std::size_t i = 1; i < poly.size(); ++i) {
      const Eigen::Vector2d step = poly[i] - poly[i - 1];
      const int pieces =
          std::max(1, static_cast<int>(std::ceil(step.norm() / 0.2)));
      for (int k = 1; k <= pieces; ++k) {
        dense.push_back(poly[i - 1] + (static_cast<double>(k) / pieces) * step);
      }
    }
    std::vector<Eigen::Vector2d> shortcut;
    shortcut.push_back(dense.front());
    std::size_t anchor = 0;
    while (anchor + 1 < dense.size()) {
      std::size_t next = anchor + 1;
      while (next + 1 < dense.size() &&
             line_of_sight(scene, dense[anchor], dense[next + 1])) {
        ++next;
      }
      shortcut.push_back(dense[next]);
      anchor = next;
    }
    poly = std::move(shortcut);
  }
  double total = 0.0;
  for (std::size_t i = 1; i < poly.size(); ++i) {
    total += (poly[i] - poly[i - 1]).norm();
  }
  return total;
}

}  // namespace

std::vector<double> geodesic_field(const Scene& scene, const AgentPose& from) {
  return dijkstra_field(scene.navmesh, snap_cell(scene.navmesh, from.position()),
                        nullptr);
}

double geodesic_field_at(const Scene& scene, const std::vector<double>& field,
                         const Eigen::Vector2d& p) {
  const int cell = snap_cell(scene.navmesh, p);
  if (cell < 0) return kUnreachable;
  return field[cell];
}

double geodesic_distance(const AgentPose& a, const AgentPose& b,
                         const Scene& scene) {
  const Eigen::Vector2d pa = a.position();
  const Eigen::Vector2d pb = b.position();
  if ((pa - pb).norm() < 1e-12) return 0.0;
  // Canonical endpoint order makes the result exactly symmetric.
  const bool swap = (pa.x() > pb.x()) || (pa.x() == pb.x() && pa.y() > pb.y());
  const Eigen::Vector2d& from = swap ? pb : pa;
  const Eigen::Vector2d& to = swap ? pa : pb;
  return smoothed_path_length(scene, from, to);
}

RigidPose world_to_camera(const AgentPose& pose, double camera_height) {
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  RigidPose out;
  // Rows: camera x (agent's right), camera y (down), camera z (forward).
  out.rotation << s, -c, 0.0, 0.0, 0.0, -1.0, c, s, 0.0;
  const Eigen::Vector3d center(pose.x, pose.y, camera_height);
  out.translation = -(out.rotation * center);
  return out;
}

RigidPose relative_camera_pose(const AgentPose& agent, const AgentPose& goal,
                               double camera_height) {
  return world_to_camera(goal, camera_height)
      .compose(world_to_camera(agent, camera_height).inverse());
}

double true_goal_heading(const AgentPose& agent, const AgentPose& goal) {
  const double to_goal = std::atan2(goal.y - agent.y, goal.x - agent.x);
  return wrap_angle(agent.heading - to_goal);
}

const char* to_string(Difficulty d) {
  switch (d) {
    case Difficulty::Easy: return "easy";
    case Difficulty::Medium: return "medium";
    case Difficulty::Hard: return "hard";
  }
  return "easy";
}

std::optional<Difficulty> difficulty_from_string(const std::string& s) {
  if (s == "easy") return Difficulty::Easy;
  if (s == "medium") return Difficulty::Medium;
  if (s == "hard") return Difficulty::Hard;
  return std::nullopt;
}

std::optional<Difficulty> difficulty_of_geodesic(double geodesic) {
  if (geodesic >= 1.5 && geodesic < 3.0) return Difficulty::Easy;
  if (geodesic >= 3.0 && geodesic < 5.0) return Difficulty::Medium;
  if (geodesic >= 5.0 && geodesic <= 10.0) return Difficulty::Hard;
  return std::nullopt;
}

}  // namespace lmnav
