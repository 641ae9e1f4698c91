#include "lmnav/scene_gen.hpp"

#include <algorithm>
#include <cmath>

#include "lmnav/matcher.hpp"
#include "lmnav/rng.hpp"

namespace lmnav {

void GenConfig::validate() const {
  if (n_scenes < 1) throw GenerationError("GenConfig: n_scenes must be >= 1");
  if (rooms_x_min < 1 || rooms_y_min < 1 || rooms_x_max < rooms_x_min ||
      rooms_y_max < rooms_y_min) {
    throw GenerationError("GenConfig: invalid room-count range");
  }
  if (!(room_size_min > 2.0 * (door_margin + door_width * 0.5)) ||
      room_size_max < room_size_min) {
    throw GenerationError("GenConfig: room size range too small for doorways");
  }
  if (!(landmark_density >= 0.0)) {
    throw GenerationError("GenConfig: landmark_density must be >= 0");
  }
  if (episodes_per_difficulty < 0) {
    throw GenerationError("GenConfig: episodes_per_difficulty must be >= 0");
  }
}

namespace {

std::vector<double> cumulative_sizes(Rng& rng, int count, double lo,
                                     double hi) {
  std::uniform_real_distribution<double> size(lo, hi);
  std::vector<double> xs{0.0};
  for (int i = 0; i < count; ++i) xs.push_back(xs.back() + size(rng));
  return xs;
}

// Interior wall with a doorway: two collinear segments leaving a gap.
void add_wall_with_door(std::vector<WallSegment>& walls, Rng& rng,
                        const Eigen::Vector2d& from, const Eigen::Vector2d& to,
                        double door_width, double door_margin) {
  const double len = (to - from).norm();
  const Eigen::Vector2d dir = (to - from) / len;
  const double lo = door_margin + 0.5 * door_width;
  const double hi = len - door_margin - 0.5 * door_width;
  std::uniform_real_distribution<double> at(lo, std::max(lo, hi));
  const double center = at(rng);
  walls.push_back({from, from + (center - 0.5 * door_width) * dir});
  walls.push_back({from + (center + 0.5 * door_width) * dir, to});
}

void scatter_landmarks(Scene& scene, Rng& rng, const GenConfig& cfg) {
  std::int32_t next_id = 0;
  for (const auto& wall : scene.walls) {
    const double len = (wall.b - wall.a).norm();
    std::poisson_distribution<int> count(cfg.landmark_density * len);
    const int k = count(rng);
    std::uniform_real_distribution<double> along(0.0, 1.0);
    std::uniform_real_distribution<double> height(cfg.landmark_height_min,
                                                  cfg.landmark_height_max);
    for (int i = 0; i < k; ++i) {
      const Eigen::Vector2d p = wall.a + along(rng) * (wall.b - wall.a);
      scene.landmarks.push_back(
          {next_id++, Eigen::Vector3d(p.x(), p.y(), height(rng))});
    }
  }
}

Scene generate_scene(const GenConfig& cfg, int scene_index) {
  Rng rng(derive_seed(cfg.seed, scene_index, 0x7363));
  Scene scene;
  scene.id = cfg.scene_prefix + "_" + std::to_string(scene_index);
  scene.camera_height = cfg.camera_height;

  std::uniform_int_distribution<int> nx_dist(cfg.rooms_x_min, cfg.rooms_x_max);
  std::uniform_int_distribution<int> ny_dist(cfg.rooms_y_min, cfg.rooms_y_max);
  const int nx = nx_dist(rng);
  const int ny = ny_dist(rng);
  const std::vector<double> xs =
      cumulative_sizes(rng, nx, cfg.room_size_min, cfg.room_size_max);
  const std::vector<double> ys =
      cumulative_sizes(rng, ny, cfg.room_size_min, cfg.room_size_max);
  const double w = xs.back();
  const double h = ys.back();

  scene.walls.push_back({{0, 0}, {w, 0}});
  scene.walls.push_back({{w, 0}, {w, h}});
  scene.walls.push_back({{w, h}, {0, h}});
  scene.walls.push_back({{0, h}, {0, 0}});

  // Interior separators, one doorway per shared room edge.
  for (int j = 1; j < nx; ++j) {
    for (int i = 0; i < ny; ++i) {
      add_wall_with_door(scene.walls, rng, {xs[j], ys[i]}, {xs[j], ys[i + 1]},
                         cfg.door_width, cfg.door_margin);
    }
  }
  for (int i = 1; i < ny; ++i) {
    for (int j = 0; j < nx; ++j) {
      add_wall_with_door(scene.walls, rng, {xs[j], ys[i]}, {xs[j + 1], ys[i]},
                         cfg.door_width, cfg.door_margin);
    }
  }

  scatter_landmarks(scene, rng, cfg);
  scene.finalize();
  return scene;
}

AgentPose sample_pose(Rng& rng, const Scene& scene, double clearance) {
  std::uniform_real_distribution<double> ux(scene.bounds_min.x(),
                                            scene.bounds_max.x());
  std::uniform_real_distribution<double> uy(scene.bounds_min.y(),
                                            scene.bounds_max.y());
  std::uniform_real_distribution<double> uh(-M_PI, M_PI);
  for (int attempt = 0; attempt < 256; ++attempt) {
    AgentPose pose{ux(rng), uy(rng), uh(rng)};
    if (scene.clearance(pose.position()) >= clearance) return pose;
  }
  throw GenerationError("sample_pose: no free pose found");
}

}  // namespace

std::vector<Scene> generate_scenes(const GenConfig& cfg) {
  cfg.validate();
  std::vector<Scene> scenes;
  scenes.reserve(cfg.n_scenes);
  for (int i = 0; i < cfg.n_scenes; ++i) {
    scenes.push_back(generate_scene(cfg, i));
  }
  return scenes;
}

GeneratedWorld generate_scenes_and_episodes(const GenConfig& cfg,
                                            const CameraIntrinsics& intr,
                                            double matcher_max_range) {
  GeneratedWorld world;
  world.scenes = generate_scenes(cfg);

  const double clearance = cfg.pose_clearance;
  for (std::size_t s = 0; s < world.scenes.size(); ++s) {
    const Scene& scene = world.scenes[s];
    Rng rng(derive_seed(cfg.seed, s, 0x6570));
    for (const Difficulty difficulty :
         {Difficulty::Easy, Difficulty::Medium, Difficulty::Hard}) {
      int made = 0;
      int attempts = 0;
      while (made < cfg.episodes_per_difficulty) {
        if (++attempts > cfg.max_attempts) {
          throw GenerationError(std::string("episode generation failed: ") +
                                to_string(difficulty) + " bucket in scene " +
                                scene.id);
        }
        const AgentPose goal = sample_pose(rng, scene, clearance);
        if (static_cast<int>(
                visible_landmarks(scene, goal, intr, matcher_max_range)
                    .size()) < cfg.min_goal_visible) {
          continue;
        }
        const std::vector<double> field = geodesic_field(scene, goal);
        // Several start draws per goal keeps generation cheap.
        for (int tries = 0; tries < 24 && made < cfg.episodes_per_difficulty;
             ++tries) {
          const AgentPose start = sample_pose(rng, scene, clearance);
          const double rough =
              geodesic_field_at(scene, field, start.position());
          if (rough == kUnreachable) continue;
          if (difficulty_of_geodesic(rough) != difficulty) continue;
          const double exact = geodesic_distance(start, goal, scene);
          if (difficulty_of_geodesic(exact) != difficulty) continue;
          Episode ep;
          ep.scene_id = scene.id;
          ep.start = start;
          ep.goal = goal;
          ep.difficulty = difficulty;
          ep.geodesic_length = exact;
          world.episodes.push_back(ep);
          ++made;
        }
      }
    }
  }
  return world;
}

}  // namespace lmnav
