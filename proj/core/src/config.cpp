#include "lmnav/config.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "lmnav/io.hpp"

namespace lmnav {

namespace {

using nlohmann::json;

json intrinsics_to_json(const CameraIntrinsics& intr) {
  return json{{"fx", intr.fx},     {"fy", intr.fy},
              {"px", intr.px},     {"py", intr.py},
              {"width", intr.width}, {"height", intr.height}};
}

CameraIntrinsics intrinsics_from_json(const json& j) {
  return CameraIntrinsics(j.at("fx").get<double>(), j.at("fy").get<double>(),
                          j.at("px").get<double>(), j.at("py").get<double>(),
                          j.at("width").get<double>(),
                          j.at("height").get<double>());
}

json runner_to_json(const RunnerConfig& r) {
  return json{
      {"explorer", to_string(r.explorer)},
      {"sling_enabled", r.sling_enabled},
      {"stop_budget", r.stop_budget},
      {"intrinsics", intrinsics_to_json(r.intrinsics)},
      {"switch", {{"n_th", r.switch_cfg.n_th}, {"d_th", r.switch_cfg.d_th}}},
      {"matcher",
       {{"pixel_noise_sigma", r.matcher.pixel_noise_sigma},
        {"detection_rate", r.matcher.detection_rate},
        {"outlier_fraction", r.matcher.outlier_fraction},
        {"max_range", r.matcher.max_range}}},
      {"ransac",
       {{"max_iterations", r.ransac.max_iterations},
        {"inlier_threshold", r.ransac.inlier_threshold},
        {"min_inliers", r.ransac.min_inliers},
        {"confidence", r.ransac.confidence}}},
      {"noise",
       {{"pose_trans_sigma", r.noise.pose_trans_sigma},
        {"pose_rot_sigma", r.noise.pose_rot_sigma},
        {"depth_rel_sigma", r.noise.depth_rel_sigma}}},
      {"grid",
       {{"resolution", r.grid.resolution},
        {"extent", r.grid.extent},
        {"agent_radius", r.grid.agent_radius}}},
      {"policy",
       {{"stop_radius", r.policy.stop_radius},
        {"turn_step", r.policy.turn_step}}},
      {"scan", {{"rays", r.scan.rays}, {"max_range", r.scan.max_range}}},
      {"kinematics",
       {{"forward_step", r.kinematics.forward_step},
        {"turn_step", r.kinematics.turn_step}}},
      {"oracle",
       {{"dedup_radius", r.oracle.dedup_radius},
        {"waypoint_spacing", r.oracle.waypoint_spacing},
        {"node_reached_radius", r.oracle.node_reached_radius},
        {"max_steps_per_target", r.oracle.max_steps_per_target}}},
      {"naive_stop_matches", r.naive_stop_matches},
      {"success_radius", r.success_radius},
  };
}

RunnerConfig runner_from_json(const json& j, const std::string& where) {
  RunnerConfig r;
  try {
    const std::string explorer = j.at("explorer").get<std::string>();
    if (explorer == "straight") {
      r.explorer = ExplorerKind::Straight;
    } else if (explorer == "oracle") {
      r.explorer = ExplorerKind::Oracle;
    } else {
      throw ParseError(where + ": unknown explorer '" + explorer + "'");
    }
    r.sling_enabled = j.at("sling_enabled").get<bool>();
    r.stop_budget = j.at("stop_budget").get<int>();
    r.intrinsics = intrinsics_from_json(j.at("intrinsics"));
    r.switch_cfg.n_th = j.at("switch").at("n_th").get<int>();
    r.switch_cfg.d_th = j.at("switch").at("d_th").get<double>();
    const json& m = j.at("matcher");
    r.matcher.pixel_noise_sigma = m.at("pixel_noise_sigma").get<double>();
    r.matcher.detection_rate = m.at("detection_rate").get<double>();
    r.matcher.outlier_fraction = m.at("outlier_fraction").get<double>();
    r.matcher.max_range = m.at("max_range").get<double>();
    const json& ra = j.at("ransac");
    r.ransac.max_iterations = ra.at("max_iterations").get<int>();
    r.ransac.inlier_threshold = ra.at("inlier_threshold").get<double>();
    r.ransac.min_inliers = ra.at("min_inliers").get<int>();
    r.ransac.confidence = ra.at("confidence").get<double>();
    const json& n = j.at("noise");
    r.noise.pose_trans_sigma = n.at("pose_trans_sigma").get<double>();
    r.noise.pose_rot_sigma = n.at("pose_rot_sigma").get<double>();
    r.noise.depth_rel_sigma = n.at("depth_rel_sigma").get<double>();
    const json& g = j.at("grid");
    r.grid.resolution = g.at("resolution").get<double>();
    r.grid.extent = g.at("extent").get<int>();
    r.grid.agent_radius = g.at("agent_radius").get<double>();
    r.policy.stop_radius = j.at("policy").at("stop_radius").get<double>();
    r.policy.turn_step = j.at("policy").at("turn_step").get<double>();
    r.scan.rays = j.at("scan").at("rays").get<int>();
    r.scan.max_range = j.at("scan").at("max_range").get<double>();
    r.kinematics.forward_step =
        j.at("kinematics").at("forward_step").get<double>();
    r.kinematics.turn_step = j.at("kinematics").at("turn_step").get<double>();
    const json& o = j.at("oracle");
    r.oracle.dedup_radius = o.at("dedup_radius").get<double>();
    r.oracle.waypoint_spacing = o.at("waypoint_spacing").get<double>();
    r.oracle.node_reached_radius = o.at("node_reached_radius").get<double>();
    r.oracle.max_steps_per_target = o.at("max_steps_per_target").get<int>();
    r.naive_stop_matches = j.at("naive_stop_matches").get<int>();
    r.success_radius = j.at("success_radius").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
  return r;
}

}  // namespace

void apply_camera_profile(RunConfig& cfg, const std::string& profile) {
  if (profile == "wide") {
    cfg.runner.intrinsics =
        CameraIntrinsics::from_fov(640, 480, 120.0 * M_PI / 180.0);
    cfg.runner.switch_cfg.n_th = 50;
  } else if (profile == "narrow") {
    cfg.runner.intrinsics =
        CameraIntrinsics::from_fov(128, 128, 90.0 * M_PI / 180.0);
    cfg.runner.switch_cfg.n_th = 20;
  } else {
    throw std::invalid_argument("unknown camera profile: " + profile);
  }
  cfg.camera_profile = profile;
}

std::string run_config_to_json(const RunConfig& cfg) {
  json j = runner_to_json(cfg.runner);
  j["workers"] = cfg.workers;
  j["seed"] = cfg.seed;
  j["fold_label"] = cfg.fold_label;
  j["camera_profile"] = cfg.camera_profile;
  return j.dump(2) + "\n";
}

RunConfig run_config_from_json(const std::string& text,
                               const std::string& where) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
  RunConfig cfg = default_run_config();
  // The profile seeds intrinsics and n_th; explicit fields then override.
  if (j.contains("camera_profile")) {
    apply_camera_profile(cfg, j.at("camera_profile").get<std::string>());
  }
  json merged = runner_to_json(cfg.runner);
  merged.merge_patch(j);
  cfg.runner = runner_from_json(merged, where);
  try {
    if (merged.contains("workers")) cfg.workers = merged.at("workers").get<int>();
    if (merged.contains("seed")) {
      cfg.seed = merged.at("seed").get<std::uint64_t>();
    }
    if (merged.contains("fold_label")) {
      cfg.fold_label = merged.at("fold_label").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
  if (cfg.workers < 1) throw ParseError(where + ": workers must be >= 1");
  return cfg;
}

std::string gen_config_to_json(const GenConfig& cfg) {
  json j{{"seed", cfg.seed},
         {"n_scenes", cfg.n_scenes},
         {"rooms_x_min", cfg.rooms_x_min},
         {"rooms_x_max", cfg.rooms_x_max},
         {"rooms_y_min", cfg.rooms_y_min},
         {"rooms_y_max", cfg.rooms_y_max},
         {"room_size_min", cfg.room_size_min},
         {"room_size_max", cfg.room_size_max},
         {"door_width", cfg.door_width},
         {"door_margin", cfg.door_margin},
         {"landmark_density", cfg.landmark_density},
         {"landmark_height_min", cfg.landmark_height_min},
         {"landmark_height_max", cfg.landmark_height_max},
         {"camera_height", cfg.camera_height},
         {"episodes_per_difficulty", cfg.episodes_per_difficulty},
         {"pose_clearance", cfg.pose_clearance},
         {"min_goal_visible", cfg.min_goal_visible},
         {"max_attempts", cfg.max_attempts},
         {"scene_prefix", cfg.scene_prefix}};
  return j.dump(2) + "\n";
}

GenConfig gen_config_from_json(const std::string& text,
                               const std::string& where) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
  GenConfig cfg;
  json merged = json::parse(gen_config_to_json(cfg));
  merged.merge_patch(j);
  try {
    cfg.seed = merged.at("seed").get<std::uint64_t>();
    cfg.n_scenes = merged.at("n_scenes").get<int>();
    cfg.rooms_x_min = merged.at("rooms_x_min").get<int>();
    cfg.rooms_x_max = merged.at("rooms_x_max").get<int>();
    cfg.rooms_y_min = merged.at("rooms_y_min").get<int>();
    cfg.rooms_y_max = merged.at("rooms_y_max").get<int>();
    cfg.room_size_min = merged.at("room_size_min").get<double>();
    cfg.room_size_max = merged.at("room_size_max").get<double>();
    cfg.door_width = merged.at("door_width").get<double>();
    cfg.door_margin = merged.at("door_margin").get<double>();
    cfg.landmark_density = merged.at("landmark_density").get<double>();
    cfg.landmark_height_min = merged.at("landmark_height_min").get<double>();
    cfg.landmark_height_max = merged.at("landmark_height_max").get<double>();
    cfg.camera_height = merged.at("camera_height").get<double>();
    cfg.episodes_per_difficulty =
        merged.at("episodes_per_difficulty").get<int>();
    cfg.pose_clearance = merged.at("pose_clearance").get<double>();
    cfg.min_goal_visible = merged.at("min_goal_visible").get<int>();
    cfg.max_attempts = merged.at("max_attempts").get<int>();
    cfg.scene_prefix = merged.at("scene_prefix").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
  return cfg;
}

std::string apply_override(const std::string& config_json,
                           const std::string& override_spec) {
  const auto eq = override_spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("override must look like key.path=value: " +
                                override_spec);
  }
  const std::string path = override_spec.substr(0, eq);
  const std::string value_text = override_spec.substr(eq + 1);

  json value;
  try {
    value = json::parse(value_text);
  } catch (const json::exception&) {
    value = value_text;  // plain string
  }

  json doc = json::parse(config_json);
  json* node = &doc;
  std::size_t begin = 0;
  std::vector<std::string> keys;
  while (begin <= path.size()) {
    const auto dot = path.find('.', begin);
    keys.push_back(path.substr(
        begin, dot == std::string::npos ? std::string::npos : dot - begin));
    if (dot == std::string::npos) break;
    begin = dot + 1;
  }
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    if (!node->contains(keys[i])) {
      throw std::invalid_argument("unknown config path: " + path);
    }
    node = &(*node)[keys[i]];
  }
  if (!node->is_object() || !node->contains(keys.back())) {
    throw std::invalid_argument("unknown config path: " + path);
  }
  (*node)[keys.back()] = value;
  return doc.dump(2) + "\n";
}

RunConfig default_run_config() {
  RunConfig cfg;
  apply_camera_profile(cfg, "wide");
  cfg.runner.matcher.pixel_noise_sigma = 0.5;
  cfg.runner.matcher.detection_rate = 0.85;
  cfg.runner.matcher.outlier_fraction = 0.2;
  cfg.runner.matcher.max_range = 10.0;
  cfg.runner.noise.pose_trans_sigma = 0.025;
  cfg.runner.noise.pose_rot_sigma = 0.9 * M_PI / 180.0;
  cfg.runner.noise.depth_rel_sigma = 0.02;
  return cfg;
}

GenConfig default_gen_config() { return {}; }

}  // namespace lmnav
