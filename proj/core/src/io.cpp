#include "lmnav/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace lmnav {

namespace {

using nlohmann::json;

json require(const json& j, const char* field, const std::string& where) {
  const auto it = j.find(field);
  if (it == j.end()) {
    throw ParseError(where + ": missing field '" + field + "'");
  }
  return *it;
}

json pose_to_json(const AgentPose& p) {
  return json{{"x", p.x}, {"y", p.y}, {"heading", p.heading}};
}

AgentPose pose_from_json(const json& j, const std::string& where) {
  AgentPose p;
  p.x = require(j, "x", where).get<double>();
  p.y = require(j, "y", where).get<double>();
  p.heading = require(j, "heading", where).get<double>();
  return p;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open: " + path);
  return in;
}

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

void save_scene(const Scene& scene, const std::string& path) {
  json j;
  j["format_version"] = kSceneFormatVersion;
  json walls = json::array();
  for (const auto& w : scene.walls) {
    walls.push_back({w.a.x(), w.a.y(), w.b.x(), w.b.y()});
  }
  j["walls"] = walls;
  json landmarks = json::array();
  for (const auto& lm : scene.landmarks) {
    landmarks.push_back({{"id", lm.id},
                         {"x", lm.position.x()},
                         {"y", lm.position.y()},
                         {"z", lm.position.z()}});
  }
  j["landmarks"] = landmarks;
  j["meta"] = {{"id", scene.id},
               {"camera_height", scene.camera_height},
               {"agent_radius", scene.agent_radius},
               {"navmesh_resolution", scene.navmesh_resolution}};
  open_out(path) << j.dump(2) << "\n";
}

Scene load_scene(const std::string& path) {
  json j;
  try {
    open_in(path) >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  const int version = require(j, "format_version", path).get<int>();
  if (version != kSceneFormatVersion) {
    throw ParseError(path + ": unsupported format_version " +
                     std::to_string(version));
  }
  Scene scene;
  for (const auto& w : require(j, "walls", path)) {
    if (!w.is_array() || w.size() != 4) {
      throw ParseError(path + ": wall entries must be [x1,y1,x2,y2]");
    }
    scene.walls.push_back({{w[0].get<double>(), w[1].get<double>()},
                           {w[2].get<double>(), w[3].get<double>()}});
  }
  for (const auto& lm : require(j, "landmarks", path)) {
    scene.landmarks.push_back(
        {require(lm, "id", path).get<std::int32_t>(),
         Eigen::Vector3d(require(lm, "x", path).get<double>(),
                         require(lm, "y", path).get<double>(),
                         require(lm, "z", path).get<double>())});
  }
  const json meta = require(j, "meta", path);
  scene.id = require(meta, "id", path).get<std::string>();
  scene.camera_height = require(meta, "camera_height", path).get<double>();
  scene.agent_radius = require(meta, "agent_radius", path).get<double>();
  scene.navmesh_resolution =
      require(meta, "navmesh_resolution", path).get<double>();
  scene.finalize();
  return scene;
}

void save_episodes(const std::vector<Episode>& episodes,
                   const std::string& path) {
  auto out = open_out(path);
  for (const auto& ep : episodes) {
    json j{{"scene_id", ep.scene_id},
           {"start", pose_to_json(ep.start)},
           {"goal", pose_to_json(ep.goal)},
           {"difficulty", to_string(ep.difficulty)},
           {"geodesic_length", ep.geodesic_length}};
    out << j.dump() << "\n";
  }
}

std::vector<Episode> load_episodes(const std::string& path) {
  auto in = open_in(path);
  std::vector<Episode> episodes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
    Episode ep;
    ep.scene_id = require(j, "scene_id", where).get<std::string>();
    ep.start = pose_from_json(require(j, "start", where), where);
    ep.goal = pose_from_json(require(j, "goal", where), where);
    const auto difficulty =
        difficulty_from_string(require(j, "difficulty", where).get<std::string>());
    if (!difficulty) {
      throw ParseError(where + ": bad field 'difficulty'");
    }
    ep.difficulty = *difficulty;
    ep.geodesic_length = require(j, "geodesic_length", where).get<double>();
    episodes.push_back(ep);
  }
  return episodes;
}

void save_results(const std::vector<EpisodeResult>& results,
                  const std::string& path) {
  auto out = open_out(path);
  for (const auto& r : results) {
    std::string phases(r.phase_trace.size(), '0');
    for (std::size_t i = 0; i < r.phase_trace.size(); ++i) {
      if (r.phase_trace[i]) phases[i] = '1';
    }
    json heading = json::array();
    for (const auto& [pred, truth] : r.heading_log) {
      heading.push_back({pred, truth});
    }
    json stops = json::array();
    for (const auto& ev : r.stop_events) {
      stops.push_back({ev.step, ev.distance_to_goal, ev.path_length});
    }
    json j{{"scene_id", r.scene_id},
           {"episode_index", r.episode_index},
           {"difficulty", to_string(r.difficulty)},
           {"success", r.success},
           {"path_length", r.path_length},
           {"shortest_path", r.shortest_path},
           {"final_distance", r.final_distance},
           {"steps", r.steps},
           {"stop_issued", r.stop_issued},
           {"phase_trace", phases},
           {"heading_log", heading},
           {"stop_events", stops}};
    out << j.dump() << "\n";
  }
}

std::vector<EpisodeResult> load_results(const std::string& path) {
  auto in = open_in(path);
  std::vector<EpisodeResult> results;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
    EpisodeResult r;
    r.scene_id = require(j, "scene_id", where).get<std::string>();
    r.episode_index = require(j, "episode_index", where).get<int>();
    const auto difficulty =
        difficulty_from_string(require(j, "difficulty", where).get<std::string>());
    if (!difficulty) throw ParseError(where + ": bad field 'difficulty'");
    r.difficulty = *difficulty;
    r.success = require(j, "success", where).get<bool>();
    r.path_length = require(j, "path_length", where).get<double>();
    r.shortest_path = require(j, "shortest_path", where).get<double>();
    r.final_distance = require(j, "final_distance", where).get<double>();
    r.steps = require(j, "steps", where).get<int>();
    r.stop_issued = require(j, "stop_issued", where).get<bool>();
    const std::string phases =
        require(j, "phase_trace", where).get<std::string>();
    for (const char c : phases) r.phase_trace.push_back(c == '1' ? 1 : 0);
    for (const auto& h : require(j, "heading_log", where)) {
      r.heading_log.emplace_back(h[0].get<double>(), h[1].get<double>());
    }
    for (const auto& ev : require(j, "stop_events", where)) {
      r.stop_events.push_back(
          {ev[0].get<int>(), ev[1].get<double>(), ev[2].get<double>()});
    }
    results.push_back(std::move(r));
  }
  return results;
}

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& fold, const std::string& path) {
  auto out = open_out(path);
  out << "fold,difficulty,success,spl,final_dist,n_episodes\n";
  for (const auto& row : rows) {
    out << fold << "," << row.fold << "," << csv_number(row.success) << ","
        << csv_number(row.spl) << "," << csv_number(row.final_distance) << ","
        << row.n_episodes << "\n";
  }
}

void write_stop_budget_csv(const std::vector<StopBudgetRow>& rows,
                           const std::string& path) {
  auto out = open_out(path);
  out << "budget,success,spl\n";
  for (const auto& row : rows) {
    out << row.budget << "," << csv_number(row.success) << ","
        << csv_number(row.spl) << "\n";
  }
}

void write_switch_accuracy_csv(const std::vector<SwitchAccuracyRow>& rows,
                               const std::string& path) {
  auto out = open_out(path);
  out << "scene,explore_to_exploit,exploit_to_explore,n_pairs,n_entry\n";
  for (const auto& row : rows) {
    out << row.scene_id << ","
        << csv_number(row.accuracy.explore_to_exploit()) << ","
        << csv_number(row.accuracy.exploit_to_explore()) << ","
        << row.accuracy.entry_total << "," << row.accuracy.exit_total << "\n";
  }
}

void write_heading_bias_csv(const HeadingBiasReport& report,
                            const std::string& path) {
  auto out = open_out(path);
  out << "predictor,wasserstein,within_15deg,n_samples\n";
  out << "ground_truth,0," << csv_number(report.within_15deg_truth) << ","
      << report.n_samples << "\n";
  out << "geometric," << csv_number(report.w_geometric) << ","
      << csv_number(report.within_15deg_geometric) << "," << report.n_samples
      << "\n";
  out << "constant_zero," << csv_number(report.w_zero) << ","
      << csv_number(report.within_15deg_zero) << "," << report.n_samples
      << "\n";
}

void write_noise_sweep_csv(const std::vector<NoiseSweepRow>& rows,
                           const std::string& path) {
  auto out = open_out(path);
  out << "label,pose_trans_sigma,pose_rot_sigma,depth_rel_sigma,success,spl\n";
  for (const auto& row : rows) {
    out << row.label << "," << csv_number(row.pose_trans_sigma) << ","
        << csv_number(row.pose_rot_sigma) << ","
        << csv_number(row.depth_rel_sigma) << "," << csv_number(row.success)
        << "," << csv_number(row.spl) << "\n";
  }
}

}  // namespace lmnav
