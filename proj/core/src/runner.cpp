#include "lmnav/runner.hpp"

#include <atomic>
#include <cassert>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "lmnav/rng.hpp"

namespace lmnav {

const char* to_string(ExplorerKind k) {
  switch (k) {
    case ExplorerKind::Straight: return "straight";
    case ExplorerKind::Oracle: return "oracle";
  }
  return "straight";
}

namespace {

// Per-step seed purposes; keeps the matcher, solver, and noise streams
// decorrelated while staying reproducible.
enum SeedTag : std::uint64_t {
  kSeedScan = 1,
  kSeedMatch = 2,
  kSeedRansac = 3,
  kSeedAct = 4,
  kSeedReport = 5,
};

}  // namespace

EpisodeResult run_episode(const Scene& scene, const Episode& episode,
                          const RunnerConfig& cfg, std::uint64_t episode_seed,
                          int episode_index) {
  cfg.switch_cfg.validate();
  cfg.ransac.validate();

  EpisodeResult result;
  result.scene_id = episode.scene_id;
  result.episode_index = episode_index;
  result.difficulty = episode.difficulty;
  result.shortest_path = episode.geodesic_length;

  AgentPose true_pose = episode.start;
  AgentPose reported = episode.start;
  NavPhase phase;
  StraightState straight;
  OracleState oracle;
  int budget_left = cfg.stop_budget;
  bool terminated = false;

  for (int step = 0; step < episode.max_steps && !terminated; ++step) {
    Rng scan_rng(derive_seed(episode_seed, step, kSeedScan));
    const DepthScan scan = render_depth_scan(
        true_pose, cfg.intrinsics, scene, cfg.scan, cfg.noise, scan_rng);

    MatcherConfig mcfg = cfg.matcher;
    mcfg.rng_seed = derive_seed(episode_seed, step, kSeedMatch);
    const CorrespondenceSet corr = match_views(
        scene, true_pose, episode.goal, cfg.intrinsics, mcfg, cfg.noise);
    const int n = static_cast<int>(count_matches(corr));

    DiscreteAction action = DiscreteAction::Forward;
    if (cfg.sling_enabled) {
      // Run the solver past the entry gate, and always while exploiting.
      std::optional<PnPResult> pnp;
      std::optional<GoalEstimate> est;
      if (phase.exploiting() || n > cfg.switch_cfg.n_th) {
        RansacConfig rcfg = cfg.ransac;
        rcfg.rng_seed = derive_seed(episode_seed, step, kSeedRansac);
        pnp = ransac_pnp(corr, cfg.intrinsics, rcfg);
        if (pnp) est = estimate_goal(pnp->pose.inverse());
      }
      const bool was_exploiting = phase.exploiting();
      phase = step_phase(phase, corr, pnp, est, cfg.switch_cfg);
      if (!was_exploiting && phase.exploiting()) {
        assert(n > cfg.switch_cfg.n_th && pnp.has_value() &&
               phase.estimate->distance <= cfg.switch_cfg.d_th);
      }
    }
    result.phase_trace.push_back(phase.exploiting() ? 1 : 0);

    if (phase.exploiting()) {
      const GoalEstimate& est = *phase.estimate;
      result.heading_log.emplace_back(est.heading,
                                      true_goal_heading(true_pose, episode.goal));
      const OccupancyGrid grid =
          build_local_map(scan, reported.heading, cfg.grid);
      const auto waypoint = waypoint_cell_for(est, reported.heading, grid);
      const DistanceField field = fast_marching(grid, waypoint);
      action = select_action(est, grid, field, reported.heading, cfg.policy);
    } else if (!cfg.sling_enabled && n >= cfg.naive_stop_matches) {
      action = DiscreteAction::Stop;
    } else if (cfg.explorer == ExplorerKind::Straight) {
      action = straight_step(straight, reported);
    } else {
      action = oracle_step(oracle, reported, scene, episode.goal, scan,
                           cfg.grid, cfg.oracle);
    }

    ++result.steps;
    if (action == DiscreteAction::Stop) {
      const double dist = geodesic_distance(true_pose, episode.goal, scene);
      result.stop_events.push_back({result.steps, dist, result.path_length});
      if (dist < cfg.success_radius) {
        result.success = true;
        result.stop_issued = true;
        terminated = true;
      } else if (budget_left > 0) {
        --budget_left;
        phase = NavPhase{};  // a failed stop invalidates the estimate
      } else {
        result.stop_issued = true;
        terminated = true;
      }
      continue;
    }

    Rng act_rng(derive_seed(episode_seed, step, kSeedAct));
    const AgentPose next =
        apply_action(true_pose, action, scene, cfg.noise, cfg.kinematics, act_rng);
    result.path_length += (next.position() - true_pose.position()).norm();
    true_pose = next;
    Rng report_rng(derive_seed(episode_seed, step, kSeedReport));
    reported = report_pose(true_pose, cfg.noise, report_rng);
  }

  result.final_distance = geodesic_distance(true_pose, episode.goal, scene);
  return result;
}

std::vector<EpisodeResult> run_episodes(const std::vector<Scene>& scenes,
                                        const std::vector<Episode>& episodes,
                                        const RunnerConfig& cfg,
                                        std::uint64_t run_seed, int workers) {
  if (workers < 1) {
    throw std::invalid_argument("run_episodes: workers must be >= 1");
  }
  std::map<std::string, const Scene*> by_id;
  for (const auto& s : scenes) by_id[s.id] = &s;

  std::vector<EpisodeResult> results(episodes.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= episodes.size() || failed.load()) break;
      const auto it = by_id.find(episodes[i].scene_id);
      if (it == by_id.end()) {
        std::lock_guard<std::mutex> lock(error_mutex);
        error_message = "unknown scene id: " + episodes[i].scene_id;
        failed.store(true);
        break;
      }
      results[i] = run_episode(*it->second, episodes[i], cfg,
                               derive_seed(run_seed, i, 0x6570),
                               static_cast<int>(i));
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw std::runtime_error(error_message);
  return results;
}

}  // namespace lmnav
