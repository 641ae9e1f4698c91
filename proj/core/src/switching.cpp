#include "lmnav/switching.hpp"

#include <cmath>
#include <stdexcept>

#include "lmnav/rng.hpp"

namespace lmnav {

void SwitchConfig::validate() const {
  if (n_th < 4) {
    throw std::invalid_argument("SwitchConfig: n_th must be >= 4");
  }
  if (!(d_th > 0.0)) {
    throw std::invalid_argument("SwitchConfig: d_th must be > 0");
  }
}

NavPhase step_phase(const NavPhase& phase, const CorrespondenceSet& corr,
                    const std::optional<PnPResult>& pnp,
                    const std::optional<GoalEstimate>& est,
                    const SwitchConfig& cfg) {
  const int n = static_cast<int>(count_matches(corr));
  if (phase.phase == Phase::Explore) {
    if (n > cfg.n_th && pnp.has_value() && est.has_value() &&
        est->distance <= cfg.d_th) {
      return {Phase::Exploit, est};
    }
    return {Phase::Explore, std::nullopt};
  }
  // Exploit: bail on pose-recovery failure or an implausible distance.
  if (!pnp.has_value() || !est.has_value() || est->distance > cfg.d_th) {
    return {Phase::Explore, std::nullopt};
  }
  return {Phase::Exploit, est};
}

PairLabel label_pair(const AgentPose& agent_pose, const AgentPose& goal_pose,
                     const Scene& scene) {
  PairLabel out;
  out.euclidean = (agent_pose.position() - goal_pose.position()).norm();
  out.angular = std::abs(wrap_angle(agent_pose.heading - goal_pose.heading));
  out.geodesic = geodesic_distance(agent_pose, goal_pose, scene);

  constexpr double kMaxEuclidean = 3.0;
  constexpr double kMaxAngular = 22.5 * M_PI / 180.0;
  constexpr double kMaxRatio = 1.2;

  if (out.geodesic == kUnreachable) {
    out.positive = false;
    return out;
  }
  const bool ratio_ok =
      out.euclidean == 0.0 || out.geodesic / out.euclidean < kMaxRatio;
  out.positive = out.euclidean < kMaxEuclidean && out.angular < kMaxAngular &&
                 ratio_ok;
  return out;
}

SwitchAccuracy& SwitchAccuracy::operator+=(const SwitchAccuracy& o) {
  entry_correct += o.entry_correct;
  entry_total += o.entry_total;
  exit_correct += o.exit_correct;
  exit_total += o.exit_total;
  return *this;
}

SwitchAccuracy evaluate_switch_accuracy(const Scene& scene,
                                        const std::vector<ViewPair>& pairs,
                                        const CameraIntrinsics& intr,
                                        const MatcherConfig& matcher_cfg,
                                        const RansacConfig& ransac_cfg,
                                        const SwitchConfig& switch_cfg,
                                        const NoiseModel& noise) {
  if (pairs.empty()) {
    throw std::domain_error("evaluate_switch_accuracy: empty pair set");
  }
  SwitchAccuracy acc;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const ViewPair& pair = pairs[i];
    MatcherConfig mcfg = matcher_cfg;
    mcfg.rng_seed = derive_seed(matcher_cfg.rng_seed, i, 0x6d61);
    const CorrespondenceSet corr =
        match_views(scene, pair.agent, pair.goal, intr, mcfg, noise);
    const int n = static_cast<int>(count_matches(corr));

    const bool entry = n > switch_cfg.n_th;
    acc.entry_correct += entry == pair.label.positive ? 1 : 0;
    ++acc.entry_total;

    if (!entry) continue;
    RansacConfig rcfg = ransac_cfg;
    rcfg.rng_seed = derive_seed(ransac_cfg.rng_seed, i, 0x706e);
    const auto pnp = ransac_pnp(corr, intr, rcfg);
    bool bail = true;
    if (pnp.has_value()) {
      const GoalEstimate est = estimate_goal(pnp->pose.inverse());
      bail = est.distance > switch_cfg.d_th;
    }
    acc.exit_correct += bail == !pair.label.positive ? 1 : 0;
    ++acc.exit_total;
  }
  return acc;
}

}  // namespace lmnav
