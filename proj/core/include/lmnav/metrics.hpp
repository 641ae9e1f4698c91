#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lmnav/runner.hpp"

namespace lmnav {

// Success weighted by inverse path length:
// (1/N) sum S_i * l_i / max(p_i, l_i). Throws std::domain_error on an empty
// list and std::invalid_argument when a shortest path is not positive.
double compute_spl(const std::vector<EpisodeResult>& results);

double success_rate(const std::vector<EpisodeResult>& results);

struct SummaryRow {
  std::string fold;        // difficulty name or "overall"
  int n_episodes = 0;
  double success = 0.0;    // fraction in [0,1]
  double spl = 0.0;
  double final_distance = 0.0;  // mean, meters
};

std::vector<SummaryRow> summarize(const std::vector<EpisodeResult>& results);

// First Wasserstein distance between two empirical distributions, via the
// integral of |CDF_a - CDF_b|. For equal sample counts this equals the mean
// absolute difference of the matched sorted samples. Throws
// std::domain_error on empty input.
double wasserstein_1d(std::vector<double> sample_a,
                      std::vector<double> sample_b);

struct HeadingBiasReport {
  double w_geometric = 0.0;  // W(ground truth, geometric predictor)
  double w_zero = 0.0;       // W(ground truth, constant-zero predictor)
  double within_15deg_truth = 0.0;
  double within_15deg_geometric = 0.0;
  double within_15deg_zero = 1.0;
  std::size_t n_samples = 0;
};

// Pools exploit-phase heading logs across episodes; nullopt when no episode
// ever reached the exploit phase.
std::optional<HeadingBiasReport> heading_bias_report(
    const std::vector<EpisodeResult>& results);

struct StopBudgetRow {
  int budget = 0;
  double success = 0.0;
  double spl = 0.0;
};

// Derives per-budget metrics from rollouts recorded at the maximum budget.
// A rollout's behavior is independent of the remaining budget, so the
// outcome under budget b is read off exactly: the episode ends at the
// (b+1)-th failed stop, at its successful stop, or at the step cap.
std::vector<StopBudgetRow> derive_stop_budget_metrics(
    const std::vector<EpisodeResult>& max_budget_results,
    const std::vector<int>& budgets, double success_radius = 1.0);

}  // namespace lmnav
