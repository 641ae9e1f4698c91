#include "lmnav/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lmnav {

double compute_spl(const std::vector<EpisodeResult>& results) {
  if (results.empty()) {
    throw std::domain_error("compute_spl: empty result list");
  }
  double sum = 0.0;
  for (const auto& r : results) {
    if (!(r.shortest_path > 0.0)) {
      throw std::invalid_argument("compute_spl: shortest_path must be > 0");
    }
    if (r.success) {
      sum += r.shortest_path / std::max(r.path_length, r.shortest_path);
    }
  }
  return sum / static_cast<double>(results.size());
}

double success_rate(const std::vector<EpisodeResult>& results) {
  if (results.empty()) return 0.0;
  std::size_t n = 0;
  for (const auto& r : results) n += r.success ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(results.size());
}

namespace {

SummaryRow make_row(const std::string& fold,
                    const std::vector<EpisodeResult>& rows) {
  SummaryRow out;
  out.fold = fold;
  out.n_episodes = static_cast<int>(rows.size());
  if (rows.empty()) return out;
  out.success = success_rate(rows);
  out.spl = compute_spl(rows);
  double dist = 0.0;
  for (const auto& r : rows) dist += r.final_distance;
  out.final_distance = dist / static_cast<double>(rows.size());
  return out;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<EpisodeResult>& results) {
  std::vector<SummaryRow> out;
  for (const Difficulty d :
       {Difficulty::Easy, Difficulty::Medium, Difficulty::Hard}) {
    std::vector<EpisodeResult> rows;
    for (const auto& r : results) {
      if (r.difficulty == d) rows.push_back(r);
    }
    if (!rows.empty()) out.push_back(make_row(to_string(d), rows));
  }
  out.push_back(make_row("overall", results));
  return out;
}

double wasserstein_1d(std::vector<double> sample_a,
                      std::vector<double> sample_b) {
  if (sample_a.empty() || sample_b.empty()) {
    throw std::domain_error("wasserstein_1d: empty sample");
  }
  std::sort(sample_a.begin(), sample_a.end());
  std::sort(sample_b.begin(), sample_b.end());

  // Integrate |F_a - F_b| over the merged support.
  double total = 0.0;
  std::size_t ia = 0, ib = 0;
  double prev = std::min(sample_a.front(), sample_b.front());
  const double na = static_cast<double>(sample_a.size());
  const double nb = static_cast<double>(sample_b.size());
  while (ia < sample_a.size() || ib < sample_b.size()) {
    const double xa = ia < sample_a.size()
                          ? sample_a[ia]
                          : std::numeric_limits<double>::infinity();
    const double xb = ib < sample_b.size()
                          ? sample_b[ib]
                          : std::numeric_limits<double>::infinity();
    const double x = std::min(xa, xb);
    const double fa = static_cast<double>(ia) / na;
    const double fb = static_cast<double>(ib) / nb;
    total += std::abs(fa - fb) * (x - prev);
    prev = x;
    while (ia < sample_a.size() && sample_a[ia] == x) ++ia;
    while (ib < sample_b.size() && sample_b[ib] == x) ++ib;
  }
  return total;
}

std::optional<HeadingBiasReport> heading_bias_report(
    const std::vector<EpisodeResult>& results) {
  std::vector<double> truth;
  std::vector<double> predicted;
  for (const auto& r : results) {
    for (const auto& [pred, gt] : r.heading_log) {
      predicted.push_back(pred);
      truth.push_back(gt);
    }
  }
  if (truth.empty()) return std::nullopt;

  HeadingBiasReport report;
  report.n_samples = truth.size();
  report.w_geometric = wasserstein_1d(truth, predicted);
  report.w_zero = wasserstein_1d(truth, std::vector<double>{0.0});

  const double limit = 15.0 * M_PI / 180.0;
  auto frac_within = [&](const std::vector<double>& xs) {
    std::size_t k = 0;
    for (const double x : xs) k += std::abs(x) <= limit ? 1 : 0;
    return static_cast<double>(k) / static_cast<double>(xs.size());
  };
  report.within_15deg_truth = frac_within(truth);
  report.within_15deg_geometric = frac_within(predicted);
  report.within_15deg_zero = 1.0;
  return report;
}

std::vector<StopBudgetRow> derive_stop_budget_metrics(
    const std::vector<EpisodeResult>& max_budget_results,
    const std::vector<int>& budgets, double success_radius) {
  for (const int b : budgets) {
    if (b < 0) {
      throw std::invalid_argument("stop budgets must be non-negative");
    }
  }
  std::vector<StopBudgetRow> rows;
  rows.reserve(budgets.size());
  for (const int budget : budgets) {
    std::vector<EpisodeResult> derived;
    derived.reserve(max_budget_results.size());
    for (const auto& r : max_budget_results) {
      EpisodeResult d = r;
      d.success = false;
      int failures = 0;
      bool ended = false;
      for (const auto& ev : r.stop_events) {
        if (ev.distance_to_goal < success_radius) {
          if (failures <= budget) {
            d.success = true;
            d.steps = ev.step;
            d.path_length = ev.path_length;
            d.final_distance = ev.distance_to_goal;
            ended = true;
          }
          break;
        }
        ++failures;
        if (failures > budget) {
          d.steps = ev.step;
          d.path_length = ev.path_length;
          d.final_distance = ev.distance_to_goal;
          ended = true;
          break;
        }
      }
      if (!ended) {
        // Ran to the cap (or the recorded run ended the same way).
        d.success = false;
      }
      derived.push_back(std::move(d));
    }
    rows.push_back({budget, success_rate(derived), compute_spl(derived)});
  }
  return rows;
}

}  // namespace lmnav
