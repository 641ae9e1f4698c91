#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lmnav/metrics.hpp"
#include "lmnav/rng.hpp"

using namespace lmnav;

namespace {

EpisodeResult result_of(bool success, double path, double shortest) {
  EpisodeResult r;
  r.success = success;
  r.path_length = path;
  r.shortest_path = shortest;
  r.stop_issued = success;
  r.final_distance = success ? 0.5 : 3.0;
  return r;
}

// Independent oracle: integrate |Qa - Qb| over quantiles. For empirical
// distributions both quantile functions are piecewise constant with breaks
// at multiples of 1/na and 1/nb, so sampling midpoints of 1/(na*nb) steps
// is exact.
double wasserstein_quantile_oracle(std::vector<double> a,
                                   std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t cells = a.size() * b.size();
  double total = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    const double p = (k + 0.5) / cells;
    const double qa = a[std::min(a.size() - 1,
                                 static_cast<std::size_t>(p * a.size()))];
    const double qb = b[std::min(b.size() - 1,
                                 static_cast<std::size_t>(p * b.size()))];
    total += std::abs(qa - qb);
  }
  return total / cells;
}

}  // namespace

TEST_CASE("spl analytic cases") {
  CHECK(compute_spl({result_of(true, 4.0, 4.0)}) == doctest::Approx(1.0));
  CHECK(compute_spl({result_of(false, 4.0, 4.0)}) == doctest::Approx(0.0));
  CHECK(compute_spl({result_of(true, 8.0, 4.0), result_of(false, 2.0, 4.0)}) ==
        doctest::Approx(0.25));
}

TEST_CASE("spl guards its preconditions") {
  CHECK_THROWS_AS(compute_spl({}), std::domain_error);
  CHECK_THROWS_AS(compute_spl({result_of(true, 1.0, 0.0)}),
                  std::invalid_argument);
}

TEST_CASE("spl is bounded by the success rate") {
  Rng rng(3);
  std::uniform_real_distribution<double> u(0.5, 10.0);
  std::uniform_real_distribution<double> flag(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<EpisodeResult> results;
    for (int i = 0; i < 40; ++i) {
      const double shortest = u(rng);
      results.push_back(
          result_of(flag(rng) < 0.5, shortest + u(rng), shortest));
    }
    const double spl = compute_spl(results);
    CHECK(spl >= 0.0);
    CHECK(spl <= 1.0);
    CHECK(spl <= success_rate(results) + 1e-12);
  }
}

TEST_CASE("wasserstein analytic cases") {
  CHECK(wasserstein_1d({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
  CHECK(wasserstein_1d({0.4}, {-1.1}) == doctest::Approx(1.5));
  CHECK_THROWS_AS(wasserstein_1d({}, {1.0}), std::domain_error);
  CHECK_THROWS_AS(wasserstein_1d({1.0}, {}), std::domain_error);
}

TEST_CASE("equal-size wasserstein equals the matched-sorted mean") {
  Rng rng(17);
  std::normal_distribution<double> na(0.0, 1.0);
  std::normal_distribution<double> nb(0.4, 1.7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a, b;
    for (int i = 0; i < 64; ++i) {
      a.push_back(na(rng));
      b.push_back(nb(rng));
    }
    std::vector<double> sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double matched = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) {
      matched += std::abs(sa[i] - sb[i]);
    }
    matched /= sa.size();
    CHECK(wasserstein_1d(a, b) == doctest::Approx(matched).epsilon(1e-12));
  }
}

TEST_CASE("wasserstein matches the quantile-integral oracle") {
  Rng rng(29);
  std::normal_distribution<double> na(0.0, 1.0);
  std::normal_distribution<double> nb(0.25, 0.8);
  std::vector<double> a, b;
  for (int i = 0; i < 500; ++i) a.push_back(na(rng));
  for (int i = 0; i < 700; ++i) b.push_back(nb(rng));
  const double mine = wasserstein_1d(a, b);
  const double oracle = wasserstein_quantile_oracle(a, b);
  CHECK(std::abs(mine - oracle) < 1e-6);
}

TEST_CASE("heading bias report") {
  EpisodeResult lateral;
  lateral.success = true;
  lateral.path_length = 1.0;
  lateral.shortest_path = 1.0;
  // Strongly lateral goals: the zero predictor is far off, the geometric
  // predictor is close.
  for (int i = 0; i < 50; ++i) {
    const double truth = (i % 2 ? 1.0 : -1.0) * (0.6 + 0.01 * i);
    lateral.heading_log.emplace_back(truth + 0.001, truth);
  }
  const auto report = heading_bias_report({lateral});
  REQUIRE(report.has_value());
  CHECK(report->w_geometric < report->w_zero);
  CHECK(report->w_geometric < 0.01);
  CHECK(report->within_15deg_truth == 0.0);

  // Single exact sample: zero distance.
  EpisodeResult single;
  single.heading_log.emplace_back(0.3, 0.3);
  const auto exact = heading_bias_report({single});
  REQUIRE(exact.has_value());
  CHECK(exact->w_geometric == 0.0);

  CHECK(!heading_bias_report({EpisodeResult{}}).has_value());
}

TEST_CASE("stop budget derivation") {
  // Episode A: fails twice at 2.2 m and 1.8 m, then stops at 0.4 m.
  EpisodeResult a = result_of(true, 6.0, 3.0);
  a.stop_events = {{10, 2.2, 2.0}, {20, 1.8, 4.0}, {30, 0.4, 6.0}};
  a.steps = 30;
  // Episode B: a single good stop; identical under every budget.
  EpisodeResult b = result_of(true, 3.0, 3.0);
  b.stop_events = {{12, 0.2, 3.0}};
  b.steps = 12;
  // Episode C: one failed stop, then the step cap.
  EpisodeResult c = result_of(false, 9.0, 3.0);
  c.stop_events = {{40, 4.0, 5.0}};
  c.steps = 500;

  const std::vector<EpisodeResult> rollout{a, b, c};
  const auto rows =
      derive_stop_budget_metrics(rollout, {0, 1, 2, 3});
  REQUIRE(rows.size() == 4);

  // Budget 0: only B succeeds; A ends at its first failed stop.
  CHECK(rows[0].success == doctest::Approx(1.0 / 3.0));
  // Budgets >= 2 let A survive both failures.
  CHECK(rows[2].success == doctest::Approx(2.0 / 3.0));
  CHECK(rows[3].success == doctest::Approx(2.0 / 3.0));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].success >= rows[i - 1].success);
  }

  CHECK_THROWS_AS(derive_stop_budget_metrics(rollout, {-1}),
                  std::invalid_argument);
}

TEST_CASE("summaries fold per difficulty plus overall") {
  EpisodeResult easy = result_of(true, 2.0, 2.0);
  easy.difficulty = Difficulty::Easy;
  EpisodeResult hard = result_of(false, 7.0, 6.0);
  hard.difficulty = Difficulty::Hard;
  const auto rows = summarize({easy, hard});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].fold == "easy");
  CHECK(rows[0].success == doctest::Approx(1.0));
  CHECK(rows[1].fold == "hard");
  CHECK(rows[2].fold == "overall");
  CHECK(rows[2].n_episodes == 2);
  CHECK(rows[2].success == doctest::Approx(0.5));
}
