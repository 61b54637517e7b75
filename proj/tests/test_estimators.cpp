//
// Copyright 2026 The dpratio Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpratio/estimators.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dpratio/analysis.h"
#include "gtest/gtest.h"

namespace dpratio {
namespace {

constexpr double kLog2 = 0.69314718055994530941723212145818;

// Local sensitivity of x/y evaluated the long way: the largest ratio change
// over the four single-element moves, with y = 1 handled by its only legal
// moves (x +/- 1 and y -> 2).
double brute_force_local_sensitivity(long long x, long long y, long long n_x,
                                     long long n_y) {
  const double z = static_cast<double>(x) / static_cast<double>(y);
  double worst = 0.0;
  const auto consider = [&](long long xx, long long yy) {
    if (xx < 0 || xx > n_x || yy < 1 || yy > n_y) return;
    worst = std::max(worst,
                     std::abs(z - static_cast<double>(xx) / static_cast<double>(yy)));
  };
  consider(x + 1, y);
  consider(x - 1, y);
  consider(x, y + 1);
  consider(x, y - 1);
  return worst;
}

// Max local sensitivity over every table at element distance exactly m,
// enumerated directly.
double brute_force_max_ls(const CountTable& t, long long m) {
  double best = 0.0;
  for (long long xx = std::max(0ll, t.x - m); xx <= std::min(t.n_x, t.x + m); ++xx) {
    const long long budget = m - std::abs(xx - t.x);
    if (budget < 0) continue;
    for (const long long yy : {t.y - budget, t.y + budget}) {
      if (yy < 1 || yy > t.n_y) continue;
      best = std::max(best, brute_force_local_sensitivity(xx, yy, t.n_x, t.n_y));
    }
  }
  return best;
}

TEST(LaplaceNoisedCounts, ZeroNoiseRecoversTheRatio) {
  const CountTable t(100, 50, 150, 150);
  const RatioEstimate est =
      laplace_noised_counts_with_noise(t, PrivacyBudget(1.0), 0.0, 0.0);
  EXPECT_DOUBLE_EQ(est.value, 2.0);
  EXPECT_DOUBLE_EQ(*est.x_tilde, 100.0);
  EXPECT_DOUBLE_EQ(*est.y_tilde, 50.0);
  EXPECT_EQ(est.method, EstimatorMethod::kNoisedCounts);
}

TEST(LaplaceNoisedCounts, MaxedClampsTheDenominatorAtOne) {
  const CountTable t(100, 50, 150, 150);
  const RatioEstimate est = laplace_noised_counts_with_noise(
      t, PrivacyBudget(1.0), 0.5, -53.0, /*max_denominator=*/true);
  EXPECT_DOUBLE_EQ(*est.y_tilde, -3.0);
  EXPECT_DOUBLE_EQ(est.value, 100.5 / 1.0);
  EXPECT_EQ(est.method, EstimatorMethod::kNoisedCountsMaxed);
}

TEST(LaplaceNoisedCounts, DrawsExactlyTwoVariates) {
  RngHandle rng(3);
  laplace_noised_counts(rng, CountTable(10, 10, 20, 20), PrivacyBudget(1.0));
  EXPECT_EQ(rng.draws(), 2u);
}

TEST(LaplaceNoisedCounts, EmpiricalCdfMatchesTheRatioLaw) {
  const CountTable t(100, 100, 150, 150);
  const PrivacyBudget budget(1.0);
  const int reps = 1000000;
  std::vector<double> samples;
  samples.reserve(reps);
  for (int rep = 0; rep < reps; ++rep) {
    RngHandle rng(777, static_cast<std::uint64_t>(rep));
    samples.push_back(laplace_noised_counts(rng, t, budget).value);
  }
  std::sort(samples.begin(), samples.end());
  const RatioLawParams params(100.0, 100.0, 2.0);
  double ks = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double a = samples[i];
    double f = 0.0;
    if (a > 0.0) {
      f = std::abs(a - 1.0) < 1e-9
              ? 0.5 * (ratio_of_laplace_cdf(params, 1.0 - 1e-6) +
                       ratio_of_laplace_cdf(params, 1.0 + 1e-6))
              : ratio_of_laplace_cdf(params, a);
    }
    ks = std::max(ks, std::abs(f - (i + 1.0) / reps));
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / reps));
  }
  EXPECT_LT(ks, 0.002);
}

TEST(NaiveRelativeRisk, ZeroNoiseRecoversTheRatio) {
  const CountTable t(100, 50, 150, 150);
  EXPECT_DOUBLE_EQ(naive_relative_risk_with_noise(t, PrivacyBudget(1.0), 0.0).value,
                   2.0);
}

TEST(NaiveRelativeRisk, TailProbabilityMatchesTheLaplaceLaw) {
  // P(|value - X/Y| > alpha) = exp(-2 alpha eps / n_x).
  const CountTable t(100, 50, 150, 150);
  const PrivacyBudget budget(1.0);
  const double alpha = 0.1;
  const int reps = 1000000;
  int misses = 0;
  double sum = 0.0, sum_sq = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    RngHandle rng(4242, static_cast<std::uint64_t>(rep));
    const double v = naive_relative_risk(rng, t, budget).value;
    if (std::abs(v - 2.0) > alpha) ++misses;
    sum += v;
    sum_sq += v * v;
  }
  const double expected = std::exp(-2.0 * alpha * budget.epsilon / 150.0);
  EXPECT_NEAR(static_cast<double>(misses) / reps, expected, 0.005);
  // Standard deviation of Lap(n_x/(2 eps)) is sqrt(2) * n_x / (2 eps).
  const double mean = sum / reps;
  const double sd = std::sqrt(sum_sq / reps - mean * mean);
  EXPECT_NEAR(sd / (std::sqrt(2.0) * 150.0 / 2.0), 1.0, 0.02);
}

TEST(NoisedLog, ZeroNoiseRecoversTheRatio) {
  const CountTable t(100, 50, 150, 150);
  EXPECT_DOUBLE_EQ(
      noised_log_with_noise(t, PrivacyBudget(1.0), /*debias=*/false, 0.0).value,
      2.0);
}

TEST(NoisedLog, DebiasFactorAtTwiceLog2) {
  const CountTable t(100, 50, 150, 150);
  const RatioEstimate est =
      noised_log_with_noise(t, PrivacyBudget(2.0 * kLog2), /*debias=*/true, 0.0);
  EXPECT_NEAR(est.value, 2.0 * 0.75, 1e-12);
  EXPECT_EQ(est.method, EstimatorMethod::kNoisedLogDebiased);
}

TEST(NoisedLog, DebiasRequiresEpsilonAboveLog2) {
  const CountTable t(100, 50, 150, 150);
  RngHandle rng(1);
  EXPECT_THROW(noised_log(rng, t, PrivacyBudget(0.5), /*debias=*/true),
               std::domain_error);
  EXPECT_THROW(noised_log(rng, t, PrivacyBudget(kLog2), /*debias=*/true),
               std::domain_error);
}

TEST(NoisedLog, DebiasedMeanIsUnbiased) {
  // 1e7 replicates at the two tables; the debiased mean must sit within
  // three standard errors of the exact ratio.
  struct Case {
    long long x, y;
    double eps;
  };
  for (const Case c : {Case{100, 50, 2.0}, Case{60, 60, 1.5}}) {
    const CountTable t(c.x, c.y, 150, 150);
    const PrivacyBudget budget(c.eps);
    const double z = t.ratio();
    double sum = 0.0, sum_sq = 0.0;
    const int reps = 10000000;
    for (int rep = 0; rep < reps; ++rep) {
      RngHandle rng(60601, static_cast<std::uint64_t>(rep));
      const double v = noised_log(rng, t, budget, /*debias=*/true).value;
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / reps;
    const double se =
        std::sqrt((sum_sq / reps - mean * mean) / static_cast<double>(reps));
    EXPECT_NEAR(mean, z, 3.0 * se) << "x=" << c.x << " y=" << c.y;
  }
}

TEST(NoisedLog, DrawsExactlyOneVariate) {
  RngHandle rng(3);
  noised_log(rng, CountTable(10, 10, 20, 20), PrivacyBudget(1.0));
  EXPECT_EQ(rng.draws(), 1u);
}

TEST(LocalSensitivity, ClosedFormBranches) {
  EXPECT_DOUBLE_EQ(local_sensitivity_ratio(CountTable(40, 100, 150, 150)), 0.01);
  EXPECT_NEAR(local_sensitivity_ratio(CountTable(100, 50, 150, 150)), 100.0 / 2450.0,
              1e-15);
  EXPECT_NEAR(local_sensitivity_ratio(CountTable(100, 100, 150, 150)),
              100.0 / 9900.0, 1e-15);
  EXPECT_GT(local_sensitivity_ratio(CountTable(100, 100, 150, 150)), 1.0 / 100.0);
}

TEST(LocalSensitivity, RejectsDenominatorBelowTwo) {
  EXPECT_THROW(local_sensitivity_ratio(CountTable(5, 1, 10, 10)), std::domain_error);
}

TEST(LocalSensitivity, MatchesNeighborEnumeration) {
  // Interior tables, where the closed form applies exactly.
  RngHandle rng(8);
  for (int i = 0; i < 200; ++i) {
    const long long x = 2 + static_cast<long long>(rng.next_uniform() * 96.0);
    const long long y = 2 + static_cast<long long>(rng.next_uniform() * 96.0);
    const CountTable t(x, y, 100, 100);
    if (x >= 100 || y >= 100) continue;
    EXPECT_NEAR(local_sensitivity_ratio(t), brute_force_local_sensitivity(x, y, 100, 100),
                1e-12)
        << "x=" << x << " y=" << y;
  }
}

TEST(MaxLsAtDistance, ReducesToLocalSensitivityAtZero) {
  const CountTable t(100, 50, 150, 150);
  EXPECT_NEAR(max_ls_at_distance(t, 0), 100.0 / 2450.0, 1e-15);
}

TEST(MaxLsAtDistance, ClosedFormCases) {
  const CountTable t(100, 50, 150, 150);
  EXPECT_NEAR(max_ls_at_distance(t, 18), 100.0 / (32.0 * 31.0), 1e-15);
  // Past y - m <= 1 the mass moves into the numerator, capped by n_x.
  EXPECT_DOUBLE_EQ(max_ls_at_distance(t, 60), std::min(150.0, 111.0) / 2.0);
}

TEST(MaxLsAtDistance, MatchesDistanceEnumeration) {
  const CountTable t(100, 50, 150, 150);
  for (const long long m : {0ll, 1ll, 5ll, 18ll, 48ll, 49ll, 60ll, 120ll}) {
    EXPECT_NEAR(max_ls_at_distance(t, m), brute_force_max_ls(t, m), 1e-12)
        << "m = " << m;
  }
  const CountTable small(7, 9, 20, 20);
  for (long long m = 0; m <= 25; ++m) {
    EXPECT_NEAR(max_ls_at_distance(small, m), brute_force_max_ls(small, m), 1e-12)
        << "m = " << m;
  }
}

TEST(MaxLsAtDistance, NondecreasingInDistance) {
  RngHandle rng(9);
  for (int i = 0; i < 50; ++i) {
    const long long x = 1 + static_cast<long long>(rng.next_uniform() * 99.0);
    const long long y = 2 + static_cast<long long>(rng.next_uniform() * 98.0);
    const CountTable t(x, y, 100, 100);
    double prev = max_ls_at_distance(t, 0);
    for (long long m = 1; m <= t.n_x + t.n_y; ++m) {
      const double cur = max_ls_at_distance(t, m);
      ASSERT_GE(cur, prev - 1e-15) << "x=" << x << " y=" << y << " m=" << m;
      prev = cur;
    }
  }
}

TEST(SmoothSensitivity, MatchesIndependentScan) {
  const CountTable t(100, 50, 150, 150);
  const PrivacyBudget budget(1.0, 1.0 / 150.0);
  const double smooth = smooth_sensitivity_ratio(t, budget);
  // Value frozen from an independent scan over the full distance range.
  EXPECT_NEAR(smooth, 0.7440023455839911, 1e-12);

  const double beta = budget.epsilon / (2.0 * std::log(2.0 / budget.delta));
  double expected = 0.0;
  for (long long m = 0; m <= t.n_x + t.n_y; ++m) {
    expected = std::max(expected,
                        std::exp(-beta * static_cast<double>(m)) *
                            brute_force_max_ls(t, m));
  }
  EXPECT_NEAR(smooth, expected, 1e-12);
}

TEST(SmoothSensitivity, BoundedBelowByLocalSensitivity) {
  RngHandle rng(10);
  for (int i = 0; i < 40; ++i) {
    const long long x = 1 + static_cast<long long>(rng.next_uniform() * 99.0);
    const long long y = 2 + static_cast<long long>(rng.next_uniform() * 98.0);
    const double eps = 0.2 + 3.0 * rng.next_uniform();
    const double delta = 0.001 + 0.9 * rng.next_uniform();
    const CountTable t(x, y, 100, 100);
    EXPECT_GE(smooth_sensitivity_ratio(t, PrivacyBudget(eps, delta)),
              local_sensitivity_ratio(t) - 1e-15);
  }
}

TEST(SmoothSensitivity, LargeDeltaCollapsesToLocalSensitivity) {
  const CountTable t(100, 50, 150, 150);
  const double smooth = smooth_sensitivity_ratio(t, PrivacyBudget(2.0, 0.9));
  EXPECT_NEAR(smooth, local_sensitivity_ratio(t), 1e-12);
}

TEST(SmoothSensitivity, RequiresPositiveDelta) {
  const CountTable t(100, 50, 150, 150);
  EXPECT_THROW(smooth_sensitivity_ratio(t, PrivacyBudget(1.0, 0.0)),
               std::domain_error);
}

TEST(SmoothSensitivityEstimate, ZeroNoiseRecoversTheRatio) {
  const CountTable t(100, 50, 150, 150);
  EXPECT_DOUBLE_EQ(
      smooth_sensitivity_estimate_with_noise(t, PrivacyBudget(1.0, 0.01), 0.0).value,
      2.0);
}

TEST(SmoothSensitivityEstimate, SampleAccuracyMatchesTheLaplaceTail) {
  const CountTable t(100, 50, 150, 150);
  const PrivacyBudget budget(1.0, 1.0 / 150.0);
  const double alpha = 0.1;
  const double smooth = smooth_sensitivity_ratio(t, budget);
  const double expected = 1.0 - std::exp(-alpha * budget.epsilon / (2.0 * smooth));
  const int reps = 1000000;
  int hits = 0;
  for (int rep = 0; rep < reps; ++rep) {
    RngHandle rng(1313, static_cast<std::uint64_t>(rep));
    if (std::abs(smooth_sensitivity_estimate(rng, t, budget).value - 2.0) <= alpha) {
      ++hits;
    }
  }
  EXPECT_NEAR(static_cast<double>(hits) / reps, expected, 0.005);
}

TEST(SmoothSensitivityEstimate, LargerDeltaGivesTighterNoise) {
  const CountTable t(100, 50, 150, 150);
  const double tight = smooth_sensitivity_ratio(t, PrivacyBudget(1.0, 0.1));
  const double loose = smooth_sensitivity_ratio(t, PrivacyBudget(1.0, 0.001));
  EXPECT_LE(tight, loose);
}

TEST(PtrDistance, ZeroWhenAlreadyUnsafe) {
  const CountTable t(100, 50, 150, 150);
  EXPECT_EQ(ptr_distance_to_unsafe(t, local_sensitivity_ratio(t)), 0);
  EXPECT_EQ(ptr_distance_to_unsafe(t, 1e-6), 0);
}

TEST(PtrDistance, ScanExample) {
  const CountTable t(100, 50, 150, 150);
  EXPECT_LT(max_ls_at_distance(t, 17), 0.1);
  EXPECT_GE(max_ls_at_distance(t, 18), 0.1);
  EXPECT_EQ(ptr_distance_to_unsafe(t, 0.1), 18);
}

TEST(PtrDistance, UnattainableBoundHitsTheSentinel) {
  const CountTable t(100, 50, 150, 150);
  EXPECT_EQ(ptr_distance_to_unsafe(t, 1e9), 300);
}

TEST(ProposeTestRelease, FailsWhenTheDistanceIsZero) {
  const CountTable t(100, 50, 150, 150);
  const PrivacyBudget budget(1.0, 1.0 / 150.0);
  // gamma = 0 and zero test noise: 0 <= ln(1/delta)/eps1, so FAIL.
  const PtrOutcome outcome = propose_test_release_with_noise(
      t, budget, local_sensitivity_ratio(t), 0.0, 0.0);
  EXPECT_TRUE(outcome.failed());
  EXPECT_DOUBLE_EQ(outcome.gamma_hat, 0.0);
}

TEST(ProposeTestRelease, ReleasesWhenTheDistanceIsLarge) {
  const CountTable t(100, 50, 150, 150);
  const PrivacyBudget budget(1.0, 1.0 / 150.0);
  // An unattainable proposal gives gamma = n, far above the threshold.
  const PtrOutcome outcome =
      propose_test_release_with_noise(t, budget, 1e9, 0.0, 0.0);
  ASSERT_FALSE(outcome.failed());
  EXPECT_DOUBLE_EQ(outcome.gamma_hat, 300.0);
  EXPECT_DOUBLE_EQ(outcome.estimate->value, 2.0);
  EXPECT_EQ(outcome.estimate->method, EstimatorMethod::kPtr);
}

TEST(ProposeTestRelease, FailureProbabilityMatchesTheLaplaceCdf) {
  const CountTable t(100, 50, 150, 150);
  const PrivacyBudget budget(1.0, 1.0 / 150.0);
  const double proposal = 0.1;  // gamma = 18
  const double eps1 = budget.epsilon / 2.0;
  const double threshold = std::log(1.0 / budget.delta) / eps1;
  const double expected = laplace_cdf(LaplaceDist(18.0, 1.0 / eps1), threshold);
  const int reps = 1000000;
  int failures = 0;
  for (int rep = 0; rep < reps; ++rep) {
    RngHandle rng(909, static_cast<std::uint64_t>(rep));
    if (propose_test_release(rng, t, budget, proposal).failed()) ++failures;
  }
  EXPECT_NEAR(static_cast<double>(failures) / reps, expected, 0.005);
}

TEST(ProposeTestRelease, DrawsAtMostTwoVariates) {
  const CountTable t(100, 50, 150, 150);
  const PrivacyBudget budget(1.0, 1.0 / 150.0);
  RngHandle rng(3);
  propose_test_release(rng, t, budget, 1e9);  // always released
  EXPECT_EQ(rng.draws(), 2u);
  RngHandle rng2(3);
  propose_test_release(rng2, t, PrivacyBudget(1.0, 1e-12), 1e9);
  EXPECT_LE(rng2.draws(), 2u);
}

TEST(Estimators, RecordTheBudgetTheyWereGiven) {
  const CountTable t(100, 50, 150, 150);
  RngHandle rng(77);
  const PrivacyBudget pure(1.25);
  EXPECT_DOUBLE_EQ(laplace_noised_counts(rng, t, pure).budget_spent.epsilon, 1.25);
  EXPECT_DOUBLE_EQ(naive_relative_risk(rng, t, pure).budget_spent.epsilon, 1.25);
  EXPECT_DOUBLE_EQ(noised_log(rng, t, pure).budget_spent.epsilon, 1.25);
  const PrivacyBudget approx(1.25, 0.01);
  EXPECT_DOUBLE_EQ(smooth_sensitivity_estimate(rng, t, approx).budget_spent.delta,
                   0.01);
  const PtrOutcome outcome = propose_test_release(rng, t, approx, 1e9);
  EXPECT_DOUBLE_EQ(outcome.estimate->budget_spent.epsilon, 1.25);
}

TEST(Estimators, LocalSensitivityMethodsReleaseOnlyTheRatio) {
  const CountTable t(100, 50, 150, 150);
  RngHandle rng(78);
  const RatioEstimate smooth =
      smooth_sensitivity_estimate(rng, t, PrivacyBudget(1.0, 0.01));
  EXPECT_FALSE(smooth.x_tilde.has_value());
  EXPECT_FALSE(smooth.y_tilde.has_value());
  const RatioEstimate naive = naive_relative_risk(rng, t, PrivacyBudget(1.0));
  EXPECT_FALSE(naive.x_tilde.has_value());
  const RatioEstimate log_est = noised_log(rng, t, PrivacyBudget(1.0));
  EXPECT_FALSE(log_est.x_tilde.has_value());
}

TEST(Estimators, RejectZeroCounts) {
  RngHandle rng(5);
  const PrivacyBudget budget(1.0);
  EXPECT_THROW(laplace_noised_counts(rng, CountTable(0, 50, 150, 150), budget),
               std::domain_error);
  EXPECT_THROW(laplace_noised_counts(rng, CountTable(50, 0, 150, 150), budget),
               std::domain_error);
  EXPECT_THROW(noised_log(rng, CountTable(0, 50, 150, 150), budget),
               std::domain_error);
  EXPECT_THROW(naive_relative_risk(rng, CountTable(50, 0, 150, 150), budget),
               std::domain_error);
}

TEST(Estimators, PureMechanismsRejectNonzeroDelta) {
  RngHandle rng(5);
  const CountTable t(100, 50, 150, 150);
  EXPECT_THROW(laplace_noised_counts(rng, t, PrivacyBudget(1.0, 0.1)),
               std::invalid_argument);
  EXPECT_THROW(noised_log(rng, t, PrivacyBudget(1.0, 0.1)), std::invalid_argument);
  EXPECT_THROW(naive_relative_risk(rng, t, PrivacyBudget(1.0, 0.1)),
               std::invalid_argument);
}

TEST(Estimators, LocalSensitivityMethodsRejectZeroDelta) {
  RngHandle rng(5);
  const CountTable t(100, 50, 150, 150);
  EXPECT_THROW(smooth_sensitivity_estimate(rng, t, PrivacyBudget(1.0)),
               std::domain_error);
  EXPECT_THROW(propose_test_release(rng, t, PrivacyBudget(1.0), 0.1),
               std::domain_error);
}

TEST(CountTable, Validation) {
  EXPECT_THROW(CountTable(-1, 5, 10, 10), std::invalid_argument);
  EXPECT_THROW(CountTable(11, 5, 10, 10), std::invalid_argument);
  EXPECT_THROW(CountTable(5, 5, 0, 10), std::invalid_argument);
  EXPECT_NO_THROW(CountTable(0, 0, 10, 10));
}

}  // namespace
}  // namespace dpratio
