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

namespace dpratio {
namespace {

constexpr double kLog2 = 0.69314718055994530941723212145818;

void require_positive_counts(const CountTable& t) {
  if (t.x < 1 || t.y < 1) {
    throw std::domain_error(
        "positive-counts: estimators require x >= 1 and y >= 1");
  }
}

void require_pure_dp(const PrivacyBudget& budget) {
  if (budget.delta != 0.0) {
    throw std::invalid_argument("pure-dp: this estimator spends delta = 0; pass a zero-delta budget");
  }
}

void require_approximate_dp(const PrivacyBudget& budget) {
  if (!(budget.delta > 0.0)) {
    throw std::domain_error("approximate-dp: this estimator requires delta in (0, 1)");
  }
}

}  // namespace

CountTable::CountTable(long long x_count, long long y_count, long long nx,
                       long long ny)
    : x(x_count), y(y_count), n_x(nx), n_y(ny) {
  if (n_x < 1 || n_y < 1) {
    throw std::invalid_argument("CountTable: group sizes must be positive");
  }
  if (x < 0 || x > n_x || y < 0 || y > n_y) {
    throw std::invalid_argument("CountTable: counts must satisfy 0 <= x <= n_x and 0 <= y <= n_y");
  }
}

const char* estimator_method_name(EstimatorMethod method) {
  switch (method) {
    case EstimatorMethod::kNoisedCounts: return "noised-counts";
    case EstimatorMethod::kNoisedCountsMaxed: return "noised-counts-maxed";
    case EstimatorMethod::kNaive: return "naive";
    case EstimatorMethod::kNoisedLog: return "noised-log";
    case EstimatorMethod::kNoisedLogDebiased: return "noised-log-debiased";
    case EstimatorMethod::kSmoothSens: return "smooth-sens";
    case EstimatorMethod::kPtr: return "ptr";
  }
  return "unknown";
}

RatioEstimate laplace_noised_counts_with_noise(const CountTable& t,
                                               const PrivacyBudget& budget,
                                               double x_noise, double y_noise,
                                               bool max_denominator) {
  require_positive_counts(t);
  require_pure_dp(budget);
  RatioEstimate est;
  est.x_tilde = static_cast<double>(t.x) + x_noise;
  est.y_tilde = static_cast<double>(t.y) + y_noise;
  est.method = max_denominator ? EstimatorMethod::kNoisedCountsMaxed
                               : EstimatorMethod::kNoisedCounts;
  const double denom = max_denominator ? std::max(*est.y_tilde, 1.0) : *est.y_tilde;
  est.value = *est.x_tilde / denom;
  est.budget_spent = budget;
  return est;
}

RatioEstimate laplace_noised_counts(RngHandle& rng, const CountTable& t,
                                    const PrivacyBudget& budget,
                                    bool max_denominator) {
  // Each count gets half the budget: Lap(1/(eps/2)) = Lap(2/eps).
  const LaplaceDist noise(0.0, laplace_scale(PrivacyBudget(budget.epsilon / 2.0),
                                             Sensitivity(1.0)));
  const double lx = sample_laplace(rng, noise);
  const double ly = sample_laplace(rng, noise);
  return laplace_noised_counts_with_noise(t, budget, lx, ly, max_denominator);
}

RatioEstimate naive_relative_risk_with_noise(const CountTable& t,
                                             const PrivacyBudget& budget,
                                             double noise) {
  if (t.y < 1) {
    throw std::domain_error("positive-counts: the ratio requires y >= 1");
  }
  require_pure_dp(budget);
  RatioEstimate est;
  est.method = EstimatorMethod::kNaive;
  est.value = t.ratio() + noise;
  est.budget_spent = budget;
  return est;
}

RatioEstimate naive_relative_risk(RngHandle& rng, const CountTable& t,
                                  const PrivacyBudget& budget) {
  const LaplaceDist noise(
      0.0, laplace_scale(budget, Sensitivity(static_cast<double>(t.n_x) / 2.0)));
  return naive_relative_risk_with_noise(t, budget, sample_laplace(rng, noise));
}

RatioEstimate noised_log_with_noise(const CountTable& t,
                                    const PrivacyBudget& budget, bool debias,
                                    double noise) {
  require_positive_counts(t);
  require_pure_dp(budget);
  if (debias && budget.epsilon <= kLog2) {
    throw std::domain_error("invalid-debias: epsilon must exceed log 2");
  }
  RatioEstimate est;
  est.method = debias ? EstimatorMethod::kNoisedLogDebiased
                      : EstimatorMethod::kNoisedLog;
  est.value = t.ratio() * std::exp(noise);
  if (debias) {
    const double r = kLog2 / budget.epsilon;
    est.value *= 1.0 - r * r;
  }
  est.budget_spent = budget;
  return est;
}

RatioEstimate noised_log(RngHandle& rng, const CountTable& t,
                         const PrivacyBudget& budget, bool debias) {
  const LaplaceDist noise(0.0, laplace_scale(budget, Sensitivity(kLog2)));
  return noised_log_with_noise(t, budget, debias, sample_laplace(rng, noise));
}

double local_sensitivity_ratio(const CountTable& t) {
  if (t.y <= 1) {
    throw std::domain_error("local_sensitivity_ratio: requires y >= 2");
  }
  const double x = static_cast<double>(t.x);
  const double y = static_cast<double>(t.y);
  return t.x < t.y ? 1.0 / y : x / (y * (y - 1.0));
}

double max_ls_at_distance(const CountTable& t, long long m) {
  if (m < 0) throw std::invalid_argument("max_ls_at_distance: m must be nonnegative");
  const double x = static_cast<double>(t.x);
  const double y = static_cast<double>(t.y);
  const double ym = y - static_cast<double>(m);
  if (ym <= 1.0) {
    // All moves push Y down to 1 and the remainder push X up, capped at n_x.
    const double x_reachable =
        std::min(static_cast<double>(t.n_x), x + static_cast<double>(m) - y + 1.0);
    return x_reachable / 2.0;
  }
  if (x < ym) return 1.0 / ym;
  return x / (ym * (ym - 1.0));
}

double smooth_sensitivity_ratio(const CountTable& t, const PrivacyBudget& budget) {
  require_approximate_dp(budget);
  const double beta = budget.epsilon / (2.0 * std::log(2.0 / budget.delta));
  const long long n = t.n_x + t.n_y;
  double best = 0.0;
  for (long long m = 0; m <= n; ++m) {
    const double candidate = std::exp(-beta * static_cast<double>(m)) *
                             max_ls_at_distance(t, m);
    best = std::max(best, candidate);
  }
  return best;
}

RatioEstimate smooth_sensitivity_estimate_with_noise(const CountTable& t,
                                                     const PrivacyBudget& budget,
                                                     double noise) {
  require_positive_counts(t);
  require_approximate_dp(budget);
  RatioEstimate est;
  est.method = EstimatorMethod::kSmoothSens;
  est.value = t.ratio() + noise;
  est.budget_spent = budget;
  return est;
}

RatioEstimate smooth_sensitivity_estimate(RngHandle& rng, const CountTable& t,
                                          const PrivacyBudget& budget) {
  const double smooth = smooth_sensitivity_ratio(t, budget);
  const LaplaceDist noise(0.0, 2.0 * smooth / budget.epsilon);
  return smooth_sensitivity_estimate_with_noise(t, budget,
                                                sample_laplace(rng, noise));
}

long long ptr_distance_to_unsafe(const CountTable& t, double proposed) {
  if (!(proposed > 0.0)) {
    throw std::invalid_argument("ptr_distance_to_unsafe: proposed bound must be positive");
  }
  const long long n = t.n_x + t.n_y;
  // max_ls_at_distance is nondecreasing in m, so the first hit is the answer.
  for (long long m = 0; m <= n; ++m) {
    if (max_ls_at_distance(t, m) >= proposed) return m;
  }
  return n;
}

PtrOutcome propose_test_release_with_noise(const CountTable& t,
                                           const PrivacyBudget& budget,
                                           double proposed, double gamma_noise,
                                           double value_noise) {
  require_positive_counts(t);
  require_approximate_dp(budget);
  const double eps1 = budget.epsilon / 2.0;
  const double gamma = static_cast<double>(ptr_distance_to_unsafe(t, proposed));

  PtrOutcome outcome;
  outcome.gamma_hat = gamma + gamma_noise;
  if (outcome.gamma_hat <= std::log(1.0 / budget.delta) / eps1) {
    return outcome;  // FAIL
  }
  RatioEstimate est;
  est.method = EstimatorMethod::kPtr;
  est.value = t.ratio() + value_noise;
  est.budget_spent = budget;
  outcome.estimate = est;
  return outcome;
}

PtrOutcome propose_test_release(RngHandle& rng, const CountTable& t,
                                const PrivacyBudget& budget, double proposed) {
  require_positive_counts(t);
  require_approximate_dp(budget);
  if (!(proposed > 0.0)) {
    throw std::invalid_argument("propose_test_release: proposed bound must be positive");
  }
  const double eps1 = budget.epsilon / 2.0;
  const double eps2 = budget.epsilon / 2.0;
  const LaplaceDist gamma_noise(0.0, 1.0 / eps1);
  const double gn = sample_laplace(rng, gamma_noise);

  const double gamma = static_cast<double>(ptr_distance_to_unsafe(t, proposed));
  const double gamma_hat = gamma + gn;
  if (gamma_hat <= std::log(1.0 / budget.delta) / eps1) {
    PtrOutcome outcome;
    outcome.gamma_hat = gamma_hat;
    return outcome;
  }
  const LaplaceDist value_noise(0.0, proposed / eps2);
  return propose_test_release_with_noise(t, budget, proposed, gn,
                                         sample_laplace(rng, value_noise));
}

}  // namespace dpratio
