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

#ifndef DPRATIO_ESTIMATORS_H_
#define DPRATIO_ESTIMATORS_H_

#include <optional>

#include "dpratio/mechanisms.h"
#include "dpratio/numerics.h"

namespace dpratio {

// Two counts with their (public) group sizes. Estimators additionally require
// x >= 1 and y >= 1; zero counts are rejected at the call boundary rather
// than silently clamped.
struct CountTable {
  long long x = 0;
  long long y = 0;
  long long n_x = 1;
  long long n_y = 1;

  CountTable(long long x_count, long long y_count, long long nx, long long ny);

  double ratio() const { return static_cast<double>(x) / static_cast<double>(y); }
};

enum class EstimatorMethod {
  kNoisedCounts,
  kNoisedCountsMaxed,
  kNaive,
  kNoisedLog,
  kNoisedLogDebiased,
  kSmoothSens,
  kPtr,
};

const char* estimator_method_name(EstimatorMethod method);

// A privatized ratio. x_tilde/y_tilde are present only for methods that
// actually form noised counts; the local-sensitivity methods release only the
// ratio itself.
struct RatioEstimate {
  std::optional<double> x_tilde;
  std::optional<double> y_tilde;
  double value = 0.0;
  EstimatorMethod method = EstimatorMethod::kNoisedCounts;
  PrivacyBudget budget_spent{1.0, 0.0};
};

// Result of propose-test-release: either an estimate or FAIL, plus the noised
// distance that drove the decision.
struct PtrOutcome {
  double gamma_hat = 0.0;
  std::optional<RatioEstimate> estimate;

  bool failed() const { return !estimate.has_value(); }
};

// --- Ratio of noised counts -------------------------------------------------
//
// Adds independent Lap(2/epsilon) noise to each count (an even split of the
// budget) and post-processes the ratio. With max_denominator the denominator
// is clamped at 1, which restores finite moments.
RatioEstimate laplace_noised_counts(RngHandle& rng, const CountTable& t,
                                    const PrivacyBudget& budget,
                                    bool max_denominator = false);

// Deterministic kernel given the two noise values, in numerator/denominator
// order. Exposed so callers can drive the estimator with known noise.
RatioEstimate laplace_noised_counts_with_noise(const CountTable& t,
                                               const PrivacyBudget& budget,
                                               double x_noise, double y_noise,
                                               bool max_denominator = false);

// --- Direct perturbation of the ratio ---------------------------------------
//
// X/Y + Lap(n_x/(2 epsilon)); the scale comes from the global sensitivity
// n_x/2 of the ratio over tables with positive counts.
RatioEstimate naive_relative_risk(RngHandle& rng, const CountTable& t,
                                  const PrivacyBudget& budget);
RatioEstimate naive_relative_risk_with_noise(const CountTable& t,
                                             const PrivacyBudget& budget,
                                             double noise);

// --- Perturbation of the log ratio -------------------------------------------
//
// (X/Y) * exp(Lap(log(2)/epsilon)); log(X) - log(Y) has global sensitivity
// log 2 over positive counts. The multiplicative noise biases the estimate by
// the factor 1/(1 - (log2/epsilon)^2); with debias the output is multiplied by
// that factor's inverse, which requires epsilon > log 2 for the Laplace
// moment generating function to exist.
RatioEstimate noised_log(RngHandle& rng, const CountTable& t,
                         const PrivacyBudget& budget, bool debias = false);
RatioEstimate noised_log_with_noise(const CountTable& t,
                                    const PrivacyBudget& budget, bool debias,
                                    double noise);

// --- Local/smooth sensitivity of the ratio -----------------------------------

// Local sensitivity of X/Y at the table: max(1/Y, X/(Y^2 - Y)). Requires
// y >= 2 (the formula divides by Y - 1).
double local_sensitivity_ratio(const CountTable& t);

// Maximum local sensitivity over tables at element distance m:
//   1/(Y-m)                      when X < Y-m,
//   X/((Y-m)(Y-m-1))             when X >= Y-m and Y-m >= 2,
//   min(n_x, X+m-Y+1)/2          when Y-m <= 1.
// Nondecreasing in m; reduces to the local sensitivity at m = 0.
double max_ls_at_distance(const CountTable& t, long long m);

// beta-smooth sensitivity with beta = epsilon / (2 ln(2/delta)):
// max over m in [0, n_x+n_y] of e^{-beta m} * max_ls_at_distance(t, m).
double smooth_sensitivity_ratio(const CountTable& t, const PrivacyBudget& budget);

// X/Y + Lap(2 S*/epsilon) with S* the smooth sensitivity above.
RatioEstimate smooth_sensitivity_estimate(RngHandle& rng, const CountTable& t,
                                          const PrivacyBudget& budget);
RatioEstimate smooth_sensitivity_estimate_with_noise(const CountTable& t,
                                                     const PrivacyBudget& budget,
                                                     double noise);

// --- Propose-test-release ----------------------------------------------------

// Element distance from the table to the nearest table whose local
// sensitivity reaches `proposed`, found by linear scan; returns n_x + n_y as
// an unattainable sentinel when no table qualifies.
long long ptr_distance_to_unsafe(const CountTable& t, double proposed);

// Splits the budget evenly (eps1 = eps2 = epsilon/2), privately tests the
// distance gamma, and on success releases X/Y + Lap(proposed/eps2). FAIL is
// a valid outcome, not an error.
PtrOutcome propose_test_release(RngHandle& rng, const CountTable& t,
                                const PrivacyBudget& budget, double proposed);
PtrOutcome propose_test_release_with_noise(const CountTable& t,
                                           const PrivacyBudget& budget,
                                           double proposed, double gamma_noise,
                                           double value_noise);

}  // namespace dpratio

#endif  // DPRATIO_ESTIMATORS_H_
