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

#ifndef DPRATIO_ANALYSIS_H_
#define DPRATIO_ANALYSIS_H_

#include "dpratio/estimators.h"
#include "dpratio/mechanisms.h"

namespace dpratio {

// Sample-accuracy pair: the privatized output deviates from the exact sample
// statistic by more than alpha with probability at most beta.
struct AccuracyBound {
  double alpha = 0.0;
  double beta = 0.0;
};

// Parameters of a ratio of two independent Laplace variables with common
// scale b and positive locations mu1 (numerator) and mu2 (denominator).
struct RatioLawParams {
  double mu1 = 1.0;
  double mu2 = 1.0;
  double b = 1.0;

  RatioLawParams(double numerator_location, double denominator_location,
                 double scale);
};

// P(X1/X2 < a) in closed form, split into two branches on mu1/a >= mu2.
// Requires a > 0 and rejects |a - 1| < 1e-9 (the formula has (a-1) and (1-a)
// denominators); callers needing the CDF at 1 evaluate at 1 +/- 1e-6 and
// average. Results are clamped to [0, 1] only within 1e-12 of the boundary.
double ratio_of_laplace_cdf(const RatioLawParams& params, double a);

// Sample-accuracy bound for the unprocessed ratio of Laplace-noised counts:
// beta such that P(|Xt/Yt - Z| > alpha) = beta, exact in closed form.
// Requires 0 < alpha < Z and the (Z +/- alpha)^2 - 1 denominators bounded
// away from zero by 1e-9.
AccuracyBound noised_counts_accuracy(const CountTable& t,
                                     const PrivacyBudget& budget, double alpha);

// beta = 0.5 (alpha/Z + 1)^{-eps/log 2} + 0.5 (1 - alpha/Z)^{eps/log 2}; a
// function of the ratio only, not of its components.
AccuracyBound noised_log_accuracy(const CountTable& t,
                                  const PrivacyBudget& budget, double alpha);

// beta = exp(-2 alpha eps / n_x) for direct ratio perturbation; note the
// accuracy degrades as n_x grows.
AccuracyBound naive_accuracy(const CountTable& t, const PrivacyBudget& budget,
                             double alpha);

// E[Xt / max(Yt, 1)] for Laplace-noised counts, exact via the exponential
// integral. Throws std::range_error when eps*Y/2 leaves the overflow-safe
// range of ei (use the integral approximation there instead).
double maxed_ratio_expectation(const CountTable& t, const PrivacyBudget& budget);

// The integral approximation of the same expectation,
//   Z * (eps Y / 2)^2 * PV int_{-inf}^0 -e^u / (u^2 - (eps Y/2)^2) du,
// evaluated by adaptive quadrature with principal-value handling around the
// pole at u = -eps Y/2. Requires eps*Y/2 > 1.
double maxed_ratio_expectation_approx(const CountTable& t,
                                      const PrivacyBudget& budget);

// Bias accessors: expectation minus the exact ratio X/Y.
double noised_counts_bias_exact(const CountTable& t, const PrivacyBudget& budget);
double noised_counts_bias_approx(const CountTable& t, const PrivacyBudget& budget);

// P(Yt < 1) = 0.5 exp(-eps (Y - 1)/2) for Yt = Y + Lap(2/eps), Y >= 1.
double prob_denominator_below_one(long long y, const PrivacyBudget& budget);

namespace analysis_detail {

// The two branch formulas of ratio_of_laplace_cdf, exposed for continuity
// checks at the branch point a = mu1/mu2.
double ratio_cdf_upper_branch(const RatioLawParams& params, double a);
double ratio_cdf_lower_branch(const RatioLawParams& params, double a);

// PV int_{-inf}^0 -e^u/(u^2 - c^2) du for c > 1. Equals
// (1/(2c)) (e^{-c} Ei(c) - e^{c} Ei(-c)) analytically, which tests use as an
// independent route.
double principal_value_bias_integral(double c);

}  // namespace analysis_detail

}  // namespace dpratio

#endif  // DPRATIO_ANALYSIS_H_
