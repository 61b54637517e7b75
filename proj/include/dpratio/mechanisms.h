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

#ifndef DPRATIO_MECHANISMS_H_
#define DPRATIO_MECHANISMS_H_

#include "dpratio/numerics.h"

namespace dpratio {

// (epsilon, delta) privacy parameters. Pure-DP mechanisms require delta = 0;
// approximate-DP mechanisms require delta in (0, 1).
struct PrivacyBudget {
  double epsilon = 1.0;
  double delta = 0.0;

  PrivacyBudget(double eps, double del = 0.0);
};

// Global sensitivity of a query (max change over neighboring datasets).
struct Sensitivity {
  double value = 1.0;

  explicit Sensitivity(double v);
};

// Laplace-mechanism scale b = sensitivity / epsilon. Zero sensitivity would
// produce a degenerate scale and is rejected.
double laplace_scale(const PrivacyBudget& budget, const Sensitivity& s);

// Explicit Gaussian calibration sigma^2 = 2 ln(1.25/delta) sensitivity^2 /
// epsilon^2, valid only for epsilon in (0, 1) and delta in (0, 1).
GaussianDist calibrate_gaussian_dwork(const PrivacyBudget& budget,
                                      const Sensitivity& s);

// Delta achieved by a Gaussian mechanism with the given sigma:
//   Phi(s/(2 sigma) - eps sigma/s) - e^eps Phi(-s/(2 sigma) - eps sigma/s).
// The mechanism is (eps, delta)-DP exactly when this is <= delta.
double gaussian_mechanism_delta(double epsilon, double sensitivity,
                                double sigma);

// Tight Gaussian calibration: the minimal sigma (to relative tolerance `tol`)
// whose achieved delta does not exceed budget.delta, found by bracketing plus
// bisection. The returned sigma satisfies the bound and sigma*(1 - 10 tol)
// violates it.
GaussianDist calibrate_gaussian_balle(const PrivacyBudget& budget,
                                      const Sensitivity& s,
                                      double tol = 1e-9);

// value + one zero-mean variate. The noise distribution must have mu = 0.
double apply_noise(RngHandle& rng, double value, const LaplaceDist& noise);
double apply_noise(RngHandle& rng, double value, const GaussianDist& noise);

}  // namespace dpratio

#endif  // DPRATIO_MECHANISMS_H_
