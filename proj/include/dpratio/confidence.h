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

#ifndef DPRATIO_CONFIDENCE_H_
#define DPRATIO_CONFIDENCE_H_

#include "dpratio/estimators.h"

namespace dpratio {

// Proportion estimates feeding the ratio CIs. The counts may be exact
// (noise_variance = 0) or privatized; noise_variance is the per-count
// variance of the additive noise (2b^2 for Laplace, sigma^2 for Gaussian).
// Noised counts must be clamped to >= 1 by the caller before construction;
// the CI operations reject nonpositive counts rather than clamping.
struct ProportionPair {
  double p_x = 0.0;
  double p_y = 0.0;
  long long n_x = 1;
  long long n_y = 1;
  double noise_variance = 0.0;

  ProportionPair(double px, double py, long long nx, long long ny,
                 double noise_var = 0.0);

  // Convenience constructor from (possibly noised) counts.
  static ProportionPair from_counts(double x, double y, long long nx,
                                    long long ny, double noise_var = 0.0);

  double x_count() const { return p_x * static_cast<double>(n_x); }
  double y_count() const { return p_y * static_cast<double>(n_y); }
  double ratio() const { return p_x / p_y; }
};

enum class CiMethod {
  kClassic,
  kPrivateAsymptotic,
  kConservativeGaussian,
  kConservativeLaplace,
};

const char* ci_method_name(CiMethod method);

// Two-sided interval at confidence `level` (e.g. 0.95). `level` here is the
// confidence coefficient 1 - gamma; the per-tail quantile used internally is
// 1 - (1-level)/2, kept distinct from the accuracy radius alpha.
struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;
  CiMethod method = CiMethod::kClassic;

  double width() const { return upper - lower; }
  bool contains(double value) const { return lower <= value && value <= upper; }
};

// Log-normal interval for the relative risk from exact counts:
//   exp(ln T +/- q * sqrt(1/X - 1/n_x + 1/Y - 1/n_y)),  T = (X/n_x)/(Y/n_y).
ConfidenceInterval classic_ci(const CountTable& t, double level);

// Normal-approximation interval around the (noised) ratio, ignoring the
// perturbation variance:
//   pt +/- q * pt * sqrt(1/Xt - 1/n_x + 1/Yt - 1/n_y).
ConfidenceInterval private_asymptotic_ci(const ProportionPair& pp, double level);

// Same interval widened by the perturbation term
// noise_variance * (1/Xt^2 + 1/Yt^2) under the square root. The method tag
// records which noise fed the counts; with noise_variance = 0 the interval
// coincides with the asymptotic one.
ConfidenceInterval conservative_ci(const ProportionPair& pp, double level,
                                   CiMethod method = CiMethod::kConservativeGaussian);

}  // namespace dpratio

#endif  // DPRATIO_CONFIDENCE_H_
