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

#include "dpratio/mechanisms.h"

#include <cmath>
#include <stdexcept>

namespace dpratio {

PrivacyBudget::PrivacyBudget(double eps, double del) : epsilon(eps), delta(del) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("PrivacyBudget: epsilon must be a positive finite real");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw std::invalid_argument("PrivacyBudget: delta must lie in [0, 1)");
  }
}

Sensitivity::Sensitivity(double v) : value(v) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("Sensitivity: value must be a nonnegative finite real");
  }
}

double laplace_scale(const PrivacyBudget& budget, const Sensitivity& s) {
  if (s.value == 0.0) {
    throw std::domain_error("degenerate-scale: zero sensitivity gives a degenerate Laplace scale");
  }
  return s.value / budget.epsilon;
}

GaussianDist calibrate_gaussian_dwork(const PrivacyBudget& budget,
                                      const Sensitivity& s) {
  if (budget.epsilon >= 1.0) {
    throw std::domain_error(
        "out-of-validity: the explicit Gaussian calibration requires epsilon in (0, 1)");
  }
  if (!(budget.delta > 0.0)) {
    throw std::domain_error(
        "out-of-validity: the Gaussian mechanism requires delta in (0, 1)");
  }
  if (s.value == 0.0) {
    throw std::domain_error("degenerate-scale: zero sensitivity");
  }
  const double variance = 2.0 * std::log(1.25 / budget.delta) * s.value * s.value /
                          (budget.epsilon * budget.epsilon);
  return GaussianDist(0.0, std::sqrt(variance));
}

double gaussian_mechanism_delta(double epsilon, double sensitivity, double sigma) {
  const double a = sensitivity / (2.0 * sigma);
  const double b = epsilon * sigma / sensitivity;
  return gaussian_cdf(a - b) - std::exp(epsilon) * gaussian_cdf(-a - b);
}

GaussianDist calibrate_gaussian_balle(const PrivacyBudget& budget,
                                      const Sensitivity& s, double tol) {
  if (!(budget.delta > 0.0)) {
    throw std::domain_error(
        "out-of-validity: the Gaussian mechanism requires delta in (0, 1)");
  }
  if (s.value == 0.0) {
    throw std::domain_error("degenerate-scale: zero sensitivity");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("calibrate_gaussian_balle: tol must be positive");

  const double eps = budget.epsilon;
  const double delta = budget.delta;
  const double sens = s.value;
  const auto achieved = [&](double sigma) {
    return gaussian_mechanism_delta(eps, sens, sigma);
  };

  double lo = sens / (2.0 * eps) * 1e-3;
  double hi = eps < 1.0
                  ? calibrate_gaussian_dwork(budget, s).sigma
                  : sens * (1.0 + std::sqrt(2.0 * std::log(1.25 / delta))) / eps;
  int expansions = 0;
  while (achieved(hi) > delta) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 200) {
      throw std::runtime_error("calibrate_gaussian_balle: bracket expansion did not converge");
    }
  }
  while (achieved(lo) <= delta && lo > 1e-12 * hi) lo *= 0.5;

  // The achieved delta must be decreasing in sigma over the bracket, otherwise
  // bisection would be meaningless; probe before searching.
  {
    double prev = achieved(lo);
    for (int i = 1; i <= 16; ++i) {
      const double sigma = lo + (hi - lo) * i / 16.0;
      const double cur = achieved(sigma);
      if (cur > prev * (1.0 + 1e-9) + 1e-300) {
        throw std::runtime_error(
            "calibrate_gaussian_balle: achieved delta is not decreasing over the bracket");
      }
      prev = cur;
    }
  }

  int iterations = 0;
  while (hi - lo > tol * lo) {
    if (++iterations > 200) {
      throw std::runtime_error("calibrate_gaussian_balle: bisection did not converge");
    }
    const double mid = 0.5 * (lo + hi);
    if (achieved(mid) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return GaussianDist(0.0, hi);
}

double apply_noise(RngHandle& rng, double value, const LaplaceDist& noise) {
  if (noise.mu != 0.0) {
    throw std::invalid_argument("apply_noise: noise must be zero-mean");
  }
  return value + sample_laplace(rng, noise);
}

double apply_noise(RngHandle& rng, double value, const GaussianDist& noise) {
  if (noise.mu != 0.0) {
    throw std::invalid_argument("apply_noise: noise must be zero-mean");
  }
  return value + sample_gaussian(rng, noise);
}

}  // namespace dpratio
