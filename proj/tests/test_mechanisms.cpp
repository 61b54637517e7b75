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

#include "gtest/gtest.h"

namespace dpratio {
namespace {

TEST(LaplaceScale, IdentitySubstitutions) {
  EXPECT_DOUBLE_EQ(laplace_scale(PrivacyBudget(1.0), Sensitivity(1.0)), 1.0);
  // Half the budget per count gives the Lap(2/eps) scale used throughout.
  EXPECT_DOUBLE_EQ(laplace_scale(PrivacyBudget(0.5), Sensitivity(1.0)), 2.0);
  EXPECT_DOUBLE_EQ(laplace_scale(PrivacyBudget(2.0), Sensitivity(0.5)), 0.25);
}

TEST(LaplaceScale, RejectsZeroSensitivity) {
  EXPECT_THROW(laplace_scale(PrivacyBudget(1.0), Sensitivity(0.0)),
               std::domain_error);
}

TEST(LaplaceScale, Homogeneity) {
  RngHandle rng(17);
  for (int i = 0; i < 50; ++i) {
    const double eps = 0.05 + 3.0 * rng.next_uniform();
    const double sens = 0.1 + 5.0 * rng.next_uniform();
    const double k = 0.5 + 4.0 * rng.next_uniform();
    const double base = laplace_scale(PrivacyBudget(eps), Sensitivity(sens));
    EXPECT_NEAR(laplace_scale(PrivacyBudget(eps), Sensitivity(k * sens)),
                k * base, 1e-12 * k * base);
    EXPECT_NEAR(laplace_scale(PrivacyBudget(k * eps), Sensitivity(sens)),
                base / k, 1e-12 * base / k);
  }
}

TEST(CalibrateGaussianDwork, ReferenceValue) {
  const GaussianDist d =
      calibrate_gaussian_dwork(PrivacyBudget(0.5, 1e-4), Sensitivity(1.0));
  EXPECT_NEAR(d.variance(), 75.4678713863, 1e-8);
  EXPECT_NEAR(d.sigma, 8.6872246078, 1e-8);
  EXPECT_DOUBLE_EQ(d.mu, 0.0);
}

TEST(CalibrateGaussianDwork, RejectsOutOfValidityParameters) {
  EXPECT_THROW(calibrate_gaussian_dwork(PrivacyBudget(1.0, 1e-4), Sensitivity(1.0)),
               std::domain_error);
  EXPECT_THROW(calibrate_gaussian_dwork(PrivacyBudget(1.5, 1e-4), Sensitivity(1.0)),
               std::domain_error);
  EXPECT_THROW(calibrate_gaussian_dwork(PrivacyBudget(0.5, 0.0), Sensitivity(1.0)),
               std::domain_error);
  // delta = 1.25 is rejected at the budget boundary already.
  EXPECT_THROW(PrivacyBudget(0.5, 1.25), std::invalid_argument);
}

TEST(CalibrateGaussianDwork, DoublingSensitivityDoublesSigma) {
  const PrivacyBudget budget(0.3, 1e-5);
  const double s1 = calibrate_gaussian_dwork(budget, Sensitivity(1.0)).sigma;
  const double s2 = calibrate_gaussian_dwork(budget, Sensitivity(2.0)).sigma;
  EXPECT_NEAR(s2, 2.0 * s1, 1e-10 * s2);
}

TEST(CalibrateGaussianBalle, MinimalityUpToTolerance) {
  const PrivacyBudget budget(0.5, 1e-4);
  const GaussianDist d = calibrate_gaussian_balle(budget, Sensitivity(1.0));
  EXPECT_LE(gaussian_mechanism_delta(0.5, 1.0, d.sigma), 1e-4);
  EXPECT_GT(gaussian_mechanism_delta(0.5, 1.0, 0.9 * d.sigma), 1e-4);
}

TEST(CalibrateGaussianBalle, TighterThanExplicitCalibration) {
  const GaussianDist d =
      calibrate_gaussian_balle(PrivacyBudget(0.5, 1e-4), Sensitivity(1.0));
  EXPECT_LT(d.sigma, 8.6872246078);
  // Bisection reference computed with an independent root finder.
  EXPECT_NEAR(d.sigma, 5.893787790662495, 5.9e-7);
}

TEST(CalibrateGaussianBalle, CoverageProtocolSigma) {
  // Half budget per count: (eps/2, delta/2) at eps = 0.5, delta = 1e-4.
  const GaussianDist d =
      calibrate_gaussian_balle(PrivacyBudget(0.25, 5e-5), Sensitivity(1.0));
  EXPECT_NEAR(d.sigma, 11.65886222332667, 1.2e-6);
}

TEST(CalibrateGaussianBalle, MonotoneInDelta) {
  const Sensitivity sens(1.0);
  const double strict = calibrate_gaussian_balle(PrivacyBudget(0.5, 1e-4), sens).sigma;
  const double loose = calibrate_gaussian_balle(PrivacyBudget(0.5, 1e-2), sens).sigma;
  EXPECT_GT(strict, loose);
  EXPECT_NEAR(loose, 3.1469130986066816, 3.2e-7);
}

TEST(CalibrateGaussianBalle, WorksAboveEpsilonOne) {
  const GaussianDist d =
      calibrate_gaussian_balle(PrivacyBudget(2.0, 1e-6), Sensitivity(1.0));
  EXPECT_LE(gaussian_mechanism_delta(2.0, 1.0, d.sigma), 1e-6);
  EXPECT_GT(gaussian_mechanism_delta(2.0, 1.0, 0.9 * d.sigma), 1e-6);
}

TEST(CalibrateGaussianBalle, DominatesExplicitCalibrationOnAGrid) {
  for (int i = 0; i < 10; ++i) {
    const double eps = 0.05 + i * 0.1;
    for (int j = 0; j < 10; ++j) {
      const double delta = std::pow(10.0, -8.0 + 7.0 * j / 9.0);
      for (const double sens : {0.5, 1.0, 2.0}) {
        const PrivacyBudget budget(eps, delta);
        const double dwork = calibrate_gaussian_dwork(budget, Sensitivity(sens)).sigma;
        const double balle = calibrate_gaussian_balle(budget, Sensitivity(sens)).sigma;
        EXPECT_LE(balle, dwork * (1.0 + 1e-9))
            << "eps=" << eps << " delta=" << delta << " sens=" << sens;
      }
    }
  }
}

TEST(GaussianMechanismDelta, DecreasingInSigma) {
  double prev = gaussian_mechanism_delta(0.5, 1.0, 0.05);
  for (double sigma = 0.1; sigma <= 40.0; sigma += 0.1) {
    const double cur = gaussian_mechanism_delta(0.5, 1.0, sigma);
    EXPECT_LE(cur, prev + 1e-15) << "sigma = " << sigma;
    prev = cur;
  }
}

TEST(ApplyNoise, MeanIsUnbiased) {
  RngHandle rng(123);
  const LaplaceDist noise(0.0, 2.0);
  double sum = 0.0;
  const int reps = 1000000;
  for (int i = 0; i < reps; ++i) {
    sum += apply_noise(rng, 7.0, noise);
  }
  EXPECT_NEAR(sum / reps, 7.0, 0.01);
}

TEST(ApplyNoise, ConsecutiveCallsDifferDeterministically) {
  RngHandle a(55);
  RngHandle b(55);
  const LaplaceDist noise(0.0, 1.0);
  const double a1 = apply_noise(a, 0.0, noise);
  const double a2 = apply_noise(a, 0.0, noise);
  EXPECT_NE(a1, a2);
  EXPECT_EQ(a1, apply_noise(b, 0.0, noise));
  EXPECT_EQ(a2, apply_noise(b, 0.0, noise));
}

TEST(ApplyNoise, RejectsNonCenteredNoise) {
  RngHandle rng(1);
  EXPECT_THROW(apply_noise(rng, 1.0, LaplaceDist(0.5, 1.0)), std::invalid_argument);
  EXPECT_THROW(apply_noise(rng, 1.0, GaussianDist(0.5, 1.0)), std::invalid_argument);
}

TEST(PrivacyBudget, Validation) {
  EXPECT_THROW(PrivacyBudget(0.0), std::invalid_argument);
  EXPECT_THROW(PrivacyBudget(-1.0), std::invalid_argument);
  EXPECT_THROW(PrivacyBudget(1.0, -0.1), std::invalid_argument);
  EXPECT_THROW(PrivacyBudget(1.0, 1.0), std::invalid_argument);
  EXPECT_NO_THROW(PrivacyBudget(1.0, 0.0));
}

}  // namespace
}  // namespace dpratio
