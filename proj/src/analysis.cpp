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

#include "dpratio/analysis.h"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "dpratio/numerics.h"

namespace dpratio {
namespace {

constexpr double kSingularityGuard = 1e-9;
constexpr double kBoundaryClamp = 1e-12;

// Clamp a probability to [0, 1] only when it is within kBoundaryClamp of the
// boundary; anything farther out is an internal inconsistency, not noise.
double clamp_probability(double v, const char* where) {
  if (v < 0.0) {
    if (v >= -kBoundaryClamp) return 0.0;
    throw std::runtime_error(std::string("internal-consistency: ") + where +
                             " produced " + std::to_string(v));
  }
  if (v > 1.0) {
    if (v <= 1.0 + kBoundaryClamp) return 1.0;
    throw std::runtime_error(std::string("internal-consistency: ") + where +
                             " produced " + std::to_string(v));
  }
  return v;
}

// Recursive adaptive Simpson quadrature with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) {
    throw std::runtime_error("numerical: adaptive quadrature did not converge");
  }
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 60);
}

}  // namespace

RatioLawParams::RatioLawParams(double numerator_location,
                               double denominator_location, double scale)
    : mu1(numerator_location), mu2(denominator_location), b(scale) {
  if (!(b > 0.0)) throw std::invalid_argument("RatioLawParams: scale must be positive");
  if (!(mu1 > 0.0) || !(mu2 > 0.0)) {
    throw std::invalid_argument("RatioLawParams: both locations must be positive");
  }
}

namespace analysis_detail {

double ratio_cdf_upper_branch(const RatioLawParams& p, double a) {
  // mu1/a >= mu2 branch.
  const double c = 2.0 * (a + 1.0) * (a - 1.0);
  return (-1.0 / c) * std::exp((p.mu2 * a - p.mu1) / p.b) +
         (a * a / c) * std::exp((p.mu2 - p.mu1 / a) / p.b);
}

double ratio_cdf_lower_branch(const RatioLawParams& p, double a) {
  // mu1/a < mu2 branch.
  const double c = 2.0 * (a + 1.0) * (1.0 - a);
  return 1.0 + std::exp((p.mu1 / a - p.mu2) / p.b) * (a * a / c) -
         std::exp((p.mu1 - a * p.mu2) / p.b) * (1.0 / c);
}

double principal_value_bias_integral(double c) {
  if (!(c > 1.0)) {
    throw std::domain_error("principal_value_bias_integral: requires c > 1");
  }
  constexpr double kTol = 1e-12;
  const auto f = [c](double u) { return std::exp(u) / ((c - u) * (c + u)); };

  // Beyond u ~ -44 the e^u factor is below 1e-19, so when the pole at -c lies
  // out there the whole tail (pole included, by PV cancellation) is
  // negligible and a plain integral over [-44, 0] suffices.
  if (c >= 45.0) return integrate(f, -44.0, 0.0, kTol);

  const double r = std::min(1.0, c / 2.0);
  // Symmetric principal value around the pole: with u = -c + t,
  // f(u) = h(t)/t for h(t) = e^{t-c}/(2c - t), and
  // PV int_{-r}^{r} h(t)/t dt = int_0^r (h(t) - h(-t))/t dt.
  const auto h = [c](double t) { return std::exp(t - c) / (2.0 * c - t); };
  const auto symmetric = [&](double t) {
    if (t < 1e-12) {
      return 2.0 * std::exp(-c) * (1.0 / (2.0 * c) + 1.0 / (4.0 * c * c));
    }
    return (h(t) - h(-t)) / t;
  };
  return integrate(f, -60.0, -c - r, kTol) + integrate(symmetric, 0.0, r, kTol) +
         integrate(f, -c + r, 0.0, kTol);
}

}  // namespace analysis_detail

double ratio_of_laplace_cdf(const RatioLawParams& params, double a) {
  if (!(a > 0.0)) {
    throw std::domain_error("ratio_of_laplace_cdf: the threshold must be positive");
  }
  if (std::abs(a - 1.0) < kSingularityGuard) {
    throw std::domain_error(
        "singularity: ratio_of_laplace_cdf is singular at a = 1; evaluate at 1 +/- 1e-6 and average");
  }
  const double value = params.mu1 / a >= params.mu2
                           ? analysis_detail::ratio_cdf_upper_branch(params, a)
                           : analysis_detail::ratio_cdf_lower_branch(params, a);
  return clamp_probability(value, "ratio_of_laplace_cdf");
}

AccuracyBound noised_counts_accuracy(const CountTable& t,
                                     const PrivacyBudget& budget, double alpha) {
  if (t.y < 1 || t.x < 1) {
    throw std::domain_error("positive-counts: accuracy bounds require x >= 1 and y >= 1");
  }
  const double z = t.ratio();
  if (!(alpha > 0.0) || alpha >= z) {
    throw std::domain_error("noised_counts_accuracy: requires 0 < alpha < X/Y");
  }
  const double lo = z - alpha;
  const double hi = z + alpha;
  const double third_denominator =
      (z * z + alpha * alpha - 1.0) * (z * z + alpha * alpha - 1.0) -
      4.0 * alpha * alpha * z * z;
  if (std::abs(lo - 1.0) < kSingularityGuard ||
      std::abs(hi - 1.0) < kSingularityGuard ||
      std::abs(third_denominator) < kSingularityGuard) {
    throw std::domain_error(
        "singularity: noised_counts_accuracy is singular when Z +/- alpha is 1");
  }
  const double eps = budget.epsilon;
  const double y = static_cast<double>(t.y);
  const double beta =
      (0.5 + 0.5 / (lo * lo - 1.0)) * std::exp(-eps * alpha * y / (2.0 * lo)) +
      (0.5 + 0.5 / (hi * hi - 1.0)) * std::exp(-eps * alpha * y / (2.0 * hi)) -
      (z * z + alpha * alpha - 1.0) / third_denominator *
          std::exp(-eps * alpha * y / 2.0);
  return {alpha, clamp_probability(beta, "noised_counts_accuracy")};
}

AccuracyBound noised_log_accuracy(const CountTable& t,
                                  const PrivacyBudget& budget, double alpha) {
  if (t.y < 1 || t.x < 1) {
    throw std::domain_error("positive-counts: accuracy bounds require x >= 1 and y >= 1");
  }
  const double z = t.ratio();
  if (!(alpha > 0.0) || alpha >= z) {
    throw std::domain_error("noised_log_accuracy: requires 0 < alpha < X/Y");
  }
  const double exponent = budget.epsilon / std::log(2.0);
  const double beta = 0.5 * std::pow(alpha / z + 1.0, -exponent) +
                      0.5 * std::pow(1.0 - alpha / z, exponent);
  return {alpha, clamp_probability(beta, "noised_log_accuracy")};
}

AccuracyBound naive_accuracy(const CountTable& t, const PrivacyBudget& budget,
                             double alpha) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("naive_accuracy: alpha must be positive");
  }
  const double beta =
      std::exp(-2.0 * alpha * budget.epsilon / static_cast<double>(t.n_x));
  return {alpha, clamp_probability(beta, "naive_accuracy")};
}

double maxed_ratio_expectation(const CountTable& t, const PrivacyBudget& budget) {
  if (t.y < 1) {
    throw std::domain_error("positive-counts: the maxed ratio requires y >= 1");
  }
  const double eps = budget.epsilon;
  const double y = static_cast<double>(t.y);
  const double c = eps * y / 2.0;
  if (c > 700.0) {
    throw std::range_error(
        "range: eps*Y/2 leaves the overflow-safe range of ei; use the integral approximation");
  }
  const double bracket = 0.5 * std::exp(eps * (1.0 - y) / 2.0) +
                         (eps / 4.0) * std::exp(-c) * (ei(c) - ei(eps / 2.0)) -
                         (eps / 4.0) * std::exp(c) * ei(-c);
  return static_cast<double>(t.x) * bracket;
}

double maxed_ratio_expectation_approx(const CountTable& t,
                                      const PrivacyBudget& budget) {
  if (t.y < 1) {
    throw std::domain_error("positive-counts: the maxed ratio requires y >= 1");
  }
  const double c = budget.epsilon * static_cast<double>(t.y) / 2.0;
  if (!(c > 1.0)) {
    throw std::domain_error(
        "maxed_ratio_expectation_approx: requires eps*Y/2 > 1");
  }
  return t.ratio() * c * c * analysis_detail::principal_value_bias_integral(c);
}

double noised_counts_bias_exact(const CountTable& t, const PrivacyBudget& budget) {
  return maxed_ratio_expectation(t, budget) - t.ratio();
}

double noised_counts_bias_approx(const CountTable& t, const PrivacyBudget& budget) {
  return maxed_ratio_expectation_approx(t, budget) - t.ratio();
}

double prob_denominator_below_one(long long y, const PrivacyBudget& budget) {
  if (y < 1) throw std::domain_error("prob_denominator_below_one: requires y >= 1");
  const LaplaceDist noised(static_cast<double>(y), 2.0 / budget.epsilon);
  return laplace_cdf(noised, 1.0);
}

}  // namespace dpratio
