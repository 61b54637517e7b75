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

#include "dpratio/numerics.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dpratio {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240;

// Power series Ei(x) = gamma + ln x + sum_k x^k/(k k!), for 0 < x < 40.
// All terms are positive, so there is no cancellation on this branch.
double ei_power_series(double x) {
  double sum = kEulerGamma + std::log(x);
  double factorial_term = 1.0;  // x^k / k!
  for (int k = 1; k <= 400; ++k) {
    factorial_term *= x / k;
    const double term = factorial_term / k;
    sum += term;
    if (term < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Asymptotic series Ei(x) ~ e^x/x sum_k k!/x^k for large x, truncated at the
// smallest term. At the x >= 40 switchover the truncation error is below
// 1e-15 relative, which matches the power series to better than 1e-12.
double ei_asymptotic(double x) {
  double sum = 1.0;
  double term = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double next = term * k / x;
    if (next >= term) break;  // series started diverging
    term = next;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  // e^x/x * sum, guarding against overflow of the final value.
  const double log_result = x - std::log(x) + std::log(sum);
  if (log_result > 709.0) {
    throw std::overflow_error("overflow: ei(" + std::to_string(x) +
                              ") exceeds the double range");
  }
  return std::exp(x) / x * sum;
}

// E1(t) for 0 < t <= 1 by the alternating series
// E1(t) = -gamma - ln t + sum_k (-1)^{k+1} t^k/(k k!).
double e1_series(double t) {
  double sum = -kEulerGamma - std::log(t);
  double factorial_term = 1.0;
  for (int k = 1; k <= 60; ++k) {
    factorial_term *= -t / k;
    const double term = -factorial_term / k;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// E1(t) for t > 1 by the modified-Lentz continued fraction
// E1(t) = e^{-t} / (t + 1 - 1/(t + 3 - 4/(t + 5 - ...))).
double e1_continued_fraction(double t) {
  constexpr double kTiny = 1e-300;
  double b = t + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 200; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-t);
}

}  // namespace

LaplaceDist::LaplaceDist(double location, double scale) : mu(location), b(scale) {
  if (!(b > 0.0) || !std::isfinite(b) || !std::isfinite(mu)) {
    throw std::invalid_argument("LaplaceDist: scale must be a positive finite real");
  }
}

GaussianDist::GaussianDist(double location, double stddev)
    : mu(location), sigma(stddev) {
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
    throw std::invalid_argument(
        "GaussianDist: standard deviation must be a positive finite real");
  }
}

RngHandle::RngHandle(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  engine_.seed(seq);
}

double RngHandle::next_uniform() {
  ++draws_;
  const std::uint64_t bits = engine_() >> 11;  // top 53 bits
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double ei(double x) {
  if (x == 0.0) {
    throw std::domain_error("ei: logarithmic singularity at x = 0");
  }
  if (x > 0.0) {
    return x < 40.0 ? ei_power_series(x) : ei_asymptotic(x);
  }
  // Ei(x) = -E1(-x) for x < 0. The naive power series cancels catastrophically
  // beyond t ~ 1, so the standard series/continued-fraction split is used.
  const double t = -x;
  if (t > 745.0) return -0.0;  // e^{-t} underflows; |Ei(x)| < 1e-324
  return t <= 1.0 ? -e1_series(t) : -e1_continued_fraction(t);
}

double laplace_cdf(const LaplaceDist& d, double x) {
  const double z = (x - d.mu) / d.b;
  if (z <= 0.0) return 0.5 * std::exp(z);
  return 1.0 - 0.5 * std::exp(-z);
}

double laplace_quantile(const LaplaceDist& d, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("laplace_quantile: p must lie strictly inside (0, 1)");
  }
  if (p < 0.5) return d.mu + d.b * std::log(2.0 * p);
  return d.mu - d.b * std::log(2.0 * (1.0 - p));
}

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Wichura's PPND16 rational approximations (Algorithm AS 241), accurate to
// about 1e-16 over the full open interval.
double gaussian_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("gaussian_quantile: p must lie strictly inside (0, 1)");
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

double sample_laplace(RngHandle& rng, const LaplaceDist& d) {
  return laplace_quantile(d, rng.next_uniform());
}

double sample_gaussian(RngHandle& rng, const GaussianDist& d) {
  return d.mu + d.sigma * gaussian_quantile(rng.next_uniform());
}

long long sample_binomial(RngHandle& rng, long long n, double p) {
  if (n < 1) throw std::invalid_argument("sample_binomial: n must be positive");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("sample_binomial: p must lie in [0, 1]");
  }
  if (p == 0.0) {
    rng.next_uniform();  // keep the one-uniform-per-variate contract
    return 0;
  }
  if (p == 1.0) {
    rng.next_uniform();
    return n;
  }
  const double u = rng.next_uniform();

  // CDF inversion anchored at the mode: the starting pmf is computed in log
  // space (so pmf(0) underflowing for large n is harmless), the CDF at the
  // mode is accumulated downward, and the answer is the smallest k with
  // F(k) >= u, found by walking from the mode.
  long long mode = static_cast<long long>(std::floor((n + 1) * p));
  if (mode > n) mode = n;
  const double log_pmf_mode = std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) -
                              std::lgamma(n - mode + 1.0) +
                              mode * std::log(p) + (n - mode) * std::log1p(-p);
  const double pmf_mode = std::exp(log_pmf_mode);
  const double odds_down = (1.0 - p) / p;

  double cdf_mode = pmf_mode;
  {
    double pk = pmf_mode;
    for (long long k = mode; k > 0; --k) {
      pk *= k * odds_down / (n - k + 1.0);  // pmf(k-1) from pmf(k)
      cdf_mode += pk;
      if (pk < 1e-320) break;
    }
  }

  if (u <= cdf_mode) {
    long long k = mode;
    double fk = cdf_mode;
    double pk = pmf_mode;
    while (k > 0) {
      const double f_below = fk - pk;
      if (u > f_below) return k;
      fk = f_below;
      pk *= k * odds_down / (n - k + 1.0);
      --k;
    }
    return 0;
  }
  long long k = mode;
  double fk = cdf_mode;
  double pk = pmf_mode;
  while (k < n) {
    pk *= (n - k) / ((k + 1.0) * odds_down);  // pmf(k+1) from pmf(k)
    ++k;
    fk += pk;
    if (u <= fk) return k;
  }
  return n;
}

}  // namespace dpratio
