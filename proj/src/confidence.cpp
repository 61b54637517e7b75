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

#include "dpratio/confidence.h"

#include <cmath>
#include <stdexcept>

#include "dpratio/numerics.h"

namespace dpratio {
namespace {

double two_sided_quantile(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence level must lie strictly inside (0, 1)");
  }
  return gaussian_quantile(1.0 - (1.0 - level) / 2.0);
}

}  // namespace

ProportionPair::ProportionPair(double px, double py, long long nx, long long ny,
                               double noise_var)
    : p_x(px), p_y(py), n_x(nx), n_y(ny), noise_variance(noise_var) {
  if (n_x < 1 || n_y < 1) {
    throw std::invalid_argument("ProportionPair: group sizes must be positive");
  }
  if (!(noise_variance >= 0.0)) {
    throw std::invalid_argument("ProportionPair: noise variance must be nonnegative");
  }
}

ProportionPair ProportionPair::from_counts(double x, double y, long long nx,
                                           long long ny, double noise_var) {
  return ProportionPair(x / static_cast<double>(nx), y / static_cast<double>(ny),
                        nx, ny, noise_var);
}

const char* ci_method_name(CiMethod method) {
  switch (method) {
    case CiMethod::kClassic: return "classic";
    case CiMethod::kPrivateAsymptotic: return "asymptotic";
    case CiMethod::kConservativeGaussian: return "conservative-gaussian";
    case CiMethod::kConservativeLaplace: return "conservative-laplace";
  }
  return "unknown";
}

ConfidenceInterval classic_ci(const CountTable& t, double level) {
  const double q = two_sided_quantile(level);
  if (t.x < 1 || t.y < 1) {
    throw std::domain_error("classic_ci: zero counts make the log ratio undefined");
  }
  const double x = static_cast<double>(t.x);
  const double y = static_cast<double>(t.y);
  const double nx = static_cast<double>(t.n_x);
  const double ny = static_cast<double>(t.n_y);
  const double variance = (1.0 / x - 1.0 / nx) + (1.0 / y - 1.0 / ny);
  if (variance < 0.0) {
    throw std::domain_error("degenerate-data: negative variance estimate");
  }
  const double log_t = std::log((x / nx) / (y / ny));
  const double half_width = q * std::sqrt(variance);
  return {std::exp(log_t - half_width), std::exp(log_t + half_width), level,
          CiMethod::kClassic};
}

ConfidenceInterval private_asymptotic_ci(const ProportionPair& pp, double level) {
  const double q = two_sided_quantile(level);
  const double xt = pp.x_count();
  const double yt = pp.y_count();
  if (!(xt > 0.0) || !(yt > 0.0)) {
    throw std::domain_error(
        "nonpositive-counts: clamp noised counts at 1 before building the interval");
  }
  const double radicand = 1.0 / xt - 1.0 / static_cast<double>(pp.n_x) +
                          1.0 / yt - 1.0 / static_cast<double>(pp.n_y);
  if (radicand < 0.0) {
    throw std::domain_error("degenerate-data: negative variance estimate");
  }
  const double pt = pp.ratio();
  const double half_width = q * pt * std::sqrt(radicand);
  return {pt - half_width, pt + half_width, level, CiMethod::kPrivateAsymptotic};
}

ConfidenceInterval conservative_ci(const ProportionPair& pp, double level,
                                   CiMethod method) {
  if (method != CiMethod::kConservativeGaussian &&
      method != CiMethod::kConservativeLaplace) {
    throw std::invalid_argument("conservative_ci: method must be a conservative variant");
  }
  const double q = two_sided_quantile(level);
  const double xt = pp.x_count();
  const double yt = pp.y_count();
  if (!(xt > 0.0) || !(yt > 0.0)) {
    throw std::domain_error(
        "nonpositive-counts: clamp noised counts at 1 before building the interval");
  }
  const double radicand = 1.0 / xt - 1.0 / static_cast<double>(pp.n_x) +
                          1.0 / yt - 1.0 / static_cast<double>(pp.n_y) +
                          pp.noise_variance * (1.0 / (xt * xt) + 1.0 / (yt * yt));
  if (radicand < 0.0) {
    throw std::domain_error("degenerate-data: negative variance estimate");
  }
  const double pt = pp.ratio();
  const double half_width = q * pt * std::sqrt(radicand);
  return {pt - half_width, pt + half_width, level, method};
}

}  // namespace dpratio
