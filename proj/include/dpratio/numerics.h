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

#ifndef DPRATIO_NUMERICS_H_
#define DPRATIO_NUMERICS_H_

#include <cstdint>
#include <random>

namespace dpratio {

// Laplace distribution with location mu and scale b, density
// p(x) = (1/2b) exp(-|x - mu|/b).
struct LaplaceDist {
  double mu = 0.0;
  double b = 1.0;

  LaplaceDist(double location, double scale);
};

// Gaussian distribution parameterized by its standard deviation.
struct GaussianDist {
  double mu = 0.0;
  double sigma = 1.0;

  GaussianDist(double location, double stddev);

  double variance() const { return sigma * sigma; }
};

// Deterministic random stream. Two handles constructed from the same
// (seed, stream_id) produce bit-identical sequences; distinct stream ids give
// independent streams, which is how parallel replicates stay reproducible.
// A handle is single-owner: share across threads only via distinct stream ids.
class RngHandle {
 public:
  explicit RngHandle(std::uint64_t seed, std::uint64_t stream_id = 0);

  // Uniform variate strictly inside (0, 1), on the centered 53-bit grid
  // ((k + 0.5) * 2^-53), so 0 and 1 are never returned.
  double next_uniform();

  // Number of uniforms consumed so far. Every sampler below consumes exactly
  // one uniform per variate, so this doubles as a variate counter.
  std::uint64_t draws() const { return draws_; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
};

// Principal-value exponential integral Ei(x) = PV int_{-inf}^{x} e^t/t dt.
// Throws std::domain_error at x = 0 and std::overflow_error when the result
// exceeds the double range (x > ~716).
double ei(double x);

// P(L <= x) for L ~ LaplaceDist.
double laplace_cdf(const LaplaceDist& d, double x);

// Inverse of laplace_cdf; p must lie strictly inside (0, 1).
double laplace_quantile(const LaplaceDist& d, double p);

// Standard normal CDF Phi and its inverse. The quantile rejects p outside
// (0, 1) with std::domain_error.
double gaussian_cdf(double x);
double gaussian_quantile(double p);

// One variate per call, by inverse-CDF transform of a single uniform.
double sample_laplace(RngHandle& rng, const LaplaceDist& d);
double sample_gaussian(RngHandle& rng, const GaussianDist& d);

// Binomial variate by exact CDF inversion (search anchored at the mode, so
// large n does not underflow). Intended for desk-scale n (<= ~10^4).
long long sample_binomial(RngHandle& rng, long long n, double p);

}  // namespace dpratio

#endif  // DPRATIO_NUMERICS_H_
