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

#ifndef DPRATIO_SIMULATION_H_
#define DPRATIO_SIMULATION_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dpratio/analysis.h"

namespace dpratio {

enum class ExperimentKind { kAccuracy, kBias, kCoverage, kCdfValidation };

const char* experiment_kind_name(ExperimentKind kind);

// One (mu1, mu2, b) cell of the ratio-law validation sweep.
struct CdfCell {
  double mu1 = 1.0;
  double mu2 = 1.0;
  double b = 1.0;
};

// Sweep configuration. Accuracy runs on fixed count pairs; bias and coverage
// draw binomial counts for proportion pairs; cdf validation samples the
// ratio-of-Laplace law directly. Identical grids (seed included) produce
// bit-identical results regardless of worker count.
struct ExperimentGrid {
  ExperimentKind kind = ExperimentKind::kAccuracy;
  long long n_x = 150;
  long long n_y = 150;
  std::vector<std::pair<long long, long long>> count_pairs;
  std::vector<std::pair<double, double>> proportion_pairs;
  std::vector<CdfCell> cdf_cells;
  std::vector<double> epsilon_grid;
  double delta = 0.0;
  long long replications = 10000;
  double level = 0.95;
  std::uint64_t seed = 0;
  double alpha_accuracy = 0.1;
  // Coverage only: calibrate the Gaussian noise with the explicit formula
  // instead of the tight numerical one.
  bool gaussian_dwork = false;

  void validate() const;  // throws std::invalid_argument on bad configuration
};

// One output row: named numeric fields in column order (grid coordinates,
// then metrics, then standard errors). NaN marks a metric that is undefined
// at that cell (e.g. a singular closed form); the CSV layer renders it as an
// empty cell.
struct ExperimentRecord {
  std::vector<std::pair<std::string, double>> fields;

  void push(const std::string& name, double value);
  double at(const std::string& name) const;
};

// Closed-form sample accuracy per method plus Monte Carlo accuracy for
// propose-test-release with its proposal optimized over a grid containing the
// true local sensitivity. FAIL counts as error.
std::vector<ExperimentRecord> run_accuracy_experiment(const ExperimentGrid& grid,
                                                      int workers = 1);

// Mean nonprivate ratio, mean maxed private ratio, and the exact-expectation
// curve averaged over the sampled counts. Zero-count draws are resampled and
// counted.
std::vector<ExperimentRecord> run_bias_experiment(const ExperimentGrid& grid,
                                                  int workers = 1);

// Coverage and mean width of six interval constructions per cell: classic,
// nonprivate asymptotic, private asymptotic (Laplace and Gaussian noise), and
// conservative (both noises). Noised counts are clamped at 1 before interval
// construction; degenerate replicates count as non-covering.
std::vector<ExperimentRecord> run_coverage_experiment(const ExperimentGrid& grid,
                                                      int workers = 1);

// Kolmogorov-Smirnov distance between empirical ratio-of-Laplace samples and
// the closed-form CDF, per cell.
std::vector<ExperimentRecord> run_cdf_validation(const ExperimentGrid& grid,
                                                 int workers = 1);

// Dispatch on grid.kind.
std::vector<ExperimentRecord> run_experiment(const ExperimentGrid& grid,
                                             int workers = 1);

}  // namespace dpratio

#endif  // DPRATIO_SIMULATION_H_
