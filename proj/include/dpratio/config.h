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

#ifndef DPRATIO_CONFIG_H_
#define DPRATIO_CONFIG_H_

#include <optional>
#include <string>
#include <vector>

#include "dpratio/simulation.h"

namespace dpratio {

// Parses a numeric grid specification: a single value ("0.5"), a comma list
// ("0.5,1,2"), or an inclusive range with step ("0.1:4:0.1").
std::vector<double> parse_grid_spec(const std::string& spec);

// Values a caller (the command line) may use to override the config file.
struct GridOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<long long> replications;
};

// Loads an experiment grid from a flat JSON object whose keys mirror the
// command-line flags. Unknown keys, type mismatches, and missing required
// keys raise std::invalid_argument naming the offending key.
//
// Common keys: seed, replications, n_x, n_y, delta, level, alpha,
// epsilon_grid (string spec or number).
// accuracy: x_grid, y_grid (parallel lists).
// bias/coverage: p_x_grid, p_y_grid (parallel lists); coverage also accepts
// gaussian_calibration ("balle" | "dwork").
// cdf: mu1_grid, mu2_grid, b_grid (parallel lists).
ExperimentGrid load_experiment_grid(const std::string& json_text,
                                    ExperimentKind kind,
                                    const GridOverrides& overrides = {});

ExperimentGrid load_experiment_grid_from_file(const std::string& path,
                                              ExperimentKind kind,
                                              const GridOverrides& overrides = {});

}  // namespace dpratio

#endif  // DPRATIO_CONFIG_H_
