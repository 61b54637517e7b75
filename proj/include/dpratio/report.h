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

#ifndef DPRATIO_REPORT_H_
#define DPRATIO_REPORT_H_

#include <string>
#include <vector>

#include "dpratio/simulation.h"

namespace dpratio {

// All floating-point output uses 10 significant digits so reruns diff cleanly.
std::string format_double(double value);

// Serializes records as CSV: a `#schema=1` comment line, one header row taken
// from the first record's field order (all records must share it), then one
// row per record. NaN fields render as empty cells (metric gaps).
std::string records_to_csv(const std::vector<ExperimentRecord>& records);

}  // namespace dpratio

#endif  // DPRATIO_REPORT_H_
