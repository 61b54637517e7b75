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

#include "dpratio/report.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dpratio {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = "#schema=1\n";
  if (records.empty()) return out;
  const auto& header = records.front().fields;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out += ',';
    out += header[i].first;
  }
  out += '\n';
  for (const auto& record : records) {
    if (record.fields.size() != header.size()) {
      throw std::invalid_argument("records_to_csv: records have mismatched schemas");
    }
    for (std::size_t i = 0; i < record.fields.size(); ++i) {
      if (record.fields[i].first != header[i].first) {
        throw std::invalid_argument("records_to_csv: records have mismatched schemas");
      }
      if (i > 0) out += ',';
      const double v = record.fields[i].second;
      if (!std::isnan(v)) out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace dpratio
