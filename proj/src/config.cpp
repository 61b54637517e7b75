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

#include "dpratio/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dpratio {
namespace {

using nlohmann::json;

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw std::invalid_argument("config: key '" + key + "': " + why);
}

double parse_number(const std::string& token, const std::string& context) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &consumed);
  } catch (const std::exception&) {
    throw std::invalid_argument(context + ": '" + token + "' is not a number");
  }
  if (consumed != token.size()) {
    throw std::invalid_argument(context + ": '" + token + "' is not a number");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, sep)) parts.push_back(part);
  return parts;
}

}  // namespace

std::vector<double> parse_grid_spec(const std::string& spec) {
  if (spec.empty()) throw std::invalid_argument("grid spec: empty specification");
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) {
      throw std::invalid_argument("grid spec: ranges use the form start:stop:step");
    }
    const double start = parse_number(parts[0], "grid spec");
    const double stop = parse_number(parts[1], "grid spec");
    const double step = parse_number(parts[2], "grid spec");
    if (!(step > 0.0) || stop < start) {
      throw std::invalid_argument("grid spec: need stop >= start and step > 0");
    }
    std::vector<double> values;
    // Half-step slack keeps the endpoint included despite rounding.
    for (double v = start; v <= stop + step * 0.5; v += step) {
      values.push_back(v);
      if (values.size() > 100000) {
        throw std::invalid_argument("grid spec: more than 1e5 grid points");
      }
    }
    return values;
  }
  std::vector<double> values;
  for (const auto& token : split(spec, ',')) {
    values.push_back(parse_number(token, "grid spec"));
  }
  return values;
}

namespace {

class GridReader {
 public:
  explicit GridReader(const json& doc) : doc_(doc) {
    if (!doc_.is_object()) {
      throw std::invalid_argument("config: the document must be a flat JSON object");
    }
  }

  bool has(const std::string& key) {
    return doc_.contains(key);
  }

  double number(const std::string& key, double fallback) {
    if (!doc_.contains(key)) return fallback;
    used_.insert(key);
    const auto& v = doc_.at(key);
    if (!v.is_number()) bad_key(key, "expected a number");
    return v.get<double>();
  }

  long long integer(const std::string& key, long long fallback) {
    if (!doc_.contains(key)) return fallback;
    used_.insert(key);
    const auto& v = doc_.at(key);
    if (!v.is_number_integer()) bad_key(key, "expected an integer");
    return v.get<long long>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!doc_.contains(key)) return fallback;
    used_.insert(key);
    const auto& v = doc_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      bad_key(key, "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!doc_.contains(key)) return fallback;
    used_.insert(key);
    const auto& v = doc_.at(key);
    if (!v.is_string()) bad_key(key, "expected a string");
    return v.get<std::string>();
  }

  // Grid-valued key: either a number or a grid-spec string.
  std::vector<double> grid(const std::string& key) {
    if (!doc_.contains(key)) bad_key(key, "required key is missing");
    used_.insert(key);
    const auto& v = doc_.at(key);
    if (v.is_number()) return {v.get<double>()};
    if (v.is_string()) {
      try {
        return parse_grid_spec(v.get<std::string>());
      } catch (const std::invalid_argument& e) {
        bad_key(key, e.what());
      }
    }
    bad_key(key, "expected a number or a grid-spec string");
  }

  void reject_unknown_keys() const {
    for (const auto& [key, value] : doc_.items()) {
      if (used_.find(key) == used_.end()) bad_key(key, "unknown key");
    }
  }

 private:
  const json& doc_;
  std::set<std::string> used_;
};

}  // namespace

ExperimentGrid load_experiment_grid(const std::string& json_text,
                                    ExperimentKind kind,
                                    const GridOverrides& overrides) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
  }
  GridReader reader(doc);

  ExperimentGrid grid;
  grid.kind = kind;
  grid.seed = reader.unsigned_integer("seed", 0);
  grid.replications = reader.integer("replications", 10000);
  grid.n_x = reader.integer("n_x", 150);
  grid.n_y = reader.integer("n_y", 150);
  grid.delta = reader.number("delta", 0.0);
  grid.level = reader.number("level", 0.95);
  grid.alpha_accuracy = reader.number("alpha", 0.1);

  const auto parallel_pairs = [&](const std::string& first,
                                  const std::string& second) {
    const std::vector<double> a = reader.grid(first);
    const std::vector<double> b = reader.grid(second);
    if (a.size() != b.size()) {
      bad_key(second, "must have the same length as " + first);
    }
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < a.size(); ++i) pairs.emplace_back(a[i], b[i]);
    return pairs;
  };

  switch (kind) {
    case ExperimentKind::kAccuracy: {
      for (const auto& [x, y] : parallel_pairs("x_grid", "y_grid")) {
        if (x != std::floor(x) || y != std::floor(y)) {
          bad_key("x_grid", "counts must be integers");
        }
        grid.count_pairs.emplace_back(static_cast<long long>(x),
                                      static_cast<long long>(y));
      }
      grid.epsilon_grid = reader.grid("epsilon_grid");
      break;
    }
    case ExperimentKind::kBias:
    case ExperimentKind::kCoverage: {
      grid.proportion_pairs = parallel_pairs("p_x_grid", "p_y_grid");
      grid.epsilon_grid = reader.grid("epsilon_grid");
      if (kind == ExperimentKind::kCoverage) {
        const std::string calibration = reader.text("gaussian_calibration", "balle");
        if (calibration == "dwork") {
          grid.gaussian_dwork = true;
        } else if (calibration != "balle") {
          bad_key("gaussian_calibration", "expected 'balle' or 'dwork'");
        }
      }
      break;
    }
    case ExperimentKind::kCdfValidation: {
      const std::vector<double> mu1 = reader.grid("mu1_grid");
      const std::vector<double> mu2 = reader.grid("mu2_grid");
      const std::vector<double> b = reader.grid("b_grid");
      if (mu2.size() != mu1.size()) bad_key("mu2_grid", "must have the same length as mu1_grid");
      if (b.size() != mu1.size()) bad_key("b_grid", "must have the same length as mu1_grid");
      for (std::size_t i = 0; i < mu1.size(); ++i) {
        grid.cdf_cells.push_back({mu1[i], mu2[i], b[i]});
      }
      break;
    }
  }
  reader.reject_unknown_keys();

  if (overrides.seed) grid.seed = *overrides.seed;
  if (overrides.replications) grid.replications = *overrides.replications;
  grid.validate();
  return grid;
}

ExperimentGrid load_experiment_grid_from_file(const std::string& path,
                                              ExperimentKind kind,
                                              const GridOverrides& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_experiment_grid(buffer.str(), kind, overrides);
}

}  // namespace dpratio
