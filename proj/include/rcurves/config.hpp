// Copyright 2026 the rcurves authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RCURVES_CONFIG_HPP
#define RCURVES_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rcurves/field.hpp"
#include "rcurves/tower.hpp"

namespace rcurves {

struct DatumSpec {
  std::vector<Rational> p;  // homogeneous point of the line, two coordinates
  int center = 0;
  std::optional<std::vector<std::vector<Rational>>> target;  // per factor
  long long mult = 1;
};

struct JetSpec {
  std::vector<Rational> p;
  std::vector<std::vector<Rational>> base;            // per factor
  int order = 1;
  std::vector<std::vector<Rational>> series;          // per affine coordinate, orders 1..k
};

struct ExperimentSpec {
  std::string kind;  // fiber-dimension | freeness | splitting-census | jet-roundtrip | pencil-closure
  int trials = 100;
  int retries = 8;
};

struct Config {
  TowerSpec tower;
  CurveClass beta;
  std::vector<DatumSpec> data;
  std::vector<JetSpec> jets;
  FieldConfig field;
  std::optional<ExperimentSpec> experiment;
};

/// Strict parse: unknown fields and malformed entries are rejected with a
/// JSON-pointer-style path in the message (ConfigError).
Config parse_config(const nlohmann::json& j);
Config load_config_file(const std::string& path);

}  // namespace rcurves

#endif  // RCURVES_CONFIG_HPP
