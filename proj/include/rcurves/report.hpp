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

#ifndef RCURVES_REPORT_HPP
#define RCURVES_REPORT_HPP

#include <string>

#include "json.hpp"
#include "rcurves/field.hpp"
#include "rcurves/tower.hpp"

namespace rcurves {

using OrderedJson = nlohmann::ordered_json;

OrderedJson field_json(const FieldConfig& fc);
OrderedJson tower_json(const BlowupTower& tower);
OrderedJson beta_json(const BlowupTower& tower, const CurveClass& beta);
OrderedJson hypothesis_json(const HypothesisReport& rep);

/// Exact rate as a fraction string, e.g. "199/200"; "1" when full.
std::string fraction_string(long long num, long long den);

}  // namespace rcurves

#endif  // RCURVES_REPORT_HPP
