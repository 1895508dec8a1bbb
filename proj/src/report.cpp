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

#include "rcurves/report.hpp"

#include <numeric>

namespace rcurves {

OrderedJson field_json(const FieldConfig& fc) {
  OrderedJson j;
  j["kind"] = fc.kind == FieldKind::rationals ? "rationals" : "prime-field";
  if (fc.kind == FieldKind::prime_field) j["prime"] = fc.prime;
  j["seed"] = fc.seed;
  return j;
}

OrderedJson tower_json(const BlowupTower& tower) {
  OrderedJson j;
  j["ambient"] = tower.ambient.factor_dims;
  OrderedJson centers = OrderedJson::array();
  for (const auto& c : tower.centers) {
    OrderedJson cj;
    cj["kind"] = c.kind == CenterKind::linear ? "linear" : "infinitesimal";
    cj["level"] = c.level;
    cj["depth"] = c.depth;
    cj["dim"] = c.dim;
    cj["codim"] = c.codim;
    if (c.kind == CenterKind::infinitesimal) {
      cj["parent"] = c.parent;
      cj["chart"] = c.chart;
    }
    centers.push_back(std::move(cj));
  }
  j["centers"] = std::move(centers);
  return j;
}

OrderedJson beta_json(const BlowupTower& tower, const CurveClass& beta) {
  OrderedJson j;
  j["degrees"] = beta.degrees;
  j["e_total"] = beta.total_mult;
  j["e_strict"] = strict_from_total(tower, beta);
  return j;
}

OrderedJson hypothesis_json(const HypothesisReport& rep) {
  OrderedJson j;
  j["factor_margins"] = rep.factor_margins;
  j["center_margins"] = rep.center_margins;
  j["clause"] = clause_name(rep.clause);
  j["verdict"] = rep.pass ? "pass" : "fail";
  return j;
}

std::string fraction_string(long long num, long long den) {
  if (den == 0) return "0/0";
  if (num == den) return "1";
  if (num == 0) return "0";
  const long long g = std::gcd(num, den);
  return std::to_string(num / g) + "/" + std::to_string(den / g);
}

}  // namespace rcurves
