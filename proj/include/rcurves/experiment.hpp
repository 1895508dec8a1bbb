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

#ifndef RCURVES_EXPERIMENT_HPP
#define RCURVES_EXPERIMENT_HPP

#include <string>

#include "rcurves/config.hpp"
#include "rcurves/report.hpp"

namespace rcurves {

struct RunOutcome {
  OrderedJson report;
  bool ok = true;  // every asserted property passed
};

/// The five CLI entry points. `stable` drops wall-clock timings so reports
/// with equal (config, seed) are byte-identical.
RunOutcome run_check(const Config& cfg);
RunOutcome run_dims(const Config& cfg);
RunOutcome run_solve(const Config& cfg, bool stable);
RunOutcome run_sample(const Config& cfg, bool stable);
RunOutcome run_verify(const Config& cfg, bool stable);

}  // namespace rcurves

#endif  // RCURVES_EXPERIMENT_HPP
