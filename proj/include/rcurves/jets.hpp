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

#ifndef RCURVES_JETS_HPP
#define RCURVES_JETS_HPP

#include <vector>

#include "rcurves/errors.hpp"
#include "rcurves/series.hpp"

namespace rcurves {

/// A k-jet arc at a chart origin: one truncated series per local
/// coordinate, known modulo t^(k+1), constant terms zero.
template <class F>
struct JetArc {
  int order = 1;
  std::vector<TruncatedSeries<F>> coords;
};

/// Local model of a blowup chart: the divisor coordinate, the coordinates
/// that get divided by it, and passthrough coordinates along the center.
struct ChartShape {
  int divisor = 0;
  std::vector<int> x;
  std::vector<int> y;
};

template <class F>
JetArc<F> random_transversal_jet(const F& K, SplitRng& rng, int coords, int order,
                                 const ChartShape& chart) {
  JetArc<F> arc;
  arc.order = order;
  for (int g = 0; g < coords; ++g) {
    TruncatedSeries<F> s = series_zero(K, order + 1);
    for (int i = 1; i <= order; ++i) s.c[i] = K.random(rng);
    arc.coords.push_back(std::move(s));
  }
  while (K.is_zero(arc.coords[chart.divisor].c[1]))
    arc.coords[chart.divisor].c[1] = K.random(rng);
  return arc;
}

template <class F>
struct LiftedJet {
  JetArc<F> arc;  // order k-1, in the chart coordinates upstairs
  std::vector<typename F::Elem> direction;  // constants of the divided coordinates
};

/// Lift of a transversal k-jet through the blowup: the divisor coordinate
/// stays, the x-block is divided by it (its constants record the point of
/// the exceptional fiber hit by the arc), the y-block passes through. One
/// order is lost. Throws NotTransversal unless the divisor coordinate has
/// valuation exactly 1.
template <class F>
LiftedJet<F> lift_jet(const F& K, const JetArc<F>& s, const ChartShape& chart) {
  const auto& div = s.coords[chart.divisor];
  if (s.order < 1 || !K.is_zero(div.c[0]) || K.is_zero(div.c[1])) throw NotTransversal();
  LiftedJet<F> out;
  out.arc.order = s.order - 1;
  out.arc.coords.resize(s.coords.size());
  out.arc.coords[chart.divisor] = series_truncate(K, div, s.order);
  for (int xi : chart.x) {
    auto divided = series_divide_val1(K, s.coords[xi], div);
    out.direction.push_back(divided.c[0]);
    divided.c[0] = K.zero();
    out.arc.coords[xi] = std::move(divided);
  }
  for (int yi : chart.y) out.arc.coords[yi] = series_truncate(K, s.coords[yi], s.order);
  return out;
}

/// Composition with the blowdown map: x-coordinates are multiplied back by
/// the divisor coordinate after re-adding the direction constants. The
/// result is again an r-jet; blowdown(lift(s)) equals s modulo t^(k).
template <class F>
JetArc<F> blowdown_jet(const F& K, const JetArc<F>& arc,
                       const std::vector<typename F::Elem>& direction, const ChartShape& chart) {
  JetArc<F> out;
  out.order = arc.order;
  out.coords.resize(arc.coords.size());
  const auto& div = arc.coords[chart.divisor];
  out.coords[chart.divisor] = div;
  for (std::size_t i = 0; i < chart.x.size(); ++i) {
    TruncatedSeries<F> shifted = arc.coords[chart.x[i]];
    shifted.c[0] = K.add(shifted.c[0], direction[i]);
    out.coords[chart.x[i]] = series_mul(K, div, shifted);
  }
  for (int yi : chart.y) out.coords[yi] = arc.coords[yi];
  return out;
}

}  // namespace rcurves

#endif  // RCURVES_JETS_HPP
