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

#ifndef RCURVES_SERIES_HPP
#define RCURVES_SERIES_HPP

#include <vector>

#include "rcurves/errors.hpp"
#include "rcurves/field.hpp"

namespace rcurves {

/// Power series truncated at t^order: exactly `order` coefficients of
/// 1, t, ..., t^(order-1). All arithmetic is exact modulo t^order.
template <class F>
struct TruncatedSeries {
  int order = 1;
  std::vector<typename F::Elem> c;
};

template <class F>
TruncatedSeries<F> series_zero(const F& K, int order) {
  return TruncatedSeries<F>{order, std::vector<typename F::Elem>(order, K.zero())};
}

template <class F>
TruncatedSeries<F> series_from_coeffs(const F& K, std::vector<typename F::Elem> c) {
  (void)K;
  TruncatedSeries<F> s;
  s.order = static_cast<int>(c.size());
  s.c = std::move(c);
  return s;
}

template <class F>
TruncatedSeries<F> series_truncate(const F& K, const TruncatedSeries<F>& s, int order) {
  TruncatedSeries<F> r = series_zero(K, order);
  for (int i = 0; i < order && i < s.order; ++i) r.c[i] = s.c[i];
  return r;
}

template <class F>
bool series_equal(const F& K, const TruncatedSeries<F>& a, const TruncatedSeries<F>& b) {
  if (a.order != b.order) return false;
  for (int i = 0; i < a.order; ++i)
    if (!K.eq(a.c[i], b.c[i])) return false;
  return true;
}

template <class F>
TruncatedSeries<F> series_add(const F& K, const TruncatedSeries<F>& a, const TruncatedSeries<F>& b) {
  TruncatedSeries<F> r = a;
  for (int i = 0; i < r.order && i < b.order; ++i) r.c[i] = K.add(r.c[i], b.c[i]);
  return r;
}

template <class F>
TruncatedSeries<F> series_sub(const F& K, const TruncatedSeries<F>& a, const TruncatedSeries<F>& b) {
  TruncatedSeries<F> r = a;
  for (int i = 0; i < r.order && i < b.order; ++i) r.c[i] = K.sub(r.c[i], b.c[i]);
  return r;
}

template <class F>
TruncatedSeries<F> series_scale(const F& K, const typename F::Elem& x, const TruncatedSeries<F>& a) {
  TruncatedSeries<F> r = a;
  for (auto& v : r.c) v = K.mul(x, v);
  return r;
}

template <class F>
TruncatedSeries<F> series_mul(const F& K, const TruncatedSeries<F>& a, const TruncatedSeries<F>& b) {
  const int order = std::min(a.order, b.order);
  TruncatedSeries<F> r = series_zero(K, order);
  for (int i = 0; i < order; ++i) {
    if (K.is_zero(a.c[i])) continue;
    for (int j = 0; i + j < order && j < b.order; ++j)
      r.c[i + j] = K.add(r.c[i + j], K.mul(a.c[i], b.c[j]));
  }
  return r;
}

/// Multiplicative inverse of a unit (nonzero constant term).
template <class F>
TruncatedSeries<F> series_invert(const F& K, const TruncatedSeries<F>& v) {
  if (v.order < 1 || K.is_zero(v.c[0])) throw DivisionByNonUnit();
  TruncatedSeries<F> r = series_zero(K, v.order);
  const typename F::Elem c0i = K.inv(v.c[0]);
  r.c[0] = c0i;
  for (int n = 1; n < v.order; ++n) {
    typename F::Elem acc = K.zero();
    for (int k = 1; k <= n && k < v.order; ++k) acc = K.add(acc, K.mul(v.c[k], r.c[n - k]));
    r.c[n] = K.neg(K.mul(c0i, acc));
  }
  return r;
}

/// w = u / v with w * v == u modulo t^order; v must be a unit.
template <class F>
TruncatedSeries<F> series_invert_multiply(const F& K, const TruncatedSeries<F>& u,
                                          const TruncatedSeries<F>& v) {
  return series_mul(K, u, series_invert(K, v));
}

/// Division by a series of valuation exactly 1: returns u/v truncated one
/// order lower, the step that lifts jets through a blowup chart.
template <class F>
TruncatedSeries<F> series_divide_val1(const F& K, const TruncatedSeries<F>& u,
                                      const TruncatedSeries<F>& v) {
  if (v.order < 2 || !K.is_zero(v.c[0]) || K.is_zero(v.c[1])) throw NotTransversal();
  if (!K.is_zero(u.c[0])) throw Error("series_divide_val1: numerator has nonzero constant term");
  TruncatedSeries<F> us = series_zero(K, u.order - 1);
  TruncatedSeries<F> vs = series_zero(K, v.order - 1);
  for (int i = 1; i < u.order; ++i) us.c[i - 1] = u.c[i];
  for (int i = 1; i < v.order; ++i) vs.c[i - 1] = v.c[i];
  return series_invert_multiply(K, us, vs);
}

/// Evaluate a polynomial with series coefficients at a series argument
/// with zero constant term (Horner).
template <class F>
TruncatedSeries<F> series_polyval(const F& K, const std::vector<typename F::Elem>& poly,
                                  const TruncatedSeries<F>& x) {
  TruncatedSeries<F> r = series_zero(K, x.order);
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
    r = series_mul(K, r, x);
    r.c[0] = K.add(r.c[0], *it);
  }
  return r;
}

}  // namespace rcurves

#endif  // RCURVES_SERIES_HPP
