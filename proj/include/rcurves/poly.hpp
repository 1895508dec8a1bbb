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

#ifndef RCURVES_POLY_HPP
#define RCURVES_POLY_HPP

#include <optional>
#include <vector>

#include "rcurves/errors.hpp"
#include "rcurves/field.hpp"

namespace rcurves {

/// Homogeneous binary form of fixed degree d in (s, t).
/// coeff[i] multiplies s^(d-i) t^i, so coeff.size() == d+1 always;
/// the zero form is representable at every degree.
template <class F>
struct HomPoly {
  int degree = 0;
  std::vector<typename F::Elem> coeff;
};

/// Point of P^1, kept normalized: first nonzero coordinate equals 1.
template <class F>
struct ProjPoint {
  typename F::Elem s;
  typename F::Elem t;
};

template <class F>
ProjPoint<F> make_point(const F& K, const typename F::Elem& s, const typename F::Elem& t) {
  if (K.is_zero(s) && K.is_zero(t)) throw MalformedPoint();
  if (!K.is_zero(s)) {
    typename F::Elem si = K.inv(s);
    return ProjPoint<F>{K.one(), K.mul(t, si)};
  }
  return ProjPoint<F>{K.zero(), K.one()};
}

template <class F>
bool points_equal(const F& K, const ProjPoint<F>& a, const ProjPoint<F>& b) {
  return K.eq(a.s, b.s) && K.eq(a.t, b.t);
}

template <class F>
HomPoly<F> zero_form(const F& K, int degree) {
  HomPoly<F> p;
  p.degree = degree;
  p.coeff.assign(static_cast<std::size_t>(degree) + 1, K.zero());
  return p;
}

template <class F>
bool form_is_zero(const F& K, const HomPoly<F>& p) {
  for (const auto& c : p.coeff)
    if (!K.is_zero(c)) return false;
  return true;
}

template <class F>
HomPoly<F> form_add(const F& K, const HomPoly<F>& a, const HomPoly<F>& b) {
  HomPoly<F> r = a;
  for (std::size_t i = 0; i < r.coeff.size(); ++i) r.coeff[i] = K.add(r.coeff[i], b.coeff[i]);
  return r;
}

template <class F>
HomPoly<F> form_sub(const F& K, const HomPoly<F>& a, const HomPoly<F>& b) {
  HomPoly<F> r = a;
  for (std::size_t i = 0; i < r.coeff.size(); ++i) r.coeff[i] = K.sub(r.coeff[i], b.coeff[i]);
  return r;
}

template <class F>
HomPoly<F> form_scale(const F& K, const typename F::Elem& c, const HomPoly<F>& a) {
  HomPoly<F> r = a;
  for (auto& x : r.coeff) x = K.mul(c, x);
  return r;
}

template <class F>
HomPoly<F> form_mul(const F& K, const HomPoly<F>& a, const HomPoly<F>& b) {
  HomPoly<F> r = zero_form(K, a.degree + b.degree);
  for (std::size_t i = 0; i < a.coeff.size(); ++i) {
    if (K.is_zero(a.coeff[i])) continue;
    for (std::size_t j = 0; j < b.coeff.size(); ++j)
      r.coeff[i + j] = K.add(r.coeff[i + j], K.mul(a.coeff[i], b.coeff[j]));
  }
  return r;
}

template <class F>
typename F::Elem form_eval(const F& K, const HomPoly<F>& p, const typename F::Elem& s,
                           const typename F::Elem& t) {
  typename F::Elem acc = K.zero();
  typename F::Elem spow = K.one();
  std::vector<typename F::Elem> spows(p.coeff.size());
  for (std::size_t i = 0; i < p.coeff.size(); ++i) {
    spows[i] = spow;
    spow = K.mul(spow, s);
  }
  typename F::Elem tpow = K.one();
  for (std::size_t i = 0; i < p.coeff.size(); ++i) {
    acc = K.add(acc, K.mul(p.coeff[i], K.mul(spows[p.coeff.size() - 1 - i], tpow)));
    tpow = K.mul(tpow, t);
  }
  return acc;
}

/// p(a s + b t, c s + d t): linear substitution, used for Moebius
/// reparametrizations of the domain.
template <class F>
HomPoly<F> form_substitute(const F& K, const HomPoly<F>& p, const typename F::Elem& a,
                           const typename F::Elem& b, const typename F::Elem& c,
                           const typename F::Elem& d) {
  const int deg = p.degree;
  HomPoly<F> r = zero_form(K, deg);
  // powers of (a s + b t) and (c s + d t)
  std::vector<HomPoly<F>> spow(deg + 1), tpow(deg + 1);
  spow[0] = tpow[0] = HomPoly<F>{0, {K.one()}};
  HomPoly<F> ls{1, {a, b}}, lt{1, {c, d}};
  for (int i = 1; i <= deg; ++i) {
    spow[i] = form_mul(K, spow[i - 1], ls);
    tpow[i] = form_mul(K, tpow[i - 1], lt);
  }
  for (int i = 0; i <= deg; ++i) {
    if (K.is_zero(p.coeff[i])) continue;
    r = form_add(K, r, form_scale(K, p.coeff[i], form_mul(K, spow[deg - i], tpow[i])));
  }
  return r;
}

namespace detail {

// Index of the highest nonzero coefficient (t-degree), or -1 for the zero form.
template <class F>
int top_index(const F& K, const HomPoly<F>& p) {
  for (int i = static_cast<int>(p.coeff.size()) - 1; i >= 0; --i)
    if (!K.is_zero(p.coeff[i])) return i;
  return -1;
}

template <class F>
int low_index(const F& K, const HomPoly<F>& p) {
  for (int i = 0; i < static_cast<int>(p.coeff.size()); ++i)
    if (!K.is_zero(p.coeff[i])) return i;
  return -1;
}

// Dehomogenized core: coefficients from low..top as a univariate poly with
// nonzero constant and leading terms.
template <class F>
std::vector<typename F::Elem> core(const F& K, const HomPoly<F>& p, int lo, int hi) {
  std::vector<typename F::Elem> u(p.coeff.begin() + lo, p.coeff.begin() + hi + 1);
  (void)K;
  return u;
}

template <class F>
std::vector<typename F::Elem> uni_trim(const F& K, std::vector<typename F::Elem> u) {
  while (!u.empty() && K.is_zero(u.back())) u.pop_back();
  return u;
}

// Remainder of univariate division a mod b (b nonzero).
template <class F>
std::vector<typename F::Elem> uni_mod(const F& K, std::vector<typename F::Elem> a,
                                      const std::vector<typename F::Elem>& b) {
  a = uni_trim(K, std::move(a));
  const int db = static_cast<int>(b.size()) - 1;
  const typename F::Elem lead_inv = K.inv(b.back());
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    const int da = static_cast<int>(a.size()) - 1;
    typename F::Elem q = K.mul(a.back(), lead_inv);
    for (int i = 0; i <= db; ++i)
      a[da - db + i] = K.sub(a[da - db + i], K.mul(q, b[i]));
    a = uni_trim(K, std::move(a));
  }
  return a;
}

template <class F>
std::vector<typename F::Elem> uni_gcd(const F& K, std::vector<typename F::Elem> a,
                                      std::vector<typename F::Elem> b) {
  a = uni_trim(K, std::move(a));
  b = uni_trim(K, std::move(b));
  while (!b.empty()) {
    auto r = uni_mod(K, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace detail

/// Order of vanishing of a form at a point of P^1; nullopt encodes the
/// infinite valuation of the zero form.
template <class F>
std::optional<long long> valuation_at(const F& K, const HomPoly<F>& p, const ProjPoint<F>& a) {
  if (form_is_zero(K, p)) return std::nullopt;
  if (K.is_zero(a.s)) {
    // point [0:1]: order in s
    return p.degree - detail::top_index(K, p);
  }
  // point [1:alpha]: multiplicity of alpha as a root of the dehomogenization.
  const typename F::Elem alpha = a.t;
  std::vector<typename F::Elem> u = detail::uni_trim(K, p.coeff);
  long long order = 0;
  while (true) {
    // synthetic division of u by (x - alpha); remainder = u(alpha)
    typename F::Elem rem = K.zero();
    std::vector<typename F::Elem> q(u.size() > 1 ? u.size() - 1 : 0, K.zero());
    for (int i = static_cast<int>(u.size()) - 1; i >= 0; --i) {
      typename F::Elem cur = K.add(u[i], K.mul(rem, alpha));
      if (i > 0)
        q[i - 1] = cur;
      else if (!K.is_zero(cur))
        return order;
      rem = cur;
    }
    ++order;
    u = detail::uni_trim(K, std::move(q));
    if (u.empty()) return order;  // exhausted: p was (x-alpha)^k exactly
  }
}

/// Monic greatest common divisor of binary forms (zero members ignored).
/// Throws AllZeroInput when every form vanishes identically.
template <class F>
HomPoly<F> gcd_forms(const F& K, const std::vector<HomPoly<F>>& forms) {
  int s_val = -1, t_val = -1;
  std::vector<typename F::Elem> g;  // univariate gcd of cores
  bool seen = false;
  for (const auto& p : forms) {
    if (form_is_zero(K, p)) continue;
    const int lo = detail::low_index(K, p);
    const int hi = detail::top_index(K, p);
    const int sv = p.degree - hi;
    const int tv = lo;
    auto c = detail::core(K, p, lo, hi);
    if (!seen) {
      s_val = sv;
      t_val = tv;
      g = std::move(c);
      seen = true;
    } else {
      s_val = std::min(s_val, sv);
      t_val = std::min(t_val, tv);
      g = detail::uni_gcd(K, std::move(g), c);
    }
    if (s_val == 0 && t_val == 0 && g.size() == 1) break;  // gcd is already 1
  }
  if (!seen) throw AllZeroInput();
  // assemble s^s_val * t^t_val * g, normalized so its first nonzero
  // coefficient is 1
  const int deg = s_val + t_val + static_cast<int>(g.size()) - 1;
  HomPoly<F> r = zero_form(K, deg);
  const typename F::Elem scale = K.inv(g.front());
  for (std::size_t i = 0; i < g.size(); ++i) r.coeff[t_val + i] = K.mul(g[i], scale);
  return r;
}

/// Exact division a / b of binary forms; the caller guarantees b | a.
template <class F>
HomPoly<F> form_divide_exact(const F& K, const HomPoly<F>& a, const HomPoly<F>& b) {
  if (form_is_zero(K, b)) throw Error("division of forms by zero");
  if (form_is_zero(K, a)) return zero_form(K, a.degree - b.degree);
  const int qdeg = a.degree - b.degree;
  if (qdeg < 0) throw Error("form division with dividend of smaller degree");
  // Long division on t-coefficients, top down.
  std::vector<typename F::Elem> rem = a.coeff;
  HomPoly<F> q = zero_form(K, qdeg);
  const int hb = detail::top_index(K, b);
  const typename F::Elem lead_inv = K.inv(b.coeff[hb]);
  for (int i = static_cast<int>(rem.size()) - 1; i >= 0; --i) {
    if (K.is_zero(rem[i])) continue;
    const int qi = i - hb;
    if (qi < 0 || qi > qdeg) throw Error("form division is not exact");
    const typename F::Elem c = K.mul(rem[i], lead_inv);
    q.coeff[qi] = c;
    for (int j = 0; j <= static_cast<int>(b.coeff.size()) - 1; ++j)
      rem[qi + j] = K.sub(rem[qi + j], K.mul(c, b.coeff[j]));
  }
  for (const auto& c : rem)
    if (!K.is_zero(c)) throw Error("form division is not exact");
  return q;
}

/// Coefficients of u^0..u^(len-1) in the expansion of each monomial
/// s^(d-i) t^i along the standard local parametrization at `p`
/// ([1:alpha] -> (1, alpha+u), [0:1] -> (u, 1)).
/// Returned as rows[l][i]; this is the building block of every linear
/// condition on morphism coefficients.
template <class F>
std::vector<std::vector<typename F::Elem>> monomial_expansions(const F& K, int degree,
                                                               const ProjPoint<F>& p, int len) {
  std::vector<std::vector<typename F::Elem>> rows(
      len, std::vector<typename F::Elem>(static_cast<std::size_t>(degree) + 1, K.zero()));
  if (K.is_zero(p.s)) {
    // monomial i expands to u^(d-i)
    for (int i = 0; i <= degree; ++i) {
      const int l = degree - i;
      if (l < len) rows[l][i] = K.one();
    }
    return rows;
  }
  // binomial expansion of (alpha + u)^i
  const typename F::Elem alpha = p.t;
  std::vector<std::vector<typename F::Elem>> binom(degree + 1);
  binom[0] = {K.one()};
  for (int i = 1; i <= degree; ++i) {
    binom[i].assign(i + 1, K.zero());
    for (int j = 0; j < i; ++j) {
      binom[i][j] = K.add(binom[i][j], K.mul(binom[i - 1][j], alpha));
      binom[i][j + 1] = K.add(binom[i][j + 1], binom[i - 1][j]);
    }
  }
  for (int i = 0; i <= degree; ++i)
    for (int l = 0; l <= i && l < len; ++l) rows[l][i] = binom[i][l];
  return rows;
}

/// Expansion of a whole form at p up to order len (coefficients of u^l).
template <class F>
std::vector<typename F::Elem> local_expansion(const F& K, const HomPoly<F>& p,
                                              const ProjPoint<F>& pt, int len) {
  auto rows = monomial_expansions(K, p.degree, pt, len);
  std::vector<typename F::Elem> out(len, K.zero());
  for (int l = 0; l < len; ++l)
    for (std::size_t i = 0; i < p.coeff.size(); ++i)
      out[l] = K.add(out[l], K.mul(rows[l][i], p.coeff[i]));
  return out;
}

}  // namespace rcurves

#endif  // RCURVES_POLY_HPP
