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

#ifndef RCURVES_MORPHISM_HPP
#define RCURVES_MORPHISM_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "rcurves/errors.hpp"
#include "rcurves/matrix.hpp"
#include "rcurves/poly.hpp"
#include "rcurves/tower.hpp"

namespace rcurves {

/// Parametrized rational curve in a product of projective spaces: per
/// factor, n_k+1 binary forms of one common degree.
template <class F>
struct Morphism {
  std::vector<int> factor_dims;
  std::vector<std::vector<HomPoly<F>>> components;

  std::vector<int> degrees() const {
    std::vector<int> d;
    for (const auto& c : components) d.push_back(c.front().degree);
    return d;
  }
};

template <class F>
Morphism<F> random_morphism(const F& K, SplitRng& rng, const std::vector<int>& factor_dims,
                            const std::vector<int>& degrees) {
  Morphism<F> f;
  f.factor_dims = factor_dims;
  for (std::size_t k = 0; k < factor_dims.size(); ++k) {
    std::vector<HomPoly<F>> comps;
    for (int j = 0; j <= factor_dims[k]; ++j) {
      HomPoly<F> p = zero_form(K, degrees[k]);
      for (auto& c : p.coeff) c = K.random(rng);
      comps.push_back(std::move(p));
    }
    f.components.push_back(std::move(comps));
  }
  return f;
}

struct ValidationReport {
  bool valid = false;
  std::vector<int> gcd_degrees;  // one per factor; 0 means base-point-free
};

template <class F>
ValidationReport validate(const F& K, const Morphism<F>& f) {
  ValidationReport rep;
  rep.valid = true;
  for (std::size_t k = 0; k < f.components.size(); ++k) {
    bool all_zero = true;
    for (const auto& p : f.components[k])
      if (!form_is_zero(K, p)) all_zero = false;
    if (all_zero) throw AllZeroFactor("factor " + std::to_string(k) + " is identically zero");
    auto g = gcd_forms(K, f.components[k]);
    rep.gcd_degrees.push_back(g.degree);
    if (g.degree > 0) rep.valid = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// field conversions of tower data

template <class F>
std::vector<std::vector<std::vector<typename F::Elem>>> center_forms_over(const F& K,
                                                                          const Center& c) {
  std::vector<std::vector<std::vector<typename F::Elem>>> out;
  for (const auto& factor : c.equations) {
    std::vector<std::vector<typename F::Elem>> forms;
    for (const auto& form : factor) {
      std::vector<typename F::Elem> v;
      for (const auto& x : form) v.push_back(K.from_rational(x));
      forms.push_back(std::move(v));
    }
    out.push_back(std::move(forms));
  }
  return out;
}

template <class F>
std::vector<std::vector<typename F::Elem>> point_over(const F& K,
                                                      const std::vector<std::vector<Rational>>& q) {
  std::vector<std::vector<typename F::Elem>> out;
  for (const auto& factor : q) {
    std::vector<typename F::Elem> v;
    for (const auto& x : factor) v.push_back(K.from_rational(x));
    out.push_back(std::move(v));
  }
  return out;
}

template <class F>
std::vector<typename F::Elem> direction_over(const F& K, const std::vector<Rational>& w) {
  std::vector<typename F::Elem> out;
  for (const auto& x : w) out.push_back(K.from_rational(x));
  return out;
}

/// Index of the first nonzero coordinate; the conditions q_piv f_j - q_j f_piv
/// assume it, and chart conventions are stated relative to it.
template <class F>
int pivot_index(const F& K, const std::vector<typename F::Elem>& q) {
  for (std::size_t j = 0; j < q.size(); ++j)
    if (!K.is_zero(q[j])) return static_cast<int>(j);
  throw MalformedPoint("target point has all coordinates zero");
}

// ---------------------------------------------------------------------------
// contact orders

struct ContactRecord {
  bool infinite = false;
  long long order = 0;
};

/// Composition of a linear form with one factor of f.
template <class F>
HomPoly<F> compose_linear(const F& K, const std::vector<typename F::Elem>& form,
                          const std::vector<HomPoly<F>>& comps) {
  HomPoly<F> acc = zero_form(K, comps.front().degree);
  for (std::size_t j = 0; j < form.size(); ++j)
    acc = form_add(K, acc, form_scale(K, form[j], comps[j]));
  return acc;
}

/// Order of vanishing of a linear center's equations along f at p; INFINITE
/// when every composition vanishes identically (the image sits inside the
/// center's conditions).
template <class F>
ContactRecord contact_order(const F& K, const Morphism<F>& f, const ProjPoint<F>& p,
                            const std::vector<std::vector<std::vector<typename F::Elem>>>& equations) {
  std::optional<long long> best;
  bool any_nonzero = false;
  for (std::size_t k = 0; k < equations.size(); ++k) {
    for (const auto& form : equations[k]) {
      auto comp = compose_linear(K, form, f.components[k]);
      auto val = valuation_at(K, comp, p);
      if (!val.has_value()) continue;  // identically zero composition constrains nothing
      any_nonzero = true;
      if (!best || *val < *best) best = val;
    }
  }
  if (!any_nonzero) return ContactRecord{true, 0};
  return ContactRecord{false, *best};
}

/// The point conditions q_piv f_j - q_j f_piv for one factor (j != piv).
template <class F>
std::vector<HomPoly<F>> point_minor_forms(const F& K, const std::vector<HomPoly<F>>& comps,
                                          const std::vector<typename F::Elem>& q) {
  const int piv = pivot_index(K, q);
  std::vector<HomPoly<F>> out;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (static_cast<int>(j) == piv) continue;
    out.push_back(form_sub(K, form_scale(K, q[piv], comps[j]), form_scale(K, q[j], comps[piv])));
  }
  return out;
}

// ---------------------------------------------------------------------------
// pushforward class: degrees plus total-transform multiplicities

namespace detail {

// One affine coordinate of the lifted curve, written as a ratio of binary
// forms of equal degree. Denominators stay units at every point that
// contributes to a contact count, so gcd degrees of the numerator
// equations compute intersection multiplicities exactly.
template <class F>
struct RationalCoord {
  HomPoly<F> num;
  HomPoly<F> den;
};

// Projective direction tuple with the denominators cleared and the common
// factor (the exceptional multiplicity) divided out.
template <class F>
std::vector<HomPoly<F>> reduced_direction_tuple(const F& K,
                                                const std::vector<RationalCoord<F>>& coords) {
  const std::size_t n = coords.size();
  std::vector<HomPoly<F>> cleared(n);
  for (std::size_t g = 0; g < n; ++g) {
    HomPoly<F> m = coords[g].num;
    for (std::size_t h = 0; h < n; ++h)
      if (h != g) m = form_mul(K, m, coords[h].den);
    cleared[g] = std::move(m);
  }
  bool all_zero = true;
  for (const auto& m : cleared)
    if (!form_is_zero(K, m)) all_zero = false;
  if (all_zero) throw ImageInsideCenter("curve is contained in an exceptional locus");
  auto g = gcd_forms(K, cleared);
  for (auto& m : cleared) m = form_divide_exact(K, m, g);
  return cleared;
}

}  // namespace detail

/// Exact degrees and total-transform multiplicities of a valid morphism.
/// Level-0 multiplicities are degrees of gcds of composed equations;
/// chain centers accumulate minor equations of the lifted direction tuples
/// level by level, so every count is a global gcd degree and no root of a
/// binary form is ever extracted.
template <class F>
CurveClass pushforward_and_multiplicities(const F& K, const Morphism<F>& f,
                                          const BlowupTower& tower) {
  auto rep = validate(K, f);
  if (!rep.valid) throw Error("pushforward of a morphism with base points");

  CurveClass beta;
  for (int d : f.degrees()) beta.degrees.push_back(d);
  beta.total_mult.assign(tower.centers.size(), 0);

  for (std::size_t i = 0; i < tower.centers.size(); ++i) {
    const Center& c = tower.centers[i];
    if (c.kind == CenterKind::linear) {
      std::vector<HomPoly<F>> eqs;
      auto forms = center_forms_over(K, c);
      for (std::size_t k = 0; k < forms.size(); ++k)
        for (const auto& form : forms[k]) eqs.push_back(compose_linear(K, form, f.components[k]));
      bool all_zero = true;
      for (const auto& e : eqs)
        if (!form_is_zero(K, e)) all_zero = false;
      if (all_zero) throw ImageInsideCenter("curve lies inside center " + std::to_string(i));
      beta.total_mult[i] = gcd_forms(K, eqs).degree;
      continue;
    }

    // chain center: run the lift along its chart path
    const auto chain = tower.chain_of(static_cast<int>(i));
    const Center& root = tower.centers[chain[0]];
    auto q = point_over(K, root.point_coords);

    std::vector<detail::RationalCoord<F>> coords;
    std::vector<HomPoly<F>> eqs;
    for (std::size_t k = 0; k < q.size(); ++k) {
      const int piv = pivot_index(K, q[k]);
      HomPoly<F> den = form_scale(K, q[k][piv], f.components[k][piv]);
      auto minors = point_minor_forms(K, f.components[k], q[k]);
      for (auto& m : minors) {
        eqs.push_back(m);
        coords.push_back(detail::RationalCoord<F>{std::move(m), den});
      }
    }
    bool all_zero = true;
    for (const auto& e : eqs)
      if (!form_is_zero(K, e)) all_zero = false;
    if (all_zero) throw ImageInsideCenter("curve lies inside center " + std::to_string(chain[0]));

    long long e_here = gcd_forms(K, eqs).degree;
    bool dead = (e_here == 0);
    for (std::size_t step = 1; step < chain.size() && !dead; ++step) {
      const Center& lvl = tower.centers[chain[step]];
      auto w = direction_over(K, lvl.direction);
      auto tuple = detail::reduced_direction_tuple(K, coords);
      const int chart = lvl.chart;
      std::vector<detail::RationalCoord<F>> next;
      next.push_back(detail::RationalCoord<F>{coords[chart].num, coords[chart].den});
      std::size_t wi = 0;
      for (std::size_t g = 0; g < tuple.size(); ++g) {
        if (static_cast<int>(g) == chart) continue;
        HomPoly<F> minor =
            form_sub(K, tuple[g], form_scale(K, w[wi], tuple[chart]));
        ++wi;
        eqs.push_back(minor);
        next.push_back(detail::RationalCoord<F>{std::move(minor), tuple[chart]});
      }
      coords = std::move(next);
      e_here = gcd_forms(K, eqs).degree;
      dead = (e_here == 0);
    }
    beta.total_mult[i] = e_here;
  }
  return beta;
}

// ---------------------------------------------------------------------------
// splitting types

/// Multiset of twists of a bundle on the line, sorted descending.
using SplittingType = std::vector<int>;

inline long long splitting_sum(const SplittingType& s) {
  long long t = 0;
  for (int v : s) t += v;
  return t;
}

inline int splitting_min(const SplittingType& s) {
  return *std::min_element(s.begin(), s.end());
}

/// Recovers the unique multiset {k_j} with
///   h(t) = sum_j max(0, k_j - t + 1)
/// from a section-count profile. The profile must cover contiguous twists,
/// reach 0 at the top, and pin every summand: its bottom differences must
/// either saturate at `rank` or leave exactly one summand to be recovered
/// from `degree`. Anything else throws ProfileInconsistent.
inline SplittingType splitting_from_twist_profile(const std::map<int, long long>& h, int rank,
                                                  long long degree) {
  if (h.empty()) throw ProfileInconsistent("empty profile");
  const int t_lo = h.begin()->first;
  const int t_hi = h.rbegin()->first;
  for (int t = t_lo; t <= t_hi; ++t)
    if (!h.count(t)) throw ProfileInconsistent("profile keys are not contiguous");
  if (h.at(t_hi) != 0) throw ProfileInconsistent("profile does not reach zero");

  auto value = [&](int t) { return t > t_hi ? 0 : h.at(t); };
  SplittingType out;
  for (int t = t_lo; t <= t_hi; ++t) {
    const long long delta_t = value(t) - value(t + 1);       // #{k_j >= t}
    const long long delta_t1 = value(t + 1) - value(t + 2);  // #{k_j >= t+1}
    const long long count = delta_t - delta_t1;
    if (count < 0) throw ProfileInconsistent("profile differences are not monotone");
    for (long long c = 0; c < count; ++c) out.push_back(t);
  }
  const long long remaining = rank - static_cast<long long>(out.size());
  if (remaining < 0) throw ProfileInconsistent("profile implies more summands than the rank");
  if (remaining == 1) {
    const long long k = degree - splitting_sum(out);
    if (k > t_lo - 1) throw ProfileInconsistent("hidden summand would be visible in the profile");
    out.push_back(static_cast<int>(k));
  } else if (remaining > 1) {
    throw ProfileInconsistent("profile leaves " + std::to_string(remaining) +
                              " summands undetermined");
  }
  if (splitting_sum(out) != degree) throw ProfileInconsistent("degree mismatch");
  // forward re-evaluation must reproduce the profile exactly
  for (int t = t_lo; t <= t_hi; ++t) {
    long long acc = 0;
    for (int k : out) acc += std::max(0LL, static_cast<long long>(k) - t + 1);
    if (acc != h.at(t)) throw ProfileInconsistent("profile is not realized by any multiset");
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

/// Splitting of the pullback of the tangent bundle, one multiset per factor.
/// Computed from syzygy dimensions: h(m) = dim { (g_j) of degree m-d with
/// sum f_j g_j = 0 }, the section counts of the twisted dual, decoded by
/// splitting_from_twist_profile.
template <class F>
std::vector<SplittingType> splitting_tangent_pullback(const F& K, const Morphism<F>& f) {
  auto rep = validate(K, f);
  if (!rep.valid) throw Error("splitting of a morphism with base points");

  std::vector<SplittingType> out;
  for (std::size_t k = 0; k < f.components.size(); ++k) {
    const int n = f.factor_dims[k];
    const int d = f.components[k].front().degree;
    auto syzygy_dim = [&](int m) -> long long {
      if (m < d) return 0;
      const int gdeg = m - d;
      Matrix<F> mat(K, m + 1, static_cast<std::size_t>(n + 1) * (gdeg + 1));
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= gdeg; ++i) {
          const std::size_t col = static_cast<std::size_t>(j) * (gdeg + 1) + i;
          for (int a = 0; a <= d; ++a) mat.at(a + i, col) = f.components[k][j].coeff[a];
        }
      return static_cast<long long>(mat.kernel_basis().size());
    };
    // summands of the dual kernel live in [-2d, -d], so twists -m with
    // m in [d-1, 2d+1] pin the profile at both ends
    std::map<int, long long> h;
    for (int m = d - 1; m <= 2 * d + 1; ++m) h[-m] = syzygy_dim(m);
    auto dual = splitting_from_twist_profile(h, n, -static_cast<long long>(n + 1) * d);
    SplittingType s;
    for (int v : dual) s.push_back(-v);
    std::sort(s.rbegin(), s.rend());
    out.push_back(std::move(s));
  }
  return out;
}

struct TwistVanishing {
  std::vector<bool> per_factor;
  bool all = true;
};

/// H^1 of the twisted pullback vanishes iff even the smallest summand
/// stays >= -1 after twisting down by c.
inline TwistVanishing h1_twist_vanishes(const std::vector<SplittingType>& splittings,
                                        long long c) {
  TwistVanishing tv;
  for (const auto& s : splittings) {
    const bool ok = static_cast<long long>(splitting_min(s)) - c >= -1;
    tv.per_factor.push_back(ok);
    if (!ok) tv.all = false;
  }
  return tv;
}

/// Free morphism certificate: every summand of the tangent pullback
/// nonnegative.
inline bool splittings_all_nonnegative(const std::vector<SplittingType>& splittings) {
  for (const auto& s : splittings)
    if (splitting_min(s) < 0) return false;
  return true;
}

}  // namespace rcurves

#endif  // RCURVES_MORPHISM_HPP
