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

#ifndef RCURVES_INCIDENCE_HPP
#define RCURVES_INCIDENCE_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rcurves/errors.hpp"
#include "rcurves/matrix.hpp"
#include "rcurves/morphism.hpp"
#include "rcurves/poly.hpp"
#include "rcurves/series.hpp"
#include "rcurves/tower.hpp"

namespace rcurves {

// ---------------------------------------------------------------------------
// coefficient space

/// Layout of the morphism coefficient space: per factor k, n_k+1 component
/// blocks of d_k+1 monomial coefficients each, concatenated.
struct CoeffLayout {
  std::vector<int> factor_dims;
  std::vector<int> degrees;
  std::vector<std::size_t> offsets;
  std::size_t total = 0;

  CoeffLayout() = default;
  CoeffLayout(std::vector<int> dims, std::vector<int> degs)
      : factor_dims(std::move(dims)), degrees(std::move(degs)) {
    for (std::size_t k = 0; k < factor_dims.size(); ++k) {
      offsets.push_back(total);
      total += static_cast<std::size_t>(factor_dims[k] + 1) * (degrees[k] + 1);
    }
  }

  std::size_t index(int k, int j, int i) const {
    return offsets[k] + static_cast<std::size_t>(j) * (degrees[k] + 1) + i;
  }
};

template <class F>
Morphism<F> morphism_from_vector(const F& K, const CoeffLayout& layout,
                                 const std::vector<typename F::Elem>& v) {
  Morphism<F> f;
  f.factor_dims = layout.factor_dims;
  for (std::size_t k = 0; k < layout.factor_dims.size(); ++k) {
    std::vector<HomPoly<F>> comps;
    for (int j = 0; j <= layout.factor_dims[k]; ++j) {
      HomPoly<F> p = zero_form(K, layout.degrees[k]);
      for (int i = 0; i <= layout.degrees[k]; ++i) p.coeff[i] = v[layout.index(k, j, i)];
      comps.push_back(std::move(p));
    }
    f.components.push_back(std::move(comps));
  }
  return f;
}

// ---------------------------------------------------------------------------
// data

/// One incidence condition: the curve meets center `center` at domain point
/// p with multiplicity mult; `target` fixes the point of the center (per
/// factor, homogeneous). For chain centers the target is the root point and
/// the chart path comes from the tower.
template <class F>
struct IncidenceDatum {
  ProjPoint<F> p;
  int center = 0;
  std::vector<std::vector<typename F::Elem>> target;
  long long mult = 1;
};

/// A fully prescribed jet condition: the affine expansion of the curve at p
/// around the point q must agree with `values` modulo t^(order+1), one
/// truncated series per affine coordinate of the ambient product.
template <class F>
struct JetPrescription {
  ProjPoint<F> p;
  std::vector<std::vector<typename F::Elem>> base;
  int order = 1;
  std::vector<TruncatedSeries<F>> values;
};

struct RowTag {
  int datum = -1;  // index into the data/prescription list; -1 for twist rows
  std::string kind;
  int factor = 0;
  int coord = 0;
  int order = 0;
};

template <class F>
struct ConstraintSystem {
  CoeffLayout layout;
  Matrix<F> mat;
  std::vector<RowTag> tags;
  // orders imposed per distinct domain point, for splitting lower bounds
  std::vector<std::pair<ProjPoint<F>, long long>> point_orders;

  explicit ConstraintSystem(const F& K, CoeffLayout lay)
      : layout(std::move(lay)), mat(K, 0, layout.total) {}
};

namespace detail {

template <class F>
void note_point_order(ConstraintSystem<F>& sys, const F& K, const ProjPoint<F>& p,
                      long long orders) {
  for (auto& [pt, o] : sys.point_orders)
    if (points_equal(K, pt, p)) {
      o += orders;
      return;
    }
  sys.point_orders.emplace_back(p, orders);
}

// One linear condition: sum over listed (component, taylor-row) pieces.
template <class F>
struct RowBuilder {
  const F& K;
  const CoeffLayout& layout;
  std::vector<typename F::Elem> row;

  RowBuilder(const F& k, const CoeffLayout& lay)
      : K(k), layout(lay), row(lay.total, k.zero()) {}

  // add c * (l-th expansion coefficient of component (k,j))
  void add(int factor, int comp, const std::vector<std::vector<typename F::Elem>>& expansions,
           int l, const typename F::Elem& c) {
    if (K.is_zero(c)) return;
    for (int i = 0; i <= layout.degrees[factor]; ++i) {
      const auto& e = expansions[l][i];
      if (K.is_zero(e)) continue;
      auto& cell = row[layout.index(factor, comp, i)];
      cell = K.add(cell, K.mul(c, e));
    }
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// level-0 incidence rows

/// Appends the conditions "q_piv f_j - q_j f_piv vanishes to order e at p"
/// for every factor and every non-pivot coordinate.
template <class F>
void append_point_rows(ConstraintSystem<F>& sys, const F& K, const ProjPoint<F>& p,
                       const std::vector<std::vector<typename F::Elem>>& q, long long mult,
                       int datum_index, const std::string& kind) {
  for (std::size_t k = 0; k < q.size(); ++k) {
    const int piv = pivot_index(K, q[k]);
    auto exp = monomial_expansions(K, sys.layout.degrees[k], p, static_cast<int>(mult));
    for (int j = 0; j < static_cast<int>(q[k].size()); ++j) {
      if (j == piv) continue;
      for (int l = 0; l < mult; ++l) {
        detail::RowBuilder<F> rb(K, sys.layout);
        rb.add(static_cast<int>(k), j, exp, l, q[k][piv]);
        rb.add(static_cast<int>(k), piv, exp, l, K.neg(q[k][j]));
        sys.mat.append_row(rb.row);
        sys.tags.push_back(RowTag{datum_index, kind, static_cast<int>(k), j, l});
      }
    }
  }
  detail::note_point_order(sys, K, p, mult);
}

// ---------------------------------------------------------------------------
// jet rows

/// Appends the conditions "the affine expansion of f at p around q agrees
/// with the prescribed series modulo t^(order+1)", i.e. the vanishing of
/// the expansion coefficients of q_piv f_j - (q_j + q_piv s_j) f_piv.
template <class F>
void append_jet_rows(ConstraintSystem<F>& sys, const F& K, const JetPrescription<F>& jet,
                     int datum_index, const std::string& kind) {
  const int len = jet.order + 1;
  int g = 0;  // global affine coordinate index
  for (std::size_t k = 0; k < jet.base.size(); ++k) {
    const auto& q = jet.base[k];
    const int piv = pivot_index(K, q);
    auto exp = monomial_expansions(K, sys.layout.degrees[k], jet.p, len);
    for (int j = 0; j < static_cast<int>(q.size()); ++j) {
      if (j == piv) continue;
      const auto& s = jet.values[g];
      for (int l = 0; l < len; ++l) {
        detail::RowBuilder<F> rb(K, sys.layout);
        rb.add(static_cast<int>(k), j, exp, l, q[piv]);
        rb.add(static_cast<int>(k), piv, exp, l, K.neg(q[j]));
        // convolution: coefficient of t^l in s_j(t) * f_piv(t)
        for (int lp = 0; lp <= l && lp < s.order; ++lp)
          rb.add(static_cast<int>(k), piv, exp, l - lp, K.neg(K.mul(q[piv], s.c[lp])));
        sys.mat.append_row(rb.row);
        sys.tags.push_back(RowTag{datum_index, kind, static_cast<int>(k), j, l});
      }
      ++g;
    }
  }
  detail::note_point_order(sys, K, jet.p, jet.order + 1);
}

// ---------------------------------------------------------------------------
// chain (infinitesimal) rows

namespace detail {

// Global affine coordinate bookkeeping at a point-like root: the list of
// (factor, component) pairs skipping each factor's pivot, in factor order.
template <class F>
std::vector<std::pair<int, int>> affine_coords(const F& K,
                                               const std::vector<std::vector<typename F::Elem>>& q) {
  std::vector<std::pair<int, int>> coords;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const int piv = pivot_index(K, q[k]);
    for (int j = 0; j < static_cast<int>(q[k].size()); ++j)
      if (j != piv) coords.emplace_back(static_cast<int>(k), j);
  }
  return coords;
}

}  // namespace detail

/// Depth-0 and depth-1 chain conditions are triangular and exactly linear:
/// all coordinates vanish at p, and at depth 1 the first-order minors
/// z_j - w_j z_c vanish as well (dim X + (dim X - 1) rows). Directions with
/// a nonzero component outside the divisor coordinate's factor cannot be
/// written as single-factor linear rows; those data and all deeper chains
/// go through a jet slice (see append_chain_jet_slice_rows).
template <class F>
bool chain_is_linear(const F& K, const BlowupTower& tower, int center) {
  const auto chain = tower.chain_of(center);
  if (chain.size() > 2) return false;
  if (chain.size() == 1) return true;
  const Center& root = tower.centers[chain[0]];
  auto q = point_over(K, root.point_coords);
  auto coords = detail::affine_coords(K, q);
  const Center& child = tower.centers[chain[1]];
  const int chart_factor = coords[child.chart].first;
  std::size_t wi = 0;
  for (std::size_t g = 0; g < coords.size(); ++g) {
    if (static_cast<int>(g) == child.chart) continue;
    if (coords[g].first != chart_factor && child.direction[wi] != 0) return false;
    ++wi;
  }
  return true;
}

template <class F>
void append_chain_linear_rows(ConstraintSystem<F>& sys, const F& K, const BlowupTower& tower,
                              int center, const ProjPoint<F>& p, int datum_index) {
  const auto chain = tower.chain_of(center);
  const Center& root = tower.centers[chain[0]];
  auto q = point_over(K, root.point_coords);
  append_point_rows(sys, K, p, q, 1, datum_index, "chain-base");
  if (chain.size() == 1) return;

  auto coords = detail::affine_coords(K, q);
  const Center& child = tower.centers[chain[1]];
  const auto [kc, jc] = coords[child.chart];
  const int piv_c = pivot_index(K, q[kc]);
  auto w = direction_over(K, child.direction);

  std::size_t wi = 0;
  for (std::size_t g = 0; g < coords.size(); ++g) {
    if (static_cast<int>(g) == child.chart) continue;
    const auto [k, j] = coords[g];
    const int piv = pivot_index(K, q[k]);
    auto exp = monomial_expansions(K, sys.layout.degrees[k], p, 2);
    detail::RowBuilder<F> rb(K, sys.layout);
    // first-order coefficient of q_piv f_j - q_j f_piv
    rb.add(k, j, exp, 1, q[k][piv]);
    rb.add(k, piv, exp, 1, K.neg(q[k][j]));
    if (!K.is_zero(w[wi])) {
      // same factor as the divisor coordinate: subtract w * (first-order
      // coefficient of q_piv f_jc - q_jc f_piv)
      detail::RowBuilder<F> rc(K, sys.layout);
      rc.add(kc, jc, exp, 1, q[kc][piv_c]);
      rc.add(kc, piv_c, exp, 1, K.neg(q[kc][jc]));
      for (std::size_t col = 0; col < rb.row.size(); ++col)
        rb.row[col] = K.sub(rb.row[col], K.mul(w[wi], rc.row[col]));
    }
    ++wi;
    sys.mat.append_row(rb.row);
    sys.tags.push_back(RowTag{datum_index, "chain-direction", k, j, 1});
  }
  detail::note_point_order(sys, K, p, 1);
}

/// One linear slice of a deeper chain condition: a random transversal jet
/// is pushed down through the chart path by iterated blowdown, giving a
/// fully prescribed jet through the whole chain. The union of these slices
/// over jet choices sweeps the exact-contact locus.
template <class F>
JetPrescription<F> chain_jet_slice(const F& K, const BlowupTower& tower, int center,
                                   const ProjPoint<F>& p, SplitRng& rng) {
  const auto chain = tower.chain_of(center);
  const int depth = static_cast<int>(chain.size()) - 1;
  const Center& root = tower.centers[chain[0]];
  auto q = point_over(K, root.point_coords);
  auto coords = detail::affine_coords(K, q);
  const std::size_t n = coords.size();

  // start with the zero 0-jet at the deepest point, then extend by one
  // random order and blow down at each chart of the path
  std::vector<TruncatedSeries<F>> arc(n, series_zero(K, 1));
  for (int step = depth; step >= 1; --step) {
    const Center& lvl = tower.centers[chain[step]];
    const int order = depth - step;  // current order of `arc`
    for (std::size_t g = 0; g < n; ++g) {
      TruncatedSeries<F> ext = series_zero(K, order + 2);
      for (int i = 0; i <= order; ++i) ext.c[i] = arc[g].c[i];
      ext.c[order + 1] = K.random(rng);
      if (g == 0 && order + 1 == 1) {
        while (K.is_zero(ext.c[1])) ext.c[1] = K.random(rng);  // transversal speed
      }
      arc[g] = std::move(ext);
    }
    // blow down through chart lvl.chart: divisor slot is arc[0]
    auto w = direction_over(K, lvl.direction);
    std::vector<TruncatedSeries<F>> down(n, series_zero(K, order + 2));
    down[lvl.chart] = arc[0];
    std::size_t wi = 0;
    std::size_t slot = 1;
    for (std::size_t g = 0; g < n; ++g) {
      if (static_cast<int>(g) == lvl.chart) continue;
      TruncatedSeries<F> shifted = arc[slot];
      shifted.c[0] = K.add(shifted.c[0], w[wi]);
      down[g] = series_mul(K, arc[0], shifted);
      ++wi;
      ++slot;
    }
    arc = std::move(down);
  }

  JetPrescription<F> jet;
  jet.p = p;
  jet.base = q;
  jet.order = depth;
  for (std::size_t g = 0; g < n; ++g) jet.values.push_back(series_truncate(K, arc[g], depth + 1));
  return jet;
}

// ---------------------------------------------------------------------------
// compilers

/// Conditions with every random choice already made: compiling them is
/// deterministic and can be repeated at raised degrees (the negative-twist
/// trick behind kernel-sheaf splittings).
template <class F>
struct ResolvedConditions {
  std::vector<int> factor_dims;
  struct Point {
    int datum;
    ProjPoint<F> p;
    std::vector<std::vector<typename F::Elem>> target;
    long long mult;
  };
  struct ChainLinear {
    int datum;
    int center;
    ProjPoint<F> p;
  };
  struct Jet {
    int datum;
    JetPrescription<F> jet;
    std::string kind;
  };
  std::vector<Point> points;
  std::vector<ChainLinear> chains;
  std::vector<Jet> jets;
  std::vector<ProjPoint<F>> domain_points;
};

/// Turns incidence data plus jet prescriptions into resolved conditions.
/// Level-0 targets stay Taylor conditions on the point minors; chain
/// targets become triangular rows at depth <= 1 and one seeded jet slice
/// beyond (the union of slices over jet draws sweeps the exact-contact
/// locus, which is not linear itself).
template <class F>
ResolvedConditions<F> resolve_conditions(const F& K, const BlowupTower& tower,
                                         const std::vector<IncidenceDatum<F>>& data,
                                         const std::vector<JetPrescription<F>>& jets,
                                         SplitRng& rng) {
  ResolvedConditions<F> out;
  out.factor_dims = tower.ambient.factor_dims;

  bool has_positive_dim_center = false;
  for (const auto& c : tower.centers)
    if (c.dim > 0) has_positive_dim_center = true;

  for (std::size_t a = 0; a < data.size(); ++a) {
    const auto& d = data[a];
    if (d.center < 0 || d.center >= static_cast<int>(tower.centers.size()))
      throw ClassMismatch("datum " + std::to_string(a) + ": center index out of range");
    if (d.mult < 1)
      throw ClassMismatch("datum " + std::to_string(a) + ": multiplicity must be >= 1");
    if (d.mult > 1 && has_positive_dim_center)
      throw ClassMismatch("multiplicities above 1 need all centers to be points");
    out.domain_points.push_back(d.p);
    const Center& c = tower.centers[d.center];
    if (c.kind == CenterKind::linear) {
      out.points.push_back({static_cast<int>(a), d.p, d.target, d.mult});
      continue;
    }
    if (d.mult != 1)
      throw ClassMismatch("datum " + std::to_string(a) + ": chain conditions carry multiplicity 1");
    if (chain_is_linear(K, tower, d.center)) {
      out.chains.push_back({static_cast<int>(a), d.center, d.p});
    } else {
      auto jet = chain_jet_slice(K, tower, d.center, d.p, rng);
      out.jets.push_back({static_cast<int>(a), std::move(jet), "chain-slice"});
    }
  }
  const int base = static_cast<int>(data.size());
  for (std::size_t a = 0; a < jets.size(); ++a) {
    out.domain_points.push_back(jets[a].p);
    out.jets.push_back({base + static_cast<int>(a), jets[a], "jet"});
  }
  for (std::size_t a = 0; a < out.domain_points.size(); ++a)
    for (std::size_t b = a + 1; b < out.domain_points.size(); ++b)
      if (points_equal(K, out.domain_points[a], out.domain_points[b]))
        throw DiagonalViolation("conditions " + std::to_string(a) + " and " + std::to_string(b) +
                                " share a domain point");
  return out;
}

template <class F>
ConstraintSystem<F> compile_resolved(const F& K, const BlowupTower& tower,
                                     const std::vector<int>& degrees,
                                     const ResolvedConditions<F>& rc) {
  CoeffLayout layout(rc.factor_dims, degrees);
  ConstraintSystem<F> sys(K, layout);
  for (const auto& pc : rc.points)
    append_point_rows(sys, K, pc.p, pc.target, pc.mult, pc.datum, "incidence");
  for (const auto& cc : rc.chains) append_chain_linear_rows(sys, K, tower, cc.center, cc.p, cc.datum);
  for (const auto& jc : rc.jets) append_jet_rows(sys, K, jc.jet, jc.datum, jc.kind);
  return sys;
}

/// One-shot compilation of incidence data (resolve + compile).
template <class F>
ConstraintSystem<F> compile_incidence(const F& K, const BlowupTower& tower,
                                      const std::vector<int>& degrees,
                                      const std::vector<IncidenceDatum<F>>& data, SplitRng& rng) {
  auto rc = resolve_conditions(K, tower, data, {}, rng);
  return compile_resolved(K, tower, degrees, rc);
}

/// Compiles jet prescriptions only (the auxiliary fibers with fully fixed
/// jets; always linear, every row supported on one factor).
template <class F>
ConstraintSystem<F> compile_jets(const F& K, const std::vector<int>& factor_dims,
                                 const std::vector<int>& degrees,
                                 const std::vector<JetPrescription<F>>& jets) {
  CoeffLayout layout(factor_dims, degrees);
  ConstraintSystem<F> sys(K, layout);
  for (std::size_t a = 0; a < jets.size(); ++a)
    for (std::size_t b = a + 1; b < jets.size(); ++b)
      if (points_equal(K, jets[a].p, jets[b].p)) throw DiagonalViolation();
  for (std::size_t a = 0; a < jets.size(); ++a)
    append_jet_rows(sys, K, jets[a], static_cast<int>(a), "jet");
  return sys;
}

// ---------------------------------------------------------------------------
// kernel-sheaf splitting via twist profiles

namespace detail {

template <class F>
void append_vanishing_rows(ConstraintSystem<F>& sys, const F& K, const ProjPoint<F>& x0,
                           int order) {
  for (std::size_t k = 0; k < sys.layout.factor_dims.size(); ++k) {
    auto exp = monomial_expansions(K, sys.layout.degrees[k], x0, order);
    for (int j = 0; j <= sys.layout.factor_dims[k]; ++j)
      for (int l = 0; l < order; ++l) {
        RowBuilder<F> rb(K, sys.layout);
        rb.add(static_cast<int>(k), j, exp, l, K.one());
        sys.mat.append_row(rb.row);
        sys.tags.push_back(RowTag{-1, "twist", static_cast<int>(k), j, l});
      }
  }
}

}  // namespace detail

/// Splitting type of the kernel sheaf of a compiled system. The section
/// profile h(t) counts kernel members whose components vanish to order t
/// at an auxiliary point away from the data support; negative twists are
/// realized by recompiling the same conditions at uniformly raised
/// degrees. Decoded by splitting_from_twist_profile; the auxiliary point
/// is redrawn on inconsistency (at most 5 times).
template <class F>
SplittingType kernel_sheaf_splitting(const F& K, const BlowupTower& tower,
                                     const ResolvedConditions<F>& rc,
                                     const std::vector<int>& degrees, SplitRng& rng) {
  const auto base = compile_resolved(K, tower, degrees, rc);
  int rank = 0;
  for (std::size_t k = 0; k < base.layout.factor_dims.size(); ++k)
    rank += base.layout.factor_dims[k] + 1;
  const int max_deg = *std::max_element(degrees.begin(), degrees.end());

  for (int attempt = 0; attempt < 5; ++attempt) {
    // auxiliary point distinct from every incidence point
    ProjPoint<F> x0 = make_point(K, K.one(), K.random(rng));
    bool clash = false;
    for (const auto& p : rc.domain_points)
      if (points_equal(K, p, x0)) clash = true;
    if (clash) continue;

    std::map<int, long long> h;
    {
      h[0] = static_cast<long long>(base.layout.total - base.mat.rank());
      for (int t = 1; t <= max_deg + 1; ++t) {
        ConstraintSystem<F> twisted = base;
        detail::append_vanishing_rows(twisted, K, x0, t);
        h[t] = static_cast<long long>(twisted.layout.total - twisted.mat.rank());
        if (h[t] == 0) break;
      }
      if (h.rbegin()->second != 0) h[h.rbegin()->first + 1] = 0;
    }
    // extend downward until the bottom difference saturates at the rank;
    // every summand is bounded below by min degree minus the total imposed
    // orders, so the loop must stop by then
    long long total_orders = 0;
    for (const auto& po : base.point_orders) total_orders += po.second;
    const int t_floor =
        *std::min_element(degrees.begin(), degrees.end()) - static_cast<int>(total_orders);
    int t_lo = 0;
    while (h.at(t_lo) - h.at(t_lo + 1) < rank) {
      --t_lo;
      if (t_lo < t_floor) throw ProfileInconsistent("twist profile does not saturate");
      std::vector<int> raised = degrees;
      for (auto& d : raised) d += -t_lo;
      auto sys = compile_resolved(K, tower, raised, rc);
      h[t_lo] = static_cast<long long>(sys.layout.total - sys.mat.rank());
    }
    long long degree = 0;
    {
      auto value = [&](int t) { return h.count(t) ? h.at(t) : 0LL; };
      for (int t = t_lo; t <= h.rbegin()->first; ++t) {
        const long long cnt = (value(t) - value(t + 1)) - (value(t + 1) - value(t + 2));
        degree += cnt * t;
      }
    }
    try {
      return splitting_from_twist_profile(h, rank, degree);
    } catch (const ProfileInconsistent&) {
      continue;  // non-generic auxiliary point: redraw
    }
  }
  throw ProfileInconsistent("no usable twist point found in 5 attempts");
}

}  // namespace rcurves

#endif  // RCURVES_INCIDENCE_HPP
