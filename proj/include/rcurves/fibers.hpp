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

#ifndef RCURVES_FIBERS_HPP
#define RCURVES_FIBERS_HPP

#include <optional>
#include <string>
#include <vector>

#include "rcurves/incidence.hpp"
#include "rcurves/morphism.hpp"
#include "rcurves/tower.hpp"

namespace rcurves {

/// Everything the solver reports about one compiled fiber.
template <class F>
struct FiberDescription {
  std::vector<int> degrees;
  std::size_t coeff_dim = 0;
  std::size_t rows = 0;
  std::size_t rank = 0;
  std::vector<std::vector<typename F::Elem>> kernel;
  long long affine_dim = 0;
  long long projective_dim = -1;
  bool empty = true;

  SplittingType splitting;
  int bound_upper = 0;
  int bound_lower = 0;
  bool splitting_within_bounds = false;

  // the closed-form count (dim X conditions per multiplicity unit)
  std::optional<long long> expected;
  bool expected_empty = false;
  bool dim_matches_expected = false;
  // the row-count expectation: every compiled row independent
  long long generic_expected = -1;
  bool dim_matches_generic = false;
};

template <class F>
FiberDescription<F> describe_fiber(const F& K, const BlowupTower& tower,
                                   const ResolvedConditions<F>& rc, const std::vector<int>& degrees,
                                   std::optional<long long> expected, bool expected_empty,
                                   SplitRng& rng) {
  auto sys = compile_resolved(K, tower, degrees, rc);
  FiberDescription<F> fd;
  fd.degrees = degrees;
  fd.coeff_dim = sys.layout.total;
  fd.rows = sys.mat.rows();
  fd.kernel = sys.mat.kernel_basis();
  fd.rank = fd.coeff_dim - fd.kernel.size();
  fd.affine_dim = static_cast<long long>(fd.kernel.size());
  fd.projective_dim = fd.affine_dim - 1;
  fd.empty = fd.kernel.empty();

  auto split_rng = rng.split(0x5b117);
  fd.splitting = kernel_sheaf_splitting(K, tower, rc, degrees, split_rng);
  long long total_orders = 0;
  for (const auto& po : sys.point_orders) total_orders += po.second;
  fd.bound_upper = *std::max_element(degrees.begin(), degrees.end());
  fd.bound_lower =
      *std::min_element(degrees.begin(), degrees.end()) - static_cast<int>(total_orders);
  fd.splitting_within_bounds = true;
  for (int k : fd.splitting)
    if (k > fd.bound_upper || k < fd.bound_lower) fd.splitting_within_bounds = false;

  fd.expected = expected;
  fd.expected_empty = expected_empty;
  if (expected) fd.dim_matches_expected = (fd.projective_dim == *expected);
  fd.generic_expected = static_cast<long long>(fd.coeff_dim) - static_cast<long long>(fd.rows) - 1;
  fd.dim_matches_generic = (fd.projective_dim == fd.generic_expected);
  return fd;
}

/// Checks that the data's multiplicities, accumulated along chains, add up
/// to the class's total multiplicities, center by center.
template <class F>
void check_data_matches_class(const F& K, const BlowupTower& tower, const CurveClass& beta,
                              const std::vector<IncidenceDatum<F>>& data) {
  (void)K;
  validate_class(tower, beta);
  std::vector<long long> acc(tower.centers.size(), 0);
  for (const auto& d : data) {
    if (d.center < 0 || d.center >= static_cast<int>(tower.centers.size()))
      throw ClassMismatch("datum has center index out of range");
    for (int idx : tower.chain_of(d.center)) acc[idx] += d.mult;
  }
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (acc[i] != beta.total_mult[i])
      throw ClassMismatch("data assign multiplicity " + std::to_string(acc[i]) + " to center " +
                          std::to_string(i) + " but the class carries " +
                          std::to_string(beta.total_mult[i]));
}

/// Fiber of the incidence map over the cycle described by `data`.
template <class F>
FiberDescription<F> incidence_fiber(const F& K, const BlowupTower& tower, const CurveClass& beta,
                                const std::vector<IncidenceDatum<F>>& data, SplitRng& rng) {
  check_data_matches_class(K, tower, beta, data);
  std::vector<int> degrees(beta.degrees.begin(), beta.degrees.end());
  auto slice_rng = rng.split(0xc0a1);
  auto rc = resolve_conditions(K, tower, data, {}, slice_rng);
  auto exp = expected_fiber_dim(tower, beta);
  return describe_fiber(K, tower, rc, degrees, exp.value, exp.expected_empty, rng);
}

/// Fiber of the jet evaluation map over fully prescribed jets.
template <class F>
FiberDescription<F> jet_fiber(const F& K, const AmbientSpace& ambient,
                              const std::vector<int>& degrees,
                              const std::vector<JetPrescription<F>>& jets, SplitRng& rng) {
  TowerSpec bare;
  bare.ambient = ambient;
  auto tower = build_tower(bare);
  auto slice_rng = rng.split(0xc0a2);
  auto rc = resolve_conditions(K, tower, {}, jets, slice_rng);
  return describe_fiber(K, tower, rc, degrees, std::nullopt, false, rng);
}

// ---------------------------------------------------------------------------
// sampling

template <class F>
struct SampleDiagnostics {
  bool valid_morphism = false;
  bool contacts_exact = false;
  std::vector<SplittingType> tangent_splitting;
  bool twist_vanishes = false;
  bool free_morphism = false;
  long long twist = 0;
  int attempts = 0;
  std::string failure;
};

template <class F>
struct SampleResult {
  Morphism<F> f;
  SampleDiagnostics<F> diag;
};

/// Sum over centers of (depth+1) times the total multiplicity: the twist at
/// which vanishing certifies freeness under the checked hypotheses.
inline long long freeness_twist(const BlowupTower& tower, const CurveClass& beta) {
  long long twist = 0;
  for (std::size_t i = 0; i < tower.centers.size(); ++i)
    twist += static_cast<long long>(tower.centers[i].depth + 1) * beta.total_mult[i];
  return twist;
}

/// Draws random kernel combinations until one passes the exact diagnostics:
/// base-point-free, total multiplicities exactly beta (excess contact means
/// the draw lies in the excised locus), twist vanishing and freeness of the
/// tangent pullback. Throws GenericSampleNotFound when the budget runs out.
template <class F>
SampleResult<F> sample_fiber_member(const F& K, const FiberDescription<F>& fiber,
                                    const BlowupTower& tower, const CurveClass& beta,
                                    SplitRng& rng, int retries = 8) {
  if (fiber.kernel.empty()) throw GenericSampleNotFound("fiber is empty");
  CoeffLayout layout(tower.ambient.factor_dims, fiber.degrees);
  SampleDiagnostics<F> last;
  for (int attempt = 1; attempt <= retries; ++attempt) {
    auto r = rng.split(attempt);
    std::vector<typename F::Elem> v(layout.total, K.zero());
    for (const auto& b : fiber.kernel) {
      const auto c = K.random(r);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = K.add(v[i], K.mul(c, b[i]));
    }
    SampleDiagnostics<F> diag;
    diag.attempts = attempt;
    diag.twist = freeness_twist(tower, beta);
    auto f = morphism_from_vector(K, layout, v);
    try {
      auto rep = validate(K, f);
      diag.valid_morphism = rep.valid;
      if (!rep.valid) {
        diag.failure = "base point";
        last = diag;
        continue;
      }
      auto observed = pushforward_and_multiplicities(K, f, tower);
      diag.contacts_exact =
          observed.degrees == beta.degrees && observed.total_mult == beta.total_mult;
      if (!diag.contacts_exact) {
        diag.failure = "contact orders differ from the class";
        last = diag;
        continue;
      }
      diag.tangent_splitting = splitting_tangent_pullback(K, f);
      diag.twist_vanishes = h1_twist_vanishes(diag.tangent_splitting, diag.twist).all;
      diag.free_morphism = splittings_all_nonnegative(diag.tangent_splitting);
      return SampleResult<F>{std::move(f), std::move(diag)};
    } catch (const AllZeroFactor&) {
      diag.failure = "zero factor";
    } catch (const ImageInsideCenter&) {
      diag.failure = "image inside a center";
    }
    last = diag;
  }
  throw GenericSampleNotFound("no generic member in " + std::to_string(retries) +
                              " draws (last failure: " + last.failure + ")");
}

// ---------------------------------------------------------------------------
// random experiment data

/// A fresh domain point distinct from the ones already used, drawn from the
/// affine line plus the point at infinity.
template <class F>
ProjPoint<F> random_domain_point(const F& K, SplitRng& rng, std::vector<ProjPoint<F>>& used) {
  for (int guard = 0; guard < 10000; ++guard) {
    ProjPoint<F> p =
        rng.below(1u << 20) == 0 ? make_point(K, K.zero(), K.one()) : make_point(K, K.one(), K.random(rng));
    bool clash = false;
    for (const auto& u : used)
      if (points_equal(K, u, p)) clash = true;
    if (clash) continue;
    used.push_back(p);
    return p;
  }
  throw Error("could not draw a fresh domain point");
}

/// Uniform point on a linear center: a random combination of the kernel of
/// its defining forms, factor by factor.
template <class F>
std::vector<std::vector<typename F::Elem>> random_point_on_center(const F& K, const BlowupTower& tower,
                                                                  const Center& c, SplitRng& rng) {
  if (c.dim == 0 && !c.point_coords.empty()) return point_over(K, c.point_coords);
  std::vector<std::vector<typename F::Elem>> q;
  auto eqs = center_forms_over(K, c);
  for (std::size_t k = 0; k < eqs.size(); ++k) {
    const int n = tower.ambient.factor_dims[k];
    Matrix<F> m(K, eqs[k].size(), n + 1);
    for (std::size_t r = 0; r < eqs[k].size(); ++r)
      for (int col = 0; col <= n; ++col) m.at(r, col) = eqs[k][r][col];
    auto basis = m.kernel_basis();
    std::vector<typename F::Elem> pt(n + 1, K.zero());
    bool nonzero = false;
    while (!nonzero) {
      for (auto& x : pt) x = K.zero();
      for (const auto& b : basis) {
        const auto coeff = K.random(rng);
        for (int col = 0; col <= n; ++col) pt[col] = K.add(pt[col], K.mul(coeff, b[col]));
      }
      for (const auto& x : pt)
        if (!K.is_zero(x)) nonzero = true;
    }
    q.push_back(std::move(pt));
  }
  return q;
}

/// Random incidence data consistent with the class: every center receives
/// multiplicity-one data at fresh domain points until its total transform
/// pairing is exhausted (chain data feed every ancestor).
template <class F>
std::vector<IncidenceDatum<F>> random_incidence_data(const F& K, const BlowupTower& tower,
                                                     const CurveClass& beta, SplitRng& rng) {
  validate_class(tower, beta);
  std::vector<long long> needed = beta.total_mult;
  std::vector<IncidenceDatum<F>> data;
  std::vector<ProjPoint<F>> used;
  for (int i = static_cast<int>(tower.centers.size()) - 1; i >= 0; --i) {
    if (needed[i] < 0)
      throw ClassMismatch("center " + std::to_string(i) +
                          " is over-assigned by deeper chain data");
    while (needed[i] > 0) {
      IncidenceDatum<F> d;
      d.p = random_domain_point(K, rng, used);
      d.center = i;
      d.mult = 1;
      if (tower.centers[i].kind == CenterKind::linear)
        d.target = random_point_on_center(K, tower, tower.centers[i], rng);
      for (int idx : tower.chain_of(i)) needed[idx] -= 1;
      data.push_back(std::move(d));
    }
  }
  return data;
}

}  // namespace rcurves

#endif  // RCURVES_FIBERS_HPP
