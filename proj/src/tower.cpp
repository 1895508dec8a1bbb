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

#include "rcurves/tower.hpp"

#include <algorithm>

#include "rcurves/errors.hpp"
#include "rcurves/matrix.hpp"

namespace rcurves {

namespace {

// Rank and (for point-like spaces) the unique projective solution of the
// linear forms cutting one factor's subspace.
struct FactorCut {
  int rank = 0;
  std::vector<Rational> point;  // filled when rank == n (a single point)
};

FactorCut analyze_factor(const std::vector<std::vector<Rational>>& forms, int n, int center_idx,
                         int factor_idx) {
  RationalField Q;
  Matrix<RationalField> m(Q, forms.size(), n + 1);
  for (std::size_t r = 0; r < forms.size(); ++r) {
    if (static_cast<int>(forms[r].size()) != n + 1)
      throw TowerError("center " + std::to_string(center_idx) + ", factor " +
                       std::to_string(factor_idx) + ": linear form must have " +
                       std::to_string(n + 1) + " coefficients");
    for (int c = 0; c <= n; ++c) m.at(r, c) = forms[r][c];
  }
  FactorCut cut;
  auto kernel = m.kernel_basis();
  cut.rank = static_cast<int>(n + 1 - kernel.size());
  if (cut.rank == n + 1)
    throw TowerError("center " + std::to_string(center_idx) + ", factor " +
                     std::to_string(factor_idx) + ": equations cut out the empty set");
  if (cut.rank == n) cut.point = kernel[0];
  return cut;
}

}  // namespace

BlowupTower build_tower(const TowerSpec& spec) {
  if (spec.ambient.factors() < 1) throw TowerError("ambient product needs at least one factor");
  for (int n : spec.ambient.factor_dims)
    if (n < 1) throw TowerError("every factor dimension must be positive");

  BlowupTower tower;
  tower.ambient = spec.ambient;
  const int N = spec.ambient.dim();
  const int m = spec.ambient.factors();

  for (int i = 0; i < static_cast<int>(spec.centers.size()); ++i) {
    const CenterSpec& cs = spec.centers[i];
    Center c;
    c.kind = cs.kind;
    if (cs.kind == CenterKind::linear) {
      if (static_cast<int>(cs.equations.size()) != m)
        throw TowerError("center " + std::to_string(i) + ": equations must list all " +
                         std::to_string(m) + " factors");
      c.equations = cs.equations;
      c.level = 0;
      c.dim = 0;
      int codim = 0;
      for (int k = 0; k < m; ++k) {
        auto cut = analyze_factor(cs.equations[k], spec.ambient.factor_dims[k], i, k);
        c.factor_ranks.push_back(cut.rank);
        c.dim += spec.ambient.factor_dims[k] - cut.rank;
        codim += cut.rank;
        c.point_coords.push_back(cut.point);
      }
      if (codim == 0) throw TowerError("center " + std::to_string(i) + " is the whole space");
      c.codim = codim;
      if (c.dim > 0) c.point_coords.clear();
    } else {
      if (cs.parent < 0 || cs.parent >= i)
        throw TowerError("center " + std::to_string(i) +
                         ": infinitesimal parent must be an earlier center (no cycles)");
      const Center& par = tower.centers[cs.parent];
      if (par.dim != 0)
        throw TowerError("center " + std::to_string(i) +
                         ": infinitesimal parent must be a point, got dimension " +
                         std::to_string(par.dim));
      if (cs.chart < 0 || cs.chart >= N)
        throw TowerError("center " + std::to_string(i) + ": chart index out of range [0, " +
                         std::to_string(N) + ")");
      if (static_cast<int>(cs.direction.size()) != N - 1)
        throw TowerError("center " + std::to_string(i) + ": direction needs " +
                         std::to_string(N - 1) + " coordinates");
      c.parent = cs.parent;
      c.chart = cs.chart;
      c.direction = cs.direction;
      c.level = par.level + 1;
      c.dim = 0;
      // a point on the exceptional fiber of a point blowup has codimension
      // dim X in that stage
      c.codim = N;
      tower.centers[cs.parent].children.push_back(i);
    }
    c.depth = c.level;
    tower.centers.push_back(std::move(c));
  }
  return tower;
}

void validate_class(const BlowupTower& tower, const CurveClass& beta) {
  if (beta.degrees.size() != tower.ambient.factor_dims.size())
    throw ClassMismatch("class needs one degree per ambient factor");
  if (beta.total_mult.size() != tower.centers.size())
    throw ClassMismatch("class needs one total multiplicity per center");
  bool positive = false;
  for (long long d : beta.degrees) {
    if (d < 0) throw ClassMismatch("factor degrees must be nonnegative");
    if (d > 0) positive = true;
  }
  if (!positive) throw ClassMismatch("the pushforward class must be nonzero");
}

namespace {

// Two products of linear subspaces are disjoint iff the stacked equations
// of some factor have no projective solution.
bool centers_disjoint(const BlowupTower& tower, const Center& a, const Center& b) {
  RationalField Q;
  for (int k = 0; k < tower.ambient.factors(); ++k) {
    const int n = tower.ambient.factor_dims[k];
    Matrix<RationalField> m(Q, a.equations[k].size() + b.equations[k].size(), n + 1);
    std::size_t r = 0;
    for (const auto& form : a.equations[k]) {
      for (int c = 0; c <= n; ++c) m.at(r, c) = form[c];
      ++r;
    }
    for (const auto& form : b.equations[k]) {
      for (int c = 0; c <= n; ++c) m.at(r, c) = form[c];
      ++r;
    }
    if (m.rank() == static_cast<std::size_t>(n + 1)) return true;
  }
  return false;
}

}  // namespace

HypothesisReport check_main_hypotheses(const BlowupTower& tower, const CurveClass& beta) {
  validate_class(tower, beta);
  HypothesisReport rep;
  long long weighted = 0;
  for (std::size_t i = 0; i < tower.centers.size(); ++i)
    weighted += (tower.centers[i].depth + 1) * beta.total_mult[i];
  for (long long d : beta.degrees) rep.factor_margins.push_back(d - weighted);
  rep.center_margins = beta.total_mult;
  rep.pass = true;
  for (long long v : rep.factor_margins)
    if (v < 0) rep.pass = false;
  for (long long v : rep.center_margins)
    if (v < 0) rep.pass = false;

  bool all_points = true;
  for (const auto& c : tower.centers)
    if (c.kind == CenterKind::linear && c.dim > 0) all_points = false;
  bool all_linear0 = tower.all_level0();
  bool disjoint = all_linear0;
  if (all_linear0) {
    for (std::size_t i = 0; i < tower.centers.size() && disjoint; ++i)
      for (std::size_t j = i + 1; j < tower.centers.size() && disjoint; ++j)
        if (!centers_disjoint(tower, tower.centers[i], tower.centers[j])) disjoint = false;
  }
  if (all_points)
    rep.clause = HypothesisClause::all_point_centers;
  else if (all_linear0 && disjoint)
    rep.clause = HypothesisClause::disjoint_convex_centers;
  else
    rep.clause = HypothesisClause::neither;
  return rep;
}

std::vector<long long> strict_from_total(const BlowupTower& tower, const CurveClass& beta) {
  validate_class(tower, beta);
  std::vector<long long> strict = beta.total_mult;
  for (std::size_t i = 0; i < tower.centers.size(); ++i)
    for (int child : tower.centers[i].children) strict[i] -= beta.total_mult[child];
  return strict;
}

long long expected_dim_mor(const BlowupTower& tower, const CurveClass& beta) {
  validate_class(tower, beta);
  long long dim = 0;
  for (int k = 0; k < tower.ambient.factors(); ++k)
    dim += static_cast<long long>(tower.ambient.factor_dims[k] + 1) * beta.degrees[k];
  // anticanonical pairing: each blowup contributes (codim-1) times the
  // pairing with the total transform of its exceptional divisor
  for (std::size_t i = 0; i < tower.centers.size(); ++i)
    dim -= static_cast<long long>(tower.centers[i].codim - 1) * beta.total_mult[i];
  dim += tower.ambient.dim();
  return dim;
}

ExpectedFiberDim expected_fiber_dim(const BlowupTower& tower, const CurveClass& beta) {
  validate_class(tower, beta);
  for (long long e : beta.total_mult)
    if (e < 0) throw ClassMismatch("expected_fiber_dim needs nonnegative multiplicities");
  long long ambient_dim = -1;
  for (int k = 0; k < tower.ambient.factors(); ++k)
    ambient_dim += static_cast<long long>(beta.degrees[k] + 1) * (tower.ambient.factor_dims[k] + 1);
  long long conditions = 0;
  for (long long e : beta.total_mult) conditions += e;
  ExpectedFiberDim out;
  out.value = ambient_dim - static_cast<long long>(tower.ambient.dim()) * conditions;
  out.expected_empty = out.value < 0;
  return out;
}

long long single_center_margin(const BlowupTower& tower, const CurveClass& beta) {
  if (tower.centers.size() != 1)
    throw WrongArity("single_center_margin needs a tower with exactly one center, got " +
                     std::to_string(tower.centers.size()));
  validate_class(tower, beta);
  long long margin = beta.degrees[0] - beta.total_mult[0];
  for (std::size_t k = 1; k < beta.degrees.size(); ++k)
    margin = std::min(margin, beta.degrees[k] - beta.total_mult[0]);
  return margin;
}

std::string clause_name(HypothesisClause c) {
  switch (c) {
    case HypothesisClause::all_point_centers:
      return "all-point-centers";
    case HypothesisClause::disjoint_convex_centers:
      return "disjoint-convex-centers";
    default:
      return "neither";
  }
}

}  // namespace rcurves
