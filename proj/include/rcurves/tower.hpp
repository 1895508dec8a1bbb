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

#ifndef RCURVES_TOWER_HPP
#define RCURVES_TOWER_HPP

#include <string>
#include <vector>

#include "rcurves/field.hpp"

namespace rcurves {

/// Product of projective spaces, one dimension per factor.
struct AmbientSpace {
  std::vector<int> factor_dims;
  int factors() const { return static_cast<int>(factor_dims.size()); }
  int dim() const {
    int d = 0;
    for (int n : factor_dims) d += n;
    return d;
  }
};

enum class CenterKind { linear, infinitesimal };

/// Raw description of one blowup center, as read from a config.
///
/// Linear centers are products of linear subspaces, one per factor;
/// `equations.by_factor[k]` lists linear forms in the n_k+1 homogeneous
/// coordinates of that factor (an empty list means the whole factor).
///
/// Infinitesimal centers are points on the exceptional fiber of an earlier
/// point-like center: `parent` names it, `chart` picks the affine
/// coordinate of the parent that becomes the divisor coordinate, and
/// `direction` gives the values of the remaining dim(X)-1 chart
/// coordinates.
struct CenterSpec {
  CenterKind kind = CenterKind::linear;
  std::vector<std::vector<std::vector<Rational>>> equations;  // linear only
  int parent = -1;                                            // infinitesimal only
  int chart = -1;                                             // infinitesimal only
  std::vector<Rational> direction;                            // infinitesimal only
};

/// Validated center with derived data filled in by build_tower.
struct Center {
  CenterKind kind = CenterKind::linear;
  std::vector<std::vector<std::vector<Rational>>> equations;
  int parent = -1;
  int chart = -1;
  std::vector<Rational> direction;

  int level = 0;                // 0 for linear centers, 1 + parent level otherwise
  int depth = 0;                // number of strict ancestors (the nesting count)
  std::vector<int> children;    // immediate descendants in the forest
  int dim = 0;                  // dimension of the center
  int codim = 0;
  std::vector<int> factor_ranks;                    // linear only: rank of each factor's forms
  std::vector<std::vector<Rational>> point_coords;  // point-like linear only: homogeneous point per factor
};

struct TowerSpec {
  AmbientSpace ambient;
  std::vector<CenterSpec> centers;
};

struct BlowupTower {
  AmbientSpace ambient;
  std::vector<Center> centers;

  bool all_level0() const {
    for (const auto& c : centers)
      if (c.kind == CenterKind::infinitesimal) return false;
    return true;
  }
  /// Index of the level-0 ancestor of center i (i itself when level 0).
  int root_of(int i) const {
    while (centers[i].kind == CenterKind::infinitesimal) i = centers[i].parent;
    return i;
  }
  /// Chain of center indices from the level-0 root down to i.
  std::vector<int> chain_of(int i) const {
    std::vector<int> chain;
    for (int c = i; c >= 0; c = centers[c].kind == CenterKind::infinitesimal ? centers[c].parent : -1)
      chain.push_back(c);
    return {chain.rbegin(), chain.rend()};
  }
};

/// Validates a tower description: parents precede children, infinitesimal
/// parents are point-like, linear centers are nonempty products of linear
/// subspaces. Throws TowerError.
BlowupTower build_tower(const TowerSpec& spec);

/// Numerical curve class, recorded by the pairings with the pullback
/// hyperplane classes (degrees) and the total transforms of the
/// exceptional divisors (total_mult).
struct CurveClass {
  std::vector<long long> degrees;
  std::vector<long long> total_mult;
};

void validate_class(const BlowupTower& tower, const CurveClass& beta);

enum class HypothesisClause { all_point_centers, disjoint_convex_centers, neither };

struct HypothesisReport {
  std::vector<long long> factor_margins;  // degree_k - sum_i (depth_i+1) * e_i
  std::vector<long long> center_margins;  // e_i
  bool pass = false;
  HypothesisClause clause = HypothesisClause::neither;
};

HypothesisReport check_main_hypotheses(const BlowupTower& tower, const CurveClass& beta);

/// Multiplicities against strict transforms: e_i minus the immediate
/// children's totals.
std::vector<long long> strict_from_total(const BlowupTower& tower, const CurveClass& beta);

/// Expected dimension of the space of parametrized curves of class beta on
/// the blown-up space (anticanonical degree plus dim X).
long long expected_dim_mor(const BlowupTower& tower, const CurveClass& beta);

struct ExpectedFiberDim {
  long long value = 0;
  bool expected_empty = false;  // set when the count comes out negative
};

/// Expected projective dimension of an incidence fiber: the coefficient
/// space P(sum of factor blocks) cut by dim(X) conditions per assigned
/// intersection point.
ExpectedFiberDim expected_fiber_dim(const BlowupTower& tower, const CurveClass& beta);

/// min over factors of degree_k - e for a single-center tower; the margin
/// controlling nonemptiness and generic smoothness of the fibers.
long long single_center_margin(const BlowupTower& tower, const CurveClass& beta);

std::string clause_name(HypothesisClause c);

}  // namespace rcurves

#endif  // RCURVES_TOWER_HPP
