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

#include "rcurves/fibers.hpp"

#include "doctest.h"
#include "rcurves/jets.hpp"

using namespace rcurves;

namespace {

PrimeField default_fp() { return PrimeField(2147483647ULL); }

std::vector<std::vector<Rational>> point_equations(const std::vector<long long>& homog) {
  std::vector<Rational> q;
  for (auto v : homog) q.emplace_back(static_cast<long>(v));
  int piv = 0;
  while (piv < static_cast<int>(q.size()) && q[piv] == 0) ++piv;
  std::vector<std::vector<Rational>> forms;
  for (int j = 0; j < static_cast<int>(q.size()); ++j) {
    if (j == piv) continue;
    std::vector<Rational> f(q.size(), Rational(0));
    f[j] = q[piv];
    f[piv] = -q[j];
    forms.push_back(std::move(f));
  }
  return forms;
}

CenterSpec point_center(const std::vector<std::vector<long long>>& per_factor) {
  CenterSpec c;
  c.kind = CenterKind::linear;
  for (const auto& q : per_factor) c.equations.push_back(point_equations(q));
  return c;
}

CenterSpec infinitesimal_center(int parent, int chart, const std::vector<long long>& dir) {
  CenterSpec c;
  c.kind = CenterKind::infinitesimal;
  c.parent = parent;
  c.chart = chart;
  for (auto v : dir) c.direction.emplace_back(static_cast<long>(v));
  return c;
}

template <class F>
std::vector<std::vector<typename F::Elem>> field_point(const F& K,
                                                       const std::vector<std::vector<long long>>& q) {
  std::vector<std::vector<typename F::Elem>> out;
  for (const auto& f : q) {
    std::vector<typename F::Elem> v;
    for (auto x : f) v.push_back(K.from_int(x));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

TEST_CASE("incidence rows for one simple point condition") {
  auto K = default_fp();
  TowerSpec spec;
  spec.ambient.factor_dims = {2};
  spec.centers.push_back(point_center({{1, 0, 0}}));
  auto tower = build_tower(spec);

  std::vector<IncidenceDatum<PrimeField>> data(1);
  data[0].p = make_point(K, K.one(), K.zero());
  data[0].center = 0;
  data[0].target = field_point(K, {{1, 0, 0}});
  data[0].mult = 1;

  SplitRng rng(1);
  auto sys = compile_incidence(K, tower, {1}, data, rng);
  CHECK(sys.mat.rows() == 2);
  CHECK(sys.mat.rank() == 2);
  CHECK(sys.mat.kernel_basis().size() == 4);

  // e = 2 at degree 2: four rows, kernel dimension 5
  data[0].mult = 2;
  auto sys2 = compile_incidence(K, tower, {2}, data, rng);
  CHECK(sys2.mat.rows() == 4);
  CHECK(sys2.mat.kernel_basis().size() == 5);

  // no conditions: the whole coefficient space
  auto sys3 = compile_incidence(K, tower, {1}, {}, rng);
  CHECK(sys3.mat.rows() == 0);
  CHECK(sys3.mat.kernel_basis().size() == 6);
}

TEST_CASE("repeated domain points are rejected") {
  auto K = default_fp();
  TowerSpec spec;
  spec.ambient.factor_dims = {2};
  spec.centers.push_back(point_center({{1, 0, 0}}));
  auto tower = build_tower(spec);
  std::vector<IncidenceDatum<PrimeField>> data(2);
  for (auto& d : data) {
    d.p = make_point(K, K.one(), K.zero());
    d.center = 0;
    d.target = field_point(K, {{1, 0, 0}});
  }
  SplitRng rng(1);
  CHECK_THROWS_AS(compile_incidence(K, tower, {2}, data, rng), DiagonalViolation);
}

TEST_CASE("chain conditions at depth one match the expected triangular rows") {
  auto K = default_fp();
  TowerSpec spec;
  spec.ambient.factor_dims = {2};
  spec.centers.push_back(point_center({{1, 0, 0}}));
  spec.centers.push_back(infinitesimal_center(0, 0, {0}));
  auto tower = build_tower(spec);

  std::vector<IncidenceDatum<PrimeField>> data(1);
  data[0].p = make_point(K, K.one(), K.zero());
  data[0].center = 1;
  data[0].mult = 1;

  SplitRng rng(1);
  auto sys = compile_incidence(K, tower, {2}, data, rng);
  // f_1(p) = 0, f_2(p) = 0, t-coefficient of f_2 = 0
  CHECK(sys.mat.rows() == 3);
  CHECK(sys.mat.kernel_basis().size() == 6);

  // the rows are exactly those stated: with p = [1:0] and q = [1:0:0] the
  // minors are f_1, f_2 themselves, so check against a hand-built matrix
  Matrix<PrimeField> expected(K, 0, 9);
  {
    std::vector<typename PrimeField::Elem> r(9, K.zero());
    r[3] = K.one();  // f_1 constant coefficient at [1:0]
    expected.append_row(r);
    std::fill(r.begin(), r.end(), K.zero());
    r[6] = K.one();  // f_2(p)
    expected.append_row(r);
    std::fill(r.begin(), r.end(), K.zero());
    r[7] = K.one();  // t-coefficient of f_2
    expected.append_row(r);
  }
  CHECK(same_row_space(sys.mat, expected));
}

TEST_CASE("depth-zero chain rows equal simple incidence rows exactly") {
  auto K = default_fp();
  SplitRng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    auto r = rng.split(trial);
    const int n = 1 + static_cast<int>(r.below(3));
    const int d = 1 + static_cast<int>(r.below(3));
    std::vector<long long> q;
    for (int j = 0; j <= n; ++j) q.push_back(static_cast<long long>(r.below(5)));
    bool allz = true;
    for (auto x : q)
      if (x) allz = false;
    if (allz) q[0] = 1;

    TowerSpec spec;
    spec.ambient.factor_dims = {n};
    spec.centers.push_back(point_center({q}));
    auto tower = build_tower(spec);

    auto p = make_point(K, K.one(), K.random(r));

    // route 1: incidence datum with multiplicity 1
    std::vector<IncidenceDatum<PrimeField>> data(1);
    data[0].p = p;
    data[0].center = 0;
    data[0].target = field_point(K, {q});
    auto sys_inc = compile_incidence(K, tower, {d}, data, r);

    // route 2: a depth-0 chain record (target and pivot derived from the tower)
    ResolvedConditions<PrimeField> rc;
    rc.factor_dims = tower.ambient.factor_dims;
    rc.chains.push_back({0, 0, p});
    auto sys_chain = compile_resolved(K, tower, {d}, rc);

    CHECK(sys_inc.mat.rows() == sys_chain.mat.rows());
    Matrix<PrimeField> ka(K, 0, sys_inc.layout.total), kb(K, 0, sys_inc.layout.total);
    for (const auto& v : sys_inc.mat.kernel_basis()) ka.append_row(v);
    for (const auto& v : sys_chain.mat.kernel_basis()) kb.append_row(v);
    CHECK(same_row_space(ka, kb));
  }
}

TEST_CASE("sigma fiber of two simple data on plane cubics") {
  auto K = default_fp();
  TowerSpec spec;
  spec.ambient.factor_dims = {2};
  spec.centers.push_back(point_center({{1, 2, 5}}));
  auto tower = build_tower(spec);
  CurveClass beta{{3}, {2}};

  std::vector<IncidenceDatum<PrimeField>> data(2);
  data[0].p = make_point(K, K.one(), K.zero());
  data[1].p = make_point(K, K.zero(), K.one());
  for (auto& d : data) {
    d.center = 0;
    d.target = field_point(K, {{1, 2, 5}});
    d.mult = 1;
  }
  SplitRng rng(3);
  auto fd = incidence_fiber(K, tower, beta, data, rng);
  CHECK(fd.projective_dim == 7);
  CHECK(fd.expected.value() == 7);
  CHECK(fd.dim_matches_expected);
  CHECK(fd.dim_matches_generic);
  CHECK(fd.splitting_within_bounds);
  CHECK(static_cast<int>(fd.splitting.size()) == 3);
  CHECK(splitting_sum(fd.splitting) == 3 * 3 - static_cast<long long>(fd.rank));

  // wrong multiplicity bookkeeping is refused
  CurveClass wrong{{3}, {1}};
  CHECK_THROWS_AS(incidence_fiber(K, tower, wrong, data, rng), ClassMismatch);
}

TEST_CASE("kernel sheaf splitting of one simple condition on lines") {
  auto K = default_fp();
  TowerSpec spec;
  spec.ambient.factor_dims = {2};
  spec.centers.push_back(point_center({{1, 0, 0}}));
  auto tower = build_tower(spec);
  CurveClass beta{{1}, {1}};
  std::vector<IncidenceDatum<PrimeField>> data(1);
  data[0].p = make_point(K, K.one(), K.zero());
  data[0].center = 0;
  data[0].target = field_point(K, {{1, 0, 0}});
  SplitRng rng(9);
  auto fd = incidence_fiber(K, tower, beta, data, rng);
  CHECK(fd.affine_dim == 4);
  CHECK(fd.splitting == SplittingType{1, 0, 0});
}

TEST_CASE("degenerate fiber forcing proportional components") {
  // multiplicity 3 on lines: every kernel member has f_j proportional to
  // f_0, the splitting dives below zero, and no generic sample exists
  auto K = default_fp();
  TowerSpec spec;
  spec.ambient.factor_dims = {2};
  spec.centers.push_back(point_center({{1, 2, 3}}));
  auto tower = build_tower(spec);
  CurveClass beta{{1}, {3}};
  std::vector<IncidenceDatum<PrimeField>> data(1);
  data[0].p = make_point(K, K.one(), K.zero());
  data[0].center = 0;
  data[0].target = field_point(K, {{1, 2, 3}});
  data[0].mult = 3;
  SplitRng rng(11);
  auto fd = incidence_fiber(K, tower, beta, data, rng);
  CHECK(fd.affine_dim == 2);
  CHECK(fd.expected.value() == -1);
  CHECK(fd.expected_empty);
  CHECK(fd.splitting == SplittingType{1, -2, -2});
  CHECK(fd.splitting_within_bounds);
  CHECK_THROWS_AS(sample_fiber_member(K, fd, tower, beta, rng), GenericSampleNotFound);
}

TEST_CASE("product ambient fiber dimension") {
  auto K = default_fp();
  TowerSpec spec;
  spec.ambient.factor_dims = {1, 1};
  spec.centers.push_back(point_center({{1, 0}, {1, 0}}));
  spec.centers.push_back(point_center({{0, 1}, {0, 1}}));
  spec.centers.push_back(point_center({{1, 1}, {1, 1}}));
  auto tower = build_tower(spec);
  CurveClass beta{{3, 3}, {1, 1, 1}};
  SplitRng rng(17);
  auto data = random_incidence_data(K, tower, beta, rng);
  auto fd = incidence_fiber(K, tower, beta, data, rng);
  CHECK(fd.projective_dim == 9);
  CHECK(fd.dim_matches_expected);
  CHECK(fd.splitting_within_bounds);

  // every row touches one factor's coefficient block only
  auto sys = compile_incidence(K, tower, {3, 3}, data, rng);
  for (std::size_t r = 0; r < sys.mat.rows(); ++r) {
    bool in_first = false, in_second = false;
    for (std::size_t c = 0; c < sys.mat.cols(); ++c) {
      if (K.is_zero(sys.mat.at(r, c))) continue;
      (c < sys.layout.offsets[1] ? in_first : in_second) = true;
    }
    CHECK_FALSE((in_first && in_second));
  }
}

TEST_CASE("tau fiber of a single one-jet on the line") {
  auto K = default_fp();
  AmbientSpace ambient{{1}};
  JetPrescription<PrimeField> jet;
  jet.p = make_point(K, K.one(), K.zero());
  jet.base = field_point(K, {{1, 0}});
  jet.order = 1;
  jet.values = {series_from_coeffs(K, {K.zero(), K.one()})};  // z(t) = t
  SplitRng rng(23);
  auto fd = jet_fiber(K, ambient, {1}, {jet}, rng);
  CHECK(fd.rows == 2);
  CHECK(fd.affine_dim == 2);
  // the identity morphism (s, t) satisfies the prescription
  CoeffLayout layout({1}, {1});
  std::vector<typename PrimeField::Elem> id(layout.total, K.zero());
  id[layout.index(0, 0, 0)] = K.one();
  id[layout.index(0, 1, 1)] = K.one();
  auto sys = compile_jets(K, {1}, {1}, {jet});
  for (const auto& x : sys.mat.apply(id)) CHECK(K.is_zero(x));

  // coincident prescriptions violate the diagonal exclusion
  CHECK_THROWS_AS(jet_fiber(K, ambient, {1}, {jet, jet}, rng), DiagonalViolation);
}

TEST_CASE("pencil closure: kernel combinations stay in every compiled system") {
  auto K = default_fp();
  TowerSpec spec;
  spec.ambient.factor_dims = {2};
  spec.centers.push_back(point_center({{1, 0, 0}}));
  auto tower = build_tower(spec);
  CurveClass beta{{3}, {2}};
  SplitRng rng(31);
  auto data = random_incidence_data(K, tower, beta, rng);
  auto sys = compile_incidence(K, tower, {3}, data, rng);
  auto kernel = sys.mat.kernel_basis();
  REQUIRE(kernel.size() >= 2);
  for (int trial = 0; trial < 200; ++trial) {
    auto r = rng.split(trial);
    const auto& f = kernel[r.below(kernel.size())];
    const auto& g = kernel[r.below(kernel.size())];
    const auto mu = K.random(r);
    const auto lambda = K.random(r);
    std::vector<typename PrimeField::Elem> combo(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      combo[i] = K.add(K.mul(mu, f[i]), K.mul(lambda, g[i]));
    for (const auto& x : sys.mat.apply(combo)) CHECK(K.is_zero(x));
  }
}

TEST_CASE("sampling a fiber member with exact contacts") {
  auto K = default_fp();
  TowerSpec spec;
  spec.ambient.factor_dims = {2};
  spec.centers.push_back(point_center({{1, 0, 0}}));
  auto tower = build_tower(spec);
  CurveClass beta{{3}, {2}};
  SplitRng rng(37);
  auto data = random_incidence_data(K, tower, beta, rng);
  auto fd = incidence_fiber(K, tower, beta, data, rng);
  auto sample = sample_fiber_member(K, fd, tower, beta, rng);
  CHECK(sample.diag.valid_morphism);
  CHECK(sample.diag.contacts_exact);
  CHECK(sample.diag.free_morphism);
  CHECK(sample.diag.twist_vanishes);  // twist 2, entries >= 3

  // empty system on the line: a random degree-1 pair is almost surely valid
  TowerSpec bare;
  bare.ambient.factor_dims = {1};
  auto bare_tower = build_tower(bare);
  CurveClass line_beta{{1}, {}};
  auto bare_fd = incidence_fiber(K, bare_tower, line_beta, {}, rng);
  auto bare_sample = sample_fiber_member(K, bare_fd, bare_tower, line_beta, rng);
  CHECK(bare_sample.diag.valid_morphism);
}

TEST_CASE("sampling through an infinitesimal chain recovers the class") {
  auto K = default_fp();
  // depth 1: the p3-infinitesimal shape
  TowerSpec spec;
  spec.ambient.factor_dims = {3};
  spec.centers.push_back(point_center({{1, 0, 0, 0}}));
  spec.centers.push_back(infinitesimal_center(0, 0, {0, 0}));
  auto tower = build_tower(spec);
  CurveClass beta{{4}, {2, 1}};
  SplitRng rng(41);
  auto data = random_incidence_data(K, tower, beta, rng);
  auto fd = incidence_fiber(K, tower, beta, data, rng);
  // one chain datum (3 + 2 rows) and one simple datum (3 rows)
  CHECK(fd.rows == 8);
  CHECK(fd.dim_matches_generic);
  auto sample = sample_fiber_member(K, fd, tower, beta, rng);
  CHECK(sample.diag.contacts_exact);
  CHECK(sample.diag.twist_vanishes);

  // depth 2 goes through a seeded jet slice
  TowerSpec deep;
  deep.ambient.factor_dims = {2};
  deep.centers.push_back(point_center({{1, 0, 0}}));
  deep.centers.push_back(infinitesimal_center(0, 0, {3}));
  deep.centers.push_back(infinitesimal_center(1, 0, {4}));
  auto deep_tower = build_tower(deep);
  CurveClass deep_beta{{4}, {1, 1, 1}};
  auto deep_data = random_incidence_data(K, deep_tower, deep_beta, rng);
  REQUIRE(deep_data.size() == 1);
  auto deep_fd = incidence_fiber(K, deep_tower, deep_beta, deep_data, rng);
  CHECK(deep_fd.rows == 6);  // one jet slice, mod t^3, two coordinates
  auto deep_sample = sample_fiber_member(K, deep_fd, deep_tower, deep_beta, rng);
  CHECK(deep_sample.diag.valid_morphism);
  CHECK(deep_sample.diag.contacts_exact);
}

TEST_CASE("strict multiplicities of a sampled chain member match the valuation oracle") {
  auto K = default_fp();
  TowerSpec deep;
  deep.ambient.factor_dims = {2};
  deep.centers.push_back(point_center({{1, 0, 0}}));
  deep.centers.push_back(infinitesimal_center(0, 0, {3}));
  deep.centers.push_back(infinitesimal_center(1, 0, {4}));
  auto deep_tower = build_tower(deep);
  // e^t = (3,2,1): chain datum + one datum at the middle center + one at the root
  CurveClass beta{{6}, {3, 2, 1}};
  SplitRng rng(43);
  auto data = random_incidence_data(K, deep_tower, beta, rng);
  auto fd = incidence_fiber(K, deep_tower, beta, data, rng);
  auto sample = sample_fiber_member(K, fd, deep_tower, beta, rng);
  CHECK(sample.diag.contacts_exact);
  CHECK(strict_from_total(deep_tower, beta) == std::vector<long long>{1, 1, 1});
}

TEST_CASE("jet lift and blowdown") {
  auto K = default_fp();
  // s = (t, 2t + 3t^2), k = 2: divisor stays, direction 2, divided series 3t
  JetArc<PrimeField> s;
  s.order = 2;
  s.coords = {series_from_coeffs(K, {K.zero(), K.one(), K.zero()}),
              series_from_coeffs(K, {K.zero(), K.from_int(2), K.from_int(3)})};
  ChartShape chart{0, {1}, {}};
  auto lifted = lift_jet(K, s, chart);
  CHECK(lifted.arc.order == 1);
  CHECK(lifted.direction.size() == 1);
  CHECK(K.eq(lifted.direction[0], K.from_int(2)));
  CHECK(K.is_zero(lifted.arc.coords[1].c[0]));
  CHECK(K.eq(lifted.arc.coords[1].c[1], K.from_int(3)));

  auto down = blowdown_jet(K, lifted.arc, lifted.direction, chart);
  for (int i = 0; i < 2; ++i) {
    CHECK(K.eq(down.coords[0].c[i], s.coords[0].c[i]));
    CHECK(K.eq(down.coords[1].c[i], s.coords[1].c[i]));
  }

  // passthrough coordinate with zero direction
  JetArc<PrimeField> s2;
  s2.order = 2;
  s2.coords = {series_from_coeffs(K, {K.zero(), K.one(), K.zero()}),
               series_from_coeffs(K, {K.zero(), K.zero(), K.zero()}),
               series_from_coeffs(K, {K.zero(), K.from_int(7), K.from_int(1)})};
  ChartShape chart2{0, {1}, {2}};
  auto lifted2 = lift_jet(K, s2, chart2);
  CHECK(K.is_zero(lifted2.direction[0]));
  CHECK(K.eq(lifted2.arc.coords[2].c[1], K.from_int(7)));  // y passthrough

  // non-transversal jets are rejected
  JetArc<PrimeField> bad;
  bad.order = 2;
  bad.coords = {series_from_coeffs(K, {K.zero(), K.zero(), K.one()}),
                series_from_coeffs(K, {K.zero(), K.one(), K.zero()})};
  CHECK_THROWS_AS(lift_jet(K, bad, chart), NotTransversal);
}

TEST_CASE("jet round trip on random transversal jets") {
  auto K = default_fp();
  SplitRng rng(53);
  const std::vector<ChartShape> shapes = {
      ChartShape{0, {1}, {}},        // plane point
      ChartShape{0, {1, 2}, {}},     // space point
      ChartShape{1, {0, 2}, {}},     // divisor in the middle
      ChartShape{0, {1}, {2}},       // blowup along a line in space
  };
  for (int trial = 0; trial < 1000; ++trial) {
    auto r = rng.split(trial);
    const auto& chart = shapes[trial % shapes.size()];
    const int coords = 1 + static_cast<int>(chart.x.size() + chart.y.size());
    const int order = 2 + static_cast<int>(r.below(3));
    auto s = random_transversal_jet(K, r, coords, order, chart);
    auto lifted = lift_jet(K, s, chart);
    auto down = blowdown_jet(K, lifted.arc, lifted.direction, chart);
    for (int g = 0; g < coords; ++g)
      CHECK(series_equal(K, down.coords[g], series_truncate(K, s.coords[g], order)));
  }
}

TEST_CASE("iterated lift at depth two round-trips as well") {
  auto K = default_fp();
  SplitRng rng(59);
  ChartShape chart{0, {1, 2}, {}};
  for (int trial = 0; trial < 200; ++trial) {
    auto r = rng.split(trial);
    auto s = random_transversal_jet(K, r, 3, 4, chart);
    auto l1 = lift_jet(K, s, chart);
    // make the lifted arc transversal in the same chart before lifting again
    if (K.is_zero(l1.arc.coords[0].c[1])) continue;
    auto l2 = lift_jet(K, l1.arc, chart);
    auto d2 = blowdown_jet(K, l2.arc, l2.direction, chart);
    for (int g = 0; g < 3; ++g)
      CHECK(series_equal(K, d2.coords[g], series_truncate(K, l1.arc.coords[g], l1.arc.order)));
    auto d1 = blowdown_jet(K, l1.arc, l1.direction, chart);
    for (int g = 0; g < 3; ++g)
      CHECK(series_equal(K, d1.coords[g], series_truncate(K, s.coords[g], s.order)));
  }
}

TEST_CASE("positive-dimensional center: a line in space") {
  auto K = default_fp();
  TowerSpec spec;
  spec.ambient.factor_dims = {3};
  CenterSpec line;  // the line x2 = x3 = 0
  line.kind = CenterKind::linear;
  line.equations = {{{Rational(0), Rational(0), Rational(1), Rational(0)},
                     {Rational(0), Rational(0), Rational(0), Rational(1)}}};
  spec.centers.push_back(line);
  auto tower = build_tower(spec);
  CHECK(tower.centers[0].dim == 1);
  CHECK(tower.centers[0].codim == 2);

  CurveClass beta{{2}, {2}};
  auto hyp = check_main_hypotheses(tower, beta);
  CHECK(hyp.factor_margins == std::vector<long long>{0});
  CHECK(hyp.pass);
  CHECK(hyp.clause == HypothesisClause::disjoint_convex_centers);

  SplitRng rng(61);
  auto data = random_incidence_data(K, tower, beta, rng);
  REQUIRE(data.size() == 2);
  // targets drawn on the center: their last two coordinates vanish
  for (const auto& d : data) {
    CHECK(K.is_zero(d.target[0][2]));
    CHECK(K.is_zero(d.target[0][3]));
  }
  auto fd = incidence_fiber(K, tower, beta, data, rng);
  CHECK(fd.projective_dim == 5);  // 11 - 3*2
  CHECK(fd.dim_matches_expected);

  auto sample = sample_fiber_member(K, fd, tower, beta, rng);
  CHECK(sample.diag.contacts_exact);
  CHECK(sample.diag.free_morphism);

  // multiplicities above 1 are refused when a center has positive dimension
  auto bad = data;
  bad[0].mult = 2;
  bad.pop_back();
  CurveClass beta2{{2}, {2}};
  CHECK_THROWS_AS(incidence_fiber(K, tower, beta2, bad, rng), ClassMismatch);
}

TEST_CASE("cross-factor chain directions go through a jet slice") {
  auto K = default_fp();
  TowerSpec spec;
  spec.ambient.factor_dims = {1, 1};
  spec.centers.push_back(point_center({{1, 0}, {1, 0}}));
  CenterSpec child;  // direction with a component in the second factor
  child.kind = CenterKind::infinitesimal;
  child.parent = 0;
  child.chart = 0;
  child.direction = {Rational(2)};
  spec.centers.push_back(child);
  auto tower = build_tower(spec);
  CHECK_FALSE(chain_is_linear(K, tower, 1));

  CurveClass beta{{3, 3}, {1, 1}};
  SplitRng rng(67);
  auto data = random_incidence_data(K, tower, beta, rng);
  REQUIRE(data.size() == 1);
  auto fd = incidence_fiber(K, tower, beta, data, rng);
  // one jet slice of order 1: dim X * 2 rows
  CHECK(fd.rows == 4);
  auto sample = sample_fiber_member(K, fd, tower, beta, rng);
  CHECK(sample.diag.valid_morphism);
  CHECK(sample.diag.contacts_exact);

  // the same shape within one factor stays exactly linear
  TowerSpec same;
  same.ambient.factor_dims = {2};
  same.centers.push_back(point_center({{1, 0, 0}}));
  CenterSpec child2;
  child2.kind = CenterKind::infinitesimal;
  child2.parent = 0;
  child2.chart = 0;
  child2.direction = {Rational(2)};
  same.centers.push_back(child2);
  auto same_tower = build_tower(same);
  CHECK(chain_is_linear(K, same_tower, 1));
}

TEST_CASE("chain data carry multiplicity one") {
  auto K = default_fp();
  TowerSpec spec;
  spec.ambient.factor_dims = {2};
  spec.centers.push_back(point_center({{1, 0, 0}}));
  spec.centers.push_back(infinitesimal_center(0, 0, {0}));
  auto tower = build_tower(spec);
  std::vector<IncidenceDatum<PrimeField>> data(1);
  data[0].p = make_point(K, K.one(), K.zero());
  data[0].center = 1;
  data[0].mult = 2;
  SplitRng rng(71);
  CHECK_THROWS_AS(compile_incidence(K, tower, {4}, data, rng), ClassMismatch);
}

TEST_CASE("tangency condition on a product ambient") {
  auto K = default_fp();
  TowerSpec spec;
  spec.ambient.factor_dims = {1, 1};
  spec.centers.push_back(point_center({{1, 0}, {1, 0}}));
  auto tower = build_tower(spec);
  CurveClass beta{{2, 2}, {2}};
  CHECK(check_main_hypotheses(tower, beta).pass);

  std::vector<IncidenceDatum<PrimeField>> data(1);
  data[0].p = make_point(K, K.one(), K.zero());
  data[0].center = 0;
  data[0].target = field_point(K, {{1, 0}, {1, 0}});
  data[0].mult = 2;

  SplitRng rng(73);
  auto fd = incidence_fiber(K, tower, beta, data, rng);
  CHECK(fd.rows == 4);  // two factors, two orders each
  CHECK(fd.projective_dim == 7);
  CHECK(fd.dim_matches_expected);

  // a sampled member really meets the point doubly at the prescribed
  // parameter (second-order contact recovered by the pushforward)
  auto sample = sample_fiber_member(K, fd, tower, beta, rng);
  CHECK(sample.diag.contacts_exact);
  auto eqs = center_forms_over(K, tower.centers[0]);
  auto rec = contact_order(K, sample.f, data[0].p, eqs);
  CHECK(rec.order == 2);
}

TEST_CASE("jet prescriptions at a base point with a later pivot") {
  // q = [0:1] has pivot index 1; the conditions divide by f_1 instead
  auto K = default_fp();
  AmbientSpace ambient{{1}};
  JetPrescription<PrimeField> jet;
  jet.p = make_point(K, K.zero(), K.one());
  jet.base = field_point(K, {{0, 1}});
  jet.order = 1;
  jet.values = {series_from_coeffs(K, {K.zero(), K.one()})};  // z(t) = t
  SplitRng rng(79);
  auto fd = jet_fiber(K, ambient, {1}, {jet}, rng);
  CHECK(fd.rows == 2);
  CHECK(fd.affine_dim == 2);
  // the identity (s, t) expands to z = s/t = u at [0:1], matching the jet
  CoeffLayout layout({1}, {1});
  std::vector<typename PrimeField::Elem> id(layout.total, K.zero());
  id[layout.index(0, 0, 0)] = K.one();
  id[layout.index(0, 1, 1)] = K.one();
  auto sys = compile_jets(K, {1}, {1}, {jet});
  for (const auto& x : sys.mat.apply(id)) CHECK(K.is_zero(x));
}
