#include "brute.hpp"
#include "nearconvex/error.hpp"
#include "nearconvex/polyhedron.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace nearconvex;

namespace {

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

HPoly square() { return HPoly::box(2, 0, 1); }

bool same_vectors(std::vector<Vec> a, std::vector<Vec> b) {
  auto less = [](const Vec& x, const Vec& y) { return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end()); };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

// V-rep membership by LP-free brute force is awkward; use an LP on the
// convex-combination system instead (independent of double description).
bool vrep_contains(const VPoly& v, const Vec& x) {
  const std::size_t np = v.points.size(), nr = v.rays.size();
  MixedSystem s(np + nr);
  for (std::size_t j = 0; j < v.dim; ++j) {
    Vec row(np + nr);
    for (std::size_t i = 0; i < np; ++i) row[i] = v.points[i][j];
    for (std::size_t i = 0; i < nr; ++i) row[np + i] = v.rays[i][j];
    s.add_eq(row, x[j]);
  }
  Vec ones(np + nr, Rational(0));
  for (std::size_t i = 0; i < np; ++i) ones[i] = 1;
  s.add_eq(ones, 1);
  for (std::size_t i = 0; i < np + nr; ++i) s.add_weak(negate(unit_vector(np + nr, i)), 0);
  return is_feasible(s);
}

HPoly random_hpoly(std::mt19937& rng, std::size_t n, int extra) {
  std::uniform_int_distribution<long> coef(-3, 3);
  HPoly p = HPoly::box(n, -2, 2);
  for (int k = 0; k < extra; ++k) {
    Vec a(n);
    for (auto& x : a) x = coef(rng);
    p.add_ineq(a, brute::small_rational(rng, 2, 3));
  }
  return p;
}

}  // namespace

TEST(ToVrep, UnitSquareMatchesBasicSolutions) {
  auto v = to_vrep(square());
  EXPECT_EQ(v.points.size(), 4u);
  EXPECT_TRUE(v.rays.empty());
  std::vector<Vec> a;
  Vec b;
  for (const auto& r : square().ineq) {
    a.push_back(r.coeffs);
    b.push_back(r.rhs);
  }
  EXPECT_TRUE(same_vectors(v.points, brute::vertices(a, b, 2)));
}

TEST(ToVrep, CoordinateCone) {
  HPoly c(2);
  c.add_ineq(make_vec({-1, 0}), 0);
  c.add_ineq(make_vec({0, -1}), 0);
  auto v = to_vrep(c);
  EXPECT_TRUE(same_vectors(v.points, {make_vec({0, 0})}));
  EXPECT_TRUE(same_vectors(v.rays, {make_vec({1, 0}), make_vec({0, 1})}));
}

TEST(ToVrep, WholeLine) {
  HPoly c(1);
  c.add_ineq(make_vec({0}), 1);
  auto v = to_vrep(c);
  EXPECT_TRUE(same_vectors(v.points, {make_vec({0})}));
  EXPECT_TRUE(same_vectors(v.rays, {make_vec({1}), make_vec({-1})}));
}

TEST(ToVrep, EmptyAndCap) {
  HPoly e(1);
  e.add_ineq(make_vec({1}), -1);
  e.add_ineq(make_vec({-1}), 0);
  EXPECT_TRUE(to_vrep(e).is_empty());
  EXPECT_TRUE(to_hrep(VPoly(2)).is_empty());
  EXPECT_THROW(to_vrep(HPoly::box(7, 0, 1)), Error);
}

TEST(ToVrep, RandomAgainstBasicSolutions) {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 2;
    HPoly p = random_hpoly(rng, n, 1 + trial % 4);
    std::vector<Vec> a;
    Vec b;
    for (const auto& r : p.ineq) {
      a.push_back(r.coeffs);
      b.push_back(r.rhs);
    }
    auto verts = brute::vertices(a, b, n);
    auto v = to_vrep(p);
    EXPECT_TRUE(v.rays.empty());
    EXPECT_TRUE(same_vectors(v.points, verts)) << "trial " << trial;
  }
}

TEST(ToHrep, RoundTripPreservesLatticeMembership) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 3;
    VPoly v(n);
    const int np = 1 + trial % 4;
    for (int i = 0; i < np; ++i) {
      Vec x(n);
      for (auto& c : x) c = brute::small_rational(rng, 2, 2);
      v.points.push_back(x);
    }
    if (trial % 5 == 0) v.rays.push_back(unit_vector(n, 0));
    HPoly h = to_hrep(v);
    VPoly back = to_vrep(h);
    HPoly h2 = to_hrep(back);
    EXPECT_EQ(h, h2);
    const long den = n == 3 ? 2 : 4;
    brute::for_each_lattice_point(n, 3, den, [&](const Vec& x) {
      bool in_v = vrep_contains(v, x);
      EXPECT_EQ(h.contains(x), in_v);
      EXPECT_EQ(vrep_contains(back, x), in_v);
    });
  }
}

TEST(Project, BoxToAxis) {
  HPoly p = project(square(), {0});
  EXPECT_TRUE(same_set(p, HPoly::box(1, 0, 1)));
}

TEST(Project, StrictnessPropagates) {
  MixedSystem s = canonicalize(square()).strict_system();
  MixedSystem p = project(s, {0});
  EXPECT_TRUE(p.weak.empty());
  EXPECT_EQ(p.strict.size(), 2u);
  for (long k = -8; k <= 24; ++k) {
    Vec x{q(k, 16)};
    EXPECT_EQ(p.contains(x), k > 0 && k < 16);
  }
}

TEST(Project, WedgeCoversLine) {
  HPoly w(2);
  w.add_ineq(make_vec({1, -1}), 0);
  w.add_ineq(make_vec({-1, -1}), 0);
  HPoly p = project(w, {0});
  EXPECT_TRUE(p.ineq.empty() && p.eq.empty());
}

TEST(Project, CommutesWithLiftedFeasibility) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<long> coef(-2, 2);
  for (int trial = 0; trial < 25; ++trial) {
    MixedSystem s(3);
    for (int k = 0; k < 5; ++k) {
      Vec a{Rational(coef(rng)), Rational(coef(rng)), Rational(coef(rng))};
      if (k % 2) s.add_strict(a, coef(rng) + 2);
      else s.add_weak(a, coef(rng) + 2);
    }
    if (trial % 3 == 0) s.add_eq(make_vec({1, 1, 1}), 1);
    MixedSystem p = project(s, {0, 2});
    brute::for_each_lattice_point(2, 2, 2, [&](const Vec& y) {
      MixedSystem lifted = s;
      lifted.add_eq(make_vec({1, 0, 0}), y[0]);
      lifted.add_eq(make_vec({0, 0, 1}), y[1]);
      EXPECT_EQ(p.contains(y), is_feasible(lifted));
    });
  }
}

TEST(ImplicitEqualities, ForcedEquality) {
  HPoly p(1);
  p.add_ineq(make_vec({1}), 0);
  p.add_ineq(make_vec({-1}), 0);
  auto r = implicit_equalities(p);
  EXPECT_EQ(r.rows, (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(r.canonical.ineq.empty());
  ASSERT_EQ(r.canonical.eq.size(), 1u);
  EXPECT_EQ(r.canonical.eq[0], (Row{make_vec({1}), 0}));
}

TEST(ImplicitEqualities, FullDimensionalSquare) { EXPECT_TRUE(implicit_equalities(square()).rows.empty()); }

TEST(ImplicitEqualities, TriangleFaceSystem) {
  HPoly p(2);
  p.add_ineq(make_vec({1, 1}), 1);
  p.add_ineq(make_vec({-1, -1}), -1);
  p.add_ineq(make_vec({-1, 0}), 0);
  p.add_ineq(make_vec({0, -1}), 0);
  auto r = implicit_equalities(p);
  EXPECT_EQ(r.rows, (std::vector<std::size_t>{0, 1}));
  ASSERT_EQ(r.canonical.eq.size(), 1u);
  EXPECT_EQ(r.canonical.eq[0], (Row{make_vec({1, 1}), 1}));
  // Per-row strict feasibility agrees.
  for (std::size_t i = 0; i < p.ineq.size(); ++i) {
    MixedSystem s = p.system();
    s.strict.push_back(s.weak[i]);
    bool implicit = std::find(r.rows.begin(), r.rows.end(), i) != r.rows.end();
    EXPECT_EQ(is_feasible(s), !implicit);
  }
}

TEST(ImplicitEqualities, EmptyThrows) {
  EXPECT_THROW(implicit_equalities(HPoly::empty(2)), Error);
}

TEST(AffineHull, Examples) {
  HPoly seg(2);
  seg.add_ineq(make_vec({1, 0}), 1);
  seg.add_ineq(make_vec({-1, 0}), 0);
  seg.add_ineq(make_vec({0, 1}), 0);
  seg.add_ineq(make_vec({0, -1}), 0);
  auto a = affine_hull(seg);
  ASSERT_EQ(a.eq.size(), 1u);
  EXPECT_EQ(a.eq[0], (Row{make_vec({0, 1}), 0}));
  EXPECT_TRUE(affine_hull(square()).eq.empty());
  auto pt = affine_hull(HPoly::point(make_vec({1, 2})));
  ASSERT_EQ(pt.eq.size(), 2u);
  EXPECT_EQ(pt.eq[0], (Row{make_vec({1, 0}), 1}));
  EXPECT_EQ(pt.eq[1], (Row{make_vec({0, 1}), 2}));
  EXPECT_EQ(dimension(seg), 1);
  EXPECT_EQ(dimension(HPoly::empty(2)), -1);
}

TEST(Canonicalize, UniqueForm) {
  HPoly a = square();
  HPoly b(2);
  b.add_ineq(make_vec({2, 0}), 2);
  b.add_ineq(make_vec({-1, 0}), 0);
  b.add_ineq(make_vec({0, 3}), 3);
  b.add_ineq(make_vec({0, -1}), 0);
  b.add_ineq(make_vec({1, 1}), 5);  // redundant
  b.add_ineq(make_vec({0, 1}), 2);  // redundant parallel
  EXPECT_EQ(canonicalize(a), canonicalize(b));
  EXPECT_EQ(canonicalize(HPoly::empty(3)), HPoly::empty(3));
}

TEST(Canonicalize, ProductWithoutLPsMatches) {
  std::mt19937 rng(13);
  for (int i = 0; i < 30; ++i) {
    HPoly a = random_hpoly(rng, 2, 2), b = random_hpoly(rng, 1 + i % 2, 1);
    if (i % 3 == 0) a.add_eq(make_vec({1, 1}), 0);
    if (a.is_empty() || b.is_empty()) continue;
    HPoly ca = canonicalize(a), cb = canonicalize(b);
    EXPECT_EQ(canonical_product(ca, cb), canonicalize(product(a, b))) << i;
  }
}

TEST(NormalCone, SquareCorner) {
  auto n = normal_cone_at(square(), make_vec({0, 0}));
  EXPECT_TRUE(same_vectors(n.generators, {make_vec({-1, 0}), make_vec({0, -1})}));
  EXPECT_TRUE(n.lineality.empty());
  for (const auto& p : to_vrep(square()).points)
    for (const auto& g : n.generators) EXPECT_LE(dot(g, p), 0);
}

TEST(NormalCone, InteriorAndEdge) {
  EXPECT_TRUE(normal_cone_at(square(), Vec{q(1, 2), q(1, 2)}).generators.empty());
  auto n = normal_cone_at(square(), Vec{q(1, 4), q(0)});
  EXPECT_TRUE(same_vectors(n.generators, {make_vec({0, -1})}));
  EXPECT_THROW(normal_cone_at(square(), make_vec({2, 0})), Error);
}

TEST(NormalCone, DefinitionBothWays) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    HPoly p = random_hpoly(rng, 2, 2);
    if (p.is_empty()) continue;
    auto v = to_vrep(p);
    for (const auto& xbar : v.points) {
      auto n = normal_cone_at(p, xbar);
      // every candidate v on a grid: in cone iff <v, p - xbar> <= 0 for all vertices
      brute::for_each_lattice_point(2, 2, 1, [&](const Vec& w) {
        bool def = true;
        for (const auto& pt : v.points) def = def && dot(w, sub(pt, xbar)) <= 0;
        for (const auto& r : v.rays) def = def && dot(w, r) <= 0;
        EXPECT_EQ(n.contains(w), def);
      });
    }
  }
}

TEST(Faces, SquareAndCube) {
  EXPECT_EQ(faces(square()).size(), 9u);
  EXPECT_EQ(faces(HPoly::box(3, 0, 1)).size(), 27u);
  HPoly c(2);
  c.add_ineq(make_vec({-1, 0}), 0);
  c.add_ineq(make_vec({0, -1}), 0);
  EXPECT_EQ(faces(c).size(), 4u);
  EXPECT_EQ(faces(HPoly::whole(2)).size(), 1u);
}

TEST(Images, LinearImageAndAddRays) {
  Matrix sum{{1, 1}};
  EXPECT_TRUE(same_set(linear_image(square(), sum), HPoly::box(1, 0, 2)));
  HPoly up = add_rays(HPoly::point(make_vec({0, 0})), {make_vec({0, 1})});
  HPoly expect(2);
  expect.add_eq(make_vec({1, 0}), 0);
  expect.add_ineq(make_vec({0, -1}), 0);
  EXPECT_TRUE(same_set(up, expect));
  HPoly pre = preimage(HPoly::box(1, 0, 1), Matrix{{1, 0}}, zeros(1));
  EXPECT_TRUE(pre.contains(make_vec({1, 100})));
}
