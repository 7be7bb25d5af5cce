#include "brute.hpp"
#include "nearconvex/error.hpp"
#include "nearconvex/svmap.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace nearconvex;

namespace {

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

Vec v1(long a) { return make_vec({a}); }

NCSet interval(long a, long b) { return NCSet::closed(HPoly::box(1, a, b)); }

NCSet open_interval(long a, long b) { return NCSet::relatively_open(HPoly::box(1, a, b)); }

NCSet point1(long a) { return NCSet::point(v1(a)); }

// {(x,y) : 0 <= x <= 2, x <= y <= x + 1}
SVMap band() {
  HPoly g(2);
  g.add_ineq(make_vec({-1, 0}), 0);
  g.add_ineq(make_vec({1, 0}), 2);
  g.add_ineq(make_vec({1, -1}), 0);
  g.add_ineq(make_vec({-1, 1}), 1);
  return SVMap::from_closed_graph(1, 1, g);
}

// Open set given by strict rows a.x < b.
MixedSystem open_rows(std::size_t d, const std::vector<std::pair<Vec, long>>& rows) {
  MixedSystem s(d);
  for (const auto& [a, b] : rows) s.add_strict(a, b);
  return s;
}

SVMap random_map(std::mt19937& rng) {
  std::uniform_int_distribution<int> shape(0, 2);
  std::size_t n = 1, p = 1;
  switch (shape(rng)) {
    case 1: p = 2; break;
    case 2: n = 2; break;
    default: break;
  }
  const std::size_t d = n + p;
  for (;;) {
    HPoly h = HPoly::box(d, -2, 2);
    std::uniform_int_distribution<int> extra(1, 3);
    int k = extra(rng);
    for (int i = 0; i < k; ++i) {
      Vec a(d);
      for (auto& x : a) x = brute::small_rational(rng, 2, 1);
      h.add_ineq(a, brute::small_rational(rng, 1, 2));
    }
    if (rng() % 3 == 0) {
      Vec a(d);
      for (auto& x : a) x = brute::small_rational(rng, 1, 1);
      if (!is_zero(a)) h.add_eq(a, 0);
    }
    if (h.is_empty()) continue;
    HPoly c = canonicalize(h);
    std::vector<std::vector<std::size_t>> fs;
    for (std::size_t r = 0; r < c.ineq.size(); ++r)
      if (rng() % 2 == 0) fs.push_back({r});
    return SVMap(n, p, NCSet::with_faces(c, fs));
  }
}

}  // namespace

TEST(SVMapBasics, EvalDomRangeInverse) {
  SVMap f = band();
  EXPECT_TRUE(same_set(f.eval(v1(1)), interval(1, 2)));
  EXPECT_TRUE(same_set(f.dom(), interval(0, 2)));
  EXPECT_TRUE(same_set(f.rge(), interval(0, 3)));
  EXPECT_TRUE(same_set(f.inverse().eval(v1(2)), interval(1, 2)));
  EXPECT_TRUE(f.eval(v1(3)).empty());
  EXPECT_TRUE(same_map(f.inverse().inverse(), f));
  EXPECT_THROW(f.eval(make_vec({1, 1})), Error);
}

TEST(SVMapBasics, RiGraphOfBand) {
  SVMap f = band();
  MixedSystem expected = open_rows(2, {{make_vec({-1, 0}), 0}, {make_vec({1, 0}), 2}, {make_vec({1, -1}), 0}, {make_vec({-1, 1}), 1}});
  EXPECT_TRUE(same_set(f.ri_graph().system(), expected));
  EXPECT_TRUE(check_graph_fibers(f));
  // fiber at x = 1
  EXPECT_TRUE(f.ri_graph().contains(Vec{q(1), q(3, 2)}));
  EXPECT_FALSE(f.ri_graph().contains(make_vec({1, 1})));
}

TEST(SVMapBasics, RiGraphOfConstantMap) {
  SVMap f = SVMap::constant(2, interval(0, 1));
  MixedSystem expected = open_rows(3, {{make_vec({0, 0, -1}), 0}, {make_vec({0, 0, 1}), 1}});
  EXPECT_TRUE(same_set(f.ri_graph().system(), expected));
  EXPECT_TRUE(check_graph_fibers(f));
}

TEST(SVMapBasics, RiGraphOfPoint) {
  SVMap f(1, 1, NCSet::point(make_vec({1, 2})));
  EXPECT_TRUE(f.ri_graph().contains(make_vec({1, 2})));
  EXPECT_EQ(dimension(f.ri_graph().base()), 0);
}

TEST(SVMapBasics, EmptyGraphThrowsEmptyDomain) {
  SVMap f(1, 1, NCSet(2));
  try {
    f.ri_graph();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyDomain);
  }
}

TEST(SVMapBasics, FiberLawOnRandomMaps) {
  std::mt19937 rng(7);
  for (int i = 0; i < 25; ++i) {
    SVMap f = random_map(rng).validate();
    EXPECT_TRUE(check_graph_fibers(f)) << i;
    EXPECT_TRUE(same_map(f.inverse().inverse(), f));
  }
}

TEST(SVMapBasics, FiberLawDetectsWrongInterior) {
  // Graph {0 <= x <= 1, y = 0} u {x = 1, 0 <= y <= 1}: not nearly convex.
  HPoly a(2), b(2);
  a.add_ineq(make_vec({-1, 0}), 0);
  a.add_ineq(make_vec({1, 0}), 1);
  a.add_eq(make_vec({0, 1}), 0);
  b.add_ineq(make_vec({0, -1}), 0);
  b.add_ineq(make_vec({0, 1}), 1);
  b.add_eq(make_vec({1, 0}), 1);
  SVMap f(1, 1, NCSet::closed(a).unite(NCSet::closed(b)));
  EXPECT_THROW(f.validate(), Error);
}

TEST(ImageOfSet, Interval) {
  auto r = image_of_set(band(), interval(0, 1), true);
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_TRUE(same_set(r.set, interval(0, 2)));
  EXPECT_TRUE(same_set(r.set.relative_interior().system(), open_interval(0, 2).pieces()[0].system()));
  ASSERT_TRUE(r.ri_formula_holds.has_value());
  EXPECT_TRUE(*r.ri_formula_holds);
}

TEST(ImageOfSet, SinglePoint) {
  auto r = image_of_set(band(), point1(1), true);
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_TRUE(same_set(r.set, interval(1, 2)));
  EXPECT_TRUE(*r.ri_formula_holds);
}

TEST(ImageOfSet, BoundaryOnlyOverlapIsFlagged) {
  HPoly half(1);
  half.add_ineq(make_vec({1}), 0);
  auto r = image_of_set(band(), NCSet::closed(half), true);
  EXPECT_FALSE(r.qc_satisfied);
  EXPECT_FALSE(r.ri_formula_holds.has_value());
  EXPECT_TRUE(same_set(r.set, interval(0, 1)));
}

TEST(InverseImage, Point) {
  auto r = inverse_image(band(), point1(2), true);
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_TRUE(same_set(r.set, interval(1, 2)));
  EXPECT_TRUE(*r.ri_formula_holds);
}

TEST(InverseImage, WholeRange) {
  SVMap f = band();
  auto r = inverse_image(f, f.rge(), true);
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_TRUE(same_set(r.set, f.dom()));
  EXPECT_TRUE(*r.ri_formula_holds);
}

TEST(InverseImage, BoundaryOfRange) {
  auto r = inverse_image(band(), point1(3), true);
  EXPECT_FALSE(r.qc_satisfied);
  EXPECT_TRUE(same_set(r.set, point1(2)));
}

TEST(Restrict, ToSubinterval) {
  auto r = restrict(band(), interval(0, 1), true);
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_TRUE(r.map.validated());
  MixedSystem expected = open_rows(2, {{make_vec({-1, 0}), 0}, {make_vec({1, 0}), 1}, {make_vec({1, -1}), 0}, {make_vec({-1, 1}), 1}});
  EXPECT_TRUE(same_set(r.map.ri_graph().system(), expected));
  EXPECT_TRUE(*r.ri_formula_holds);
}

TEST(Restrict, SupersetLeavesMapUnchanged) {
  auto r = restrict(band(), interval(-5, 5));
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_TRUE(same_map(r.map, band()));
}

TEST(Restrict, BoundaryPointIsFlagged) {
  auto r = restrict(band(), point1(2));
  EXPECT_FALSE(r.qc_satisfied);
  EXPECT_TRUE(same_set(r.map.graph(), product(point1(2), interval(2, 3))));
}

TEST(Sum, ConstantPlusIdentity) {
  SVMap f1 = SVMap::constant(1, interval(0, 1));
  SVMap f2 = SVMap::affine(Matrix{{1}}, v1(0));
  auto r = sum(f1, f2, true);
  EXPECT_TRUE(r.qc_satisfied);
  HPoly g(2);
  g.add_ineq(make_vec({1, -1}), 0);
  g.add_ineq(make_vec({-1, 1}), 1);
  EXPECT_TRUE(same_set(r.map.graph(), NCSet::closed(g)));
  MixedSystem ri = open_rows(2, {{make_vec({1, -1}), 0}, {make_vec({-1, 1}), 1}});
  EXPECT_TRUE(same_set(r.map.ri_graph().system(), ri));
  EXPECT_TRUE(*r.ri_formula_holds);
}

TEST(Sum, ZeroMappingIsNeutral) {
  auto r = sum(band(), SVMap::constant(1, point1(0)), true);
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_TRUE(same_map(r.map, band()));
  EXPECT_TRUE(*r.ri_formula_holds);
}

TEST(Sum, TouchingDomainsAreFlagged) {
  auto f1 = SVMap(1, 1, product(interval(0, 1), point1(0)));
  auto f2 = SVMap(1, 1, product(interval(1, 2), point1(0)));
  auto r = sum(f1.validate(), f2.validate());
  EXPECT_FALSE(r.qc_satisfied);
  EXPECT_TRUE(same_set(r.map.graph(), NCSet::point(make_vec({1, 0}))));
}

TEST(Compose, BandThenDoubling) {
  auto r = compose(band(), SVMap::affine(Matrix{{2}}, v1(0)), true);
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_TRUE(same_set(r.map.eval(v1(1)), interval(2, 4)));
  MixedSystem ri = open_rows(2, {{make_vec({-1, 0}), 0}, {make_vec({1, 0}), 2}, {make_vec({2, -1}), 0}, {make_vec({-2, 1}), 2}});
  EXPECT_TRUE(same_set(r.map.ri_graph().system(), ri));
  EXPECT_TRUE(*r.ri_formula_holds);
}

TEST(Compose, IdentityIsNeutral) {
  auto r = compose(band(), SVMap::affine(Matrix{{1}}, v1(0)), true);
  EXPECT_TRUE(same_map(r.map, band()));
  EXPECT_TRUE(*r.ri_formula_holds);
}

TEST(Compose, BoundaryContactIsFlagged) {
  // rge F = [0,3] meets dom G = [3,4] only at 3.
  SVMap g(1, 1, product(interval(3, 4), point1(0)));
  auto r = compose(band(), g.validate());
  EXPECT_FALSE(r.qc_satisfied);
  EXPECT_TRUE(same_set(r.map.graph(), NCSet::point(make_vec({2, 0}))));
}

TEST(CompositeMaps, PhiOnDiagonal) {
  SVMap f = band();
  SVMap g = SVMap::affine(Matrix{{1}}, v1(0));
  auto r = build_phi(interval(0, 2), f, g);
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_EQ(r.map.n(), 2u);
  EXPECT_TRUE(is_nearly_convex(r.map.graph()).nearly_convex);
  EXPECT_TRUE(same_set(r.map.eval(make_vec({1, 1})), interval(1, 2)));
  EXPECT_TRUE(r.map.eval(make_vec({1, 0})).empty());
}

TEST(CompositeMaps, PhiWithTrivialConstraint) {
  SVMap f = band();
  auto r = build_phi(NCSet::relatively_open(HPoly::whole(1)), f, SVMap::constant(1, NCSet::relatively_open(HPoly::whole(1))));
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_TRUE(same_set(r.map.graph(), preimage(f.graph(), coordinate_selector(3, {0, 2})).set));
}

TEST(CompositeMaps, PhiWithEmptyTripleInteriorIsFlagged) {
  auto r = build_phi(interval(2, 3), band(), SVMap::affine(Matrix{{1}}, v1(0)));
  EXPECT_FALSE(r.qc_satisfied);
}

TEST(CompositeMaps, PsiShiftsTheArgument) {
  SVMap g = SVMap::affine(Matrix{{1}}, v1(0));
  auto r = build_psi(interval(0, 2), band(), g);
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_EQ(r.map.n(), 3u);
  EXPECT_TRUE(is_nearly_convex(r.map.graph()).nearly_convex);
  EXPECT_TRUE(same_set(r.map.eval(make_vec({1, 0, 1})), interval(1, 2)));
  EXPECT_TRUE(same_set(r.map.eval(make_vec({0, 1, 0})), interval(1, 2)));
  // u = 0 slice reproduces Phi
  auto phi = build_phi(interval(0, 2), band(), g);
  HPoly u0(4);
  u0.add_eq(make_vec({0, 1, 0, 0}), 0);
  NCSet slice = intersect(r.map.graph(), NCSet::relatively_open(u0)).set;
  NCSet dropped = linear_image(slice, coordinate_selector(4, {0, 2, 3}));
  EXPECT_TRUE(same_set(dropped, phi.map.graph()));
}

TEST(CompositeMaps, PsiWithEmptyTripleInteriorIsFlagged) {
  auto r = build_psi(point1(5), band(), SVMap::affine(Matrix{{1}}, v1(0)));
  EXPECT_FALSE(r.qc_satisfied);
}

TEST(CompositeMaps, ConeWrapperMatchesExplicitMap) {
  // G(x) = 2x + 1 + R_+
  HPoly cone(1);
  cone.add_ineq(make_vec({-1}), 0);
  SVMap g = SVMap::cone_constraint(Matrix{{2}}, v1(1), cone);
  EXPECT_TRUE(same_set(g.eval(v1(1)), NCSet::closed([] {
    HPoly h(1);
    h.add_ineq(make_vec({-1}), -3);
    return h;
  }())));
  auto a = build_phi_cone(interval(0, 2), band(), Matrix{{2}}, v1(1), cone);
  auto b = build_phi(interval(0, 2), band(), g);
  EXPECT_TRUE(a.qc_satisfied);
  EXPECT_TRUE(same_map(a.map, b.map));
  auto c = build_psi_cone(interval(0, 2), band(), Matrix{{2}}, v1(1), cone);
  EXPECT_TRUE(c.qc_satisfied);
  EXPECT_TRUE(is_nearly_convex(c.map.graph()).nearly_convex);
}

TEST(CompositeMaps, MaxAffineOrthant) {
  // y >= max(x, -x)
  SVMap g = SVMap::max_affine_orthant(1, {{{v1(1), 0}, {v1(-1), 0}}});
  EXPECT_TRUE(same_set(g.eval(v1(-2)), NCSet::closed([] {
    HPoly h(1);
    h.add_ineq(make_vec({-1}), -2);
    return h;
  }())));
}

TEST(AffineInner, ConstantPlusIdentity) {
  SVMap f = SVMap::constant(1, interval(0, 1));
  SVMap g = SVMap::affine(Matrix{{1}}, v1(0));
  SVMap phi = sum_with_affine_inner(f, g, Matrix{{1}});
  EXPECT_TRUE(is_nearly_convex(phi.graph()).nearly_convex);
  EXPECT_TRUE(same_set(phi.eval(make_vec({1, 2})), interval(3, 4)));
  HPoly h(3);
  h.add_ineq(make_vec({1, 1, -1}), 0);
  h.add_ineq(make_vec({-1, -1, 1}), 1);
  EXPECT_TRUE(same_set(phi.graph(), NCSet::closed(h)));
}

TEST(AffineInner, ZeroInnerMapGivesF) {
  SVMap f = band();
  SVMap phi = sum_with_affine_inner(f, SVMap::constant(1, point1(0)), Matrix{{1}});
  EXPECT_TRUE(is_nearly_convex(phi.graph()).nearly_convex);
  EXPECT_TRUE(same_set(phi.graph(), preimage(f.graph(), coordinate_selector(3, {0, 2})).set));
}

TEST(AffineInner, SeparatedDomainsStillNearlyConvex) {
  SVMap f(1, 1, product(interval(0, 1), point1(0)));
  SVMap g(1, 1, product(interval(5, 6), interval(0, 1)));
  SVMap phi = sum_with_affine_inner(f.validate(), g.validate(), Matrix{{1}});
  EXPECT_TRUE(is_nearly_convex(phi.graph()).nearly_convex);
  EXPECT_TRUE(same_set(phi.eval(make_vec({0, 5})), interval(0, 1)));
  EXPECT_TRUE(phi.eval(make_vec({0, 0})).empty());
}

TEST(AffineInner, RejectsImproperAndMismatchedInputs) {
  SVMap f = band();
  SVMap empty(1, 1, NCSet(2));
  try {
    sum_with_affine_inner(f, empty, Matrix{{1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyDomain);
  }
  EXPECT_THROW(sum_with_affine_inner(f, f, Matrix{{1, 1}}), Error);
}

TEST(Certification, RandomCalculusIdentities) {
  std::mt19937 rng(11);
  int checked = 0;
  for (int i = 0; i < 12; ++i) {
    SVMap f = random_map(rng).validate();
    if (f.n() != 1 || f.p() != 1) continue;
    SVMap g = random_map(rng).validate();
    if (g.n() != 1 || g.p() != 1) continue;
    auto s = sum(f, g, true);
    if (s.qc_satisfied) {
      EXPECT_TRUE(*s.ri_formula_holds);
      EXPECT_TRUE(is_nearly_convex(s.map.graph()).nearly_convex);
    }
    auto c = compose(f, g, true);
    if (c.qc_satisfied) {
      EXPECT_TRUE(*c.ri_formula_holds);
      EXPECT_TRUE(is_nearly_convex(c.map.graph()).nearly_convex);
    }
    auto im = image_of_set(f, g.dom(), true);
    if (im.qc_satisfied) EXPECT_TRUE(*im.ri_formula_holds);
    auto pre = inverse_image(f, g.rge(), true);
    if (pre.qc_satisfied) EXPECT_TRUE(*pre.ri_formula_holds);
    ++checked;
  }
  EXPECT_GT(checked, 0);
}
