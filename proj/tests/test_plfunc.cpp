#include "brute.hpp"
#include "nearconvex/error.hpp"
#include "nearconvex/plfunc.hpp"

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

NCSet whole(std::size_t d) { return NCSet::relatively_open(HPoly::whole(d)); }

PLFunction abs1() { return PLFunction::max_affine(1, {{v1(1), 0}, {v1(-1), 0}}); }

HPoly halfline_up(long a) {  // [a, inf)
  HPoly h(1);
  h.add_ineq(v1(-1), -a);
  return h;
}

HPoly nonneg_cone() {
  HPoly k(1);
  k.add_ineq(v1(-1), 0);
  return k;
}

ExtReal ev(const PLFunction& f, std::initializer_list<long> x) { return f.eval(make_vec(x)); }

// Random polytope in R^d as a with_faces set (nearly convex by construction).
NCSet random_domain(std::mt19937& rng, std::size_t d) {
  for (;;) {
    HPoly h = HPoly::box(d, -2, 2);
    for (int i = 0; i < 2; ++i) {
      Vec a(d);
      for (auto& x : a) x = brute::small_rational(rng, 2, 1);
      h.add_ineq(a, brute::small_rational(rng, 2, 1));
    }
    if (h.is_empty()) continue;
    HPoly c = canonicalize(h);
    std::vector<std::vector<std::size_t>> fs;
    for (std::size_t r = 0; r < c.ineq.size(); ++r)
      if (rng() % 2 == 0) fs.push_back({r});
    return NCSet::with_faces(c, fs).validate();
  }
}

PLFunction random_max_affine(std::mt19937& rng, std::size_t n) {
  std::vector<AffinePiece> pieces;
  int k = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < k; ++i) {
    Vec a(n);
    for (auto& x : a) x = brute::small_rational(rng, 2, 1);
    pieces.push_back({a, brute::small_rational(rng, 2, 2)});
  }
  return PLFunction::max_affine(n, pieces, random_domain(rng, n));
}

// Closed epigraph P + cone(e): possibly improper.
PLFunction random_closed(std::mt19937& rng, std::size_t n) {
  for (;;) {
    HPoly h = HPoly::box(n + 1, -2, 2);
    h.ineq.clear();
    for (std::size_t i = 0; i < n; ++i) {
      h.add_ineq(unit_vector(n + 1, i), 2);
      h.add_ineq(negate(unit_vector(n + 1, i)), 2);
    }
    for (int i = 0; i < 3; ++i) {
      Vec a(n + 1);
      for (auto& x : a) x = brute::small_rational(rng, 2, 1);
      h.add_ineq(a, brute::small_rational(rng, 2, 1));
    }
    if (h.is_empty()) continue;
    return PLFunction::from_closed_epigraph(add_rays(h, {unit_vector(n + 1, n)}));
  }
}

}  // namespace

TEST(PLFunctionEval, AbsoluteValue) {
  PLFunction f = abs1();
  EXPECT_EQ(ev(f, {-2}), ExtReal(2));
  EXPECT_EQ(ev(f, {0}), ExtReal(0));
  EXPECT_TRUE(f.validated());
}

TEST(PLFunctionEval, IndicatorOutsideDomain) {
  PLFunction f = PLFunction::indicator(interval(0, 1));
  EXPECT_TRUE(ev(f, {2}).is_plus_inf());
  EXPECT_EQ(ev(f, {1}), ExtReal(0));
}

TEST(PLFunctionEval, SliceClosednessAgainstLatticeScan) {
  // epi = ri{l >= x} plus its boundary line
  HPoly e(2);
  e.add_ineq(make_vec({1, -1}), 0);
  PLFunction f(1, NCSet::closed(e));
  brute::for_each_lattice_point(1, 3, 4, [&](const Vec& x) {
    ExtReal v = f.eval(x);
    ASSERT_TRUE(v.is_finite());
    EXPECT_TRUE(f.epi().contains(Vec{x[0], v.value()}));
    EXPECT_FALSE(f.epi().contains(Vec{x[0], v.value() - Rational(1, 8)}));
    EXPECT_EQ(v.value(), x[0]);
  });
}

TEST(PLFunctionEval, OpenBottomIsRejected) {
  HPoly e(2);
  e.add_ineq(make_vec({1, -1}), 0);
  try {
    PLFunction f(1, NCSet::relatively_open(e));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::VerticalInvariant);
  }
  // a bounded box is not closed under vertical rays
  EXPECT_THROW(PLFunction(1, NCSet::closed(HPoly::box(2, 0, 1))), Error);
}

TEST(PLFunctionEval, LowerClosureRepairsOpenBottom) {
  HPoly e(2);
  e.add_ineq(make_vec({1, -1}), 0);
  NCSet fixed = lower_closure(NCSet::relatively_open(e));
  EXPECT_TRUE(same_set(fixed, NCSet::closed(e)));
  PLFunction f(1, fixed);
  EXPECT_EQ(ev(f, {3}), ExtReal(3));
}

TEST(PLFunctionEval, FiniteExactlyOnDomain) {
  std::mt19937 rng(3);
  for (int i = 0; i < 20; ++i) {
    PLFunction f = random_max_affine(rng, 1 + i % 2);
    NCSet d = f.dom();
    brute::for_each_lattice_point(f.n(), 3, 2, [&](const Vec& x) {
      EXPECT_EQ(f.eval(x).is_finite(), d.contains(x));
    });
  }
}

TEST(Properness, Examples) {
  EXPECT_TRUE(assert_proper(abs1()));
  PLFunction minus_inf(1, whole(2));
  EXPECT_FALSE(assert_proper(minus_inf));
  EXPECT_TRUE(ev(minus_inf, {5}).is_minus_inf());
}

TEST(Properness, FiniteAtRelativeInteriorPointImpliesProper) {
  std::mt19937 rng(5);
  int finite = 0, improper = 0;
  for (int i = 0; i < 60; ++i) {
    PLFunction f = (i % 2 == 0) ? random_closed(rng, 1 + i % 3 % 2) : random_max_affine(rng, 1 + i % 3 % 2);
    NCSet d = f.dom();
    if (d.empty()) continue;
    Vec x = relative_interior_point(d.closure());
    if (f.eval(x).is_finite()) {
      ++finite;
      EXPECT_TRUE(assert_proper(f)) << i;
    } else {
      ++improper;
      EXPECT_FALSE(assert_proper(f));
      EXPECT_TRUE(f.eval(*minus_inf_point(f)).is_minus_inf());
    }
  }
  EXPECT_GT(finite, 0);
  EXPECT_GT(improper, 0);
}

TEST(Epigraphical, AbsoluteValue) {
  SVMap e = epigraphical_map(abs1());
  EXPECT_TRUE(same_set(e.eval(v1(1)), NCSet::closed(halfline_up(1))));
  PLFunction back = from_epigraphical(e);
  EXPECT_TRUE(same_set(back.epi(), abs1().epi()));
}

TEST(Epigraphical, DomainsAgreeOnRandomInstances) {
  std::mt19937 rng(9);
  for (int i = 0; i < 50; ++i) {
    PLFunction f = random_max_affine(rng, 1 + i % 2);
    EXPECT_TRUE(same_set(epigraphical_map(f).dom(), f.dom()));
  }
}

TEST(Epigraphical, RejectsNonEpigraphs) {
  SVMap g(1, 1, NCSet::closed(HPoly::box(2, 0, 1)));
  EXPECT_THROW(from_epigraphical(g), Error);
  SVMap h(1, 2, NCSet::closed(HPoly::box(3, 0, 1)));
  EXPECT_THROW(from_epigraphical(h), Error);
}

TEST(RestrictFunction, HalfOpenInterval) {
  NCSet omega = NCSet::from_hpolys(1, {HPoly::box(1, 0, 1), HPoly::point(v1(1))}).validate();
  auto r = restrict_function(abs1(), omega, true);
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_TRUE(ev(r.f, {0}).is_plus_inf());
  EXPECT_EQ(ev(r.f, {1}), ExtReal(1));
  EXPECT_EQ(r.f.eval(Vec{q(1, 2)}), ExtReal(q(1, 2)));
  ASSERT_TRUE(r.ri_formula_holds.has_value());
  EXPECT_TRUE(*r.ri_formula_holds);
}

TEST(RestrictFunction, SupersetLeavesFunctionUnchanged) {
  PLFunction f = PLFunction::max_affine(1, {{v1(1), 0}}, interval(0, 1));
  auto r = restrict_function(f, interval(-3, 3), true);
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_TRUE(same_set(r.f.epi(), f.epi()));
  EXPECT_TRUE(*r.ri_formula_holds);
}

TEST(RestrictFunction, BoundaryPointIsFlagged) {
  PLFunction f = PLFunction::indicator(interval(0, 1));
  auto r = restrict_function(f, NCSet::point(v1(1)));
  EXPECT_FALSE(r.qc_satisfied);
  EXPECT_EQ(ev(r.f, {1}), ExtReal(0));
  EXPECT_TRUE(ev(r.f, {0}).is_plus_inf());
}

TEST(EpiM, IdentityWithHalfLine) {
  auto r = epi_M(Matrix{{1}}, v1(0), NCSet::closed(halfline_up(0)));
  HPoly e(2);
  e.add_ineq(make_vec({1, -1}), 0);
  EXPECT_TRUE(same_set(r.set, NCSet::closed(e)));
  MixedSystem ri(2);
  ri.add_strict(make_vec({1, -1}), 0);
  EXPECT_TRUE(same_set(r.set.relative_interior().system(), ri));
  EXPECT_TRUE(r.ri_formula_certified);
}

TEST(EpiM, ZeroMapGivesProduct) {
  NCSet m = NCSet::from_hpolys(1, {HPoly::box(1, 0, 1), HPoly::point(v1(0))}).validate();
  auto r = epi_M(Matrix(1, 2), v1(0), m);
  EXPECT_TRUE(same_set(r.set, product(whole(2), m)));
  EXPECT_TRUE(r.ri_formula_certified);
}

TEST(EpiM, ImagePlusConeRelativeInterior) {
  NCSet m = NCSet::from_hpolys(1, {HPoly::box(1, 0, 1), HPoly::point(v1(0))}).validate();  // [0,1)
  auto r = affine_image_plus(interval(0, 1), Matrix{{2}}, v1(0), m);
  EXPECT_TRUE(r.ri_formula_holds);
  EXPECT_TRUE(same_set(r.set.relative_interior().system(), NCSet::relatively_open(HPoly::box(1, 0, 3)).pieces()[0].system()));
  EXPECT_TRUE(r.set.contains(v1(0)));
  EXPECT_FALSE(r.set.contains(v1(3)));
}

TEST(CompositeFunctions, PhiWithConeConstraint) {
  auto r = build_composite_phi_cone(abs1(), interval(-1, 1), Matrix{{1}}, v1(0), nonneg_cone());
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_EQ(ev(r.f, {0, 1}), ExtReal(0));
  EXPECT_TRUE(ev(r.f, {0, -1}).is_plus_inf());
  EXPECT_TRUE(ev(r.f, {2, 3}).is_plus_inf());
  EXPECT_TRUE(is_nearly_convex(r.f.epi()).nearly_convex);
}

TEST(CompositeFunctions, PhiWithTrivialConstraint) {
  auto r = build_composite_phi(abs1(), whole(1), SVMap::constant(1, whole(1)));
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_EQ(ev(r.f, {-3, 7}), ExtReal(3));
}

TEST(CompositeFunctions, PsiShiftsArgument) {
  auto r = build_composite_psi_cone(abs1(), interval(-1, 1), Matrix{{1}}, v1(0), nonneg_cone());
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_EQ(ev(r.f, {1, -3, 1}), ExtReal(2));
  EXPECT_TRUE(ev(r.f, {1, -3, 0}).is_plus_inf());
  EXPECT_TRUE(is_nearly_convex(r.f.epi()).nearly_convex);
}

TEST(CompositeFunctions, SumWithAffineInner) {
  PLFunction phi = composite_sum(abs1(), abs1(), Matrix{{1}});
  EXPECT_TRUE(is_nearly_convex(phi.epi()).nearly_convex);
  brute::for_each_lattice_point(2, 2, 2, [&](const Vec& z) {
    Rational expected = abs(z[0]) + abs(z[0] + z[1]);
    EXPECT_EQ(phi.eval(z), ExtReal(expected));
  });
}

TEST(CompositeFunctions, SumWithSeparatedDomains) {
  PLFunction f = PLFunction::indicator(interval(0, 1));
  PLFunction g = PLFunction::max_affine(1, {{v1(1), 0}}, interval(5, 6));
  PLFunction phi = composite_sum(f, g, Matrix{{1}});
  EXPECT_TRUE(is_nearly_convex(phi.epi()).nearly_convex);
  EXPECT_EQ(ev(phi, {0, 5}), ExtReal(5));
  EXPECT_TRUE(ev(phi, {0, 0}).is_plus_inf());
}

TEST(CompositeFunctions, AddAndComposeLinear) {
  auto s = add(abs1(), PLFunction::max_affine(1, {{v1(1), -1}, {v1(-1), 1}}));
  EXPECT_TRUE(s.qc_satisfied);
  EXPECT_EQ(ev(s.f, {3}), ExtReal(5));
  EXPECT_EQ(s.f.eval(Vec{q(1, 2)}), ExtReal(1));
  // g(y1, y2) = |y1| + |y2| at (x, x)
  PLFunction g = PLFunction::max_affine(2, {{make_vec({1, 1}), 0}, {make_vec({1, -1}), 0}, {make_vec({-1, 1}), 0}, {make_vec({-1, -1}), 0}});
  auto c = compose_linear(g, Matrix{{1}, {1}});
  EXPECT_TRUE(c.qc_satisfied);
  EXPECT_EQ(ev(c.f, {-3}), ExtReal(6));
}

TEST(CompositeFunctions, ConstructedEpigraphsPassTheCheck) {
  std::mt19937 rng(53);
  for (int i = 0; i < 10; ++i) {
    PLFunction f1 = random_max_affine(rng, 2), f2 = random_max_affine(rng, 2);
    for (const auto& f : {f1, f2, add(f1, f2).f, restrict_function(f1, random_domain(rng, 2)).f}) {
      auto c = check_epigraph(f.epi());
      EXPECT_TRUE(c.vertical_ray && c.closed_below) << i;
    }
    Matrix a(2, 1);
    a(0, 0) = 1;
    a(1, 0) = brute::small_rational(rng, 2, 1);
    auto c = check_epigraph(compose_linear(f1, a).f.epi());
    EXPECT_TRUE(c.vertical_ray && c.closed_below) << i;
  }
}

TEST(DualCone, Examples) {
  HPoly k = nonneg_cone();
  EXPECT_TRUE(same_set(dual_cone(k), k));
  EXPECT_TRUE(same_set(dual_cone(HPoly::whole(2)), HPoly::point(make_vec({0, 0}))));
  HPoly wedge(2);  // b >= a >= 0
  wedge.add_ineq(make_vec({-1, 0}), 0);
  wedge.add_ineq(make_vec({1, -1}), 0);
  HPoly d = dual_cone(wedge);
  VPoly expected(2);
  expected.points = {make_vec({0, 0})};
  expected.rays = {make_vec({1, 0}), make_vec({-1, 1})};
  EXPECT_TRUE(same_set(d, to_hrep(expected)));
  EXPECT_THROW(dual_cone(HPoly::box(1, 0, 1)), Error);
}

TEST(DualCone, DefinitionOnLattice) {
  HPoly wedge(2);
  wedge.add_ineq(make_vec({-1, 0}), 0);
  wedge.add_ineq(make_vec({1, -1}), 0);
  HPoly d = dual_cone(wedge);
  brute::for_each_lattice_point(2, 2, 1, [&](const Vec& y) {
    bool in_dual = true;
    brute::for_each_lattice_point(2, 3, 1, [&](const Vec& z) {
      if (wedge.contains(z) && dot(y, z) < 0) in_dual = false;
    });
    EXPECT_EQ(d.contains(y), in_dual) << format_vec(y);
  });
}

TEST(StrictEpigraph, ClosureAgrees) {
  EXPECT_TRUE(strict_epigraph_closure_agrees(abs1()));
  NCSet omega = NCSet::from_hpolys(1, {HPoly::box(1, 0, 1), HPoly::point(v1(1))}).validate();
  PLFunction r = restrict_function(abs1(), omega).f;
  EXPECT_TRUE(strict_epigraph_closure_agrees(r));
  NCSet s = strict_epigraph(abs1());
  EXPECT_FALSE(s.contains(make_vec({1, 1})));
  EXPECT_TRUE(s.contains(Vec{q(1), q(3, 2)}));
}
