#include "brute.hpp"
#include "fixtures.hpp"
#include "nearconvex/error.hpp"
#include "nearconvex/ncset.hpp"

#include <gtest/gtest.h>

using namespace nearconvex;
using namespace fixtures;

namespace {

NCSet half_open_unit() {  // (0,1]
  HPoly i = HPoly::box(1, 0, 1);
  return NCSet::from_hpolys(1, {i, HPoly::point(make_vec({1}))}).validate();
}

NCSet closed_interval(long a, long b) { return interval(a, b); }

}  // namespace

TEST(Membership, PuncturedSquare) {
  NCSet s = omega_b();
  EXPECT_EQ(s.pieces().size(), 10u);
  EXPECT_FALSE(s.contains(Vec{q(1, 2), q(0)}));
  EXPECT_TRUE(s.contains(Vec{q(1, 2), q(1, 2)}));
  EXPECT_TRUE(s.contains(Vec{q(1, 4), q(0)}));
  EXPECT_THROW(s.contains(make_vec({1})), Error);
}

TEST(NearlyConvex, PuncturedSquarePasses) {
  auto r = is_nearly_convex(omega_b());
  EXPECT_TRUE(r.nearly_convex) << r.reason;
}

TEST(NearlyConvex, TwoPointsFailWithMidpoint) {
  NCSet s = NCSet::from_hpolys(1, {HPoly::point(make_vec({0})), HPoly::point(make_vec({1}))});
  auto r = is_nearly_convex(s);
  EXPECT_FALSE(r.nearly_convex);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(*r.witness, Vec{q(1, 2)});
  EXPECT_THROW(s.closure(), Error);
}

TEST(NearlyConvex, OpenSquarePasses) {
  NCSet s = NCSet::from_hpolys(2, {HPoly::box(2, 0, 1)});
  EXPECT_TRUE(is_nearly_convex(s).nearly_convex);
}

TEST(NearlyConvex, MissingInteriorPointFails) {
  // ri square split by the diagonal: the open diagonal is missing.
  HPoly lower = HPoly::box(2, 0, 1);
  lower.add_ineq(make_vec({-1, 1}), 0);
  HPoly upper = HPoly::box(2, 0, 1);
  upper.add_ineq(make_vec({1, -1}), 0);
  auto r = is_nearly_convex(NCSet::from_hpolys(2, {lower, upper}));
  EXPECT_FALSE(r.nearly_convex);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ((*r.witness)[0], (*r.witness)[1]);
}

TEST(ClosureRi, Examples) {
  NCSet s = omega_b();
  EXPECT_TRUE(same_set(s.closure(), HPoly::box(2, 0, 1)));
  EXPECT_EQ(s.relative_interior(), *ROPoly::of(HPoly::box(2, 0, 1)));
  EXPECT_TRUE(s.affine_hull().eq.empty());
  NCSet h = half_open_unit();
  EXPECT_TRUE(same_set(h.closure(), HPoly::box(1, 0, 1)));
  EXPECT_EQ(h.relative_interior(), *ROPoly::of(HPoly::box(1, 0, 1)));
  NCSet p = NCSet::point(make_vec({3, 4}));
  EXPECT_TRUE(same_set(p.closure(), HPoly::point(make_vec({3, 4}))));
  EXPECT_EQ(p.relative_interior().base(), canonicalize(HPoly::point(make_vec({3, 4}))));
}

TEST(Product, QuarterOpenSquare) {
  NCSet s = product(half_open_unit(), half_open_unit());
  EXPECT_TRUE(s.validated());
  EXPECT_EQ(s.relative_interior(), *ROPoly::of(HPoly::box(2, 0, 1)));
  brute::for_each_lattice_point(2, 1, 8, [&](const Vec& x) {
    bool expect = x[0] > 0 && x[0] <= 1 && x[1] > 0 && x[1] <= 1;
    EXPECT_EQ(s.contains(x), expect);
  });
  EXPECT_TRUE(is_nearly_convex(s).nearly_convex);
  NCSet e = product(omega_b(), NCSet::point(make_vec({5})));
  EXPECT_TRUE(e.contains(Vec{q(1, 4), q(0), q(5)}));
  EXPECT_FALSE(e.contains(Vec{q(1, 2), q(0), q(5)}));
  NCSet r = product(NCSet::relatively_open(HPoly::box(1, 0, 1)), NCSet::relatively_open(HPoly::box(1, 0, 2)));
  EXPECT_EQ(r.pieces().size(), 1u);
}

TEST(Intersect, OverlappingHalfOpenBoxes) {
  NCSet s1 = product(half_open_unit(), closed_interval(0, 1));
  NCSet s2 = product(closed_interval(0, 1), half_open_unit());
  auto r = intersect(s1, s2);
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_EQ(r.set.relative_interior(), *ROPoly::of(HPoly::box(2, 0, 1)));
  brute::for_each_lattice_point(2, 1, 8, [&](const Vec& x) { EXPECT_EQ(r.set.contains(x), s1.contains(x) && s2.contains(x)); });
  EXPECT_TRUE(is_nearly_convex(r.set).nearly_convex);
}

TEST(Intersect, TouchingIntervalsFlagged) {
  auto r = intersect(closed_interval(0, 1), closed_interval(1, 2));
  EXPECT_FALSE(r.qc_satisfied);
  EXPECT_FALSE(r.set.validated());
  EXPECT_TRUE(same_set(r.set, NCSet::point(make_vec({1}))));
}

TEST(Intersect, Idempotent) {
  auto r = intersect(omega_b(), omega_b());
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_TRUE(same_set(r.set, omega_b()));
}

TEST(LinearImage, ProjectPuncturedSquare) {
  NCSet img = linear_image(omega_b(), Matrix{{1, 0}});
  EXPECT_TRUE(same_set(img, closed_interval(0, 1)));
  EXPECT_EQ(img.relative_interior(), *ROPoly::of(HPoly::box(1, 0, 1)));
  // Membership oracle: x is in the image iff some y of denominator 16 puts
  // (x, y) in the set.
  NCSet s = omega_b();
  for (long k = -16; k <= 32; ++k) {
    Vec x{q(k, 16)};
    bool hit = false;
    for (long j = -16; j <= 32 && !hit; ++j) hit = s.contains(Vec{x[0], q(j, 16)});
    EXPECT_EQ(img.contains(x), hit);
  }
}

TEST(LinearImage, IdentityAndSum) {
  EXPECT_TRUE(same_set(linear_image(omega_b(), Matrix::identity(2)), omega_b()));
  NCSet open = NCSet::relatively_open(HPoly::box(1, 0, 1));
  NCSet sum = minkowski_sum(open, open);
  EXPECT_TRUE(same_set(sum, NCSet::relatively_open(HPoly::box(1, 0, 2))));
  EXPECT_FALSE(sum.contains(make_vec({0})));
  EXPECT_FALSE(sum.contains(make_vec({2})));
  EXPECT_TRUE(sum.contains(Vec{q(1, 100)}));
}

TEST(Preimage, CoordinateMap) {
  auto r = preimage(half_open_unit(), Matrix{{1, 0}});
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_TRUE(r.set.contains(make_vec({1, -7})));
  EXPECT_FALSE(r.set.contains(make_vec({0, 3})));
  HPoly strip(2);
  strip.add_ineq(make_vec({1, 0}), 1);
  strip.add_ineq(make_vec({-1, 0}), 0);
  EXPECT_EQ(r.set.relative_interior(), *ROPoly::of(strip));
}

TEST(Preimage, IdentityAndZeroMap) {
  auto r = preimage(omega_b(), Matrix::identity(2));
  EXPECT_TRUE(r.qc_satisfied);
  EXPECT_TRUE(same_set(r.set, omega_b()));
  auto z = preimage(half_open_unit(), Matrix(1, 2));
  EXPECT_FALSE(z.qc_satisfied);
  EXPECT_TRUE(z.set.empty());
}

TEST(Sugar, FaceSelection) {
  HPoly sq = HPoly::box(2, 0, 1);  // rows: x<=1, -x<=0, y<=1, -y<=0
  NCSet s = NCSet::with_faces(sq, {{0}, {0, 2}});
  EXPECT_TRUE(s.contains(make_vec({1, 1})));
  EXPECT_TRUE(s.contains(Vec{q(1), q(1, 2)}));
  EXPECT_FALSE(s.contains(Vec{q(0), q(1, 2)}));
  EXPECT_TRUE(is_nearly_convex(s).nearly_convex);
  EXPECT_EQ(NCSet::closed(sq).pieces().size(), 9u);
}
