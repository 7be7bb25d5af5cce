// Shared sets, mappings and functions used across the test suites.
#pragma once

#include "nearconvex/plfunc.hpp"

namespace fixtures {

using namespace nearconvex;

inline Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

inline Vec v1(long a) { return make_vec({a}); }

inline HPoly segment(const Vec& a, const Vec& b) {
  VPoly v(a.size());
  v.points = {a, b};
  return to_hrep(v);
}

/// The unit square with the point (1/2, 0) removed from its bottom side.
inline NCSet omega_b() {
  std::vector<HPoly> bases{HPoly::box(2, 0, 1)};
  bases.push_back(segment(make_vec({1, 0}), make_vec({1, 1})));
  bases.push_back(segment(make_vec({0, 1}), make_vec({1, 1})));
  bases.push_back(segment(make_vec({0, 0}), make_vec({0, 1})));
  bases.push_back(segment(make_vec({0, 0}), Vec{q(1, 2), q(0)}));
  bases.push_back(segment(Vec{q(1, 2), q(0)}, make_vec({1, 0})));
  for (auto v : {make_vec({0, 0}), make_vec({1, 0}), make_vec({0, 1}), make_vec({1, 1})}) bases.push_back(HPoly::point(v));
  return NCSet::from_hpolys(2, bases).validate();
}

inline NCSet interval(long a, long b) { return NCSet::closed(HPoly::box(1, a, b)); }

inline NCSet whole(std::size_t d) { return NCSet::relatively_open(HPoly::whole(d)); }

/// Graph {(x,y) : 0 <= x <= 2, x <= y <= x + 1}.
inline SVMap band() {
  HPoly g(2);
  g.add_ineq(make_vec({-1, 0}), 0);
  g.add_ineq(make_vec({1, 0}), 2);
  g.add_ineq(make_vec({1, -1}), 0);
  g.add_ineq(make_vec({-1, 1}), 1);
  return SVMap::from_closed_graph(1, 1, g);
}

inline PLFunction abs1() { return PLFunction::max_affine(1, {{v1(1), 0}, {v1(-1), 0}}); }

}  // namespace fixtures
