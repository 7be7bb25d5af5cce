#include "nearconvex/oracle.hpp"

#include "nearconvex/error.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace nearconvex {

namespace {

// ---------------------------------------------------------------------------
// Suite plumbing

struct Mismatch {
  std::string detail;
};

struct Rejected {};

void expect(bool cond, const std::string& detail) {
  if (!cond) throw Mismatch{detail};
}

void reject_unless(bool cond) {
  if (!cond) throw Rejected{};
}

std::vector<std::size_t> range(std::size_t from, std::size_t count) {
  std::vector<std::size_t> out(count);
  std::iota(out.begin(), out.end(), from);
  return out;
}

std::vector<std::size_t> join(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Vec head(const Vec& v, std::size_t n) { return Vec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)); }

Vec tail(const Vec& v, std::size_t from) { return Vec(v.begin() + static_cast<std::ptrdiff_t>(from), v.end()); }

std::string show(const Vec& v) { return "(" + format_vec(v) + ")"; }

/// Instances share one anchor three times out of four so that qualification
/// conditions hold with probability at least 1/4.
Vec shared_or_fresh(InstanceGenerator& gen, const Vec& shared) {
  return gen.coin(3, 4) ? shared : gen.anchor(shared.size());
}

OracleSet lifted(const OracleSet& s, std::size_t dim, const std::vector<std::size_t>& coords) {
  return oracle::lift(s, dim, coords);
}

OracleSet ri_of(const OracleSet& s) { return oracle::single(oracle::hull_interior(s)); }

OracleSet ri_lib(const NCSet& s) {
  if (s.empty()) return OracleSet{s.dim(), {}};
  return oracle::single(s.relative_interior().system());
}

bool meets(const OracleSet& a, const OracleSet& b) { return !oracle::intersect(a, b).empty(); }

void expect_same(const OracleSet& lib, const OracleSet& orc, const std::string& what) {
  if (auto w = oracle::difference(lib, orc)) throw Mismatch{what + ": library set has extra point " + show(*w)};
  if (auto w = oracle::difference(orc, lib)) throw Mismatch{what + ": library set misses point " + show(*w)};
}

void expect_nearly_convex(const NCSet& s, const std::string& what) {
  auto report = is_nearly_convex(s);
  expect(report.nearly_convex, what + ": is_nearly_convex rejects (" + report.reason + ")");
  if (auto w = oracle::nonconvexity_witness(oracle::from(s)))
    throw Mismatch{what + ": ri of the hull contains " + show(*w) + " outside the set"};
}

/// Flips membership at one point: removes a relative interior point of the
/// hull, or adds an isolated point when the set is a single point or empty.
NCSet corrupt_piece(const NCSet& s) {
  const std::size_t d = s.dim();
  OracleSet o = oracle::from(s);
  if (o.empty()) return NCSet::point(zeros(d));
  MixedSystem h = oracle::hull_interior(o);
  Vec z = *oracle::relint_point(h);
  VPoly g = oracle::generators(h);
  std::vector<ROPoly> pieces = s.pieces();
  if (d == 0 || (g.points.size() == 1 && g.rays.empty()) || !s.contains(z)) {
    Vec extra = d == 0 ? z : add(z, unit_vector(d, 0));
    if (s.contains(extra)) extra = add(z, scale(unit_vector(d, 0), -1));
    pieces.push_back(*ROPoly::of(HPoly::point(extra)));
    return NCSet(d, std::move(pieces));
  }
  std::vector<ROPoly> out;
  for (const auto& p : pieces) {
    if (!p.contains(z)) {
      out.push_back(p);
      continue;
    }
    // p minus z as the union over i of {x_j = z_j (j < i), x_i <> z_i}.
    MixedSystem prefix = p.system();
    for (std::size_t i = 0; i < d; ++i) {
      for (int side : {1, -1}) {
        MixedSystem part = prefix;
        part.add_strict(scale(unit_vector(d, i), side), side * z[i]);
        if (auto r = ROPoly::of_open_system(part)) out.push_back(*r);
      }
      prefix.add_eq(unit_vector(d, i), z[i]);
    }
  }
  return NCSet(d, std::move(out));
}

NCSet maybe_corrupt(const NCSet& s, Mutation m) { return m == Mutation::CorruptPiece ? corrupt_piece(s) : s; }

/// Conjugate value read off the library's epi f* at w. Under the conjugate
/// mutation one row active at (w, f*(w)) is tightened by one.
ExtReal conjugate_probe(const PLFunction& f, const Vec& w, Mutation m) {
  HPoly epi = conjugate_epigraph(f);
  ExtReal value = value_from_epigraph(epi, w);
  if (m != Mutation::CorruptConjugate || !value.is_finite()) return value;
  const std::size_t n = w.size();
  Vec z = w;
  z.push_back(value.value());
  for (auto* rows : {&epi.ineq, &epi.eq})
    for (auto& r : *rows)
      if (sgn(r.coeffs[n]) != 0 && dot(r.coeffs, z) == r.rhs) {
        r.rhs -= 1;
        return value_from_epigraph(epi, w);
      }
  return value;
}

/// Checks the library conjugate epigraph against the generator oracle at w and
/// at a vertex of epi f*, where f* is finite.
void expect_conjugate_rows(const PLFunction& f, const Vec& w, Mutation m, const std::string& what) {
  std::vector<Vec> probes{w};
  VPoly g = oracle::generators(conjugate_epigraph(f).system());
  if (!g.points.empty()) probes.push_back(head(g.points.front(), f.n()));
  for (const auto& p : probes) {
    ExtReal lib = conjugate_probe(f, p, m), orc = generator_conjugate_oracle(f, p);
    expect(lib == orc, what + ": epi f* gives f*" + show(p) + " = " + lib.str() + ", generators give " + orc.str());
  }
}

Vec random_vec(InstanceGenerator& gen, std::size_t d) { return gen.vector(d, -2, 2); }

Matrix negated(const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = -a(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Near convexity and ri calculus

void prop2_1(InstanceGenerator& gen, Mutation m, std::size_t index) {
  const std::size_t d = gen.uniform(1, 3);
  const bool nc = m == Mutation::CorruptPiece || index % 2 == 0;
  NCSet s = nc ? gen.nearly_convex_set(d) : gen.corrupted_set(d);
  s = maybe_corrupt(s, m);
  OracleSet o = oracle::from(s);
  auto witness = oracle::nonconvexity_witness(o);
  auto report = is_nearly_convex(NCSet(d, s.pieces()));
  expect(report.nearly_convex == !witness.has_value(),
         std::string("library says ") + (report.nearly_convex ? "nearly convex" : "not nearly convex") +
             ", oracle disagrees" + (witness ? " with witness " + show(*witness) : ""));
  expect(report.nearly_convex == nc, std::string("construction label is ") + (nc ? "nearly convex" : "corrupted"));
  if (!witness) {
    // C = ri(hull) satisfies C in s in cl C.
    HPoly hull = oracle::closed_hull(o);
    for (const auto& p : o.pieces)
      expect(oracle::same_polyhedron(intersect(hull, HPoly::from_system(p.closure())), HPoly::from_system(p.closure())),
             "piece outside the closed hull");
  } else {
    expect(report.witness.has_value(), "library gave no witness for a set that is not nearly convex");
  }
}

void thm2_2a(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t d1 = gen.uniform(1, 2), d2 = gen.uniform(1, 3 - d1);
  NCSet a = gen.nearly_convex_set(d1), b = gen.nearly_convex_set(d2);
  NCSet lib = maybe_corrupt(product(a, b), m);
  OracleSet oa = oracle::from(a), ob = oracle::from(b);
  expect_same(oracle::from(lib), oracle::product(oa, ob), "product");
  expect_nearly_convex(lib, "product");
  expect_same(ri_lib(lib), oracle::product(ri_of(oa), ri_of(ob)), "ri(A x B) = ri A x ri B");
}

void thm2_2c(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t d = gen.uniform(1, 3);
  Vec anchor = gen.anchor(d);
  NCSet a = gen.nearly_convex_set(d, anchor), b = gen.nearly_convex_set(d, shared_or_fresh(gen, anchor));
  OracleSet oa = oracle::from(a), ob = oracle::from(b);
  auto r = intersect(a, b);
  const bool qc = meets(ri_of(oa), ri_of(ob));
  expect(r.qc_satisfied == qc, "qc flag disagrees with the oracle");
  reject_unless(qc);
  NCSet lib = maybe_corrupt(r.set, m);
  expect_same(oracle::from(lib), oracle::intersect(oa, ob), "intersection");
  expect_nearly_convex(lib, "intersection");
  expect_same(ri_lib(lib), oracle::intersect(ri_of(oa), ri_of(ob)), "ri(A cap B) = ri A cap ri B");
}

void thm2_2d(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t d = gen.uniform(1, 3), k = gen.uniform(1, 3);
  NCSet s = gen.nearly_convex_set(d);
  Matrix t = gen.matrix(k, d);
  NCSet lib = maybe_corrupt(linear_image(s, t), m);
  OracleSet o = oracle::from(s);
  expect_same(oracle::from(lib), oracle::image(o, t), "linear image");
  expect_nearly_convex(lib, "linear image");
  expect_same(ri_lib(lib), oracle::image(ri_of(o), t), "ri A(S) = A(ri S)");
}

struct MapDims {
  std::size_t n, p;
};

MapDims map_dims(InstanceGenerator& gen) {
  const std::size_t n = gen.uniform(1, 2);
  return {n, gen.uniform(1, 3 - n)};
}

/// {y : (x, y) in s} for a set in (x, y) space.
OracleSet fiber(const OracleSet& s, const Vec& x, std::size_t p) {
  const std::size_t n = x.size();
  Matrix t(n + p, p);
  for (std::size_t i = 0; i < p; ++i) t(n + i, i) = 1;
  return oracle::preimage(s, t, concat(x, zeros(p)));
}

void thm2_3(InstanceGenerator& gen, Mutation m, std::size_t) {
  auto [n, p] = map_dims(gen);
  Vec anchor = gen.anchor(n + p);
  SVMap f = gen.map(n, p, anchor);
  NCSet graph = maybe_corrupt(f.graph(), m);
  OracleSet og = oracle::from(f.graph());
  expect_same(oracle::from(graph), og, "graph");
  const MixedSystem ri_graph = f.ri_graph().system();
  OracleSet lib_ri = oracle::single(ri_graph);
  expect_same(lib_ri, ri_of(og), "ri gph F");
  Matrix px = coordinate_selector(n + p, range(0, n));
  OracleSet dom = oracle::image(og, px), ri_dom = ri_of(dom);
  expect_same(oracle::from(f.dom()), dom, "dom F");
  expect_same(oracle::image(lib_ri, px), ri_dom, "projection of ri gph F = ri dom F");
  std::vector<Vec> xs{head(anchor, n), random_vec(gen, n)};
  for (const auto& piece : dom.pieces) xs.push_back(*oracle::relint_point(piece));
  for (const auto& x : xs) {
    OracleSet lib_fiber = fiber(lib_ri, x, p);
    if (ri_dom.contains(x)) {
      OracleSet value = fiber(og, x, p);
      expect(!value.empty(), "F" + show(x) + " empty on ri dom F");
      expect_same(lib_fiber, ri_of(value), "fiber of ri gph F at " + show(x) + " vs ri F(x)");
      expect_same(oracle::from(f.eval(x)), value, "F" + show(x));
    } else {
      expect(lib_fiber.empty(), "ri gph F has a fiber over " + show(x) + " outside ri dom F");
    }
  }
}

void thm2_4(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t p = gen.uniform(1, 2), n = gen.uniform(1, 3 - p);
  NCSet cone = gen.nearly_convex_set(p);
  Matrix g = gen.matrix(p, n);
  Vec c = random_vec(gen, p);
  auto r = epi_M(g, c, cone);
  expect(r.ri_formula_certified, "library ri certification failed");
  NCSet lib = maybe_corrupt(r.set, m);
  Matrix t = hstack(negated(g), Matrix::identity(p));
  OracleSet om = oracle::from(cone);
  expect_same(oracle::from(lib), oracle::preimage(om, t, negate(c)), "epi_M(g)");
  expect_nearly_convex(lib, "epi_M(g)");
  expect_same(ri_lib(lib), oracle::preimage(ri_of(om), t, negate(c)), "ri epi_M(g) = {y - g(x) in ri M}");
}

void thm3_1(InstanceGenerator& gen, Mutation m, std::size_t) {
  auto [n, p] = map_dims(gen);
  Vec anchor = gen.anchor(n + p);
  SVMap f = gen.map(n, p, anchor);
  NCSet omega = gen.nearly_convex_set(n, head(shared_or_fresh(gen, anchor), n));
  OracleSet og = oracle::from(f.graph()), oo = oracle::from(omega);
  const std::size_t d = n + p;
  Matrix py = coordinate_selector(d, range(n, p));
  auto r = image_of_set(f, omega, true);
  const bool qc = meets(ri_of(oracle::image(og, coordinate_selector(d, range(0, n)))), ri_of(oo));
  expect(r.qc_satisfied == qc, "qc flag disagrees with the oracle");
  reject_unless(qc);
  expect(r.ri_formula_holds.value_or(false), "library ri certification failed");
  NCSet lib = maybe_corrupt(r.set, m);
  expect_same(oracle::from(lib), oracle::image(oracle::intersect(og, lifted(oo, d, range(0, n))), py), "F(Omega)");
  expect_nearly_convex(lib, "F(Omega)");
  OracleSet rhs = oracle::image(oracle::intersect(ri_of(og), lifted(ri_of(oo), d, range(0, n))), py);
  expect_same(ri_lib(lib), rhs, "ri F(Omega) = union of ri F(x) over ri dom F cap ri Omega");
}

void cor3_2(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t p = gen.uniform(1, 2), n = gen.uniform(1, 3 - p);
  NCSet x = gen.nearly_convex_set(n), cone = gen.nearly_convex_set(p);
  Matrix g = gen.matrix(p, n);
  Vec c = random_vec(gen, p);
  auto r = affine_image_plus(x, g, c, cone);
  expect(r.ri_formula_holds, "library ri certification failed");
  NCSet lib = maybe_corrupt(r.set, m);
  Matrix t = hstack(g, Matrix::identity(p));
  auto build = [&](const OracleSet& a, const OracleSet& b) {
    return oracle::preimage(oracle::image(oracle::product(a, b), t), Matrix::identity(p), negate(c));
  };
  OracleSet ox = oracle::from(x), om = oracle::from(cone);
  expect_same(oracle::from(lib), build(ox, om), "g(X) + c + M");
  expect_nearly_convex(lib, "g(X) + c + M");
  expect_same(ri_lib(lib), build(ri_of(ox), ri_of(om)), "ri(g(X) + c + M) = g(ri X) + c + ri M");
}

void thm3_3(InstanceGenerator& gen, Mutation m, std::size_t) {
  auto [n, p] = map_dims(gen);
  Vec anchor = gen.anchor(n + p);
  SVMap f = gen.map(n, p, anchor);
  NCSet theta = gen.nearly_convex_set(p, tail(shared_or_fresh(gen, anchor), n));
  const std::size_t d = n + p;
  OracleSet og = oracle::from(f.graph()), ot = oracle::from(theta);
  Matrix px = coordinate_selector(d, range(0, n));
  auto r = inverse_image(f, theta, true);
  const bool qc = meets(ri_of(oracle::image(og, coordinate_selector(d, range(n, p)))), ri_of(ot));
  expect(r.qc_satisfied == qc, "qc flag disagrees with the oracle");
  reject_unless(qc);
  expect(r.ri_formula_holds.value_or(false), "library ri certification failed");
  NCSet lib = maybe_corrupt(r.set, m);
  expect_same(oracle::from(lib), oracle::image(oracle::intersect(og, lifted(ot, d, range(n, p))), px), "F^-1(Theta)");
  expect_nearly_convex(lib, "F^-1(Theta)");
  OracleSet rhs = oracle::image(oracle::intersect(ri_of(og), lifted(ri_of(ot), d, range(n, p))), px);
  expect_same(ri_lib(lib), rhs, "ri F^-1(Theta) = ri dom F cap F0^-1(ri Theta)");
}

void cor3_4(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t p = gen.uniform(1, 3), n = gen.uniform(1, 3);
  Matrix a = gen.matrix(p, n);
  Vec x0 = gen.anchor(n), c = random_vec(gen, p);
  Vec anchor = gen.coin(3, 4) ? add(a.apply(x0), c) : gen.anchor(p);
  NCSet theta = gen.nearly_convex_set(p, anchor);
  OracleSet ot = oracle::from(theta);
  auto r = preimage(theta, a, c);
  const bool qc = !oracle::preimage(ri_of(ot), a, c).empty();
  expect(r.qc_satisfied == qc, "qc flag disagrees with the oracle");
  reject_unless(qc);
  NCSet lib = maybe_corrupt(r.set, m);
  expect_same(oracle::from(lib), oracle::preimage(ot, a, c), "A^-1(Theta)");
  expect_nearly_convex(lib, "A^-1(Theta)");
  expect_same(ri_lib(lib), oracle::preimage(ri_of(ot), a, c), "ri A^-1(Theta) = A^-1(ri Theta)");
}

void thm3_5(InstanceGenerator& gen, Mutation m, std::size_t) {
  auto [n, p] = map_dims(gen);
  Vec anchor = gen.anchor(n + p);
  SVMap f = gen.map(n, p, anchor);
  NCSet omega = gen.nearly_convex_set(n, head(shared_or_fresh(gen, anchor), n));
  const std::size_t d = n + p;
  OracleSet og = oracle::from(f.graph()), oo = oracle::from(omega);
  auto r = restrict(f, omega, true);
  const bool qc = meets(ri_of(oracle::image(og, coordinate_selector(d, range(0, n)))), ri_of(oo));
  expect(r.qc_satisfied == qc, "qc flag disagrees with the oracle");
  reject_unless(qc);
  expect(r.ri_formula_holds.value_or(false), "library ri certification failed");
  NCSet lib = maybe_corrupt(r.map.graph(), m);
  expect_same(oracle::from(lib), oracle::intersect(og, lifted(oo, d, range(0, n))), "gph F_Omega");
  expect_nearly_convex(lib, "gph F_Omega");
  expect_same(ri_lib(lib), oracle::intersect(ri_of(og), lifted(ri_of(oo), d, range(0, n))),
              "ri gph F_Omega = {x in ri dom F cap ri Omega, y in ri F(x)}");
}

void cor3_6(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t n = gen.uniform(1, 2);
  Vec anchor = gen.anchor(n);
  PLFunction f = gen.function(n, anchor);
  NCSet omega = gen.nearly_convex_set(n, shared_or_fresh(gen, anchor));
  OracleSet oe = oracle::from(f.epi()), oo = oracle::from(omega);
  auto r = restrict_function(f, omega, true);
  const bool qc = meets(ri_of(oracle::image(oe, coordinate_selector(n + 1, range(0, n)))), ri_of(oo));
  expect(r.qc_satisfied == qc, "qc flag disagrees with the oracle");
  reject_unless(qc);
  expect(r.ri_formula_holds.value_or(false), "library ri certification failed");
  NCSet lib = maybe_corrupt(r.f.epi(), m);
  expect_same(oracle::from(lib), oracle::intersect(oe, lifted(oo, n + 1, range(0, n))), "epi f_Omega");
  expect_nearly_convex(lib, "epi f_Omega");
  expect_same(ri_lib(lib), oracle::intersect(ri_of(oe), lifted(ri_of(oo), n + 1, range(0, n))),
              "ri epi f_Omega = {x in ri dom f cap ri Omega, f(x) < t}");
}

/// Graph of x |-> F1(x) + F2(x) from graphs in (x, y1) and (x, y2).
OracleSet sum_graph(const OracleSet& g1, const OracleSet& g2, std::size_t n, std::size_t p) {
  const std::size_t d = n + 2 * p;
  OracleSet joint = oracle::intersect(lifted(g1, d, range(0, n + p)), lifted(g2, d, join(range(0, n), range(n + p, p))));
  Matrix t(n + p, d);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1;
  for (std::size_t j = 0; j < p; ++j) t(n + j, n + j) = t(n + j, n + p + j) = 1;
  return oracle::image(joint, t);
}

void thm3_7(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t n = 1, p = gen.uniform(1, 2);
  Vec anchor = gen.anchor(n + p);
  SVMap f1 = gen.map(n, p, anchor);
  SVMap f2 = gen.map(n, p, concat(head(shared_or_fresh(gen, anchor), n), gen.anchor(p)));
  OracleSet g1 = oracle::from(f1.graph()), g2 = oracle::from(f2.graph());
  Matrix px = coordinate_selector(n + p, range(0, n));
  auto r = sum(f1, f2, true);
  const bool qc = meets(ri_of(oracle::image(g1, px)), ri_of(oracle::image(g2, px)));
  expect(r.qc_satisfied == qc, "qc flag disagrees with the oracle");
  reject_unless(qc);
  expect(r.ri_formula_holds.value_or(false), "library ri certification failed");
  NCSet lib = maybe_corrupt(r.map.graph(), m);
  expect_same(oracle::from(lib), sum_graph(g1, g2, n, p), "gph(F1 + F2)");
  expect_nearly_convex(lib, "gph(F1 + F2)");
  expect_same(ri_lib(lib), sum_graph(ri_of(g1), ri_of(g2), n, p), "ri gph(F1 + F2) = {y in ri F1(x) + ri F2(x)}");
}

/// Graph of G o F from graphs in (x, y) and (y, z).
OracleSet compose_graph(const OracleSet& gf, const OracleSet& gg, std::size_t n, std::size_t p, std::size_t q) {
  const std::size_t d = n + p + q;
  OracleSet joint = oracle::intersect(lifted(gf, d, range(0, n + p)), lifted(gg, d, range(n, p + q)));
  return oracle::image(joint, coordinate_selector(d, join(range(0, n), range(n + p, q))));
}

void thm3_8(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t n = 1, p = gen.uniform(1, 2), q = 1;
  Vec anchor = gen.anchor(n + p + q);
  SVMap f = gen.map(n, p, head(anchor, n + p));
  SVMap g = gen.map(p, q, tail(shared_or_fresh(gen, anchor), n));
  OracleSet gf = oracle::from(f.graph()), gg = oracle::from(g.graph());
  auto r = compose(f, g, true);
  const bool qc = meets(ri_of(oracle::image(gf, coordinate_selector(n + p, range(n, p)))),
                        ri_of(oracle::image(gg, coordinate_selector(p + q, range(0, p)))));
  expect(r.qc_satisfied == qc, "qc flag disagrees with the oracle");
  reject_unless(qc);
  expect(r.ri_formula_holds.value_or(false), "library ri certification failed");
  NCSet lib = maybe_corrupt(r.map.graph(), m);
  expect_same(oracle::from(lib), compose_graph(gf, gg, n, p, q), "gph(G o F)");
  expect_nearly_convex(lib, "gph(G o F)");
  expect_same(ri_lib(lib), compose_graph(ri_of(gf), ri_of(gg), n, p, q), "ri gph(G o F) via M0(x, z)");
}

// ---------------------------------------------------------------------------
// Composite constructions

/// Constraint data shared by the composite builders: F (or an epigraphical
/// map), G either general or g(x) + c + K, and Theta, all around one anchor.
struct Composite {
  std::size_t n = 0, q = 0;
  NCSet theta;
  SVMap g;
  bool cone = false;
  Matrix gm;
  Vec c;
  HPoly k;
};

Composite composite_data(InstanceGenerator& gen, const Vec& x0, bool cone) {
  Composite out;
  out.n = x0.size();
  out.q = 1;
  out.cone = cone;
  out.theta = gen.nearly_convex_set(out.n, shared_or_fresh(gen, x0));
  if (cone) {
    out.k = gen.cone(out.q);
    out.gm = gen.matrix(out.q, out.n);
    Vec k0 = *oracle::relint_point(oracle::relative_interior(out.k));
    out.c = gen.coin(3, 4) ? sub(scale(out.gm.apply(x0), -1), k0) : random_vec(gen, out.q);
    out.g = SVMap::cone_constraint(out.gm, out.c, out.k);
  } else {
    out.g = gen.map(out.n, out.q, concat(shared_or_fresh(gen, x0), gen.anchor(out.q)));
  }
  return out;
}

OracleSet constraint_graph(const Composite& c) {
  if (!c.cone) return oracle::from(c.g.graph());
  Matrix t = hstack(negated(c.gm), Matrix::identity(c.q));
  return oracle::preimage(oracle::from(NCSet::closed(c.k)), t, negate(c.c));
}

/// Graph of (x, u, y) |-> F(x + u) (u absent when shift is false) with x in
/// Theta and y in G(x), in coordinates (x, u, y, z).
OracleSet composite_graph(const OracleSet& gf, std::size_t p, const Composite& c, bool shift) {
  const std::size_t n = c.n, extra = shift ? n : 0, d = n + extra + c.q + p;
  Matrix t(n + p, d);
  for (std::size_t i = 0; i < n; ++i) {
    t(i, i) = 1;
    if (shift) t(i, n + i) = 1;
  }
  for (std::size_t j = 0; j < p; ++j) t(n + j, n + extra + c.q + j) = 1;
  OracleSet a = oracle::preimage(gf, t, zeros(n + p));
  OracleSet b = lifted(constraint_graph(c), d, join(range(0, n), range(n + extra, c.q)));
  OracleSet th = lifted(oracle::from(c.theta), d, range(0, n));
  return oracle::intersect(oracle::intersect(a, b), th);
}

bool composite_qc(const OracleSet& dom_f, const Composite& c) {
  OracleSet dom_g = oracle::image(constraint_graph(c), coordinate_selector(c.n + c.q, range(0, c.n)));
  return meets(oracle::intersect(ri_of(dom_f), ri_of(dom_g)), ri_of(oracle::from(c.theta)));
}

void map_composite(InstanceGenerator& gen, Mutation m, bool shift, bool cone) {
  const std::size_t n = 1, p = 1;
  Vec anchor = gen.anchor(n + p);
  SVMap f = gen.map(n, p, anchor);
  Composite c = composite_data(gen, head(anchor, n), cone);
  MapResult r = shift ? (cone ? build_psi_cone(c.theta, f, c.gm, c.c, c.k) : build_psi(c.theta, f, c.g))
                      : (cone ? build_phi_cone(c.theta, f, c.gm, c.c, c.k) : build_phi(c.theta, f, c.g));
  OracleSet gf = oracle::from(f.graph());
  const bool qc = composite_qc(oracle::image(gf, coordinate_selector(n + p, range(0, n))), c);
  expect(r.qc_satisfied == qc, "qc flag disagrees with the oracle");
  reject_unless(qc);
  NCSet lib = maybe_corrupt(r.map.graph(), m);
  expect_same(oracle::from(lib), composite_graph(gf, p, c, shift), shift ? "gph Psi" : "gph Phi");
  expect_nearly_convex(lib, shift ? "gph Psi" : "gph Phi");
}

void function_composite(InstanceGenerator& gen, Mutation m, bool shift, bool cone) {
  const std::size_t n = 1;
  Vec anchor = gen.anchor(n);
  PLFunction f = gen.function(n, anchor);
  Composite c = composite_data(gen, anchor, cone);
  FunctionResult r = shift ? (cone ? build_composite_psi_cone(f, c.theta, c.gm, c.c, c.k)
                                   : build_composite_psi(f, c.theta, c.g))
                           : (cone ? build_composite_phi_cone(f, c.theta, c.gm, c.c, c.k)
                                   : build_composite_phi(f, c.theta, c.g));
  OracleSet ge = oracle::from(f.epi());
  const bool qc = composite_qc(oracle::image(ge, coordinate_selector(n + 1, range(0, n))), c);
  expect(r.qc_satisfied == qc, "qc flag disagrees with the oracle");
  reject_unless(qc);
  NCSet lib = maybe_corrupt(r.f.epi(), m);
  expect_same(oracle::from(lib), composite_graph(ge, 1, c, shift), shift ? "epi psi" : "epi phi");
  expect_nearly_convex(lib, shift ? "epi psi" : "epi phi");
}

/// Graph of (x, y) |-> F(x) + G(A x + y), coordinates (x, y, w).
OracleSet affine_inner_graph(const OracleSet& gf, const OracleSet& gg, const Matrix& a, std::size_t q) {
  const std::size_t n = a.cols(), p = a.rows(), d = n + p + 2 * q;
  OracleSet one = lifted(gf, d, join(range(0, n), range(n + p, q)));
  Matrix t(p + q, d);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < n; ++j) t(i, j) = a(i, j);
    t(i, n + i) = 1;
  }
  for (std::size_t k = 0; k < q; ++k) t(p + k, n + p + q + k) = 1;
  OracleSet two = oracle::preimage(gg, t, zeros(p + q));
  Matrix s(n + p + q, d);
  for (std::size_t i = 0; i < n + p; ++i) s(i, i) = 1;
  for (std::size_t k = 0; k < q; ++k) s(n + p + k, n + p + k) = s(n + p + k, n + p + q + k) = 1;
  return oracle::image(oracle::intersect(one, two), s);
}

void thm4_9(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t n = 1, p = 1, q = 1;
  SVMap f = gen.map(n, q, gen.anchor(n + q)), g = gen.map(p, q, gen.anchor(p + q));
  Matrix a = gen.matrix(p, n);
  NCSet lib = maybe_corrupt(sum_with_affine_inner(f, g, a).graph(), m);
  expect_same(oracle::from(lib), affine_inner_graph(oracle::from(f.graph()), oracle::from(g.graph()), a, q),
              "gph F(x) + G(Ax + y)");
  expect_nearly_convex(lib, "gph F(x) + G(Ax + y)");
}

void cor4_10(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t n = 1, p = 1;
  PLFunction f = gen.function(n, gen.anchor(n)), g = gen.function(p, gen.anchor(p));
  Matrix a = gen.matrix(p, n);
  NCSet lib = maybe_corrupt(composite_sum(f, g, a).epi(), m);
  expect_same(oracle::from(lib), affine_inner_graph(oracle::from(f.epi()), oracle::from(g.epi()), a, 1),
              "epi f(x) + g(Ax + y)");
  expect_nearly_convex(lib, "epi f(x) + g(Ax + y)");
}

// ---------------------------------------------------------------------------
// Optimal value functions

struct OVFDraw {
  std::size_t n = 1, p = 1;
  Vec anchor;
  PLFunction f;
  SVMap map;
};

OVFDraw ovf_draw(InstanceGenerator& gen) {
  OVFDraw out;
  out.p = gen.uniform(1, 2);
  out.anchor = gen.anchor(out.n + out.p);
  out.f = gen.function(out.n + out.p, out.anchor);
  out.map = gen.map(out.n, out.p, shared_or_fresh(gen, out.anchor));
  return out;
}

/// P_{1,3}(epi f cap (gph F x R)), the set sandwiched between epi_s mu and epi mu.
OracleSet ovf_projection(const OVFDraw& d) {
  const std::size_t dim = d.n + d.p + 1;
  OracleSet joint = oracle::intersect(oracle::from(d.f.epi()), lifted(oracle::from(d.map.graph()), dim, range(0, d.n + d.p)));
  return oracle::image(joint, coordinate_selector(dim, join(range(0, d.n), {d.n + d.p})));
}

OVFInstance qualified_ovf(const OVFDraw& d) {
  OVFInstance inst = build_ovf(d.f, d.map);
  const bool qc = meets(ri_of(oracle::image(oracle::from(d.f.epi()), coordinate_selector(d.n + d.p + 1, range(0, d.n + d.p)))),
                        ri_of(oracle::from(d.map.graph())));
  expect(inst.qc_satisfied == qc, "qc flag disagrees with the oracle");
  reject_unless(qc);
  return inst;
}

void thm5_2(InstanceGenerator& gen, Mutation m, std::size_t) {
  OVFDraw d = ovf_draw(gen);
  OVFInstance inst = qualified_ovf(d);
  expect(inst.mu_nearly_convex, "build_ovf reports mu not nearly convex");
  NCSet epi = maybe_corrupt(inst.mu.epi(), m);
  OracleSet proj = ovf_projection(d), lib = oracle::from(epi);
  if (auto w = oracle::difference(proj, lib)) throw Mismatch{"projection point " + show(*w) + " missing from epi mu"};
  if (auto w = oracle::closure_difference(lib, proj))
    throw Mismatch{"epi mu point " + show(*w) + " outside the closure of the projection"};
  OracleSet strict = oracle::from(strict_upper_set(epi));
  if (auto w = oracle::difference(strict, proj)) throw Mismatch{"strict epigraph point " + show(*w) + " outside the projection"};
  expect_nearly_convex(epi, "epi mu");
}

void lem5_1(InstanceGenerator& gen, Mutation m, std::size_t) {
  OVFDraw d = ovf_draw(gen);
  OVFInstance inst = qualified_ovf(d);
  NCSet epi = maybe_corrupt(inst.mu.epi(), m);
  expect(m != Mutation::None || strict_epigraph_closure_agrees(inst.mu), "library closure hook disagrees");
  OracleSet strict = oracle::from(strict_upper_set(epi)), full = oracle::from(epi);
  if (auto w = oracle::closure_difference(full, strict)) throw Mismatch{"cl epi mu has " + show(*w) + " outside cl epi_s mu"};
  if (auto w = oracle::closure_difference(strict, full)) throw Mismatch{"cl epi_s mu has " + show(*w) + " outside cl epi mu"};
  // The strict epigraph of mu must sit in the projection that defines mu.
  if (auto w = oracle::difference(strict, ovf_projection(d)))
    throw Mismatch{"strict epigraph point " + show(*w) + " outside the projection"};
  expect_nearly_convex(epi, "epi mu");
}

/// {v : <v, x - xbar> - (t - m) <= 0 on every generator of cl epi}.
HPoly subdifferential_oracle(const NCSet& epi, const Vec& xbar, const Rational& m) {
  const std::size_t n = xbar.size();
  HPoly out(n);
  for (const auto& piece : oracle::from(epi).pieces) {
    VPoly g = oracle::generators(piece);
    for (const auto& z : g.points) out.add_ineq(sub(head(z, n), xbar), z[n] - m);
    for (const auto& r : g.rays) out.add_ineq(head(r, n), r[n]);
  }
  return out;
}

void thm5_3(InstanceGenerator& gen, Mutation, std::size_t) {
  OVFDraw d = ovf_draw(gen);
  OVFInstance inst = qualified_ovf(d);
  std::vector<Vec> xs;
  for (const auto& piece : oracle::from(inst.mu.dom()).pieces) xs.push_back(*oracle::relint_point(piece));
  // Candidate points in random order; the first with S(xbar) nonempty is used.
  std::rotate(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(xs.empty() ? 0 : gen.next() % xs.size()), xs.end());
  Vec xbar;
  ExtReal mu;
  OracleSet os;
  for (const auto& x : xs) {
    mu = inst.mu.eval(x);
    if (!mu.is_finite()) continue;
    os = oracle::from(solution_map(inst, x));
    if (os.empty()) continue;
    xbar = x;
    break;
  }
  reject_unless(!os.empty());
  Vec ybar = *oracle::relint_point(os.pieces[gen.next() % os.pieces.size()]);
  auto r = ovf_subdifferential(inst, xbar, ybar);
  expect(r.equal, "library reports lhs != rhs at " + show(xbar));
  HPoly orc = subdifferential_oracle(inst.mu.epi(), xbar, mu.value());
  expect(oracle::same_polyhedron(r.lhs, orc), "d mu" + show(xbar) + " differs from the generator oracle");
  expect(oracle::same_polyhedron(r.rhs, orc), "union of u + D*F(v) differs from the generator oracle");
}

// ---------------------------------------------------------------------------
// Conjugates

std::string value_detail(const std::string& what, const ExtReal& lib, const ExtReal& orc) {
  return what + ": library " + lib.str() + ", oracle " + orc.str();
}

void thm6_1(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t d = gen.uniform(1, 3);
  Vec anchor = gen.anchor(d);
  NCSet a = gen.nearly_convex_set(d, anchor), b = gen.nearly_convex_set(d, shared_or_fresh(gen, anchor));
  Vec v = random_vec(gen, d);
  OracleSet oa = oracle::from(a), ob = oracle::from(b);
  auto r = support_of_intersection(a, b, v, false);
  expect(r.qc_satisfied == meets(ri_of(oa), ri_of(ob)), "qc flag disagrees with the oracle");
  reject_unless(r.qc_satisfied);
  if (m == Mutation::CorruptConjugate) {
    // Support functions are conjugates of indicators.
    PLFunction ind = PLFunction::indicator(a);
    expect_conjugate_rows(ind, v, m, "sigma_A");
  }
  ExtReal orc = oracle::support(oracle::intersect(oa, ob), v);
  expect(r.lhs == orc, value_detail("sigma of the intersection", r.lhs, orc));
  expect(r.equal && r.rhs == r.lhs, "inf-convolution side " + r.rhs.str() + " != " + r.lhs.str());
  if (r.lhs.is_finite()) {
    expect(r.witness && r.witness_verified, "finite value without a verified witness");
    expect(add(r.witness->w1, r.witness->w2) == v, "witness parts do not add up to v");
    ExtReal split = oracle::support(oa, r.witness->w1) + oracle::support(ob, r.witness->w2);
    expect(split == r.lhs, value_detail("witness split", split, r.lhs));
  }
}

void prop6_2(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t n = gen.uniform(1, 2);
  PLFunction f = gen.function(n, gen.anchor(n));
  Vec w = random_vec(gen, n);
  ExtReal lib = fenchel_value(f, w), orc = generator_conjugate_oracle(f, w);
  expect(lib == orc, value_detail("f*" + show(w), lib, orc));
  ExtReal map_side = svm_conjugate(epigraphical_map(f), w, Vec{Rational(-1)}).value;
  expect(map_side == orc, value_detail("E_f*(w, -1)", map_side, orc));
  expect_conjugate_rows(f, w, m, "f*");
}

void thm6_3(InstanceGenerator& gen, Mutation m, std::size_t) {
  OVFDraw d = ovf_draw(gen);
  OVFInstance inst = qualified_ovf(d);
  reject_unless(inst.mu_proper);
  Vec w = random_vec(gen, d.n);
  auto r = ovf_conjugate(inst, w);
  ExtReal orc = generator_conjugate_oracle(inst.mu, w);
  expect(r.lhs == orc, value_detail("mu*" + show(w), r.lhs, orc));
  expect(r.equal && r.rhs == orc, value_detail("(f* inf-conv F*)(w, 0)", r.rhs, orc));
  if (orc.is_finite()) {
    expect(r.witness && r.witness_verified && r.witness->v, "finite value without a verified witness");
    const auto& s = *r.witness;
    expect(add(s.w1, s.w2) == w, "witness parts do not add up to w");
    ExtReal split = generator_conjugate_oracle(d.f, concat(s.w1, *s.v)) +
                    oracle::support(oracle::from(d.map.graph()), concat(s.w2, negate(*s.v)));
    expect(split == orc, value_detail("f*(w1, v) + F*(w2, -v)", split, orc));
  }
  expect_conjugate_rows(inst.mu, w, m, "mu*");
}

void cor6_4(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t n = 1, p = gen.uniform(1, 2);
  PLFunction f = gen.function(n + p, gen.anchor(n + p));
  OVFInstance inst = build_ovf(f, SVMap::constant(n, NCSet::relatively_open(HPoly::whole(p))));
  reject_unless(inst.mu_proper);
  Vec w = random_vec(gen, n);
  auto r = ovf_conjugate(inst, w);
  ExtReal orc = generator_conjugate_oracle(f, concat(w, zeros(p)));
  expect(r.lhs == orc, value_detail("mu*" + show(w) + " vs f*(w, 0)", r.lhs, orc));
  expect(r.equal && r.rhs == orc, value_detail("inf-convolution side", r.rhs, orc));
  expect(generator_conjugate_oracle(inst.mu, w) == orc, "generator oracle of mu disagrees with f*(w, 0)");
  expect_conjugate_rows(f, concat(w, zeros(p)), m, "f*");
}

/// Epigraph of f1 + f2 from epigraphs in (x, t1) and (x, t2).
OracleSet sum_epigraph(const OracleSet& e1, const OracleSet& e2, std::size_t n) { return sum_graph(e1, e2, n, 1); }

void thm6_6(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t n = gen.uniform(1, 2);
  Vec anchor = gen.anchor(n);
  PLFunction f1 = gen.function(n, anchor), f2 = gen.function(n, shared_or_fresh(gen, anchor));
  Vec w = random_vec(gen, n);
  auto r = conjugate_sum(f1, f2, w, false);
  OracleSet e1 = oracle::from(f1.epi()), e2 = oracle::from(f2.epi());
  Matrix px = coordinate_selector(n + 1, range(0, n));
  expect(r.qc_satisfied == meets(ri_of(oracle::image(e1, px)), ri_of(oracle::image(e2, px))),
         "qc flag disagrees with the oracle");
  reject_unless(r.qc_satisfied);
  ExtReal orc = oracle::support(sum_epigraph(e1, e2, n), concat(w, Vec{Rational(-1)}));
  expect(r.lhs == orc, value_detail("(f1 + f2)*" + show(w), r.lhs, orc));
  expect(r.equal && r.rhs == orc, value_detail("(f1* inf-conv f2*)(w)", r.rhs, orc));
  if (orc.is_finite()) {
    expect(r.witness && r.witness_verified, "finite value without a verified witness");
    expect(add(r.witness->w1, r.witness->w2) == w, "witness parts do not add up to w");
    ExtReal split = generator_conjugate_oracle(f1, r.witness->w1) + generator_conjugate_oracle(f2, r.witness->w2);
    expect(split == orc, value_detail("f1*(w1) + f2*(w2)", split, orc));
  }
  expect_conjugate_rows(f1, w, m, "f1*");
}

void thm6_7(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t n = gen.uniform(1, 2), p = gen.uniform(1, 2);
  Matrix a = gen.matrix(p, n);
  Vec x0 = gen.anchor(n);
  PLFunction g = gen.function(p, gen.coin(3, 4) ? a.apply(x0) : gen.anchor(p));
  Vec w = random_vec(gen, n);
  auto r = conjugate_chain(g, a, w, false);
  OracleSet eg = oracle::from(g.epi());
  const bool qc = !oracle::preimage(ri_of(oracle::image(eg, coordinate_selector(p + 1, range(0, p)))), a, zeros(p)).empty();
  expect(r.qc_satisfied == qc, "qc flag disagrees with the oracle");
  reject_unless(qc);
  OracleSet comp = oracle::preimage(eg, block_diag(a, Matrix::identity(1)), zeros(p + 1));
  ExtReal orc = oracle::support(comp, concat(w, Vec{Rational(-1)}));
  expect(r.lhs == orc, value_detail("(g o A)*" + show(w), r.lhs, orc));
  expect(r.equal && r.rhs == orc, value_detail("inf {g*(v) : A^T v = w}", r.rhs, orc));
  if (orc.is_finite()) {
    expect(r.witness && r.witness_verified && r.witness->v, "finite value without a verified witness");
    const Vec& v = *r.witness->v;
    expect(a.apply_transpose(v) == w, "witness violates A^T v = w");
    expect(generator_conjugate_oracle(g, v) == orc, "g*(v) at the witness differs");
  }
  expect_conjugate_rows(g, random_vec(gen, p), m, "g*");
}

void ex6_8(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t n = 1, p = gen.uniform(1, 2);
  PLFunction g = gen.function(n, gen.anchor(n)), h = gen.function(p, gen.anchor(p));
  Matrix a = gen.matrix(p, n);
  Vec y = random_vec(gen, p);
  auto r = composite_conjugate(g, h, a, y);
  ExtReal rhs = generator_conjugate_oracle(g, negate(a.apply_transpose(y))) + generator_conjugate_oracle(h, y);
  OracleSet epi = affine_inner_graph(oracle::from(g.epi()), oracle::from(h.epi()), a, 1);
  ExtReal lhs = oracle::support(epi, concat(zeros(n), concat(y, Vec{Rational(-1)})));
  expect(lhs == rhs, value_detail("oracle f*(0, y*) vs g*(-A^T y*) + h*(y*)", lhs, rhs));
  expect(r.lhs == lhs, value_detail("f*(0, y*)", r.lhs, lhs));
  expect(r.equal && r.rhs == rhs, value_detail("g*(-A^T y*) + h*(y*)", r.rhs, rhs));
  expect_conjugate_rows(h, y, m, "h*");
}

// ---------------------------------------------------------------------------
// Duality

/// inf of the last coordinate over {z : (x, 0, t) in epi f}.
ExtReal primal_oracle(const PLFunction& f, std::size_t n) {
  const std::size_t p = f.n() - n;
  Matrix t(n + p + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1;
  t(n + p, n) = 1;
  return oracle::min_last(oracle::preimage(oracle::from(f.epi()), t, zeros(n + p + 1)));
}

void expect_weak(const DualityReport& r) {
  expect(r.weak_duality(), "weak duality violated: V = " + r.primal.str() + ", V_d = " + r.dual.str());
}

void general_case(InstanceGenerator& gen, Mutation m, bool require_qc, bool identity_only) {
  const std::size_t n = 1, p = gen.uniform(1, 2);
  Vec anchor = gen.anchor(n + p);
  if (gen.coin(1, 2)) std::fill(anchor.begin() + static_cast<std::ptrdiff_t>(n), anchor.end(), Rational(0));
  PLFunction f = gen.function(n + p, anchor);
  DualityReport r = general_duality(f, n);
  expect_weak(r);
  ExtReal v = primal_oracle(f, n);
  expect(r.primal == v, value_detail("V", r.primal, v));
  expect(r.value_function_identity.value_or(false), "V = mu(0), V_d = mu**(0) fails");
  const bool qc = oracle::from(f.dom()).empty() ? false
                  : ri_of(oracle::image(oracle::from(f.dom()), coordinate_selector(n + p, range(n, p)))).contains(zeros(p));
  expect(r.all_qc() == qc, "qc flag disagrees with the oracle");
  if (r.dual.is_finite()) {
    expect(r.dual_witness.has_value(), "finite V_d without a dual witness");
    ExtReal at = -generator_conjugate_oracle(f, concat(zeros(n), *r.dual_witness));
    expect(at == r.dual, value_detail("-f*(0, y*) at the dual witness", at, r.dual));
  }
  expect_conjugate_rows(f, concat(zeros(n), r.dual_witness.value_or(zeros(p))), m, "f*");
  if (identity_only) return;
  if (require_qc) {
    reject_unless(qc);
    expect(r.gap == ExtReal(0), "gap " + r.gap.str() + " under the qc");
  } else if (r.subdifferential_nonempty.value_or(false)) {
    expect(r.gap == ExtReal(0), "d mu(0) nonempty but gap " + r.gap.str());
  }
}

struct LagrangeDraw {
  std::size_t n = 1, p = 1;
  PLFunction phi;
  NCSet theta;
  SVMap g;
};

LagrangeDraw lagrange_draw(InstanceGenerator& gen) {
  LagrangeDraw d;
  d.n = gen.uniform(1, 2);
  Vec x0 = gen.anchor(d.n);
  d.phi = gen.function(d.n, x0);
  d.theta = gen.nearly_convex_set(d.n, shared_or_fresh(gen, x0));
  d.g = gen.map(d.n, d.p, concat(shared_or_fresh(gen, x0), zeros(d.p)));
  return d;
}

/// Joint set {(x, y, t) : (x, t) in epi phi, x in Theta, (x, y) in gph G}.
OracleSet lagrange_joint(const OracleSet& epi, const OracleSet& theta, const OracleSet& graph, std::size_t n,
                         std::size_t p) {
  const std::size_t d = n + p + 1;
  OracleSet s = oracle::intersect(lifted(epi, d, join(range(0, n), {n + p})), lifted(theta, d, range(0, n)));
  return oracle::intersect(s, lifted(graph, d, range(0, n + p)));
}

/// V = inf {t : (x, 0, t) in joint}.
ExtReal lagrange_primal(const OracleSet& joint, std::size_t n, std::size_t p) {
  Matrix t(n + p + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1;
  t(n + p, n) = 1;
  return oracle::min_last(oracle::preimage(joint, t, zeros(n + p + 1)));
}

/// h(y*) = inf {t - <y*, y>} over the joint set.
ExtReal lagrange_dual_oracle(const OracleSet& joint, std::size_t n, const Vec& ystar) {
  return -oracle::support(joint, concat(zeros(n), concat(ystar, Vec{Rational(-1)})));
}

void check_lagrange(const DualityReport& r, const OracleSet& joint, std::size_t n, std::size_t p, const Vec& ystar) {
  ExtReal v = lagrange_primal(joint, n, p);
  expect(r.primal == v, value_detail("V", r.primal, v));
  expect(r.gap == ExtReal(0), "gap " + r.gap.str() + " under the qc");
  ExtReal h = lagrange_dual_oracle(joint, n, ystar);
  expect(h == r.dual, value_detail("h(y*) at the dual witness", h, r.dual));
  expect(r.scheme_dual_agrees.value_or(true), "scheme dual function disagrees with the conjugate pipeline");
}

void thm7_3(InstanceGenerator& gen, Mutation m, std::size_t) {
  LagrangeDraw d = lagrange_draw(gen);
  DualityReport r = lagrange_duality(d.phi, d.theta, d.g);
  expect_weak(r);
  OracleSet epi = oracle::from(d.phi.epi()), th = oracle::from(d.theta), gr = oracle::from(d.g.graph());
  OracleSet joint = lagrange_joint(epi, th, gr, d.n, d.p);
  OracleSet dom_phi = oracle::image(epi, coordinate_selector(d.n + 1, range(0, d.n)));
  OracleSet dom_g = oracle::image(gr, coordinate_selector(d.n + d.p, range(0, d.n)));
  const bool qc1 = meets(oracle::intersect(ri_of(dom_phi), ri_of(dom_g)), ri_of(th));
  OracleSet img = oracle::image(oracle::intersect(gr, lifted(oracle::intersect(th, dom_phi), d.n + d.p, range(0, d.n))),
                                coordinate_selector(d.n + d.p, range(d.n, d.p)));
  const bool qc2 = !img.empty() && ri_of(img).contains(zeros(d.p));
  expect(r.qc.size() == 2 && r.qc[0].holds == qc1 && r.qc[1].holds == qc2, "qc flags disagree with the oracle");
  reject_unless(qc1 && qc2);
  expect(r.dual_witness.has_value(), "no dual witness");
  check_lagrange(r, joint, d.n, d.p, *r.dual_witness);
  expect_conjugate_rows(d.phi, random_vec(gen, d.n), m, "phi*");
}

void thm7_6(InstanceGenerator& gen, Mutation m, std::size_t) {
  LagrangeDraw d = lagrange_draw(gen);
  DualityReport r = fenchel_lagrange_duality(d.phi, d.theta, d.g);
  expect_weak(r);
  reject_unless(r.all_qc());
  OracleSet th = oracle::from(d.theta), gr = oracle::from(d.g.graph());
  OracleSet joint = lagrange_joint(oracle::from(d.phi.epi()), th, gr, d.n, d.p);
  ExtReal v = lagrange_primal(joint, d.n, d.p);
  expect(r.primal == v, value_detail("V", r.primal, v));
  expect(r.gap == ExtReal(0), "gap " + r.gap.str() + " under the qc");
  expect(r.dual_witness.has_value(), "no dual witness");
  Vec u = head(*r.dual_witness, d.n), y = tail(*r.dual_witness, d.n);
  // h1(u*, y*) = -phi*(u*) + inf {<u*, x> - <y*, y> : x in Theta, y in G(x)}.
  OracleSet constraint = oracle::intersect(gr, lifted(th, d.n + d.p, range(0, d.n)));
  ExtReal inner = -oracle::support(constraint, concat(negate(u), y));
  ExtReal h1 = -generator_conjugate_oracle(d.phi, u) + inner;
  expect(h1 == r.dual, value_detail("h1(u*, y*) at the dual witness", h1, r.dual));
  expect(r.scheme_dual_agrees.value_or(true), "scheme dual function disagrees with the conjugate pipeline");
  expect_conjugate_rows(d.phi, u, m, "phi*");
}

struct ConeDraw {
  std::size_t n = 1, q = 1;
  PLFunction phi;
  NCSet theta;
  Matrix g;
  Vec c;
  HPoly k;
};

ConeDraw cone_draw(InstanceGenerator& gen) {
  ConeDraw d;
  d.n = gen.uniform(1, 2);
  d.q = gen.uniform(1, 2);
  Vec x0 = gen.anchor(d.n);
  d.phi = gen.function(d.n, x0);
  d.theta = gen.nearly_convex_set(d.n, shared_or_fresh(gen, x0));
  d.k = gen.cone(d.q);
  d.g = gen.matrix(d.q, d.n);
  Vec k0 = *oracle::relint_point(oracle::relative_interior(d.k));
  d.c = gen.coin(3, 4) ? sub(negate(d.g.apply(x0)), k0) : random_vec(gen, d.q);
  return d;
}

OracleSet cone_graph(const ConeDraw& d) {
  Matrix t = hstack(negated(d.g), Matrix::identity(d.q));
  return oracle::preimage(oracle::from(NCSet::closed(d.k)), t, negate(d.c));
}

void lem7_4(InstanceGenerator& gen, Mutation, std::size_t) {
  ConeDraw d = cone_draw(gen);
  VPoly kg = oracle::generators(d.k.system());
  SVMap map = SVMap::cone_constraint(d.g, d.c, d.k);
  for (int i = 0; i < 4; ++i) {
    Vec x = random_vec(gen, d.n), y = random_vec(gen, d.q);
    if (i == 0 && !kg.rays.empty()) y = negate(kg.rays.front());
    // -y* in K* exactly when <-y*, r> >= 0 on every generator of K.
    const bool in_dual = std::all_of(kg.rays.begin(), kg.rays.end(), [&](const Vec& r) { return sgn(dot(negate(y), r)) >= 0; });
    ExtReal closed = in_dual ? ExtReal(Rational(-dot(y, add(d.g.apply(x), d.c)))) : ExtReal::minus_inf();
    ExtReal lib = v_g_cone(d.g, d.c, d.k, x, y), general = v_g(map, x, y);
    expect(lib == closed, value_detail("v_G" + show(x) + " at y* = " + show(y), lib, closed));
    expect(general == closed, value_detail("general v_G" + show(x) + " at y* = " + show(y), general, closed));
    expect(dual_cone(d.k).contains(negate(y)) == in_dual, "K* membership disagrees at " + show(negate(y)));
  }
}

void cor7_5(InstanceGenerator& gen, Mutation m, std::size_t) {
  ConeDraw d = cone_draw(gen);
  DualityReport r = lagrange_cone_duality(d.phi, d.theta, d.g, d.c, d.k);
  expect_weak(r);
  OracleSet epi = oracle::from(d.phi.epi()), th = oracle::from(d.theta);
  OracleSet dom_phi = oracle::image(epi, coordinate_selector(d.n + 1, range(0, d.n)));
  // 0 in g(ri Theta cap ri dom phi) + c + ri K.
  const std::size_t dim = d.n + d.q;
  OracleSet xs = lifted(oracle::intersect(ri_of(th), ri_of(dom_phi)), dim, range(0, d.n));
  Matrix t = hstack(negated(d.g), Matrix::identity(d.q));
  OracleSet ks = oracle::preimage(oracle::single(oracle::relative_interior(d.k)), t, negate(d.c));
  OracleSet zero_fiber = oracle::preimage(oracle::intersect(xs, ks), coordinate_selector(dim, range(0, d.n)).transpose(),
                                          zeros(dim));
  const bool qc = !zero_fiber.empty();
  reject_unless(r.all_qc());
  expect(qc, "library qc holds but the oracle finds no x with 0 in g(x) + c + ri K");
  expect(r.dual_witness.has_value(), "no dual witness");
  OracleSet joint = lagrange_joint(epi, th, cone_graph(d), d.n, d.q);
  check_lagrange(r, joint, d.n, d.q, negate(*r.dual_witness));
  expect_conjugate_rows(d.phi, random_vec(gen, d.n), m, "phi*");
}

void thm7_8(InstanceGenerator& gen, Mutation m, std::size_t) {
  const std::size_t n = gen.uniform(1, 2), p = gen.uniform(1, 2);
  Matrix a = gen.matrix(p, n);
  Vec x0 = gen.anchor(n);
  PLFunction g = gen.function(n, x0), h = gen.function(p, gen.coin(3, 4) ? a.apply(x0) : gen.anchor(p));
  DualityReport r = fenchel_duality(g, h, a);
  expect_weak(r);
  OracleSet eg = oracle::from(g.epi()), eh = oracle::from(h.epi());
  OracleSet dg = oracle::image(eg, coordinate_selector(n + 1, range(0, n)));
  OracleSet dh = oracle::image(eh, coordinate_selector(p + 1, range(0, p)));
  const bool qc = meets(oracle::image(ri_of(dg), a), ri_of(dh));
  expect(r.all_qc() == qc, "qc flag disagrees with the oracle");
  reject_unless(qc);
  // V = inf_x g(x) + h(A x): the y = 0 slice of the perturbation epigraph.
  OracleSet pert = affine_inner_graph(eg, eh, a, 1);
  Matrix t(n + p + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1;
  t(n + p, n) = 1;
  ExtReal v = oracle::min_last(oracle::preimage(pert, t, zeros(n + p + 1)));
  expect(r.primal == v, value_detail("V", r.primal, v));
  expect(r.gap == ExtReal(0), "gap " + r.gap.str() + " under the qc");
  expect(r.dual_witness.has_value(), "no dual witness");
  const Vec& y = *r.dual_witness;
  ExtReal dual = -(generator_conjugate_oracle(g, negate(a.apply_transpose(y))) + generator_conjugate_oracle(h, y));
  expect(dual == r.dual, value_detail("-g*(-A^T y*) - h*(y*) at the dual witness", dual, r.dual));
  expect_conjugate_rows(h, y, m, "h*");
}

// ---------------------------------------------------------------------------
// Registry

using SuiteFn = void (*)(InstanceGenerator&, Mutation, std::size_t);

struct Entry {
  const char* id;
  SuiteFn fn;
  bool piece;
  bool conjugate;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      {"prop2.1", prop2_1, true, false},
      {"thm2.2a", thm2_2a, true, false},
      {"thm2.2c", thm2_2c, true, false},
      {"thm2.2d", thm2_2d, true, false},
      {"thm2.3", thm2_3, true, false},
      {"thm2.4", thm2_4, true, false},
      {"thm3.1", thm3_1, true, false},
      {"cor3.2", cor3_2, true, false},
      {"thm3.3", thm3_3, true, false},
      {"cor3.4", cor3_4, true, false},
      {"thm3.5", thm3_5, true, false},
      {"cor3.6", cor3_6, true, false},
      {"thm3.7", thm3_7, true, false},
      {"thm3.8", thm3_8, true, false},
      {"thm4.1", [](InstanceGenerator& g, Mutation m, std::size_t) { map_composite(g, m, false, false); }, true, false},
      {"cor4.2", [](InstanceGenerator& g, Mutation m, std::size_t) { map_composite(g, m, false, true); }, true, false},
      {"cor4.3", [](InstanceGenerator& g, Mutation m, std::size_t) { function_composite(g, m, false, false); }, true,
       false},
      {"cor4.4", [](InstanceGenerator& g, Mutation m, std::size_t) { function_composite(g, m, false, true); }, true,
       false},
      {"thm4.5", [](InstanceGenerator& g, Mutation m, std::size_t) { map_composite(g, m, true, false); }, true, false},
      {"cor4.6", [](InstanceGenerator& g, Mutation m, std::size_t) { map_composite(g, m, true, true); }, true, false},
      {"cor4.7", [](InstanceGenerator& g, Mutation m, std::size_t) { function_composite(g, m, true, false); }, true,
       false},
      {"cor4.8", [](InstanceGenerator& g, Mutation m, std::size_t) { function_composite(g, m, true, true); }, true,
       false},
      {"thm4.9", thm4_9, true, false},
      {"cor4.10", cor4_10, true, false},
      {"lem5.1", lem5_1, true, false},
      {"thm5.2", thm5_2, true, false},
      {"thm5.3", thm5_3, false, false},
      {"thm6.1", thm6_1, false, true},
      {"prop6.2", prop6_2, false, true},
      {"thm6.3", thm6_3, false, true},
      {"cor6.4", cor6_4, false, true},
      {"thm6.6", thm6_6, false, true},
      {"thm6.7", thm6_7, false, true},
      {"ex6.8", ex6_8, false, true},
      {"thm7.1a", [](InstanceGenerator& g, Mutation m, std::size_t) { general_case(g, m, false, true); }, false, true},
      {"thm7.1b", [](InstanceGenerator& g, Mutation m, std::size_t) { general_case(g, m, false, false); }, false,
       true},
      {"cor7.2", [](InstanceGenerator& g, Mutation m, std::size_t) { general_case(g, m, true, false); }, false, true},
      {"thm7.3", thm7_3, false, true},
      {"lem7.4", lem7_4, false, false},
      {"cor7.5", cor7_5, false, true},
      {"thm7.6", thm7_6, false, true},
      {"thm7.8", thm7_8, false, true},
  };
  return entries;
}

const Entry& find_entry(const std::string& id) {
  const std::string canonical = canonical_theorem_id(id);
  for (const auto& e : registry())
    if (canonical == e.id) return e;
  throw Error(ErrorKind::UnknownTheorem, "unknown theorem id: " + id);
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

/// Kind prefix and number, e.g. "thm" and "2.2c".
std::pair<std::string, std::string> split_id(const std::string& id) {
  std::size_t i = 0;
  while (i < id.size() && std::isalpha(static_cast<unsigned char>(id[i]))) ++i;
  return {id.substr(0, i), id.substr(i)};
}

std::string kind_alias(const std::string& k) {
  if (k == "theorem" || k == "th" || k == "t") return "thm";
  if (k == "proposition" || k == "p") return "prop";
  if (k == "corollary" || k == "c") return "cor";
  if (k == "lemma" || k == "l") return "lem";
  if (k == "example" || k == "e") return "ex";
  return k;
}

}  // namespace

std::vector<std::string> theorem_ids() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.emplace_back(e.id);
  return out;
}

std::string canonical_theorem_id(const std::string& id) {
  std::string cleaned;
  for (char c : lower(id))
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '_' && c != '-') cleaned.push_back(c);
  auto [kind, number] = split_id(cleaned);
  kind = kind_alias(kind);
  std::vector<std::string> matches;
  for (const auto& e : registry()) {
    auto [ek, en] = split_id(e.id);
    if (en != number) continue;
    if (kind.empty() || kind == ek) matches.emplace_back(e.id);
  }
  if (matches.size() != 1) throw Error(ErrorKind::UnknownTheorem, "unknown theorem id: " + id);
  return matches.front();
}

bool supports_mutation(const std::string& id, Mutation m) {
  const Entry& e = find_entry(id);
  switch (m) {
    case Mutation::None: return true;
    case Mutation::CorruptPiece: return e.piece;
    case Mutation::CorruptConjugate: return e.conjugate;
  }
  return false;
}

const char* mutation_name(Mutation m) {
  switch (m) {
    case Mutation::None: return "none";
    case Mutation::CorruptPiece: return "corrupt-piece";
    case Mutation::CorruptConjugate: return "corrupt-conjugate";
  }
  return "none";
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 step on seed and index.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SuiteReport theorem_suite(const std::string& id, std::size_t count, std::uint64_t seed, Mutation mutation) {
  const Entry& entry = find_entry(id);
  if (!supports_mutation(entry.id, mutation))
    throw Error(ErrorKind::Usage, std::string("suite ") + entry.id + " has no " + mutation_name(mutation) + " hook");
  SuiteReport report;
  report.theorem = entry.id;
  report.mutation = mutation;
  // Rejection sampling: the generator meets each qc with probability at least
  // 1/4, so the draw budget is generous.
  const std::size_t budget = 50 * count + 100;
  std::size_t accepted = 0;
  while (accepted < count && report.drawn < budget) {
    const std::uint64_t s = instance_seed(seed, report.drawn++);
    InstanceSpec spec;
    spec.seed = s;
    InstanceGenerator gen(spec);
    try {
      entry.fn(gen, mutation, accepted);
      ++report.passes;
    } catch (const Rejected&) {
      continue;
    } catch (const Mismatch& m) {
      report.failures.push_back({s, m.detail});
    } catch (const Error& e) {
      report.failures.push_back({s, std::string("error: ") + e.what()});
    }
    ++accepted;
  }
  report.count = accepted;
  if (accepted < count)
    report.failures.push_back({seed, "draw budget exhausted after " + std::to_string(report.drawn) + " instances"});
  return report;
}

}  // namespace nearconvex
