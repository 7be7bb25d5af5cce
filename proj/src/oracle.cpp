#include "nearconvex/oracle.hpp"

#include "nearconvex/error.hpp"

#include <algorithm>

namespace nearconvex {

// ---------------------------------------------------------------------------
// Instance generator

InstanceGenerator::InstanceGenerator(InstanceSpec spec) : spec_(spec), rng_(spec.seed) {}

Rational InstanceGenerator::rational(long lo, long hi) {
  // Half of the draws are integers to keep coefficients readable.
  const long den = coin(1, 2) ? 1 : static_cast<long>(uniform(1, static_cast<std::size_t>(spec_.max_denominator)));
  const long span = (hi - lo) * den;
  Rational q(lo * den + static_cast<long>(next() % static_cast<std::uint64_t>(span + 1)), den);
  q.canonicalize();
  return q;
}

Vec InstanceGenerator::vector(std::size_t d, long lo, long hi) {
  Vec v(d);
  for (auto& x : v) x = rational(lo, hi);
  return v;
}

Vec InstanceGenerator::nonzero_vector(std::size_t d, long range) {
  for (;;) {
    Vec v(d);
    for (auto& x : v) x = static_cast<long>(next() % static_cast<std::uint64_t>(2 * range + 1)) - range;
    if (!is_zero(v)) return v;
  }
}

Vec InstanceGenerator::anchor(std::size_t d) {
  Vec v(d);
  for (auto& x : v) {
    Rational q(static_cast<long>(next() % 17) - 8, 4);
    q.canonicalize();
    x = q;
  }
  return v;
}

Matrix InstanceGenerator::matrix(std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<long>(next() % 5) - 2;
  return m;
}

HPoly InstanceGenerator::polyhedron(std::size_t d, const Vec& anchor) {
  require_dim(anchor.size(), d, "polyhedron anchor");
  HPoly h(d);
  if (d >= 2 && coin(1, 5)) {
    Vec c = nonzero_vector(d, 2);
    h.add_eq(c, dot(c, anchor));
  }
  const std::size_t m = uniform(1, spec_.max_constraints);
  for (std::size_t i = 0; i < m; ++i) {
    Vec a = nonzero_vector(d, 3);
    if (coin(1, 3)) a = scale(a, Rational(1, static_cast<long>(uniform(1, static_cast<std::size_t>(spec_.max_denominator)))));
    Rational slack = rational(0, 3);
    if (slack == 0) slack = Rational(1, 2);
    h.add_ineq(a, dot(a, anchor) + slack);
  }
  if (coin(3, 4)) {
    for (std::size_t i = 0; i < d; ++i) {
      // Widened when an anchor built from other data falls outside the box.
      Rational hi = std::max<Rational>(spec_.box, anchor[i] + 1), lo = std::max<Rational>(spec_.box, 1 - anchor[i]);
      h.add_ineq(unit_vector(d, i), hi);
      h.add_ineq(negate(unit_vector(d, i)), lo);
    }
  }
  return canonicalize(h);
}

namespace {

std::optional<ROPoly> face_piece(const HPoly& c, const std::vector<std::size_t>& rows) {
  HPoly f = c;
  for (auto r : rows) f.add_eq(c.ineq[r].coeffs, c.ineq[r].rhs);
  return ROPoly::of(f);
}

}  // namespace

NCSet InstanceGenerator::nearly_convex_set(std::size_t d, const Vec& anchor) {
  HPoly c = polyhedron(d, anchor);
  std::vector<ROPoly> pieces{*ROPoly::of(c)};
  std::size_t budget = uniform(0, spec_.max_pieces - 1);
  const std::size_t rows = c.ineq.size();
  if (rows > 0 && budget >= 2 && coin(1, 4)) {
    // One facet split by a hyperplane through its relative interior, with the
    // dividing slice left out.
    std::size_t r = next() % rows;
    if (auto facet = face_piece(c, {r})) {
      if (auto mid = oracle::relint_point(facet->system())) {
        Vec h = nonzero_vector(d, 2);
        for (int side : {1, -1}) {
          HPoly half = facet->base();
          half.add_ineq(scale(h, side), side * dot(h, *mid));
          if (auto p = ROPoly::of(half)) pieces.push_back(*p);
        }
        budget -= 2;
      }
    }
  }
  for (std::size_t k = 0; k < budget && rows > 0; ++k) {
    std::vector<std::size_t> face{static_cast<std::size_t>(next() % rows)};
    if (d >= 2 && coin(1, 3)) face.push_back(static_cast<std::size_t>(next() % rows));
    if (auto p = face_piece(c, face)) pieces.push_back(*p);
  }
  return NCSet(d, std::move(pieces)).assume_validated(c);
}

NCSet InstanceGenerator::corrupted_set(std::size_t d) {
  Vec a = anchor(d);
  HPoly c;
  do {
    c = polyhedron(d, a);
  } while (!c.eq.empty() || c.ineq.empty());
  std::vector<ROPoly> pieces;
  const std::size_t rows = c.ineq.size();
  switch (next() % 3) {
    case 0: {
      // Slice through the anchor removed from the interior.
      Vec h = nonzero_vector(d, 2);
      for (int side : {1, -1}) {
        HPoly half = c;
        half.add_ineq(scale(h, side), side * dot(h, a));
        if (auto p = ROPoly::of(half)) pieces.push_back(*p);
      }
      break;
    }
    case 1: {
      // Interior plus one point beyond a facet.
      pieces.push_back(*ROPoly::of(c));
      const Row& row = c.ineq[next() % rows];
      Rational t = 2 * (row.rhs - dot(row.coeffs, a)) / dot(row.coeffs, row.coeffs);
      pieces.push_back(*ROPoly::of(HPoly::point(add(a, scale(row.coeffs, t)))));
      break;
    }
    default: {
      // Facets without the interior; needs two distinct nonempty facets.
      for (std::size_t r = 0; r < rows && pieces.size() < 2; ++r)
        if (auto p = face_piece(c, {r})) pieces.push_back(*p);
      if (pieces.size() < 2) {
        pieces.clear();
        pieces.push_back(*ROPoly::of(c));
        const Row& row = c.ineq[0];
        Rational t = 2 * (row.rhs - dot(row.coeffs, a)) / dot(row.coeffs, row.coeffs);
        pieces.push_back(*ROPoly::of(HPoly::point(add(a, scale(row.coeffs, t)))));
      }
      break;
    }
  }
  return NCSet(d, std::move(pieces));
}

SVMap InstanceGenerator::map(std::size_t n, std::size_t p, const Vec& anchor) {
  return SVMap(n, p, nearly_convex_set(n + p, anchor));
}

PLFunction InstanceGenerator::function(std::size_t n, const Vec& anchor) {
  std::vector<AffinePiece> pieces;
  const std::size_t k = uniform(1, 3);
  for (std::size_t i = 0; i < k; ++i) pieces.push_back({vector(n, -2, 2), rational(-2, 2)});
  return PLFunction::max_affine(n, pieces, nearly_convex_set(n, anchor));
}

HPoly InstanceGenerator::cone(std::size_t q) {
  HPoly k(q);
  const std::size_t m = uniform(0, q);
  for (std::size_t i = 0; i < m; ++i) k.add_ineq(nonzero_vector(q, 2), 0);
  return canonicalize(k);
}

// ---------------------------------------------------------------------------
// OracleSet and LP-free primitives

bool OracleSet::contains(const Vec& x) const {
  return std::any_of(pieces.begin(), pieces.end(), [&](const MixedSystem& s) { return s.contains(x); });
}

namespace oracle {

namespace {

void sort_unique(std::vector<Vec>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

MixedSystem strict_part(const MixedSystem& s) {
  MixedSystem out(s.dim);
  out.strict = s.strict;
  out.eq = s.eq;
  return out;
}

}  // namespace

VPoly generators(const MixedSystem& s) {
  const std::size_t n = s.dim;
  std::vector<Vec> ineq, eq;
  for (const auto* rows : {&s.weak, &s.strict})
    for (const auto& r : *rows) ineq.push_back(concat(r.coeffs, Vec{Rational(-r.rhs)}));
  for (const auto& r : s.eq) eq.push_back(concat(r.coeffs, Vec{Rational(-r.rhs)}));
  ineq.push_back(negate(unit_vector(n + 1, n)));
  auto gens = cone_generators(ineq, eq, n + 1);
  VPoly v(n);
  for (const auto& r : gens.rays) {
    Vec x(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n));
    if (sgn(r[n]) > 0) v.points.push_back(scale(x, 1 / r[n]));
    else v.rays.push_back(primitive(x));
  }
  if (v.points.empty()) return VPoly(n);
  for (const auto& l : gens.lineality) {
    Vec x(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(n));
    v.rays.push_back(primitive(x));
    v.rays.push_back(primitive(negate(x)));
  }
  sort_unique(v.points);
  sort_unique(v.rays);
  return v;
}

HPoly hull(const VPoly& v) {
  const std::size_t n = v.dim;
  if (v.points.empty()) return HPoly::empty(n);
  std::vector<Vec> ineq;
  for (const auto& p : v.points) ineq.push_back(concat(p, Vec{Rational(-1)}));
  for (const auto& r : v.rays) ineq.push_back(concat(r, Vec{Rational(0)}));
  auto gens = cone_generators(ineq, {}, n + 1);
  HPoly h(n);
  for (const auto& g : gens.rays) {
    Vec a(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n));
    if (!is_zero(a)) h.add_ineq(std::move(a), g[n]);
  }
  for (const auto& g : gens.lineality) {
    Vec a(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n));
    if (!is_zero(a)) h.add_eq(std::move(a), g[n]);
  }
  return h;
}

MixedSystem relative_interior(const HPoly& q) {
  VPoly v = generators(q.system());
  MixedSystem out(q.dim);
  if (v.points.empty()) {
    out.add_eq(zeros(q.dim), 1);
    return out;
  }
  out.eq = q.eq;
  for (const auto& r : q.ineq) {
    // Implicit equality when every generator is tight.
    bool tight = std::all_of(v.points.begin(), v.points.end(), [&](const Vec& p) { return dot(r.coeffs, p) == r.rhs; }) &&
                 std::all_of(v.rays.begin(), v.rays.end(), [&](const Vec& d) { return sgn(dot(r.coeffs, d)) == 0; });
    if (tight) out.add_eq(r.coeffs, r.rhs);
    else out.add_strict(r.coeffs, r.rhs);
  }
  return out;
}

std::optional<Vec> relint_point(const MixedSystem& s) {
  VPoly v = generators(s);
  if (v.points.empty()) return std::nullopt;
  Vec b = zeros(s.dim);
  for (const auto& p : v.points) b = add(b, p);
  b = scale(b, Rational(1, static_cast<long>(v.points.size())));
  for (const auto& r : v.rays) b = add(b, r);
  if (!s.contains(b)) return std::nullopt;
  return b;
}

OracleSet from(const NCSet& s) {
  OracleSet out{s.dim(), {}};
  for (const auto& p : s.pieces()) {
    MixedSystem ri = relative_interior(p.base());
    if (relint_point(ri)) out.pieces.push_back(std::move(ri));
  }
  return out;
}

MixedSystem hull_interior(const OracleSet& s) { return relative_interior(closed_hull(s)); }

HPoly closed_hull(const OracleSet& s) {
  VPoly all(s.dim);
  for (const auto& p : s.pieces) {
    VPoly v = generators(p);
    all.points.insert(all.points.end(), v.points.begin(), v.points.end());
    all.rays.insert(all.rays.end(), v.rays.begin(), v.rays.end());
  }
  sort_unique(all.points);
  sort_unique(all.rays);
  return hull(all);
}

OracleSet image(const OracleSet& s, const Matrix& t) {
  require_dim(t.cols(), s.dim, "oracle image");
  OracleSet out{t.rows(), {}};
  for (const auto& p : s.pieces) {
    VPoly v = generators(p), w(t.rows());
    for (const auto& x : v.points) w.points.push_back(t.apply(x));
    for (const auto& r : v.rays) {
      Vec tr = t.apply(r);
      if (!is_zero(tr)) w.rays.push_back(primitive(tr));
    }
    sort_unique(w.points);
    sort_unique(w.rays);
    out.pieces.push_back(relative_interior(hull(w)));
  }
  return out;
}

OracleSet preimage(const OracleSet& s, const Matrix& t, const Vec& c) {
  require_dim(t.rows(), s.dim, "oracle preimage");
  OracleSet out{t.cols(), {}};
  for (const auto& p : s.pieces) {
    MixedSystem q = pullback(p, t, c);
    if (relint_point(q)) out.pieces.push_back(std::move(q));
  }
  return out;
}

OracleSet intersect(const OracleSet& a, const OracleSet& b) {
  require_dim(b.dim, a.dim, "oracle intersect");
  OracleSet out{a.dim, {}};
  for (const auto& p : a.pieces)
    for (const auto& q : b.pieces) {
      MixedSystem s = p;
      s.append(q);
      if (relint_point(s)) out.pieces.push_back(std::move(s));
    }
  return out;
}

OracleSet lift(const OracleSet& s, std::size_t dim, const std::vector<std::size_t>& coords) {
  OracleSet out{dim, {}};
  Matrix sel = coordinate_selector(dim, coords);
  for (const auto& p : s.pieces) out.pieces.push_back(pullback(p, sel, zeros(coords.size())));
  return out;
}

OracleSet product(const OracleSet& a, const OracleSet& b) {
  const std::size_t d = a.dim + b.dim;
  std::vector<std::size_t> first(a.dim), second(b.dim);
  for (std::size_t i = 0; i < a.dim; ++i) first[i] = i;
  for (std::size_t i = 0; i < b.dim; ++i) second[i] = a.dim + i;
  OracleSet la = lift(a, d, first), lb = lift(b, d, second);
  OracleSet out{d, {}};
  for (const auto& p : la.pieces)
    for (const auto& q : lb.pieces) {
      MixedSystem s = p;
      s.append(q);
      out.pieces.push_back(std::move(s));
    }
  return out;
}

OracleSet unite(const OracleSet& a, const OracleSet& b) {
  require_dim(b.dim, a.dim, "oracle unite");
  OracleSet out = a;
  out.pieces.insert(out.pieces.end(), b.pieces.begin(), b.pieces.end());
  return out;
}

OracleSet single(const MixedSystem& s) {
  OracleSet out{s.dim, {}};
  if (relint_point(strict_part(s))) out.pieces.push_back(strict_part(s));
  return out;
}

namespace {

struct Cell {
  MixedSystem system;
  Vec point;
};

/// Splits cell by the rows of cover. Parts inside the cover are dropped,
/// the rest are appended to out.
void refine(const Cell& cell, const MixedSystem& cover, std::vector<Cell>& out) {
  struct Pending {
    Cell cell;
    std::size_t row;
  };
  std::vector<const Row*> rows;
  std::vector<int> allowed;  // bit 0: <, bit 1: =, bit 2: >
  for (const auto& r : cover.weak) rows.push_back(&r), allowed.push_back(3);
  for (const auto& r : cover.strict) rows.push_back(&r), allowed.push_back(1);
  for (const auto& r : cover.eq) rows.push_back(&r), allowed.push_back(2);
  std::vector<Pending> stack{{cell, 0}};
  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();
    if (cur.row == rows.size()) continue;  // inside the cover
    const Row& r = *rows[cur.row];
    const int at = cmp(dot(r.coeffs, cur.cell.point), r.rhs);
    for (int side : {-1, 0, 1}) {
      MixedSystem s = cur.cell.system;
      if (side < 0) s.add_strict(r.coeffs, r.rhs);
      else if (side == 0) s.add_eq(r.coeffs, r.rhs);
      else s.add_strict(negate(r.coeffs), -r.rhs);
      std::optional<Vec> p;
      if ((at < 0 ? -1 : at > 0 ? 1 : 0) == side) p = cur.cell.point;
      else p = relint_point(s);
      if (!p) continue;
      Cell part{std::move(s), std::move(*p)};
      if (allowed[cur.row] & (1 << (side + 1))) stack.push_back({std::move(part), cur.row + 1});
      else out.push_back(std::move(part));
    }
  }
}

}  // namespace

std::optional<Vec> uncovered(const MixedSystem& cell, const std::vector<MixedSystem>& covers) {
  // Weak rows of the cell are split into their strict and equality parts.
  std::vector<MixedSystem> starts{strict_part(cell)};
  for (const auto& r : cell.weak) {
    std::vector<MixedSystem> next;
    for (const auto& s : starts) {
      MixedSystem lt = s, eq = s;
      lt.add_strict(r.coeffs, r.rhs);
      eq.add_eq(r.coeffs, r.rhs);
      next.push_back(std::move(lt));
      next.push_back(std::move(eq));
    }
    starts = std::move(next);
  }
  std::vector<Cell> live;
  for (auto& s : starts)
    if (auto p = relint_point(s)) live.push_back({std::move(s), std::move(*p)});
  // Wide covers first: they remove most of the cell before faces split it.
  std::vector<const MixedSystem*> ordered;
  for (const auto& c : covers) ordered.push_back(&c);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const MixedSystem* a, const MixedSystem* b) { return a->eq.size() < b->eq.size(); });
  for (const auto* cover_ptr : ordered) {
    const MixedSystem& cover = *cover_ptr;
    std::vector<Cell> next;
    for (auto& c : live) {
      // Cells disjoint from the cover pass through unsplit.
      MixedSystem both = c.system;
      both.append(cover);
      if (relint_point(both)) refine(c, cover, next);
      else next.push_back(std::move(c));
    }
    live = std::move(next);
    if (live.empty()) return std::nullopt;
  }
  if (live.empty()) return std::nullopt;
  return live.front().point;
}

std::optional<Vec> difference(const OracleSet& a, const OracleSet& b) {
  require_dim(b.dim, a.dim, "oracle difference");
  for (const auto& p : a.pieces)
    if (auto w = uncovered(p, b.pieces)) return w;
  return std::nullopt;
}

std::optional<Vec> closure_difference(const OracleSet& a, const OracleSet& b) {
  require_dim(b.dim, a.dim, "oracle closure_difference");
  std::vector<MixedSystem> closed;
  for (const auto& q : b.pieces) closed.push_back(q.closure());
  for (const auto& p : a.pieces)
    if (auto w = uncovered(p, closed)) return w;
  return std::nullopt;
}

std::optional<Vec> nonconvexity_witness(const OracleSet& s) {
  if (s.empty()) return std::nullopt;
  return uncovered(hull_interior(s), s.pieces);
}

ExtReal support(const OracleSet& s, const Vec& v) {
  ExtReal best = ExtReal::minus_inf();
  for (const auto& p : s.pieces) {
    VPoly g = generators(p);
    for (const auto& r : g.rays)
      if (sgn(dot(v, r)) > 0) return ExtReal::plus_inf();
    for (const auto& x : g.points) best = std::max(best, ExtReal(dot(v, x)));
  }
  return best;
}

ExtReal min_last(const OracleSet& s) {
  if (s.dim == 0) throw Error(ErrorKind::DimensionMismatch, "min_last: zero dimension");
  ExtReal best = ExtReal::plus_inf();
  for (const auto& p : s.pieces) {
    VPoly g = generators(p);
    for (const auto& r : g.rays)
      if (sgn(r.back()) < 0) return ExtReal::minus_inf();
    for (const auto& x : g.points) best = std::min(best, ExtReal(x.back()));
  }
  return best;
}

bool same_polyhedron(const HPoly& a, const HPoly& b) {
  require_dim(b.dim, a.dim, "same_polyhedron");
  auto inside = [](const VPoly& g, const HPoly& q) {
    for (const auto& p : g.points)
      if (!q.contains(p)) return false;
    for (const auto& r : g.rays) {
      for (const auto& row : q.ineq)
        if (sgn(dot(row.coeffs, r)) > 0) return false;
      for (const auto& row : q.eq)
        if (sgn(dot(row.coeffs, r)) != 0) return false;
    }
    return true;
  };
  VPoly ga = generators(a.system()), gb = generators(b.system());
  if (ga.points.empty() || gb.points.empty()) return ga.points.empty() && gb.points.empty();
  return inside(ga, b) && inside(gb, a);
}

}  // namespace oracle

// ---------------------------------------------------------------------------
// Grid and generator oracles

std::vector<GridMismatch> grid_membership_oracle(const NCSet& s, const std::function<bool(const Vec&)>& expected,
                                                 long denominator, long box) {
  std::vector<GridMismatch> out;
  const std::size_t n = s.dim();
  const long steps = 2 * box * denominator;
  Vec x(n);
  std::vector<long> idx(n, 0);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) {
      Rational q(idx[i] - box * denominator, denominator);
      q.canonicalize();
      x[i] = q;
    }
    const bool want = expected(x), got = s.contains(x);
    if (want != got) out.push_back({x, want, got});
    std::size_t i = 0;
    while (i < n && idx[i] == steps) idx[i++] = 0;
    if (i == n) break;
    ++idx[i];
  }
  return out;
}

bool image_member(const NCSet& s, const Matrix& a, const Vec& y) {
  require_dim(a.cols(), s.dim(), "image_member");
  require_dim(y.size(), a.rows(), "image_member point");
  for (const auto& piece : oracle::from(s).pieces) {
    MixedSystem fiber = piece;
    for (std::size_t i = 0; i < a.rows(); ++i) fiber.add_eq(a.row(i), y[i]);
    if (oracle::relint_point(fiber)) return true;
  }
  return false;
}

ExtReal generator_conjugate_oracle(const PLFunction& f, const Vec& w) {
  require_dim(w.size(), f.n(), "generator_conjugate_oracle");
  return oracle::support(oracle::from(f.epi()), concat(w, Vec{Rational(-1)}));
}

ExtReal value_from_epigraph(const HPoly& epi, const Vec& w) {
  require_dim(epi.dim, w.size() + 1, "value_from_epigraph");
  const std::size_t n = w.size();
  ExtReal lower = ExtReal::minus_inf(), upper = ExtReal::plus_inf();
  auto bound = [&](const Row& r, bool equality) {
    Vec a(r.coeffs.begin(), r.coeffs.begin() + static_cast<std::ptrdiff_t>(n));
    const Rational& c = r.coeffs[n];
    Rational rest = r.rhs - dot(a, w);  // c b <= rest (or =)
    if (sgn(c) == 0) {
      bool ok = equality ? sgn(rest) == 0 : sgn(rest) >= 0;
      if (!ok) upper = lower = ExtReal::plus_inf();
      return ok;
    }
    Rational t = rest / c;
    if (equality || sgn(c) > 0) upper = std::min(upper, ExtReal(t));
    if (equality || sgn(c) < 0) lower = std::max(lower, ExtReal(t));
    return true;
  };
  for (const auto& r : epi.ineq)
    if (!bound(r, false)) return ExtReal::plus_inf();
  for (const auto& r : epi.eq)
    if (!bound(r, true)) return ExtReal::plus_inf();
  if (lower > upper) return ExtReal::plus_inf();
  return lower;
}

}  // namespace nearconvex
