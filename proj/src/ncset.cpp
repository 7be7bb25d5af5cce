#include "nearconvex/ncset.hpp"

#include "nearconvex/error.hpp"

#include <algorithm>

namespace nearconvex {

ROPoly::ROPoly(HPoly canonical) : base_(std::move(canonical)), key_(serialize(base_)) {}

std::optional<ROPoly> ROPoly::of(const HPoly& q) {
  HPoly c = canonicalize(q);
  if (c.eq.empty() && c.ineq.size() == 1 && is_zero(c.ineq[0].coeffs)) return std::nullopt;
  return ROPoly(std::move(c));
}

ROPoly ROPoly::of_canonical(HPoly canonical) { return ROPoly(std::move(canonical)); }

std::optional<ROPoly> ROPoly::of_open_system(const MixedSystem& s) {
  if (!is_feasible(s)) return std::nullopt;
  return ROPoly(canonicalize(HPoly::from_system(s)));
}

NCSet::NCSet(std::size_t dim, std::vector<ROPoly> pieces) : dim_(dim), pieces_(std::move(pieces)) {
  for (const auto& p : pieces_) require_dim(p.dim(), dim_, "NCSet piece");
  std::sort(pieces_.begin(), pieces_.end());
  pieces_.erase(std::unique(pieces_.begin(), pieces_.end()), pieces_.end());
}

NCSet NCSet::from_hpolys(std::size_t dim, const std::vector<HPoly>& bases) {
  std::vector<ROPoly> pieces;
  for (const auto& b : bases) {
    require_dim(b.dim, dim, "NCSet::from_hpolys");
    if (auto r = ROPoly::of(b)) pieces.push_back(std::move(*r));
  }
  return NCSet(dim, std::move(pieces));
}

NCSet NCSet::relatively_open(const HPoly& q) {
  NCSet s = from_hpolys(q.dim, {q});
  if (!s.empty()) s.hull_ = s.pieces_[0].base();
  return s;
}

NCSet NCSet::closed(const HPoly& q) {
  std::vector<ROPoly> pieces;
  for (const auto& f : faces(q)) pieces.push_back(*ROPoly::of(f));
  NCSet s(q.dim, std::move(pieces));
  if (!s.empty()) s.hull_ = canonicalize(q);
  return s;
}

NCSet NCSet::with_faces(const HPoly& q, const std::vector<std::vector<std::size_t>>& face_rows) {
  std::vector<HPoly> bases{q};
  for (const auto& rows : face_rows) {
    HPoly f = q;
    for (auto r : rows) {
      if (r >= q.ineq.size()) throw Error(ErrorKind::Usage, "with_faces: row index out of range");
      f.eq.push_back(q.ineq[r]);
    }
    bases.push_back(std::move(f));
  }
  return from_hpolys(q.dim, bases);
}

bool NCSet::contains(const Vec& x) const {
  require_dim(x.size(), dim_, "NCSet::contains");
  return std::any_of(pieces_.begin(), pieces_.end(), [&](const ROPoly& p) { return p.contains(x); });
}

NCSet NCSet::validate() const {
  if (validated()) return *this;
  auto report = is_nearly_convex(*this);
  if (!report.nearly_convex) throw Error(ErrorKind::NotNearlyConvex, report.reason);
  NCSet s = *this;
  s.hull_ = report.hull;
  return s;
}

NCSet NCSet::assume_validated(HPoly hull) const {
  NCSet s = *this;
  s.hull_ = canonicalize(hull);
  return s;
}

HPoly NCSet::closure() const {
  if (validated()) return *hull_;
  return *validate().hull_;
}

ROPoly NCSet::relative_interior() const {
  auto r = ROPoly::of(closure());
  if (!r) throw Error(ErrorKind::EmptyPolyhedron, "relative_interior of the empty set");
  return *r;
}

HPoly NCSet::affine_hull() const { return nearconvex::affine_hull(closure()); }

NCSet NCSet::unite(const NCSet& other) const {
  require_dim(other.dim_, dim_, "NCSet::unite");
  auto pieces = pieces_;
  pieces.insert(pieces.end(), other.pieces_.begin(), other.pieces_.end());
  return NCSet(dim_, std::move(pieces));
}

namespace {

std::optional<Vec> uncovered_rec(const MixedSystem& cell, const std::vector<MixedSystem>& covers, std::size_t i) {
  while (i < covers.size()) {
    MixedSystem both = cell;
    both.append(covers[i]);
    if (is_feasible(both)) break;
    ++i;
  }
  if (i == covers.size()) {
    auto r = strict_feasible(cell);
    if (r.feasible) return r.witness;
    return std::nullopt;
  }
  // cell minus B is the disjoint union over rows r of (earlier rows of B) and not r.
  const MixedSystem& b = covers[i];
  MixedSystem acc = cell;
  auto branch = [&](const MixedSystem& sub) -> std::optional<Vec> {
    if (!is_feasible(sub)) return std::nullopt;
    return uncovered_rec(sub, covers, i + 1);
  };
  for (const auto& r : b.eq) {
    MixedSystem lo = acc;
    lo.add_strict(r.coeffs, r.rhs);
    if (auto w = branch(lo)) return w;
    MixedSystem hi = acc;
    hi.add_strict(negate(r.coeffs), -r.rhs);
    if (auto w = branch(hi)) return w;
    acc.eq.push_back(r);
  }
  for (const auto& r : b.weak) {
    MixedSystem out = acc;
    out.add_strict(negate(r.coeffs), -r.rhs);
    if (auto w = branch(out)) return w;
    acc.weak.push_back(r);
  }
  for (const auto& r : b.strict) {
    MixedSystem out = acc;
    out.add_weak(negate(r.coeffs), -r.rhs);
    if (auto w = branch(out)) return w;
    acc.strict.push_back(r);
  }
  return std::nullopt;
}

std::vector<MixedSystem> piece_systems(const NCSet& s) {
  std::vector<MixedSystem> out;
  for (const auto& p : s.pieces()) out.push_back(p.system());
  return out;
}

}  // namespace

std::optional<Vec> uncovered_point(const MixedSystem& cell, const std::vector<MixedSystem>& covers) {
  cell.check_dims();
  for (const auto& c : covers) require_dim(c.dim, cell.dim, "uncovered_point");
  if (!is_feasible(cell)) return std::nullopt;
  // Wide covers first: they remove most of the cell before faces split it.
  std::vector<MixedSystem> ordered = covers;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const MixedSystem& a, const MixedSystem& b) { return a.eq.size() < b.eq.size(); });
  return uncovered_rec(cell, ordered, 0);
}

NearConvexityReport is_nearly_convex(const NCSet& s, std::size_t cap) {
  NearConvexityReport report;
  if (s.dim() > cap) throw Error(ErrorKind::DimensionCap, "is_nearly_convex: dimension " + std::to_string(s.dim()) + " exceeds cap");
  if (s.empty()) {
    report.nearly_convex = true;
    report.hull = HPoly::empty(s.dim());
    return report;
  }
  VPoly all(s.dim());
  std::vector<MixedSystem> closures;
  for (const auto& p : s.pieces()) {
    VPoly v = to_vrep(p.base(), cap);
    all.points.insert(all.points.end(), v.points.begin(), v.points.end());
    all.rays.insert(all.rays.end(), v.rays.begin(), v.rays.end());
    closures.push_back(p.base().system());
  }
  HPoly hull = to_hrep(all, cap);
  if (auto w = uncovered_point(hull.system(), closures)) {
    report.witness = w;
    report.reason = "closure is not convex: " + format_vec(*w) + " lies in the convex hull but not in the closure";
    return report;
  }
  if (auto w = uncovered_point(hull.strict_system(), piece_systems(s))) {
    report.witness = w;
    report.reason = "relative interior of the closure is not covered: " + format_vec(*w) + " is missing";
    return report;
  }
  report.nearly_convex = true;
  report.hull = std::move(hull);
  return report;
}

std::optional<Vec> difference_point(const NCSet& a, const NCSet& b) {
  require_dim(b.dim(), a.dim(), "difference_point");
  auto covers = piece_systems(b);
  for (const auto& p : a.pieces())
    if (auto w = uncovered_point(p.system(), covers)) return w;
  return std::nullopt;
}

bool is_subset(const NCSet& a, const NCSet& b) { return !difference_point(a, b).has_value(); }

bool same_set(const NCSet& a, const NCSet& b) { return is_subset(a, b) && is_subset(b, a); }

bool same_closure(const NCSet& a, const NCSet& b) {
  require_dim(b.dim(), a.dim(), "same_closure");
  auto closed = [](const NCSet& s) {
    std::vector<MixedSystem> out;
    for (const auto& p : s.pieces()) out.push_back(p.base().system());
    return out;
  };
  auto ca = closed(a), cb = closed(b);
  for (const auto& c : ca)
    if (uncovered_point(c, cb)) return false;
  for (const auto& c : cb)
    if (uncovered_point(c, ca)) return false;
  return true;
}

bool same_set(const MixedSystem& a, const MixedSystem& b) {
  return !uncovered_point(a, {b}) && !uncovered_point(b, {a});
}

std::vector<Vec> sample_points(const NCSet& s) {
  std::vector<Vec> out;
  for (const auto& p : s.pieces()) {
    Vec c = *strict_feasible(p.system()).witness;
    out.push_back(c);
    for (const auto& v : to_vrep(p.base(), std::max(p.dim(), kDimCap)).points) {
      out.push_back(v);
      out.push_back(scale(add(c, v), Rational(1, 2)));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NCSet product(const NCSet& a, const NCSet& b) {
  std::vector<ROPoly> pieces;
  for (const auto& p : a.pieces())
    for (const auto& q : b.pieces()) pieces.push_back(ROPoly::of_canonical(canonical_product(p.base(), q.base())));
  NCSet s(a.dim() + b.dim(), std::move(pieces));
  if (a.validated() && b.validated()) s = s.assume_validated(product(a.closure(), b.closure()));
  return s;
}

QualifiedSet intersect(const NCSet& a, const NCSet& b) {
  require_dim(b.dim(), a.dim(), "intersect");
  std::vector<ROPoly> pieces;
  for (const auto& p : a.pieces()) {
    for (const auto& q : b.pieces()) {
      MixedSystem s = p.system();
      s.append(q.system());
      if (auto r = ROPoly::of_open_system(s)) pieces.push_back(std::move(*r));
    }
  }
  QualifiedSet out{NCSet(a.dim(), std::move(pieces)), false};
  if (a.empty() || b.empty() || !a.validated() || !b.validated()) return out;
  HPoly ha = a.closure(), hb = b.closure();
  MixedSystem ri = canonicalize(ha).strict_system();
  ri.append(canonicalize(hb).strict_system());
  out.qc_satisfied = is_feasible(ri);
  if (out.qc_satisfied) out.set = out.set.assume_validated(intersect(ha, hb));
  return out;
}

NCSet linear_image(const NCSet& s, const Matrix& t) {
  require_dim(t.cols(), s.dim(), "linear_image");
  std::vector<ROPoly> pieces;
  for (const auto& p : s.pieces()) pieces.push_back(*ROPoly::of(linear_image(p.base(), t)));
  NCSet out(t.rows(), std::move(pieces));
  if (s.validated() && !s.empty()) out = out.assume_validated(linear_image(s.closure(), t));
  return out;
}

NCSet minkowski_sum(const NCSet& a, const NCSet& b) {
  require_dim(b.dim(), a.dim(), "minkowski_sum");
  const std::size_t n = a.dim();
  return linear_image(product(a, b), hstack(Matrix::identity(n), Matrix::identity(n)));
}

QualifiedSet preimage(const NCSet& s, const Matrix& t, const Vec& c) {
  require_dim(t.rows(), s.dim(), "preimage");
  std::vector<ROPoly> pieces;
  for (const auto& p : s.pieces())
    if (auto r = ROPoly::of_open_system(pullback(p.system(), t, c))) pieces.push_back(std::move(*r));
  QualifiedSet out{NCSet(t.cols(), std::move(pieces)), false};
  if (s.empty() || !s.validated()) return out;
  HPoly hull = canonicalize(s.closure());
  out.qc_satisfied = is_feasible(pullback(hull.strict_system(), t, c));
  if (out.qc_satisfied) out.set = out.set.assume_validated(preimage(hull, t, c));
  return out;
}

QualifiedSet preimage(const NCSet& s, const Matrix& t) { return preimage(s, t, zeros(t.rows())); }

}  // namespace nearconvex
