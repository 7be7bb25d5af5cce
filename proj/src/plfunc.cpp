#include "nearconvex/plfunc.hpp"

#include "nearconvex/error.hpp"

#include <numeric>

namespace nearconvex {

namespace {

std::vector<std::size_t> first(std::size_t k) {
  std::vector<std::size_t> out(k);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

/// P + (0, inf) e_last = ri(cl P + cone e_last) for a relatively open piece P.
MixedSystem raised(const ROPoly& p) {
  const HPoly& q = p.base();
  const std::size_t last = q.dim - 1;
  bool recedes = true;
  for (const auto& r : q.eq) recedes = recedes && r.coeffs[last] == 0;
  for (const auto& r : q.ineq) recedes = recedes && r.coeffs[last] <= 0;
  if (recedes) return p.system();
  return ROPoly::of(add_rays(q, {unit_vector(q.dim, last)}))->system();
}

/// {(x, l) : (x, l + s) in P for all small s > 0}, or nullopt when the
/// slices of P are single points.
std::optional<MixedSystem> bottoms(const ROPoly& piece) {
  MixedSystem s = piece.system();
  const std::size_t last = s.dim - 1;
  for (const auto& r : s.eq)
    if (r.coeffs[last] != 0) return std::nullopt;
  MixedSystem out(s.dim);
  out.eq = s.eq;
  out.weak = s.weak;
  for (const auto& r : s.strict) {
    if (r.coeffs[last] < 0)
      out.weak.push_back(r);
    else
      out.strict.push_back(r);
  }
  return out;
}

std::vector<MixedSystem> piece_systems(const NCSet& s) {
  std::vector<MixedSystem> out;
  for (const auto& p : s.pieces()) out.push_back(p.system());
  return out;
}

/// Infimum of a one-dimensional mixed system, or nullopt when it is empty.
std::optional<ExtReal> interval_inf(const MixedSystem& s) {
  ExtReal lo = ExtReal::minus_inf(), hi = ExtReal::plus_inf();
  bool lo_open = true, hi_open = true;
  auto lower = [&](const Rational& v, bool open) {
    if (ExtReal(v) > lo || (ExtReal(v) == lo && open)) {
      lo = v;
      lo_open = open;
    }
  };
  auto upper = [&](const Rational& v, bool open) {
    if (ExtReal(v) < hi || (ExtReal(v) == hi && open)) {
      hi = v;
      hi_open = open;
    }
  };
  auto row = [&](const Row& r, bool open) -> bool {
    const Rational& a = r.coeffs[0];
    if (a == 0) return open ? 0 < r.rhs : 0 <= r.rhs;
    Rational v = r.rhs / a;
    if (a > 0)
      upper(v, open);
    else
      lower(v, open);
    return true;
  };
  for (const auto& r : s.eq) {
    if (r.coeffs[0] == 0) {
      if (r.rhs != 0) return std::nullopt;
      continue;
    }
    Rational v = r.rhs / r.coeffs[0];
    lower(v, false);
    upper(v, false);
  }
  for (const auto& r : s.weak)
    if (!row(r, false)) return std::nullopt;
  for (const auto& r : s.strict)
    if (!row(r, true)) return std::nullopt;
  if (lo < hi) return lo;
  if (lo == hi && lo.is_finite() && !lo_open && !hi_open) return lo;
  return std::nullopt;
}

NCSet lift_to(const NCSet& s, std::size_t dim) { return preimage(s, coordinate_selector(dim, first(s.dim()))).set; }

}  // namespace

EpigraphCheck check_epigraph(const NCSet& epi) {
  EpigraphCheck out;
  if (epi.dim() == 0) throw Error(ErrorKind::DimensionMismatch, "epigraph must live in R^(n+1)");
  auto covers = piece_systems(epi);
  for (const auto& p : epi.pieces()) {
    if (auto w = uncovered_point(raised(p), covers)) {
      out.vertical_ray = false;
      out.witness = w;
      return out;
    }
  }
  for (const auto& p : epi.pieces()) {
    auto b = bottoms(p);
    if (!b) continue;
    if (auto w = uncovered_point(*b, covers)) {
      out.closed_below = false;
      out.witness = w;
      return out;
    }
  }
  return out;
}

NCSet lower_closure(const NCSet& s) {
  std::vector<ROPoly> pieces = s.pieces();
  for (const auto& p : s.pieces()) {
    auto b = bottoms(p);
    if (!b) continue;
    for (const auto& f : faces(p.base()))
      if (b->contains(relative_interior_point(f))) pieces.push_back(*ROPoly::of(f));
  }
  return NCSet(s.dim(), std::move(pieces));
}

NCSet strict_upper_set(const NCSet& s) {
  std::vector<ROPoly> pieces;
  for (const auto& p : s.pieces())
    if (auto r = ROPoly::of_open_system(raised(p))) pieces.push_back(std::move(*r));
  return NCSet(s.dim(), std::move(pieces));
}

PLFunction::PLFunction(std::size_t n, NCSet epi) : n_(n), epi_(std::move(epi)) {
  require_dim(epi_.dim(), n + 1, "PLFunction epigraph");
  auto check = check_epigraph(epi_);
  if (!check.vertical_ray)
    throw Error(ErrorKind::VerticalInvariant, "epigraph is not closed under adding vertical rays at " + format_vec(*check.witness));
  if (!check.closed_below)
    throw Error(ErrorKind::VerticalInvariant, "epigraph slice is open below at " + format_vec(*check.witness));
}

PLFunction PLFunction::trusted(std::size_t n, NCSet epi) {
  require_dim(epi.dim(), n + 1, "PLFunction epigraph");
  PLFunction f;
  f.n_ = n;
  f.epi_ = std::move(epi);
  return f;
}

PLFunction PLFunction::from_closed_epigraph(const HPoly& epi) {
  if (epi.dim == 0) throw Error(ErrorKind::DimensionMismatch, "epigraph must live in R^(n+1)");
  // A closed set is closed below; the vertical ray holds iff no facet of the
  // canonical form rises with l.
  HPoly c = canonicalize(epi);
  const std::size_t last = epi.dim - 1;
  if (!c.is_empty()) {
    for (const auto& r : c.eq)
      if (r.coeffs[last] != 0) throw Error(ErrorKind::VerticalInvariant, "closed epigraph has a bounded vertical slice");
    for (const auto& r : c.ineq)
      if (r.coeffs[last] > 0) throw Error(ErrorKind::VerticalInvariant, "closed epigraph is bounded above in l");
  }
  return trusted(last, NCSet::closed(c));
}

PLFunction PLFunction::max_affine(std::size_t n, const std::vector<AffinePiece>& pieces, const NCSet& domain) {
  require_dim(domain.dim(), n, "max_affine domain");
  if (pieces.empty()) throw Error(ErrorKind::Usage, "max_affine: no affine pieces");
  HPoly e(n + 1);
  for (const auto& p : pieces) {
    require_dim(p.a.size(), n, "max_affine piece");
    Vec row = p.a;
    row.push_back(-1);
    e.add_ineq(std::move(row), -p.b);
  }
  return trusted(n, intersect(NCSet::closed(e), lift_to(domain, n + 1)).set);
}

PLFunction PLFunction::max_affine(std::size_t n, const std::vector<AffinePiece>& pieces) {
  return max_affine(n, pieces, NCSet::relatively_open(HPoly::whole(n)));
}

PLFunction PLFunction::indicator(const NCSet& c) { return max_affine(c.dim(), {{zeros(c.dim()), 0}}, c); }

PLFunction PLFunction::validate() const {
  PLFunction out = *this;
  out.epi_ = epi_.validate();
  return out;
}

ExtReal PLFunction::eval(const Vec& x) const {
  require_dim(x.size(), n_, "PLFunction::eval");
  Matrix t(n_ + 1, 1);
  t(n_, 0) = 1;
  Vec c = concat(x, zeros(1));
  ExtReal best = ExtReal::plus_inf();
  for (const auto& p : epi_.pieces())
    if (auto v = interval_inf(pullback(p.system(), t, c)); v && *v < best) best = *v;
  return best;
}

NCSet PLFunction::dom() const { return linear_image(epi_, coordinate_selector(n_ + 1, first(n_))); }

std::optional<Vec> minus_inf_point(const PLFunction& f) {
  const std::size_t last = f.n();
  for (const auto& p : f.epi().pieces()) {
    // -e_last in the recession cone of the piece
    const HPoly& b = p.base();
    bool down = true;
    for (const auto& r : b.eq) down = down && r.coeffs[last] == 0;
    for (const auto& r : b.ineq) down = down && r.coeffs[last] >= 0;
    if (!down) continue;
    Vec z = relative_interior_point(b);
    z.pop_back();
    return z;
  }
  return std::nullopt;
}

bool assert_proper(const PLFunction& f) { return !minus_inf_point(f).has_value(); }

SVMap epigraphical_map(const PLFunction& f) { return SVMap(f.n(), 1, f.epi()); }

PLFunction from_epigraphical(const SVMap& f) {
  if (f.p() != 1) throw Error(ErrorKind::VerticalInvariant, "epigraphical mapping must be scalar valued");
  return PLFunction(f.n(), f.graph());
}

FunctionResult restrict_function(const PLFunction& f, const NCSet& omega, bool certify) {
  auto r = restrict(epigraphical_map(f), omega, false);
  FunctionResult out{PLFunction::trusted(r.map.n(), r.map.graph()), r.qc_satisfied, std::nullopt};
  if (!certify || !out.qc_satisfied) return out;

  const std::size_t n = f.n();
  MixedSystem base = omega.relative_interior().system();
  base.append(f.dom().relative_interior().system());
  MixedSystem lhs = out.f.epi().relative_interior().system();
  MixedSystem rhs = f.epi().relative_interior().system();
  rhs.append(lift_system(base, n + 1, first(n)));
  bool holds = same_set(lhs, rhs);
  Vec half = scale(unit_vector(n + 1, n), Rational(1, 2));
  for (const auto& z : sample_points(out.f.epi())) {
    for (const auto& w : {z, add(z, half), sub(z, half)}) {
      Vec x(w.begin(), w.end() - 1);
      bool expected = base.contains(x) && f.eval(x) < ExtReal(w.back());
      if (lhs.contains(w) != expected) holds = false;
    }
  }
  out.ri_formula_holds = holds;
  return out;
}

EpiMResult epi_M(const Matrix& g, const Vec& c, const NCSet& m) {
  require_dim(g.rows(), m.dim(), "epi_M");
  require_dim(c.size(), m.dim(), "epi_M offset");
  const std::size_t n = g.cols(), p = g.rows();
  Matrix t(p, n + p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < n; ++j) t(i, j) = -g(i, j);
    t(i, n + i) = 1;
  }
  EpiMResult out{preimage(m, t, negate(c)).set, true};
  if (m.empty()) return out;
  MixedSystem rhs = pullback(m.relative_interior().system(), t, negate(c));
  out.ri_formula_certified = same_set(out.set.relative_interior().system(), rhs);
  return out;
}

ImagePlusResult affine_image_plus(const NCSet& x, const Matrix& g, const Vec& c, const NCSet& m) {
  require_dim(x.dim(), g.cols(), "affine_image_plus");
  require_dim(m.dim(), g.rows(), "affine_image_plus cone");
  require_dim(c.size(), g.rows(), "affine_image_plus offset");
  const std::size_t p = g.rows();
  Matrix t = hstack(g, Matrix::identity(p));
  NCSet image = linear_image(product(x, m), t);
  ImagePlusResult out{preimage(image, Matrix::identity(p), negate(c)).set, true};
  if (x.empty() || m.empty()) return out;
  MixedSystem joint = lift_system(x.relative_interior().system(), x.dim() + p, first(x.dim()));
  std::vector<std::size_t> tail(p);
  std::iota(tail.begin(), tail.end(), x.dim());
  joint.append(lift_system(m.relative_interior().system(), x.dim() + p, tail));
  MixedSystem rhs = pullback(image_system(joint, t), Matrix::identity(p), negate(c));
  out.ri_formula_holds = same_set(out.set.relative_interior().system(), rhs);
  return out;
}

FunctionResult build_composite_phi(const PLFunction& f, const NCSet& theta, const SVMap& g) {
  auto r = build_phi(theta, epigraphical_map(f), g);
  return {PLFunction::trusted(r.map.n(), r.map.graph()), r.qc_satisfied, std::nullopt};
}

FunctionResult build_composite_psi(const PLFunction& f, const NCSet& theta, const SVMap& g) {
  auto r = build_psi(theta, epigraphical_map(f), g);
  return {PLFunction::trusted(r.map.n(), r.map.graph()), r.qc_satisfied, std::nullopt};
}

FunctionResult build_composite_phi_cone(const PLFunction& f, const NCSet& theta, const Matrix& g, const Vec& c,
                                        const HPoly& cone) {
  return build_composite_phi(f, theta, SVMap::cone_constraint(g, c, cone));
}

FunctionResult build_composite_psi_cone(const PLFunction& f, const NCSet& theta, const Matrix& g, const Vec& c,
                                        const HPoly& cone) {
  return build_composite_psi(f, theta, SVMap::cone_constraint(g, c, cone));
}

PLFunction composite_sum(const PLFunction& f, const PLFunction& g, const Matrix& a) {
  return from_epigraphical(sum_with_affine_inner(epigraphical_map(f), epigraphical_map(g), a)).validate();
}

FunctionResult add(const PLFunction& f1, const PLFunction& f2) {
  auto r = sum(epigraphical_map(f1), epigraphical_map(f2));
  return {PLFunction::trusted(r.map.n(), r.map.graph()), r.qc_satisfied, std::nullopt};
}

FunctionResult compose_linear(const PLFunction& g, const Matrix& a) {
  require_dim(a.rows(), g.n(), "compose_linear");
  auto r = preimage(g.epi(), block_diag(a, Matrix::identity(1)));
  return {PLFunction::trusted(a.cols(), r.set), r.qc_satisfied, std::nullopt};
}

bool is_cone(const HPoly& k) {
  for (const auto& r : k.ineq)
    if (r.rhs != 0) return false;
  for (const auto& r : k.eq)
    if (r.rhs != 0) return false;
  return true;
}

HPoly dual_cone(const HPoly& k) {
  if (!is_cone(k)) throw Error(ErrorKind::Usage, "dual_cone: rows must be homogeneous");
  std::vector<Vec> ineq, eq;
  for (const auto& r : k.ineq) ineq.push_back(r.coeffs);
  for (const auto& r : k.eq) eq.push_back(r.coeffs);
  auto gens = cone_generators(ineq, eq, k.dim);
  HPoly out(k.dim);
  for (const auto& r : gens.rays) out.add_ineq(negate(r), 0);
  for (const auto& l : gens.lineality) out.add_eq(l, 0);
  return canonicalize(out);
}

NCSet strict_epigraph(const PLFunction& f) { return strict_upper_set(f.epi()); }

bool strict_epigraph_closure_agrees(const PLFunction& f) { return same_closure(strict_epigraph(f), f.epi()); }

}  // namespace nearconvex
