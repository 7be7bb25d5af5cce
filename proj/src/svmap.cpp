#include "nearconvex/svmap.hpp"

#include "nearconvex/error.hpp"

#include <numeric>

namespace nearconvex {

namespace {

std::vector<std::size_t> range(std::size_t from, std::size_t count) {
  std::vector<std::size_t> out(count);
  std::iota(out.begin(), out.end(), from);
  return out;
}

std::vector<std::size_t> join(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// {z in R^dim : z restricted to coords lies in s}; validated when s is.
NCSet lift(const NCSet& s, std::size_t dim, const std::vector<std::size_t>& coords) {
  return preimage(s, coordinate_selector(dim, coords)).set;
}

NCSet whole(std::size_t d) { return NCSet::relatively_open(HPoly::whole(d)); }

Vec head(const Vec& v, std::size_t k) { return Vec(v.begin(), v.begin() + static_cast<long>(k)); }
Vec tail(const Vec& v, std::size_t k) { return Vec(v.begin() + static_cast<long>(k), v.end()); }

/// ri S as a system, or nullopt when S is empty.
std::optional<MixedSystem> ri_system(const NCSet& s) {
  if (s.empty()) return std::nullopt;
  return s.relative_interior().system();
}

bool meets(const MixedSystem& a, const MixedSystem& b) {
  MixedSystem both = a;
  both.append(b);
  return is_feasible(both);
}

/// ri of F(x), or nullopt when F(x) is empty or fails the near-convexity test.
std::optional<MixedSystem> ri_fiber(const SVMap& f, const Vec& x) {
  NCSet fx = f.eval(x);
  if (fx.empty()) return std::nullopt;
  auto report = is_nearly_convex(fx);
  if (!report.nearly_convex) return std::nullopt;
  return canonicalize(*report.hull).strict_system();
}

/// Sample points inside the relatively open set given by s.
std::vector<Vec> samples_of(const MixedSystem& s) {
  auto r = ROPoly::of_open_system(s);
  if (!r) return {};
  std::vector<Vec> out;
  for (auto& x : sample_points(NCSet(s.dim, {*r})))
    if (s.contains(x)) out.push_back(std::move(x));
  return out;
}

/// Promotes a qualified result to validated by the explicit test.
NCSet ensure_validated(const NCSet& s, bool qc) {
  if (!qc || s.validated()) return s;
  return s.validate();
}

}  // namespace

SVMap::SVMap(std::size_t n, std::size_t p, NCSet graph) : n_(n), p_(p), graph_(std::move(graph)) {
  require_dim(graph_.dim(), n + p, "SVMap graph");
}

SVMap SVMap::from_closed_graph(std::size_t n, std::size_t p, const HPoly& graph) {
  return SVMap(n, p, NCSet::closed(graph));
}

SVMap SVMap::affine(const Matrix& a, const Vec& c) {
  require_dim(c.size(), a.rows(), "SVMap::affine");
  const std::size_t n = a.cols(), p = a.rows();
  HPoly g(n + p);
  for (std::size_t i = 0; i < p; ++i) {
    Vec row = concat(a.row(i), zeros(p));
    row[n + i] = -1;
    g.add_eq(std::move(row), -c[i]);
  }
  return SVMap(n, p, NCSet::relatively_open(g));
}

SVMap SVMap::constant(std::size_t n, const NCSet& c) { return SVMap(n, c.dim(), product(whole(n), c)); }

SVMap SVMap::cone_constraint(const Matrix& g, const Vec& c, const HPoly& cone) {
  require_dim(g.rows(), cone.dim, "SVMap::cone_constraint");
  require_dim(c.size(), cone.dim, "SVMap::cone_constraint offset");
  for (const auto& r : cone.ineq)
    if (r.rhs != 0) throw Error(ErrorKind::Usage, "cone_constraint: cone rows must have zero right-hand side");
  for (const auto& r : cone.eq)
    if (r.rhs != 0) throw Error(ErrorKind::Usage, "cone_constraint: cone rows must have zero right-hand side");
  const std::size_t n = g.cols(), q = g.rows();
  // y - g x - c in K
  Matrix t(q, n + q);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < n; ++j) t(i, j) = -g(i, j);
    t(i, n + i) = 1;
  }
  return from_closed_graph(n, q, preimage(cone, t, negate(c)));
}

SVMap SVMap::max_affine_orthant(std::size_t n, const std::vector<std::vector<AffinePiece>>& components) {
  const std::size_t q = components.size();
  HPoly g(n + q);
  for (std::size_t i = 0; i < q; ++i) {
    if (components[i].empty()) throw Error(ErrorKind::Usage, "max_affine_orthant: component without pieces");
    for (const auto& piece : components[i]) {
      require_dim(piece.a.size(), n, "max_affine_orthant piece");
      Vec row = concat(piece.a, zeros(q));
      row[n + i] = -1;
      g.add_ineq(std::move(row), -piece.b);
    }
  }
  return from_closed_graph(n, q, g);
}

SVMap SVMap::validate() const { return SVMap(n_, p_, graph_.validate()); }

NCSet SVMap::eval(const Vec& x) const {
  require_dim(x.size(), n_, "SVMap::eval");
  // y |-> (x, y)
  Matrix t(n_ + p_, p_);
  for (std::size_t i = 0; i < p_; ++i) t(n_ + i, i) = 1;
  Vec c = concat(x, zeros(p_));
  std::vector<ROPoly> pieces;
  // ri Q meets the affine slice in ri(Q cap slice) whenever it meets it at all.
  for (const auto& piece : graph_.pieces())
    if (auto r = ROPoly::of_open_system(pullback(piece.system(), t, c))) pieces.push_back(std::move(*r));
  return NCSet(p_, std::move(pieces));
}

NCSet SVMap::dom() const { return linear_image(graph_, coordinate_selector(n_ + p_, range(0, n_))); }

NCSet SVMap::rge() const { return linear_image(graph_, coordinate_selector(n_ + p_, range(n_, p_))); }

SVMap SVMap::inverse() const {
  return SVMap(p_, n_, linear_image(graph_, coordinate_selector(n_ + p_, join(range(n_, p_), range(0, n_)))));
}

ROPoly SVMap::ri_graph() const {
  if (graph_.empty()) throw Error(ErrorKind::EmptyDomain, "ri_graph: the mapping has empty domain");
  return graph_.relative_interior();
}

bool same_map(const SVMap& a, const SVMap& b) {
  return a.n() == b.n() && a.p() == b.p() && same_set(a.graph(), b.graph());
}

bool check_graph_fibers(const SVMap& f) {
  if (f.graph().empty()) return true;
  MixedSystem ri = f.ri_graph().system();
  MixedSystem ri_dom = f.dom().relative_interior().system();
  for (const auto& z : sample_points(f.graph())) {
    Vec x = head(z, f.n()), y = tail(z, f.n());
    bool rhs = false;
    if (ri_dom.contains(x)) {
      auto fiber = ri_fiber(f, x);
      if (!fiber) return false;
      rhs = fiber->contains(y);
    }
    if (ri.contains(z) != rhs) return false;
  }
  return true;
}

MixedSystem image_system(const MixedSystem& s, const Matrix& t) {
  require_dim(t.cols(), s.dim, "image_system");
  const std::size_t m = s.dim, k = t.rows();
  MixedSystem g = lift_system(s, m + k, range(0, m));
  for (std::size_t i = 0; i < k; ++i) {
    Vec row = concat(t.row(i), zeros(k));
    row[m + i] = -1;
    g.add_eq(std::move(row), 0);
  }
  return project(g, range(m, k));
}

MixedSystem lift_system(const MixedSystem& s, std::size_t dim, const std::vector<std::size_t>& coords) {
  return pullback(s, coordinate_selector(dim, coords), zeros(coords.size()));
}

ImageResult image_of_set(const SVMap& f, const NCSet& omega, bool certify) {
  require_dim(omega.dim(), f.n(), "image_of_set");
  const std::size_t n = f.n(), p = f.p();
  auto inter = intersect(f.graph(), lift(omega, n + p, range(0, n)));
  ImageResult out{linear_image(inter.set, coordinate_selector(n + p, range(n, p))), false, std::nullopt};
  auto ri_dom = ri_system(f.dom());
  auto ri_omega = ri_system(omega);
  if (!ri_dom || !ri_omega) return out;
  out.qc_satisfied = meets(*ri_dom, *ri_omega);
  out.set = ensure_validated(out.set, out.qc_satisfied);
  if (!certify || !out.qc_satisfied) return out;

  // Union of ri F(x) over x in ri omega cap ri dom F, as a projection of ri gph F.
  MixedSystem base = *ri_omega;
  base.append(*ri_dom);
  MixedSystem lifted = f.ri_graph().system();
  lifted.append(lift_system(base, n + p, range(0, n)));
  MixedSystem rhs = project(lifted, range(n, p));
  MixedSystem lhs = out.set.relative_interior().system();
  bool holds = same_set(lhs, rhs);
  for (const auto& x : samples_of(base)) {
    auto fiber = ri_fiber(f, x);
    if (!fiber || uncovered_point(*fiber, {lhs})) holds = false;
  }
  out.ri_formula_holds = holds;
  return out;
}

ImageResult inverse_image(const SVMap& f, const NCSet& theta, bool certify) {
  require_dim(theta.dim(), f.p(), "inverse_image");
  ImageResult out = image_of_set(f.inverse(), theta, false);
  if (!certify || !out.qc_satisfied) return out;

  const std::size_t n = f.n(), p = f.p();
  MixedSystem ri_theta = theta.relative_interior().system();
  MixedSystem ri_dom = f.dom().relative_interior().system();
  // {x in ri dom F : ri F(x) cap ri theta != empty}
  MixedSystem lifted = f.ri_graph().system();
  lifted.append(lift_system(ri_theta, n + p, range(n, p)));
  lifted.append(lift_system(ri_dom, n + p, range(0, n)));
  MixedSystem rhs = project(lifted, range(0, n));
  MixedSystem lhs = out.set.relative_interior().system();
  bool holds = same_set(lhs, rhs);
  for (const auto& x : sample_points(f.dom())) {
    bool expected = false;
    if (ri_dom.contains(x)) {
      auto fiber = ri_fiber(f, x);
      if (!fiber) {
        holds = false;
        continue;
      }
      expected = meets(*fiber, ri_theta);
    }
    if (lhs.contains(x) != expected) holds = false;
  }
  out.ri_formula_holds = holds;
  return out;
}

MapResult restrict(const SVMap& f, const NCSet& omega, bool certify) {
  require_dim(omega.dim(), f.n(), "restrict");
  const std::size_t n = f.n(), p = f.p();
  auto inter = intersect(f.graph(), lift(omega, n + p, range(0, n)));
  MapResult out{SVMap(n, p, inter.set), false, std::nullopt};
  auto ri_dom = ri_system(f.dom());
  auto ri_omega = ri_system(omega);
  if (!ri_dom || !ri_omega) return out;
  out.qc_satisfied = meets(*ri_dom, *ri_omega);
  out.map = SVMap(n, p, ensure_validated(inter.set, out.qc_satisfied));
  if (!certify || !out.qc_satisfied) return out;

  MixedSystem base = *ri_omega;
  base.append(*ri_dom);
  MixedSystem rhs = f.ri_graph().system();
  rhs.append(lift_system(base, n + p, range(0, n)));
  MixedSystem lhs = out.map.ri_graph().system();
  bool holds = same_set(lhs, rhs);
  for (const auto& z : sample_points(out.map.graph())) {
    Vec x = head(z, n);
    bool expected = false;
    if (base.contains(x)) {
      auto fiber = ri_fiber(f, x);
      expected = fiber && fiber->contains(tail(z, n));
    }
    if (lhs.contains(z) != expected) holds = false;
  }
  out.ri_formula_holds = holds;
  return out;
}

MapResult sum(const SVMap& f1, const SVMap& f2, bool certify) {
  require_dim(f2.n(), f1.n(), "sum input");
  require_dim(f2.p(), f1.p(), "sum output");
  const std::size_t n = f1.n(), p = f1.p(), d = 2 * (n + p);
  // (x1, y1, x2, y2) with x1 = x2
  HPoly diagonal(d);
  for (std::size_t i = 0; i < n; ++i) {
    Vec row = zeros(d);
    row[i] = 1;
    row[n + p + i] = -1;
    diagonal.add_eq(std::move(row), 0);
  }
  auto inter = intersect(product(f1.graph(), f2.graph()), NCSet::relatively_open(diagonal));
  Matrix t(n + p, d);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1;
  for (std::size_t j = 0; j < p; ++j) {
    t(n + j, n + j) = 1;
    t(n + j, 2 * n + p + j) = 1;
  }
  NCSet graph = linear_image(inter.set, t);
  MapResult out{SVMap(n, p, graph), false, std::nullopt};
  auto d1 = ri_system(f1.dom());
  auto d2 = ri_system(f2.dom());
  if (!d1 || !d2) return out;
  out.qc_satisfied = meets(*d1, *d2);
  out.map = SVMap(n, p, ensure_validated(graph, out.qc_satisfied));
  if (!certify || !out.qc_satisfied) return out;

  // {(x, y1 + y2) : (x, y1) in ri gph F1, (x, y2) in ri gph F2}
  MixedSystem joint = lift_system(f1.ri_graph().system(), n + 2 * p, range(0, n + p));
  joint.append(lift_system(f2.ri_graph().system(), n + 2 * p, join(range(0, n), range(n + p, p))));
  Matrix s(n + p, n + 2 * p);
  for (std::size_t i = 0; i < n; ++i) s(i, i) = 1;
  for (std::size_t j = 0; j < p; ++j) {
    s(n + j, n + j) = 1;
    s(n + j, n + p + j) = 1;
  }
  MixedSystem lhs = out.map.ri_graph().system();
  bool holds = same_set(lhs, image_system(joint, s));
  MixedSystem common = *d1;
  common.append(*d2);
  for (const auto& x : samples_of(common)) {
    auto r1 = ri_fiber(f1, x), r2 = ri_fiber(f2, x), r = ri_fiber(out.map, x);
    if (!r1 || !r2 || !r) {
      holds = false;
      continue;
    }
    MixedSystem pair = lift_system(*r1, 2 * p, range(0, p));
    pair.append(lift_system(*r2, 2 * p, range(p, p)));
    Matrix add_blocks = hstack(Matrix::identity(p), Matrix::identity(p));
    if (!same_set(*r, image_system(pair, add_blocks))) holds = false;
  }
  out.ri_formula_holds = holds;
  return out;
}

MapResult compose(const SVMap& f, const SVMap& g, bool certify) {
  require_dim(g.n(), f.p(), "compose");
  const std::size_t n = f.n(), p = f.p(), q = g.p(), d = n + p + q;
  auto inter = intersect(lift(f.graph(), d, range(0, n + p)), lift(g.graph(), d, range(n, p + q)));
  std::vector<std::size_t> outer = join(range(0, n), range(n + p, q));
  NCSet graph = linear_image(inter.set, coordinate_selector(d, outer));
  MapResult out{SVMap(n, q, graph), false, std::nullopt};
  auto rge_f = ri_system(f.rge());
  auto dom_g = ri_system(g.dom());
  if (!rge_f || !dom_g) return out;
  out.qc_satisfied = meets(*rge_f, *dom_g);
  out.map = SVMap(n, q, ensure_validated(graph, out.qc_satisfied));
  if (!certify || !out.qc_satisfied) return out;

  // [ri dom F x ri rge G] cap dom M0, M0(x, z) = ri F(x) cap ri G^-1(z)
  MixedSystem ri_dom_f = f.dom().relative_interior().system();
  MixedSystem ri_rge_g = g.rge().relative_interior().system();
  MixedSystem joint = lift_system(f.ri_graph().system(), d, range(0, n + p));
  joint.append(lift_system(g.ri_graph().system(), d, range(n, p + q)));
  joint.append(lift_system(ri_dom_f, d, range(0, n)));
  joint.append(lift_system(ri_rge_g, d, range(n + p, q)));
  MixedSystem lhs = out.map.ri_graph().system();
  bool holds = same_set(lhs, project(joint, outer));
  SVMap g_inv = g.inverse();
  for (const auto& z : sample_points(out.map.graph())) {
    Vec x = head(z, n), w = tail(z, n);
    bool expected = false;
    if (ri_dom_f.contains(x) && ri_rge_g.contains(w)) {
      auto a = ri_fiber(f, x), b = ri_fiber(g_inv, w);
      expected = a && b && meets(*a, *b);
    }
    if (lhs.contains(z) != expected) holds = false;
  }
  out.ri_formula_holds = holds;
  return out;
}

namespace {

/// Graph of (x, v, y) |-> F(T (x, v)) restricted to x in theta, y in G(x).
MapResult assemble(const NCSet& theta, const SVMap& f, const SVMap& g, std::size_t extra) {
  require_dim(theta.dim(), f.n(), "theta");
  require_dim(g.n(), f.n(), "G input");
  const std::size_t n = f.n(), p = f.p(), q = g.p();
  const std::size_t d = n + extra + q + p;
  const std::size_t y0 = n + extra, z0 = n + extra + q;
  // (x, u, y, z) |-> (x + u, z)
  Matrix t(n + p, d);
  for (std::size_t i = 0; i < n; ++i) {
    t(i, i) = 1;
    if (extra > 0) t(i, n + i) = 1;
  }
  for (std::size_t j = 0; j < p; ++j) t(n + j, z0 + j) = 1;
  NCSet a = preimage(f.graph(), t).set;
  NCSet b = lift(g.graph(), d, join(range(0, n), range(y0, q)));
  NCSet c = lift(theta, d, range(0, n));
  NCSet graph = intersect(intersect(a, b).set, c).set;
  MapResult out{SVMap(n + extra + q, p, graph), false, std::nullopt};
  auto df = ri_system(f.dom());
  auto dg = ri_system(g.dom());
  auto dt = ri_system(theta);
  if (!df || !dg || !dt) return out;
  MixedSystem all = *df;
  all.append(*dg);
  all.append(*dt);
  out.qc_satisfied = is_feasible(all);
  out.map = SVMap(n + extra + q, p, ensure_validated(graph, out.qc_satisfied));
  return out;
}

}  // namespace

MapResult build_phi(const NCSet& theta, const SVMap& f, const SVMap& g) { return assemble(theta, f, g, 0); }

MapResult build_psi(const NCSet& theta, const SVMap& f, const SVMap& g) { return assemble(theta, f, g, f.n()); }

MapResult build_phi_cone(const NCSet& theta, const SVMap& f, const Matrix& g, const Vec& c, const HPoly& cone) {
  return build_phi(theta, f, SVMap::cone_constraint(g, c, cone));
}

MapResult build_psi_cone(const NCSet& theta, const SVMap& f, const Matrix& g, const Vec& c, const HPoly& cone) {
  return build_psi(theta, f, SVMap::cone_constraint(g, c, cone));
}

SVMap sum_with_affine_inner(const SVMap& f, const SVMap& g, const Matrix& a) {
  require_dim(g.p(), f.p(), "sum_with_affine_inner output");
  require_dim(a.rows(), g.n(), "sum_with_affine_inner A rows");
  require_dim(a.cols(), f.n(), "sum_with_affine_inner A columns");
  if (f.graph().empty() || g.graph().empty())
    throw Error(ErrorKind::EmptyDomain, "sum_with_affine_inner: F and G must be proper");
  const std::size_t n = f.n(), p = g.n(), q = f.p(), d = n + p + q;
  // Phi1(x, y) = F(x), Phi2(x, y) = G(A x + y), graphs in (x, y, w).
  SVMap phi1(n + p, q, lift(f.graph(), d, join(range(0, n), range(n + p, q))));
  Matrix t(p + q, d);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < n; ++j) t(i, j) = a(i, j);
    t(i, n + i) = 1;
  }
  for (std::size_t k = 0; k < q; ++k) t(p + k, n + p + k) = 1;
  SVMap phi2(n + p, q, preimage(g.graph(), t).set);
  return sum(phi1, phi2).map;
}

}  // namespace nearconvex
