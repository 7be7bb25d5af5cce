#include "nearconvex/variational.hpp"

#include "nearconvex/error.hpp"

#include <numeric>

namespace nearconvex {

namespace {

std::vector<std::size_t> range(std::size_t from, std::size_t count) {
  std::vector<std::size_t> out(count);
  std::iota(out.begin(), out.end(), from);
  return out;
}

/// {a : (a, b) in cone} for the cone in R^(k+m) with the last block fixed to b.
HPoly slice_tail(const NormalConeRep& cone, std::size_t k, const Vec& b) {
  HPoly h = cone.to_hpoly();
  for (std::size_t i = 0; i < b.size(); ++i) h.add_eq(unit_vector(h.dim, k + i), b[i]);
  return canonicalize(project(h, range(0, k)));
}

}  // namespace

NormalConeRep normal_cone(const NCSet& omega, const Vec& x) {
  require_dim(x.size(), omega.dim(), "normal_cone");
  if (!omega.contains(x)) throw Error(ErrorKind::PointNotInSet, "normal_cone: " + format_vec(x) + " is not in the set");
  return normal_cone_at(omega.closure(), x);
}

HPoly subdifferential(const PLFunction& f, const Vec& x) {
  ExtReal v = f.eval(x);
  if (!v.is_finite()) throw Error(ErrorKind::ValueNotFinite, "subdifferential: f(" + format_vec(x) + ") = " + v.str());
  Vec z = x;
  z.push_back(v.value());
  return slice_tail(normal_cone(f.epi(), z), f.n(), Vec{Rational(-1)});
}

HPoly coderivative(const SVMap& f, const Vec& x, const Vec& y, const Vec& v) {
  require_dim(x.size(), f.n(), "coderivative point");
  require_dim(y.size(), f.p(), "coderivative value");
  require_dim(v.size(), f.p(), "coderivative direction");
  Vec z = concat(x, y);
  if (!f.graph().contains(z))
    throw Error(ErrorKind::PointNotInGraph, "coderivative: " + format_vec(z) + " is not in the graph");
  return slice_tail(normal_cone_at(f.graph().closure(), z), f.n(), negate(v));
}

OVFInstance build_ovf(const PLFunction& f, const SVMap& map) {
  const std::size_t n = map.n(), p = map.p();
  require_dim(f.n(), n + p, "build_ovf");
  if (auto w = minus_inf_point(f))
    throw Error(ErrorKind::ImproperObjective, "build_ovf: f is -inf at " + format_vec(*w));
  OVFInstance inst;
  inst.f = f;
  inst.map = map;
  NCSet lifted = preimage(map.graph(), coordinate_selector(n + p + 1, range(0, n + p))).set;
  inst.joint = intersect(f.epi(), lifted).set;
  std::vector<std::size_t> outer = range(0, n);
  outer.push_back(n + p);
  NCSet image = linear_image(inst.joint, coordinate_selector(n + p + 1, outer));
  inst.mu = PLFunction(n, lower_closure(image));
  NCSet dom_f = f.dom();
  if (!dom_f.empty() && !map.graph().empty()) {
    MixedSystem both = dom_f.relative_interior().system();
    both.append(map.ri_graph().system());
    inst.qc_satisfied = is_feasible(both);
  }
  auto report = is_nearly_convex(inst.mu.epi());
  inst.mu_nearly_convex = report.nearly_convex;
  if (report.nearly_convex) inst.mu = PLFunction(n, inst.mu.epi().assume_validated(*report.hull));
  inst.mu_proper = assert_proper(inst.mu);
  return inst;
}

HPoly ovf_closure_projection(const OVFInstance& inst) {
  const std::size_t n = inst.map.n(), p = inst.map.p();
  HPoly a = inst.f.epi().closure();
  HPoly b = product(inst.map.graph().closure(), HPoly::whole(1));
  std::vector<std::size_t> outer = range(0, n);
  outer.push_back(n + p);
  return canonicalize(project(intersect(a, b), outer));
}

NCSet solution_map(const OVFInstance& inst, const Vec& x) {
  const std::size_t n = inst.map.n(), p = inst.map.p();
  require_dim(x.size(), n, "solution_map");
  ExtReal m = inst.mu.eval(x);
  if (!m.is_finite()) throw Error(ErrorKind::ValueNotFinite, "solution_map: mu(" + format_vec(x) + ") = " + m.str());
  // y |-> (x, y, mu(x))
  Matrix t(n + p + 1, p);
  for (std::size_t i = 0; i < p; ++i) t(n + i, i) = 1;
  Vec c = concat(x, zeros(p));
  c.push_back(m.value());
  std::vector<ROPoly> pieces;
  for (const auto& piece : inst.joint.pieces())
    if (auto r = ROPoly::of_open_system(pullback(piece.system(), t, c))) pieces.push_back(std::move(*r));
  return NCSet(p, std::move(pieces));
}

HPoly ovf_rhs_formula(const OVFInstance& inst, const Vec& x, const Vec& y) {
  const std::size_t n = inst.map.n(), p = inst.map.p();
  ExtReal fv = inst.f.eval(concat(x, y));
  if (!fv.is_finite()) throw Error(ErrorKind::ValueNotFinite, "ovf_rhs_formula: f(x, y) is not finite");
  Vec z = concat(x, y);
  z.push_back(fv.value());
  HPoly nf = normal_cone(inst.f.epi(), z).to_hpoly();
  HPoly ng = normal_cone(inst.map.graph(), concat(x, y)).to_hpoly();
  // variables (u, v, w, s)
  const std::size_t d = 3 * n + p;
  Matrix tf(n + p + 1, d);  // (u, v, -1)
  for (std::size_t i = 0; i < n + p; ++i) tf(i, i) = 1;
  Vec cf = zeros(n + p + 1);
  cf[n + p] = -1;
  Matrix tg(n + p, d);  // (w, -v)
  for (std::size_t i = 0; i < n; ++i) tg(i, n + p + i) = 1;
  for (std::size_t j = 0; j < p; ++j) tg(n + j, n + j) = -1;
  MixedSystem s = pullback(nf.system(), tf, cf);
  s.append(pullback(ng.system(), tg, zeros(n + p)));
  for (std::size_t i = 0; i < n; ++i) {
    Vec row = zeros(d);
    row[2 * n + p + i] = 1;
    row[i] = -1;
    row[n + p + i] = -1;
    s.add_eq(std::move(row), 0);
  }
  return canonicalize(HPoly::from_system(project(s, range(2 * n + p, n))));
}

OVFSubdifferential ovf_subdifferential(const OVFInstance& inst, const Vec& x, const Vec& y) {
  if (!inst.qc_satisfied)
    throw Error(ErrorKind::QCViolated, "ovf_subdifferential: ri dom f and ri gph F do not meet");
  require_dim(y.size(), inst.map.p(), "ovf_subdifferential");
  NCSet s = solution_map(inst, x);
  if (s.empty()) throw Error(ErrorKind::EmptySolutionMap, "ovf_subdifferential: S(" + format_vec(x) + ") is empty");
  if (!s.contains(y)) throw Error(ErrorKind::PointNotInSet, "ovf_subdifferential: " + format_vec(y) + " is not in S(x)");
  OVFSubdifferential out;
  out.lhs = subdifferential(inst.mu, x);
  out.rhs = ovf_rhs_formula(inst, x, y);
  out.equal = same_set(out.lhs, out.rhs);
  return out;
}

}  // namespace nearconvex
