#include "nearconvex/duality.hpp"

#include "nearconvex/error.hpp"

#include <algorithm>
#include <numeric>

namespace nearconvex {

namespace {

std::vector<std::size_t> range(std::size_t from, std::size_t count) {
  std::vector<std::size_t> out(count);
  std::iota(out.begin(), out.end(), from);
  return out;
}

QCFlag decide(std::string name, const MixedSystem& s) {
  QCFlag flag;
  flag.name = std::move(name);
  StrictFeasibility r = strict_feasible(s);
  flag.holds = r.feasible;
  flag.witness = r.witness;
  flag.farkas = r.closure_certificate;
  return flag;
}

/// ri s as a mixed system; nullopt when s is empty or not nearly convex.
std::optional<MixedSystem> ri_of(const NCSet& s) {
  if (s.empty()) return std::nullopt;
  try {
    return s.relative_interior().system();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotNearlyConvex) return std::nullopt;
    throw;
  }
}

QCFlag failed(std::string name) {
  QCFlag flag;
  flag.name = std::move(name);
  return flag;
}

/// 0 in ri s.
QCFlag zero_in_ri(std::string name, const NCSet& s) {
  auto ri = ri_of(s);
  if (!ri) return failed(std::move(name));
  MixedSystem sys = *ri;
  for (std::size_t i = 0; i < s.dim(); ++i) sys.add_eq(unit_vector(s.dim(), i), 0);
  return decide(std::move(name), sys);
}

ExtReal lp_min(const Vec& objective, const MixedSystem& closed) {
  LPOutcome r = solve_lp(objective, closed);
  if (r.status == LPStatus::Infeasible) return ExtReal::plus_inf();
  if (r.status == LPStatus::Unbounded) return ExtReal::minus_inf();
  return r.value;
}

/// inf of <objective, z> over the union of the feasible systems.
ExtReal union_min(const Vec& objective, const std::vector<MixedSystem>& systems) {
  ExtReal best = ExtReal::plus_inf();
  for (const auto& s : systems) {
    if (!is_feasible(s)) continue;
    best = std::min(best, lp_min(objective, s.closure()));
    if (best.is_minus_inf()) break;
  }
  return best;
}

/// Systems in (x, y, l): (x, l) in epi phi, x in theta, (x, y) in gph G.
std::vector<MixedSystem> joint_systems(const PLFunction* phi, const NCSet& theta, const SVMap& g) {
  const std::size_t n = g.n(), q = g.p(), d = n + q + 1;
  std::vector<std::size_t> epi_coords = range(0, n);
  epi_coords.push_back(n + q);
  std::vector<MixedSystem> out;
  std::vector<MixedSystem> epis{MixedSystem(d)};
  if (phi) {
    epis.clear();
    for (const auto& e : phi->epi().pieces()) epis.push_back(lift_system(e.system(), d, epi_coords));
  }
  for (const auto& e : epis)
    for (const auto& t : theta.pieces())
      for (const auto& gp : g.graph().pieces()) {
        MixedSystem s = e;
        s.append(lift_system(t.system(), d, range(0, n)));
        s.append(lift_system(gp.system(), d, range(0, n + q)));
        out.push_back(std::move(s));
      }
  return out;
}

void require_proper(const PLFunction& f, const char* what) {
  if (f.epi().empty()) throw Error(ErrorKind::ImproperObjective, std::string(what) + " is +inf everywhere");
  if (auto w = minus_inf_point(f))
    throw Error(ErrorKind::ImproperObjective, std::string(what) + " is -inf at " + format_vec(*w));
}

void cross_check(DualityReport& r, ExtReal scheme_value) {
  r.scheme_dual_value = scheme_value;
  r.scheme_dual_agrees = scheme_value == r.dual;
}

}  // namespace

const char* scheme_name(DualityScheme s) {
  switch (s) {
    case DualityScheme::General: return "general";
    case DualityScheme::Lagrange: return "lagrange";
    case DualityScheme::LagrangeCone: return "lagrange-cone";
    case DualityScheme::FenchelLagrange: return "fenchel-lagrange";
    case DualityScheme::Fenchel: return "fenchel";
  }
  return "general";
}

bool DualityReport::all_qc() const {
  return std::all_of(qc.begin(), qc.end(), [](const QCFlag& f) { return f.holds; });
}

DualityReport perturbation_values(const PLFunction& f, std::size_t n) {
  if (n > f.n()) throw Error(ErrorKind::DimensionMismatch, "perturbation_values: primal block exceeds the dimension");
  const std::size_t p = f.n() - n;
  DualityReport r;

  // (x, l) |-> (x, 0, l)
  Matrix t(n + p + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1;
  t(n + p, n) = 1;
  std::vector<MixedSystem> slices;
  for (const auto& piece : f.epi().pieces()) slices.push_back(pullback(piece.system(), t, zeros(n + p + 1)));
  Vec obj = unit_vector(n + 1, n);
  r.primal = union_min(obj, slices);
  if (r.primal.is_finite()) {
    for (auto s : slices) {
      s.add_eq(obj, r.primal.value());
      StrictFeasibility at = strict_feasible(s);
      if (!at.feasible) continue;
      r.primal_witness = Vec(at.witness->begin(), at.witness->begin() + static_cast<std::ptrdiff_t>(n));
      break;
    }
  }

  // (y*, b) |-> (0, y*, b)
  Matrix u(n + p + 1, p + 1);
  for (std::size_t i = 0; i <= p; ++i) u(n + i, i) = 1;
  MixedSystem dual = pullback(conjugate_epigraph(f).system(), u, zeros(n + p + 1));
  LPOutcome d = solve_lp(unit_vector(p + 1, p), dual);
  if (d.status == LPStatus::Infeasible) {
    r.dual = ExtReal::minus_inf();
  } else if (d.status == LPStatus::Unbounded) {
    r.dual = ExtReal::plus_inf();
  } else {
    r.dual = -d.value;
    r.dual_witness = Vec(d.primal_witness->begin(), d.primal_witness->begin() + static_cast<std::ptrdiff_t>(p));
  }
  r.gap = r.primal == r.dual ? ExtReal(0) : r.primal - r.dual;
  return r;
}

QCFlag zero_in_ri_projection(const PLFunction& f, std::size_t n) {
  const std::size_t p = f.n() - n;
  return zero_in_ri("0 in ri P2(dom f)", linear_image(f.dom(), coordinate_selector(n + p, range(n, p))));
}

std::vector<QCFlag> lagrange_qc(const PLFunction& phi, const NCSet& theta, const SVMap& g) {
  require_dim(phi.n(), g.n(), "lagrange_qc");
  require_dim(theta.dim(), g.n(), "lagrange_qc theta");
  std::vector<QCFlag> out;
  const char* meet = "ri dom phi cap ri dom G cap ri theta";
  auto a = ri_of(phi.dom()), b = ri_of(g.dom()), c = ri_of(theta);
  if (a && b && c) {
    MixedSystem s = *a;
    s.append(*b);
    s.append(*c);
    out.push_back(decide(meet, s));
  } else {
    out.push_back(failed(meet));
  }
  NCSet feasible = intersect(theta, phi.dom()).set;
  out.push_back(zero_in_ri("0 in ri G(theta cap dom phi)", image_of_set(g, feasible).set));
  return out;
}

std::vector<QCFlag> cone_qc(const PLFunction& phi, const NCSet& theta, const Matrix& g, const Vec& c,
                            const HPoly& cone) {
  const std::size_t n = g.cols(), q = g.rows();
  require_dim(phi.n(), n, "cone_qc");
  require_dim(theta.dim(), n, "cone_qc theta");
  std::vector<QCFlag> out;
  auto a = ri_of(theta), b = ri_of(phi.dom());
  auto k = ROPoly::of(cone);
  if (!a || !b || !k) {
    out.push_back(failed("ri theta cap ri dom phi"));
    out.push_back(failed("0 in g(ri theta cap ri dom phi) + ri K"));
    return out;
  }
  MixedSystem s = *a;
  s.append(*b);
  out.push_back(decide("ri theta cap ri dom phi", s));
  // (x, k): x in ri theta cap ri dom phi, k in ri K, g x + c + k = 0.
  MixedSystem joint = lift_system(s, n + q, range(0, n));
  joint.append(lift_system(k->system(), n + q, range(n, q)));
  for (std::size_t i = 0; i < q; ++i) {
    Vec row = concat(g.row(i), unit_vector(q, i));
    joint.add_eq(std::move(row), -c[i]);
  }
  out.push_back(decide("0 in g(ri theta cap ri dom phi) + ri K", joint));
  return out;
}

QCFlag fenchel_qc(const PLFunction& g, const PLFunction& h, const Matrix& a) {
  const char* name = "A(ri dom g) cap ri dom h";
  auto rg = ri_of(g.dom()), rh = ri_of(h.dom());
  if (!rg || !rh) return failed(name);
  MixedSystem s = *rg;
  s.append(pullback(*rh, a, zeros(a.rows())));
  return decide(name, s);
}

DualityReport general_duality(const PLFunction& f, std::size_t n) {
  if (n > f.n()) throw Error(ErrorKind::DimensionMismatch, "general_duality: primal block exceeds the dimension");
  if (auto w = minus_inf_point(f))
    throw Error(ErrorKind::ImproperPerturbation, "general_duality: f is -inf at " + format_vec(*w));
  const std::size_t p = f.n() - n;
  DualityReport r = perturbation_values(f, n);
  r.scheme = DualityScheme::General;
  r.qc.push_back(zero_in_ri_projection(f, n));

  // mu(y) = inf_x f(x, y) as a value function in the swapped coordinates (y, x).
  std::vector<std::size_t> order = range(n, p);
  for (std::size_t i = 0; i < n; ++i) order.push_back(i);
  order.push_back(n + p);
  PLFunction swapped = PLFunction::trusted(p + n, linear_image(f.epi(), coordinate_selector(n + p + 1, order)));
  OVFInstance inst = build_ovf(swapped, SVMap::constant(p, NCSet::relatively_open(HPoly::whole(n))));
  ExtReal mu0 = inst.mu.eval(zeros(p));
  // mu**(0) = sup_w -mu*(w) = -min {b : (w, b) in epi mu*}
  LPOutcome m = solve_lp(unit_vector(p + 1, p), conjugate_epigraph(inst.mu).system());
  ExtReal mu2 = -m.value;
  r.value_function_identity = r.primal == mu0 && r.dual == mu2;
  if (mu0.is_finite() && inst.mu_nearly_convex) r.subdifferential_nonempty = !subdifferential(inst.mu, zeros(p)).is_empty();
  else r.subdifferential_nonempty = false;
  return r;
}

ExtReal v_g(const SVMap& g, const Vec& x, const Vec& ystar) {
  require_dim(ystar.size(), g.p(), "v_g");
  return -support(g.eval(x), ystar).value;
}

ExtReal v_g_cone(const Matrix& g, const Vec& c, const HPoly& cone, const Vec& x, const Vec& ystar) {
  require_dim(x.size(), g.cols(), "v_g_cone");
  require_dim(ystar.size(), g.rows(), "v_g_cone");
  if (!dual_cone(cone).contains(negate(ystar))) return ExtReal::minus_inf();
  return ExtReal(Rational(-dot(ystar, add(g.apply(x), c))));
}

ExtReal lagrange_dual_function(const PLFunction& phi, const NCSet& theta, const SVMap& g, const Vec& ystar) {
  const std::size_t n = g.n(), q = g.p();
  require_dim(phi.n(), n, "lagrange_dual_function");
  require_dim(ystar.size(), q, "lagrange_dual_function");
  // l - <y*, y>
  Vec obj = concat(zeros(n), negate(ystar));
  obj.push_back(1);
  return union_min(obj, joint_systems(&phi, theta, g));
}

ExtReal fenchel_lagrange_dual_function(const PLFunction& phi, const NCSet& theta, const SVMap& g, const Vec& ustar,
                                       const Vec& ystar) {
  const std::size_t n = g.n(), q = g.p();
  require_dim(ustar.size(), n, "fenchel_lagrange_dual_function");
  require_dim(ystar.size(), q, "fenchel_lagrange_dual_function");
  // <u*, x> - <y*, y>
  Vec obj = concat(ustar, negate(ystar));
  obj.push_back(0);
  ExtReal inner = union_min(obj, joint_systems(nullptr, theta, g));
  return -fenchel_value(phi, ustar) + inner;
}

ExtReal cone_dual_function(const PLFunction& phi, const NCSet& theta, const Matrix& g, const Vec& c,
                           const HPoly& cone, const Vec& ystar) {
  const std::size_t n = g.cols();
  require_dim(ystar.size(), g.rows(), "cone_dual_function");
  if (!dual_cone(cone).contains(ystar)) return ExtReal::minus_inf();
  // l + <g^T y*, x>, over (x, l) in epi phi with x in theta
  Vec obj = g.apply_transpose(ystar);
  obj.push_back(1);
  std::vector<MixedSystem> systems;
  for (const auto& e : phi.epi().pieces())
    for (const auto& t : theta.pieces()) {
      MixedSystem s = e.system();
      s.append(lift_system(t.system(), n + 1, range(0, n)));
      systems.push_back(std::move(s));
    }
  return union_min(obj, systems) + ExtReal(dot(ystar, c));
}

DualityReport lagrange_duality(const PLFunction& phi, const NCSet& theta, const SVMap& g) {
  require_dim(phi.n(), g.n(), "lagrange_duality");
  require_proper(phi, "lagrange_duality: phi");
  PLFunction f = build_composite_phi(phi, theta, g).f;
  DualityReport r = perturbation_values(f, g.n());
  r.scheme = DualityScheme::Lagrange;
  r.qc = lagrange_qc(phi, theta, g);
  if (r.dual_witness) cross_check(r, lagrange_dual_function(phi, theta, g, *r.dual_witness));
  return r;
}

DualityReport lagrange_cone_duality(const PLFunction& phi, const NCSet& theta, const Matrix& g, const Vec& c,
                                    const HPoly& cone) {
  require_proper(phi, "lagrange_cone_duality: phi");
  SVMap map = SVMap::cone_constraint(g, c, cone);
  PLFunction f = build_composite_phi(phi, theta, map).f;
  DualityReport r = perturbation_values(f, g.cols());
  r.scheme = DualityScheme::LagrangeCone;
  r.qc = cone_qc(phi, theta, g, c, cone);
  if (r.dual_witness) {
    r.dual_witness = negate(*r.dual_witness);
    cross_check(r, cone_dual_function(phi, theta, g, c, cone, *r.dual_witness));
  }
  return r;
}

DualityReport fenchel_lagrange_duality(const PLFunction& phi, const NCSet& theta, const SVMap& g) {
  const std::size_t n = g.n(), q = g.p();
  require_dim(phi.n(), n, "fenchel_lagrange_duality");
  require_proper(phi, "fenchel_lagrange_duality: phi");
  PLFunction f = build_composite_psi(phi, theta, g).f;
  DualityReport r = perturbation_values(f, n);
  r.scheme = DualityScheme::FenchelLagrange;
  r.qc = lagrange_qc(phi, theta, g);
  if (r.dual_witness) {
    const Vec& w = *r.dual_witness;
    Vec ustar(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n));
    Vec ystar(w.begin() + static_cast<std::ptrdiff_t>(n), w.begin() + static_cast<std::ptrdiff_t>(n + q));
    cross_check(r, fenchel_lagrange_dual_function(phi, theta, g, ustar, ystar));
  }
  return r;
}

DualityReport fenchel_duality(const PLFunction& g, const PLFunction& h, const Matrix& a) {
  require_dim(a.cols(), g.n(), "fenchel_duality");
  require_dim(a.rows(), h.n(), "fenchel_duality");
  require_proper(g, "fenchel_duality: g");
  require_proper(h, "fenchel_duality: h");
  PLFunction f = composite_sum(g, h, a);
  DualityReport r = perturbation_values(f, g.n());
  r.scheme = DualityScheme::Fenchel;
  r.qc.push_back(fenchel_qc(g, h, a));
  if (r.dual_witness) {
    const Vec& y = *r.dual_witness;
    cross_check(r, -fenchel_value(g, negate(a.apply_transpose(y))) - fenchel_value(h, y));
  }
  return r;
}

}  // namespace nearconvex
