#include "nearconvex/conjugate.hpp"

#include "nearconvex/error.hpp"

namespace nearconvex {

namespace {

ExtReal lp_value(const LPOutcome& r) {
  switch (r.status) {
    case LPStatus::Optimal: return r.value;
    case LPStatus::Infeasible: return ExtReal::plus_inf();
    case LPStatus::Unbounded: return ExtReal::minus_inf();
  }
  return ExtReal::plus_inf();
}

/// t(at + i, from + i) = sign for i < count.
void place(Matrix& t, std::size_t at, std::size_t from, std::size_t count, long sign = 1) {
  for (std::size_t i = 0; i < count; ++i) t(at + i, from + i) = sign;
}

void add_generators(VPoly& into, const VPoly& g) {
  into.points.insert(into.points.end(), g.points.begin(), g.points.end());
  into.rays.insert(into.rays.end(), g.rays.begin(), g.rays.end());
}

VPoly generators(const NCSet& c) {
  VPoly out(c.dim());
  for (const auto& piece : c.pieces()) add_generators(out, to_vrep(piece.base()));
  return out;
}

HPoly support_epigraph_of(const VPoly& g) {
  const std::size_t d = g.dim;
  HPoly e(d + 1);
  for (const auto& p : g.points) {
    Vec row = p;
    row.push_back(-1);
    e.add_ineq(std::move(row), 0);
  }
  for (const auto& r : g.rays) {
    Vec row = r;
    row.push_back(0);
    e.add_ineq(std::move(row), 0);
  }
  return e;
}

void fill_rhs(ConjugateCheck& out, const LPOutcome& r) {
  out.rhs = lp_value(r);
  out.equal = out.lhs == out.rhs;
}

void check_qc(bool qc, bool require_qc, const char* what) {
  if (!qc && require_qc) throw Error(ErrorKind::QCViolated, std::string(what) + ": qualification condition fails");
}

Vec slice(const Vec& z, std::size_t from, std::size_t count) {
  return Vec(z.begin() + static_cast<std::ptrdiff_t>(from), z.begin() + static_cast<std::ptrdiff_t>(from + count));
}

}  // namespace

SupportEvaluation support(const HPoly& p, const Vec& v) {
  require_dim(v.size(), p.dim, "support");
  SupportEvaluation out;
  LPOutcome r = maximize_lp(v, p.system());
  if (r.status == LPStatus::Infeasible) return out;
  if (r.status == LPStatus::Unbounded) {
    out.value = ExtReal::plus_inf();
    out.ray = r.certificate;
    return out;
  }
  out.value = r.value;
  out.maximizer = r.primal_witness;
  return out;
}

SupportEvaluation support(const NCSet& omega, const Vec& v) {
  require_dim(v.size(), omega.dim(), "support");
  SupportEvaluation best;
  for (const auto& piece : omega.pieces()) {
    SupportEvaluation s = support(piece.base(), v);
    if (s.value > best.value) best = std::move(s);
    if (best.value.is_plus_inf()) break;
  }
  return best;
}

HPoly support_epigraph(const NCSet& c) { return support_epigraph_of(generators(c)); }

HPoly support_epigraph(const HPoly& c) { return support_epigraph_of(to_vrep(c)); }

ConjugateCheck support_of_intersection(const NCSet& omega1, const NCSet& omega2, const Vec& v, bool require_qc) {
  require_dim(omega2.dim(), omega1.dim(), "support_of_intersection");
  require_dim(v.size(), omega1.dim(), "support_of_intersection");
  const std::size_t d = omega1.dim();
  NCSet a = omega1.validated() ? omega1 : omega1.validate();
  NCSet b = omega2.validated() ? omega2 : omega2.validate();
  QualifiedSet both = intersect(a, b);
  ConjugateCheck out;
  out.qc_satisfied = both.qc_satisfied;
  check_qc(out.qc_satisfied, require_qc, "support_of_intersection");
  out.lhs = support(both.set, v).value;

  // z = (v1, t1, t2): (v1, t1) in epi sigma1, (v - v1, t2) in epi sigma2.
  const std::size_t dz = d + 2;
  Matrix t1(d + 1, dz), t2(d + 1, dz);
  place(t1, 0, 0, d + 1);
  place(t2, 0, 0, d, -1);
  t2(d, d + 1) = 1;
  Vec c2 = v;
  c2.push_back(0);
  MixedSystem s = pullback(support_epigraph(a).system(), t1, zeros(d + 1));
  s.append(pullback(support_epigraph(b).system(), t2, c2));
  Vec obj = zeros(dz);
  obj[d] = obj[d + 1] = 1;
  LPOutcome r = solve_lp(obj, s);
  fill_rhs(out, r);
  if (r.status == LPStatus::Optimal) {
    const Vec& z = *r.primal_witness;
    Vec w1 = slice(z, 0, d);
    SplitWitness w{w1, sub(v, w1), std::nullopt, {z[d], z[d + 1]}};
    out.witness_verified = support(a, w.w1).value == ExtReal(w.parts.first) &&
                           support(b, w.w2).value == ExtReal(w.parts.second) &&
                           ExtReal(Rational(w.parts.first + w.parts.second)) == out.rhs;
    out.witness = std::move(w);
  }
  return out;
}

HPoly conjugate_epigraph(const PLFunction& f) {
  const std::size_t n = f.n();
  HPoly sigma = support_epigraph(f.epi());
  // (w, b) |-> (w, -1, b)
  Matrix t(n + 2, n + 1);
  place(t, 0, 0, n);
  t(n + 1, n) = 1;
  Vec c = zeros(n + 2);
  c[n] = -1;
  return HPoly::from_system(pullback(sigma.system(), t, c));
}

PLFunction fenchel(const PLFunction& f) {
  if (f.epi().empty()) throw Error(ErrorKind::EmptyDomain, "fenchel: f is +inf everywhere");
  return PLFunction::from_closed_epigraph(canonicalize(conjugate_epigraph(f)));
}

ExtReal fenchel_value(const PLFunction& f, const Vec& w) {
  require_dim(w.size(), f.n(), "fenchel_value");
  Vec dir = w;
  dir.push_back(-1);
  return support(f.epi(), dir).value;
}

SupportEvaluation svm_conjugate(const SVMap& f, const Vec& u, const Vec& v) {
  require_dim(u.size(), f.n(), "svm_conjugate");
  require_dim(v.size(), f.p(), "svm_conjugate");
  return support(f.graph(), concat(u, v));
}

ConjugateCheck ovf_conjugate(const OVFInstance& inst, const Vec& w, bool require_qc) {
  const std::size_t n = inst.map.n(), p = inst.map.p();
  require_dim(w.size(), n, "ovf_conjugate");
  ConjugateCheck out;
  out.qc_satisfied = inst.qc_satisfied;
  check_qc(out.qc_satisfied, require_qc, "ovf_conjugate");
  out.lhs = fenchel_value(inst.mu, w);

  // z = (w1, v, b1, b2): (w1, v, b1) in epi f*, (w - w1, -v, b2) in epi sigma_gph.
  const std::size_t dz = n + p + 2;
  Matrix tf(n + p + 1, dz), tg(n + p + 1, dz);
  place(tf, 0, 0, n + p + 1);
  place(tg, 0, 0, n + p, -1);
  tg(n + p, n + p + 1) = 1;
  Vec cg = concat(w, zeros(p + 1));
  MixedSystem s = pullback(conjugate_epigraph(inst.f).system(), tf, zeros(n + p + 1));
  s.append(pullback(support_epigraph(inst.map.graph()).system(), tg, cg));
  Vec obj = zeros(dz);
  obj[n + p] = obj[n + p + 1] = 1;
  LPOutcome r = solve_lp(obj, s);
  fill_rhs(out, r);
  if (r.status == LPStatus::Optimal) {
    const Vec& z = *r.primal_witness;
    Vec w1 = slice(z, 0, n), v = slice(z, n, p);
    SplitWitness sw{w1, sub(w, w1), v, {z[n + p], z[n + p + 1]}};
    out.witness_verified = fenchel_value(inst.f, concat(sw.w1, v)) == ExtReal(sw.parts.first) &&
                           svm_conjugate(inst.map, sw.w2, negate(v)).value == ExtReal(sw.parts.second) &&
                           ExtReal(Rational(sw.parts.first + sw.parts.second)) == out.rhs;
    out.witness = std::move(sw);
  }
  return out;
}

ExtReal marginal_conjugate(const PLFunction& f, const Vec& w) {
  if (w.size() > f.n()) throw Error(ErrorKind::DimensionMismatch, "marginal_conjugate: w is too long");
  return fenchel_value(f, concat(w, zeros(f.n() - w.size())));
}

ConjugateCheck conjugate_sum(const PLFunction& f1, const PLFunction& f2, const Vec& w, bool require_qc) {
  const std::size_t n = f1.n();
  require_dim(f2.n(), n, "conjugate_sum");
  require_dim(w.size(), n, "conjugate_sum");
  FunctionResult sum = add(f1, f2);
  ConjugateCheck out;
  out.qc_satisfied = sum.qc_satisfied;
  check_qc(out.qc_satisfied, require_qc, "conjugate_sum");
  out.lhs = fenchel_value(sum.f, w);

  // z = (w1, b1, b2): (w1, b1) in epi f1*, (w - w1, b2) in epi f2*.
  const std::size_t dz = n + 2;
  Matrix t1(n + 1, dz), t2(n + 1, dz);
  place(t1, 0, 0, n + 1);
  place(t2, 0, 0, n, -1);
  t2(n, n + 1) = 1;
  Vec c2 = w;
  c2.push_back(0);
  MixedSystem s = pullback(conjugate_epigraph(f1).system(), t1, zeros(n + 1));
  s.append(pullback(conjugate_epigraph(f2).system(), t2, c2));
  Vec obj = zeros(dz);
  obj[n] = obj[n + 1] = 1;
  LPOutcome r = solve_lp(obj, s);
  fill_rhs(out, r);
  if (r.status == LPStatus::Optimal) {
    const Vec& z = *r.primal_witness;
    Vec w1 = slice(z, 0, n);
    SplitWitness sw{w1, sub(w, w1), std::nullopt, {z[n], z[n + 1]}};
    out.witness_verified = fenchel_value(f1, sw.w1) == ExtReal(sw.parts.first) &&
                           fenchel_value(f2, sw.w2) == ExtReal(sw.parts.second) &&
                           ExtReal(Rational(sw.parts.first + sw.parts.second)) == out.rhs;
    out.witness = std::move(sw);
  }
  return out;
}

ConjugateCheck conjugate_chain(const PLFunction& g, const Matrix& a, const Vec& w, bool require_qc) {
  const std::size_t p = g.n(), n = a.cols();
  require_dim(a.rows(), p, "conjugate_chain");
  require_dim(w.size(), n, "conjugate_chain");
  FunctionResult chain = compose_linear(g, a);
  ConjugateCheck out;
  out.qc_satisfied = chain.qc_satisfied;
  check_qc(out.qc_satisfied, require_qc, "conjugate_chain");
  out.lhs = fenchel_value(chain.f, w);

  // z = (v, b): (v, b) in epi g*, A^T v = w.
  MixedSystem s = conjugate_epigraph(g).system();
  for (std::size_t i = 0; i < n; ++i) {
    Vec row = a.col(i);
    row.push_back(0);
    s.add_eq(std::move(row), w[i]);
  }
  Vec obj = zeros(p + 1);
  obj[p] = 1;
  LPOutcome r = solve_lp(obj, s);
  fill_rhs(out, r);
  if (r.status == LPStatus::Optimal) {
    const Vec& z = *r.primal_witness;
    Vec v = slice(z, 0, p);
    SplitWitness sw{a.apply_transpose(v), zeros(n), v, {z[p], Rational(0)}};
    out.witness_verified = fenchel_value(g, v) == ExtReal(sw.parts.first) && sw.w1 == w &&
                           ExtReal(sw.parts.first) == out.rhs;
    out.witness = std::move(sw);
  }
  return out;
}

ConjugateCheck composite_conjugate(const PLFunction& g, const PLFunction& h, const Matrix& a, const Vec& ystar) {
  const std::size_t n = g.n(), p = h.n();
  require_dim(a.rows(), p, "composite_conjugate");
  require_dim(a.cols(), n, "composite_conjugate");
  require_dim(ystar.size(), p, "composite_conjugate");
  PLFunction f = composite_sum(g, h, a);
  ConjugateCheck out;
  out.qc_satisfied = true;
  out.lhs = fenchel_value(f, concat(zeros(n), ystar));
  Vec w1 = negate(a.apply_transpose(ystar));
  ExtReal gs = fenchel_value(g, w1), hs = fenchel_value(h, ystar);
  out.rhs = gs + hs;
  out.equal = out.lhs == out.rhs;
  if (gs.is_finite() && hs.is_finite()) {
    out.witness = SplitWitness{w1, ystar, std::nullopt, {gs.value(), hs.value()}};
    out.witness_verified = true;
  }
  return out;
}

}  // namespace nearconvex
