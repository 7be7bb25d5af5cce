// Support functions, Fenchel conjugates of functions and set-valued maps,
// and the infimal-convolution formulas for conjugates of intersections,
// optimal value functions, sums and linear compositions, each with an
// exact attainment witness.
#pragma once

#include "nearconvex/variational.hpp"

#include <optional>
#include <utility>

namespace nearconvex {

struct SupportEvaluation {
  /// -inf for the empty set, +inf when unbounded in direction v.
  ExtReal value = ExtReal::minus_inf();
  /// Point of cl omega attaining a finite value.
  std::optional<Vec> maximizer;
  /// Recession direction r of cl omega with <v, r> > 0 when value is +inf.
  std::optional<Vec> ray;
};

/// sigma(v) = sup {<v, x> : x in omega}, evaluated on the piece closures.
SupportEvaluation support(const NCSet& omega, const Vec& v);
/// Same on a closed polyhedron.
SupportEvaluation support(const HPoly& p, const Vec& v);

/// epi sigma_C = {(v, t) : <v, p_i> <= t, <v, r_j> <= 0} from the generators
/// of the convex hull of cl C. The whole space when C is empty.
HPoly support_epigraph(const NCSet& c);
HPoly support_epigraph(const HPoly& c);

/// An attained decomposition w = w1 + w2 of an infimal convolution.
struct SplitWitness {
  Vec w1;
  Vec w2;
  /// Extra block variable (the v of the value-function and chain formulas).
  std::optional<Vec> v;
  /// Values of the two terms; their sum is the convolution value.
  std::pair<Rational, Rational> parts;
};

/// Both sides of a conjugate identity.
struct ConjugateCheck {
  ExtReal lhs;
  ExtReal rhs;
  bool qc_satisfied = false;
  bool equal = false;
  std::optional<SplitWitness> witness;
  /// Witness terms re-evaluated independently and summed to rhs.
  bool witness_verified = false;
};

/// sigma of omega1 cap omega2 against (sigma1 box sigma2)(v); qc is
/// ri omega1 cap ri omega2 != empty. Throws QCViolated when require_qc is
/// set and the qc fails; otherwise both sides are still reported.
ConjugateCheck support_of_intersection(const NCSet& omega1, const NCSet& omega2, const Vec& v,
                                       bool require_qc = true);

/// epi f* = {(w, b) : <w, x_i> - t_i <= b, <w, r_x> - r_t <= 0} from the
/// generators (x_i, t_i) and rays (r_x, r_t) of cl epi f.
HPoly conjugate_epigraph(const PLFunction& f);
/// f* as a closed convex function (+inf everywhere when f is improper).
/// Throws EmptyDomain.
PLFunction fenchel(const PLFunction& f);
/// f*(w) = sup {<w, x> - l : (x, l) in epi f}, by LP on cl epi f.
ExtReal fenchel_value(const PLFunction& f, const Vec& w);

/// F*(u, v) = sigma of gph F at (u, v).
SupportEvaluation svm_conjugate(const SVMap& f, const Vec& u, const Vec& v);

/// mu*(w) against (f* box F*)(w, 0), where the witness carries w1, w2 and v
/// with mu*(w) = f*(w1, v) + F*(w2, -v). Throws QCViolated when require_qc
/// is set and the value-function qc fails.
ConjugateCheck ovf_conjugate(const OVFInstance& inst, const Vec& w, bool require_qc = true);
/// f*(w, 0), which is mu*(w) when F(x) is all of R^p for every x.
ExtReal marginal_conjugate(const PLFunction& f, const Vec& w);

/// (f1 + f2)*(w) against (f1* box f2*)(w); qc is ri dom f1 cap ri dom f2.
ConjugateCheck conjugate_sum(const PLFunction& f1, const PLFunction& f2, const Vec& w, bool require_qc = true);
/// (g o A)*(w) against inf {g*(v) : A^T v = w}; qc is A(R^n) cap ri dom g.
/// The witness has v set, w1 = A^T v and w2 = 0.
ConjugateCheck conjugate_chain(const PLFunction& g, const Matrix& a, const Vec& w, bool require_qc = true);
/// f*(0, y*) for f(x, y) = g(x) + h(A x + y) against g*(-A^T y*) + h*(y*).
ConjugateCheck composite_conjugate(const PLFunction& g, const PLFunction& h, const Matrix& a, const Vec& ystar);

}  // namespace nearconvex
