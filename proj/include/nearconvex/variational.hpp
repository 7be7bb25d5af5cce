// Normal cones, subdifferentials and coderivatives of nearly convex objects,
// and the optimal value function mu(x) = inf {f(x,y) : y in F(x)} with its
// solution map and subdifferential formula.
#pragma once

#include "nearconvex/plfunc.hpp"

namespace nearconvex {

/// N(x; omega) = {v : <v, z - x> <= 0 for all z in omega}, computed on the
/// closure. Throws PointNotInSet when x is not in omega itself.
NormalConeRep normal_cone(const NCSet& omega, const Vec& x);

/// {v : <v, z - x> <= f(z) - f(x) for all z}. Throws ValueNotFinite.
HPoly subdifferential(const PLFunction& f, const Vec& x);

/// D*F(x,y)(v) = {u : (u, -v) in N((x,y); gph F)}. Throws PointNotInGraph.
HPoly coderivative(const SVMap& f, const Vec& x, const Vec& y, const Vec& v);

/// mu(x) = inf {f(x,y) : y in F(x)} for f on R^(n+p) and F: R^n => R^p.
struct OVFInstance {
  PLFunction f;
  SVMap map;
  PLFunction mu;
  /// epi f cap (gph F x R) in coordinates (x, y, l).
  NCSet joint;
  /// ri dom f cap ri gph F != empty.
  bool qc_satisfied = false;
  bool mu_nearly_convex = false;
  bool mu_proper = false;
};

/// Throws ImproperObjective when f takes the value -inf.
OVFInstance build_ovf(const PLFunction& f, const SVMap& map);

/// P13(cl epi f cap cl(gph F x R)), the closure of epi mu under the qc.
HPoly ovf_closure_projection(const OVFInstance& inst);

/// S(x) = {y in F(x) : f(x,y) = mu(x)}. Throws ValueNotFinite.
NCSet solution_map(const OVFInstance& inst, const Vec& x);

struct OVFSubdifferential {
  /// d mu(x), computed from epi mu.
  HPoly lhs;
  /// Union over (u,v) in d f(x,y) of u + D*F(x,y)(v).
  HPoly rhs;
  bool equal = false;
};

/// Union of u + D*F(x,y)(v) over (u, v) in d f(x, y), by projection.
HPoly ovf_rhs_formula(const OVFInstance& inst, const Vec& x, const Vec& y);

/// Both sides of the subdifferential formula for mu at x with y in S(x).
/// Throws QCViolated, ValueNotFinite, EmptySolutionMap, or PointNotInSet
/// when y is not a solution.
OVFSubdifferential ovf_subdifferential(const OVFInstance& inst, const Vec& x, const Vec& y);

}  // namespace nearconvex
