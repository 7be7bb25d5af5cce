// Extended-real functions on R^n with polyhedrally representable nearly
// convex epigraphs: evaluation, properness, the epigraphical mapping,
// restrictions, cone epigraphs epi_M and the composite constructions.
#pragma once

#include "nearconvex/extreal.hpp"
#include "nearconvex/svmap.hpp"

#include <optional>
#include <vector>

namespace nearconvex {

/// f with epi f = {(x, l) : f(x) <= l} stored as an NCSet in R^(n+1). Every
/// vertical slice of the epigraph is empty, a closed upward ray, or the
/// whole line.
class PLFunction {
 public:
  PLFunction() = default;
  /// Throws VerticalInvariant when epi is not an epigraph.
  PLFunction(std::size_t n, NCSet epi);
  /// Skips the invariant check; for epigraphs that hold by construction.
  static PLFunction trusted(std::size_t n, NCSet epi);
  static PLFunction from_closed_epigraph(const HPoly& epi);
  /// max_i (a_i.x + b_i) on domain, +inf elsewhere.
  static PLFunction max_affine(std::size_t n, const std::vector<AffinePiece>& pieces, const NCSet& domain);
  /// max_i (a_i.x + b_i) on R^n.
  static PLFunction max_affine(std::size_t n, const std::vector<AffinePiece>& pieces);
  static PLFunction indicator(const NCSet& c);

  std::size_t n() const { return n_; }
  const NCSet& epi() const { return epi_; }
  bool validated() const { return epi_.validated(); }
  /// Throws NotNearlyConvex.
  PLFunction validate() const;

  /// inf {l : (x, l) in epi f}.
  ExtReal eval(const Vec& x) const;
  /// {x : f(x) < +inf}.
  NCSet dom() const;

 private:
  std::size_t n_ = 0;
  NCSet epi_;
};

struct EpigraphCheck {
  bool vertical_ray = true;
  bool closed_below = true;
  /// Point of R^(n+1) that breaks the first failing invariant.
  std::optional<Vec> witness;
};
/// Symbolic per-piece check of the vertical-ray and closed-slice invariants.
EpigraphCheck check_epigraph(const NCSet& epi);

/// s together with the bottom point of every vertical slice whose infimum is
/// approached from above inside s.
NCSet lower_closure(const NCSet& s);

/// {(x, g) : (x, l) in s for some l < g}.
NCSet strict_upper_set(const NCSet& s);

/// A point x with f(x) = -inf, or nullopt.
std::optional<Vec> minus_inf_point(const PLFunction& f);
/// True iff f never takes the value -inf.
bool assert_proper(const PLFunction& f);

/// E_f(x) = {l : f(x) <= l}; gph E_f = epi f.
SVMap epigraphical_map(const PLFunction& f);
/// Inverse of epigraphical_map; throws VerticalInvariant.
PLFunction from_epigraphical(const SVMap& f);

struct FunctionResult {
  PLFunction f;
  bool qc_satisfied = false;
  std::optional<bool> ri_formula_holds;
};

/// f on omega, +inf elsewhere; qc is ri dom f cap ri omega != empty.
/// Certification checks ri epi = {(x, l) : x in ri dom f cap ri omega, f(x) < l}.
FunctionResult restrict_function(const PLFunction& f, const NCSet& omega, bool certify = false);

struct EpiMResult {
  NCSet set;
  /// ri epi_M g = {(x, y) : y - g(x) in ri M}, checked as a set equality.
  bool ri_formula_certified = false;
};
/// epi_M g = {(x, y) : y - g x - c in M} for affine g.
EpiMResult epi_M(const Matrix& g, const Vec& c, const NCSet& m);

struct ImagePlusResult {
  NCSet set;
  /// ri(g(X) + M) = g(ri X) + ri M, checked as a set equality.
  bool ri_formula_holds = false;
};
/// g(X) + M for affine g.
ImagePlusResult affine_image_plus(const NCSet& x, const Matrix& g, const Vec& c, const NCSet& m);

/// phi(x,y) = f(x) if x in theta and y in G(x), else +inf.
FunctionResult build_composite_phi(const PLFunction& f, const NCSet& theta, const SVMap& g);
/// psi(x,u,y) = f(x+u) if x in theta and y in G(x), else +inf.
FunctionResult build_composite_psi(const PLFunction& f, const NCSet& theta, const SVMap& g);
/// build_composite_phi with the constraint g(x) <=_K y, g affine.
FunctionResult build_composite_phi_cone(const PLFunction& f, const NCSet& theta, const Matrix& g, const Vec& c,
                                        const HPoly& cone);
/// build_composite_psi with the constraint g(x) <=_K y, g affine.
FunctionResult build_composite_psi_cone(const PLFunction& f, const NCSet& theta, const Matrix& g, const Vec& c,
                                        const HPoly& cone);
/// phi(x,y) = f(x) + g(A x + y) for proper f on R^n, g on R^p and A of size
/// p x n; validated. Throws EmptyDomain.
PLFunction composite_sum(const PLFunction& f, const PLFunction& g, const Matrix& a);

/// f1 + f2 (with +inf winning); qc is ri dom f1 cap ri dom f2 != empty.
FunctionResult add(const PLFunction& f1, const PLFunction& f2);
/// x |-> g(A x); qc is A(R^n) cap ri dom g != empty.
FunctionResult compose_linear(const PLFunction& g, const Matrix& a);

/// True when k is a cone given by homogeneous rows.
bool is_cone(const HPoly& k);
/// K* = {y : <y, z> >= 0 for all z in K}; throws Usage when k is not a cone.
HPoly dual_cone(const HPoly& k);

/// {(x, g) : f(x) < g}.
NCSet strict_epigraph(const PLFunction& f);
/// cl(strict epi f) = cl(epi f).
bool strict_epigraph_closure_agrees(const PLFunction& f);

}  // namespace nearconvex
