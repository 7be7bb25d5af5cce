// Perturbation duality: primal value V = inf f(x, 0), dual value
// V_d = sup -f*(0, y*), qualification conditions with witnesses, and the
// general, Lagrange, Fenchel-Lagrange and Fenchel schemes.
#pragma once

#include "nearconvex/conjugate.hpp"

#include <string>
#include <vector>

namespace nearconvex {

enum class DualityScheme { General, Lagrange, LagrangeCone, FenchelLagrange, Fenchel };
const char* scheme_name(DualityScheme s);

/// One strict-feasibility decision.
struct QCFlag {
  std::string name;
  bool holds = false;
  /// A point of the strict system when it holds.
  std::optional<Vec> witness;
  /// Farkas multipliers when even the closed relaxation is empty.
  std::optional<Vec> farkas;
};

struct DualityReport {
  DualityScheme scheme = DualityScheme::General;
  ExtReal primal;
  ExtReal dual;
  /// V - V_d, and 0 whenever V = V_d (both infinite included).
  ExtReal gap;
  std::vector<QCFlag> qc;
  /// x with f(x, 0) = V when the infimum is attained.
  std::optional<Vec> primal_witness;
  /// y* with -f*(0, y*) = V_d when the supremum is attained.
  std::optional<Vec> dual_witness;
  /// The scheme's own dual objective evaluated at dual_witness.
  std::optional<ExtReal> scheme_dual_value;
  /// scheme_dual_value equals V_d.
  std::optional<bool> scheme_dual_agrees;
  /// V = mu(0) and V_d = mu**(0) for mu(y) = inf_x f(x, y) (general scheme).
  std::optional<bool> value_function_identity;
  /// d mu(0) is nonempty with mu(0) finite (general scheme).
  std::optional<bool> subdifferential_nonempty;

  bool all_qc() const;
  bool weak_duality() const { return primal >= dual; }
  bool strong_duality() const { return primal == dual; }
};

/// inf {f(x, 0)} and sup {-f*(0, y*)} for f on R^(n+p) with x the first n
/// coordinates; no qc and no properness check.
DualityReport perturbation_values(const PLFunction& f, std::size_t n);

/// 0 in ri(P2(dom f)).
QCFlag zero_in_ri_projection(const PLFunction& f, std::size_t n);
/// ri dom phi cap ri dom G cap ri theta != empty and 0 in ri G(theta cap dom phi).
std::vector<QCFlag> lagrange_qc(const PLFunction& phi, const NCSet& theta, const SVMap& g);
/// ri theta cap ri dom phi != empty and 0 in g(ri theta cap ri dom phi) + ri K.
std::vector<QCFlag> cone_qc(const PLFunction& phi, const NCSet& theta, const Matrix& g, const Vec& c,
                            const HPoly& cone);
/// A(ri dom g) cap ri dom h != empty.
QCFlag fenchel_qc(const PLFunction& g, const PLFunction& h, const Matrix& a);

/// Primal min f(x, 0) against max -f*(0, y*). Throws ImproperPerturbation.
DualityReport general_duality(const PLFunction& f, std::size_t n);

/// v_G(x, y*) = inf {<-y*, y> : y in G(x)}.
ExtReal v_g(const SVMap& g, const Vec& x, const Vec& ystar);
/// -<y*, g x + c> when -y* is in K*, -inf otherwise.
ExtReal v_g_cone(const Matrix& g, const Vec& c, const HPoly& cone, const Vec& x, const Vec& ystar);
/// h(y*) = inf {phi(x) + v_G(x, y*) : x in theta}, by LP over the pieces.
ExtReal lagrange_dual_function(const PLFunction& phi, const NCSet& theta, const SVMap& g, const Vec& ystar);
/// h1(u*, y*) = -phi*(u*) + inf {<u*, x> + v_G(x, y*) : x in theta}.
ExtReal fenchel_lagrange_dual_function(const PLFunction& phi, const NCSet& theta, const SVMap& g, const Vec& ustar,
                                       const Vec& ystar);
/// inf {phi(x) + <y*, g x + c> : x in theta} for y* in K*, -inf otherwise.
ExtReal cone_dual_function(const PLFunction& phi, const NCSet& theta, const Matrix& g, const Vec& c,
                           const HPoly& cone, const Vec& ystar);

/// min phi(x) s.t. x in theta, 0 in G(x). Throws ImproperObjective.
DualityReport lagrange_duality(const PLFunction& phi, const NCSet& theta, const SVMap& g);
/// min phi(x) s.t. x in theta, g x + c <=_K 0; the dual witness is reported
/// as the multiplier y* in K* (the negative of the Lagrange one).
DualityReport lagrange_cone_duality(const PLFunction& phi, const NCSet& theta, const Matrix& g, const Vec& c,
                                    const HPoly& cone);
/// Same primal with the perturbation phi(x + u); dual witness is (u*, y*).
DualityReport fenchel_lagrange_duality(const PLFunction& phi, const NCSet& theta, const SVMap& g);
/// min g(x) + h(A x) against max -g*(-A^T y*) - h*(y*).
DualityReport fenchel_duality(const PLFunction& g, const PLFunction& h, const Matrix& a);

}  // namespace nearconvex
