// Set-valued mappings F: R^n => R^p given by nearly convex graphs, and the
// mapping calculus: images, inverse images, restrictions, sums, compositions
// and the composite constructions Phi, Psi and F + G(A . + .).
#pragma once

#include "nearconvex/ncset.hpp"

#include <optional>
#include <vector>

namespace nearconvex {

/// Affine function x |-> a.x + b.
struct AffinePiece {
  Vec a;
  Rational b;
};

class SVMap {
 public:
  SVMap() = default;
  /// Graph in R^(n+p); not validated here.
  SVMap(std::size_t n, std::size_t p, NCSet graph);
  /// Closed polyhedral graph.
  static SVMap from_closed_graph(std::size_t n, std::size_t p, const HPoly& graph);
  /// x |-> {A x + c}.
  static SVMap affine(const Matrix& a, const Vec& c);
  /// x |-> c on all of R^n.
  static SVMap constant(std::size_t n, const NCSet& c);
  /// x |-> g(x) + K with g affine and K a closed polyhedral cone.
  static SVMap cone_constraint(const Matrix& g, const Vec& c, const HPoly& cone);
  /// x |-> {y : y_i >= max_j (a_ij.x + b_ij)} (max-affine g, K = R^q_+).
  static SVMap max_affine_orthant(std::size_t n, const std::vector<std::vector<AffinePiece>>& components);

  std::size_t n() const { return n_; }
  std::size_t p() const { return p_; }
  const NCSet& graph() const { return graph_; }
  bool validated() const { return graph_.validated(); }
  /// Throws NotNearlyConvex.
  SVMap validate() const;

  /// F(x), computed piecewise (no near-convexity needed).
  NCSet eval(const Vec& x) const;
  NCSet dom() const;
  NCSet rge() const;
  SVMap inverse() const;
  /// ri gph F; throws EmptyDomain when the graph is empty.
  ROPoly ri_graph() const;

 private:
  std::size_t n_ = 0;
  std::size_t p_ = 0;
  NCSet graph_;
};

bool same_map(const SVMap& a, const SVMap& b);

/// Checks (x,y) in ri gph F <=> x in ri dom F and y in ri F(x) on the sample
/// points of the graph, and that F(x) is nearly convex with nonempty ri at
/// every sampled x in ri dom F.
bool check_graph_fibers(const SVMap& f);

struct ImageResult {
  NCSet set;
  bool qc_satisfied = false;
  /// Set when certification was requested and the qc holds.
  std::optional<bool> ri_formula_holds;
};

struct MapResult {
  SVMap map;
  bool qc_satisfied = false;
  std::optional<bool> ri_formula_holds;
};

/// F(omega); qc is ri dom F cap ri omega != empty. Certification compares
/// ri F(omega) with the union of ri F(x) over x in ri omega cap ri dom F.
ImageResult image_of_set(const SVMap& f, const NCSet& omega, bool certify = false);
/// F^-1(theta); qc is ri rge F cap ri theta != empty. Certification compares
/// the ri with {x in ri dom F : ri F(x) cap ri theta != empty}.
ImageResult inverse_image(const SVMap& f, const NCSet& theta, bool certify = false);
/// F restricted to omega; qc is ri dom F cap ri omega != empty.
MapResult restrict(const SVMap& f, const NCSet& omega, bool certify = false);
/// F1 + F2; qc is ri dom F1 cap ri dom F2 != empty.
MapResult sum(const SVMap& f1, const SVMap& f2, bool certify = false);
/// G o F for F: R^n => R^p and G: R^p => R^q; qc is ri rge F cap ri dom G != empty.
MapResult compose(const SVMap& f, const SVMap& g, bool certify = false);

/// Phi(x,y) = F(x) if x in theta and y in G(x), else empty; F: R^n => R^p,
/// G: R^n => R^q, graph coordinates (x, y, z). qc is
/// ri dom F cap ri dom G cap ri theta != empty.
MapResult build_phi(const NCSet& theta, const SVMap& f, const SVMap& g);
/// Psi(x,u,y) = F(x+u) if x in theta and y in G(x), else empty; graph
/// coordinates (x, u, y, z). Same qc as build_phi.
MapResult build_psi(const NCSet& theta, const SVMap& f, const SVMap& g);
/// build_phi with G(x) = g(x) + K.
MapResult build_phi_cone(const NCSet& theta, const SVMap& f, const Matrix& g, const Vec& c, const HPoly& cone);
/// build_psi with G(x) = g(x) + K.
MapResult build_psi_cone(const NCSet& theta, const SVMap& f, const Matrix& g, const Vec& c, const HPoly& cone);

/// Phi(x,y) = F(x) + G(A x + y) for F: R^n => R^q, G: R^p => R^q and A of
/// size p x n; nearly convex whenever F and G are proper. Throws EmptyDomain
/// when either graph is empty.
SVMap sum_with_affine_inner(const SVMap& f, const SVMap& g, const Matrix& a);

/// {T z : z satisfies s}, as a mixed system (images of relatively open sets
/// stay relatively open).
MixedSystem image_system(const MixedSystem& s, const Matrix& t);
/// Rows of s placed on the given coordinates of R^dim.
MixedSystem lift_system(const MixedSystem& s, std::size_t dim, const std::vector<std::size_t>& coords);

}  // namespace nearconvex
