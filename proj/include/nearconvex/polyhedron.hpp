// Closed polyhedra in H- and V-representation: double description,
// Fourier-Motzkin projection, implicit equalities, canonical forms, faces
// and normal cones.
#pragma once

#include "nearconvex/exactlp.hpp"

#include <string>
#include <vector>

namespace nearconvex {

inline constexpr std::size_t kDimCap = 6;
inline constexpr std::size_t kConstraintCap = 32;

/// {x : <a_i,x> <= b_i for ineq rows, <e_j,x> = d_j for eq rows}.
struct HPoly {
  std::size_t dim = 0;
  std::vector<Row> ineq;
  std::vector<Row> eq;

  explicit HPoly(std::size_t d = 0) : dim(d) {}
  static HPoly whole(std::size_t d) { return HPoly(d); }
  /// The canonical empty polyhedron {x : 0 <= -1}.
  static HPoly empty(std::size_t d);
  static HPoly from_system(const MixedSystem& s);  // strict rows become weak
  static HPoly point(const Vec& p);
  /// Axis-aligned box [lo, hi]^dim.
  static HPoly box(std::size_t d, const Rational& lo, const Rational& hi);

  void add_ineq(Vec a, Rational b) { ineq.push_back({std::move(a), std::move(b)}); }
  void add_eq(Vec a, Rational b) { eq.push_back({std::move(a), std::move(b)}); }

  MixedSystem system() const;
  /// Equalities plus every inequality made strict. Equals ri(P) when P is in
  /// canonical form (no implicit equalities among the inequality rows).
  MixedSystem strict_system() const;
  bool contains(const Vec& x) const;
  bool is_empty() const;
  void check_dims() const;
  bool operator==(const HPoly&) const = default;
};

/// conv(points) + cone(rays).
struct VPoly {
  std::size_t dim = 0;
  std::vector<Vec> points;
  std::vector<Vec> rays;

  explicit VPoly(std::size_t d = 0) : dim(d) {}
  bool is_empty() const { return points.empty(); }
};

/// {sum lambda_i g_i + sum mu_j l_j : lambda >= 0}.
struct NormalConeRep {
  std::size_t dim = 0;
  std::vector<Vec> generators;
  std::vector<Vec> lineality;

  bool contains(const Vec& v) const;
  /// H-representation of the cone as a polyhedron.
  HPoly to_hpoly() const;
};

/// Extreme rays and lineality basis of {z : H z <= 0, E z = 0}.
struct ConeGenerators {
  std::vector<Vec> rays;
  std::vector<Vec> lineality;
};
ConeGenerators cone_generators(const std::vector<Vec>& ineq, const std::vector<Vec>& eq, std::size_t dim);

/// Vertices (modulo lineality) and rays; lineality appears as a +/- ray pair.
VPoly to_vrep(const HPoly& p, std::size_t cap = kDimCap);
HPoly to_hrep(const VPoly& v, std::size_t cap = kDimCap);

/// Fourier-Motzkin elimination of every coordinate not in `coords`; the
/// result lives in R^coords.size() with coordinates in the given order.
MixedSystem project(const MixedSystem& s, const std::vector<std::size_t>& coords);
HPoly project(const HPoly& p, const std::vector<std::size_t>& coords);

/// Drops rows implied by the others ((rest and not row) infeasible). An
/// infeasible system comes back as the single row 0 <= -1.
MixedSystem remove_redundant(const MixedSystem& s);

struct ImplicitEqualities {
  std::vector<std::size_t> rows;  // indices into p.ineq tight on all of p
  HPoly canonical;
};
/// Throws EmptyPolyhedron when p is empty.
ImplicitEqualities implicit_equalities(const HPoly& p);

/// Unique representation of the point set: equalities in reduced row echelon
/// form, facet inequalities reduced modulo the equalities, made primitive
/// and sorted. Empty input yields HPoly::empty.
HPoly canonicalize(const HPoly& p);
/// canonicalize(product(a, b)) for nonempty canonical a and b, without LPs.
HPoly canonical_product(const HPoly& a, const HPoly& b);

/// aff P as equalities of full row rank. Throws EmptyPolyhedron.
HPoly affine_hull(const HPoly& p);

/// Dimension of P (-1 when empty).
long dimension(const HPoly& p);

/// A point of ri P. Throws EmptyPolyhedron.
Vec relative_interior_point(const HPoly& p);

/// Throws PointNotInSet when x is not in P.
NormalConeRep normal_cone_at(const HPoly& p, const Vec& x);

/// All nonempty faces of P (P included) in canonical form, sorted.
std::vector<HPoly> faces(const HPoly& p);

bool is_subset(const HPoly& a, const HPoly& b);
bool same_set(const HPoly& a, const HPoly& b);

HPoly intersect(const HPoly& a, const HPoly& b);
HPoly product(const HPoly& a, const HPoly& b);
/// {T x : x in P}.
HPoly linear_image(const HPoly& p, const Matrix& t);
/// {x : T x + c in P}.
HPoly preimage(const HPoly& p, const Matrix& t, const Vec& c);
/// P + cone(rays).
HPoly add_rays(const HPoly& p, const std::vector<Vec>& rays);

/// Strict-aware row map: rows of s pulled back through x = T y + c.
MixedSystem pullback(const MixedSystem& s, const Matrix& t, const Vec& c);

/// Total order on canonical forms used for deterministic output.
std::string serialize(const HPoly& p);

}  // namespace nearconvex
